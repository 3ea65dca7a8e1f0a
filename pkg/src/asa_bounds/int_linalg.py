"""
Algèbre linéaire entière exacte.

Tout passe par ici : forme normale de Smith, noyaux, conoyaux et homologie
ker(d_out)/im(d_in) de suites de groupes abéliens de type fini. Les entiers
sont des int Python (précision arbitraire), jamais de flottants.

Convention : une IntMatrix A de taille rows x cols représente l'application
Z^cols -> Z^rows (vecteurs colonnes).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import gcd, prod
from typing import Iterable, Sequence

from sympy import factorint

from asa_bounds.errors import CompositionError

logger = logging.getLogger(__name__)


# -------------------------
# Matrices entières
# -------------------------
@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError(f"dimensions négatives: {self.rows}x{self.cols}")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"nombre d'entrées incohérent avec {self.rows}x{self.cols}")

    # --- constructeurs ---
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        columns = [tuple(int(x) for x in c) for c in columns]
        return cls(rows, len(columns), tuple(tuple(c[i] for c in columns) for i in range(rows)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: int | None = None, cols: int | None = None) -> "IntMatrix":
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            out[i][i] = int(v)
        return cls.from_rows(out, cols)

    @staticmethod
    def hstack(*mats: "IntMatrix") -> "IntMatrix":
        rows = mats[0].rows
        if any(m.rows != rows for m in mats):
            raise ValueError("hstack: nombres de lignes différents")
        return IntMatrix(rows, sum(m.cols for m in mats),
                         tuple(sum((m.entries[i] for m in mats), ()) for i in range(rows)))

    @staticmethod
    def vstack(*mats: "IntMatrix") -> "IntMatrix":
        cols = mats[0].cols
        if any(m.cols != cols for m in mats):
            raise ValueError("vstack: nombres de colonnes différents")
        return IntMatrix(sum(m.rows for m in mats), cols, sum((m.entries for m in mats), ()))

    @staticmethod
    def block_diag(*mats: "IntMatrix") -> "IntMatrix":
        rows = sum(m.rows for m in mats)
        cols = sum(m.cols for m in mats)
        out = [[0] * cols for _ in range(rows)]
        r0 = c0 = 0
        for m in mats:
            for i, row in enumerate(m.entries):
                out[r0 + i][c0:c0 + m.cols] = row
            r0 += m.rows
            c0 += m.cols
        return IntMatrix.from_rows(out, cols)

    # --- accès ---
    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def select_rows(self, idx: Iterable[int]) -> "IntMatrix":
        return IntMatrix.from_rows([self.entries[i] for i in idx], self.cols)

    def select_cols(self, idx: Iterable[int]) -> "IntMatrix":
        idx = list(idx)
        return IntMatrix(self.rows, len(idx), tuple(tuple(r[j] for j in idx) for r in self.entries))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    # --- arithmétique ---
    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         tuple(tuple(r[j] for r in self.entries) for j in range(self.cols)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"produit impossible: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        ocols = other.columns()
        return IntMatrix(self.rows, other.cols,
                         tuple(tuple(sum(a * b for a, b in zip(r, c) if a) for c in ocols)
                               for r in self.entries))

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.cols:
            raise ValueError("apply: dimension du vecteur incohérente")
        return tuple(sum(a * b for a, b in zip(r, vec) if a) for r in self.entries)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(tuple(a + b for a, b in zip(r, s))
                                                     for r, s in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(tuple(a - b for a, b in zip(r, s))
                                                     for r, s in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(tuple(k * a for a in r) for r in self.entries))

    def _same_shape(self, other: "IntMatrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimensions différentes")

    def det(self) -> int:
        """Déterminant exact (Bareiss, sans fraction)."""
        if self.rows != self.cols:
            raise ValueError("déterminant d'une matrice non carrée")
        n = self.rows
        a = self.to_lists()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k]), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    # --- transport JSON (entiers en chaînes décimales) ---
    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.entries]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[str | int]], cols: int | None = None) -> "IntMatrix":
        return cls.from_rows([[int(x) for x in r] for r in data], cols)


# -------------------------
# Groupes abéliens de type fini
# -------------------------
@dataclass(frozen=True)
class FgAbGroup:
    """Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k avec d_1 | d_2 | ... | d_k, d_i >= 2."""

    free_rank: int = 0
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free_rank négatif")
        for d in self.invariant_factors:
            if d < 2:
                raise ValueError(f"facteur invariant invalide: {d}")
        for a, b in zip(self.invariant_factors, self.invariant_factors[1:]):
            if b % a:
                raise ValueError(f"chaîne de divisibilité rompue: {a} ne divise pas {b}")

    @classmethod
    def trivial(cls) -> "FgAbGroup":
        return cls(0, ())

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int]) -> "FgAbGroup":
        """Forme canonique de ⊕ Z/n_i (n_i = 0 pour Z, n_i = 1 ignoré)."""
        free = 0
        by_prime: dict[int, list[int]] = {}
        for n in orders:
            n = abs(int(n))
            if n == 0:
                free += 1
            elif n > 1:
                for p, e in factorint(n).items():
                    by_prime.setdefault(int(p), []).append(int(e))
        if not by_prime:
            return cls(free, ())
        length = max(len(v) for v in by_prime.values())
        factors = [1] * length
        for p, exps in by_prime.items():
            exps = sorted(exps, reverse=True)
            for i, e in enumerate(exps):
                factors[length - 1 - i] *= p ** e
        return cls(free, tuple(d for d in factors if d > 1))

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | None:
        """Ordre, ou None si le groupe est infini."""
        return prod(self.invariant_factors) if self.is_finite else None

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    @property
    def min_generators(self) -> int:
        return self.free_rank + len(self.invariant_factors)

    @property
    def exponent(self) -> int | None:
        if not self.is_finite:
            return None
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def direct_sum(self, other: "FgAbGroup") -> "FgAbGroup":
        return FgAbGroup.from_cyclic_orders([0] * (self.free_rank + other.free_rank)
                                            + list(self.invariant_factors) + list(other.invariant_factors))

    def hom_to_cyclic(self, n: int) -> "FgAbGroup":
        """Hom(self, Z/n)."""
        return FgAbGroup.from_cyclic_orders([n] * self.free_rank + [gcd(d, n) for d in self.invariant_factors])

    def render(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("ℤ" if self.free_rank == 1 else f"ℤ^{self.free_rank}")
        parts.extend(f"ℤ/{d}" for d in self.invariant_factors)
        return " ⊕ ".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.render()

    def to_json(self) -> dict:
        return {
            "free_rank": self.free_rank,
            "invariant_factors": [str(d) for d in self.invariant_factors],
            "order": None if self.order is None else str(self.order),
            "text": self.render(),
        }


@dataclass(frozen=True)
class SnfDecomposition:
    """U·A·V = D ; U et V unimodulaires, U_inv = U^-1."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix | None = field(default=None, compare=False)

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.rows, self.D.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


# -------------------------
# Forme normale de Smith
# -------------------------
class _SnfWorker:
    """Réduction lignes/colonnes avec pivot de plus petite valeur absolue."""

    def __init__(self, a: IntMatrix, track_u: bool, track_v: bool):
        self.m, self.n = a.rows, a.cols
        self.a = a.to_lists()
        self.u = [[int(i == j) for j in range(self.m)] for i in range(self.m)] if track_u else None
        self.u_inv = [[int(i == j) for j in range(self.m)] for i in range(self.m)] if track_u else None
        self.v = [[int(i == j) for j in range(self.n)] for i in range(self.n)] if track_v else None

    # ligne i <- ligne i + q * ligne j
    def row_add(self, i: int, j: int, q: int) -> None:
        ai, aj = self.a[i], self.a[j]
        for k in range(self.n):
            if aj[k]:
                ai[k] += q * aj[k]
        if self.u is not None:
            ui, uj = self.u[i], self.u[j]
            for k in range(self.m):
                if uj[k]:
                    ui[k] += q * uj[k]
            for row in self.u_inv:
                if row[i]:
                    row[j] -= q * row[i]

    def row_swap(self, i: int, j: int) -> None:
        if i == j:
            return
        self.a[i], self.a[j] = self.a[j], self.a[i]
        if self.u is not None:
            self.u[i], self.u[j] = self.u[j], self.u[i]
            for row in self.u_inv:
                row[i], row[j] = row[j], row[i]

    def row_negate(self, i: int) -> None:
        self.a[i] = [-x for x in self.a[i]]
        if self.u is not None:
            self.u[i] = [-x for x in self.u[i]]
            for row in self.u_inv:
                row[i] = -row[i]

    # colonne i <- colonne i + q * colonne j
    def col_add(self, i: int, j: int, q: int) -> None:
        for row in self.a:
            if row[j]:
                row[i] += q * row[j]
        if self.v is not None:
            for row in self.v:
                if row[j]:
                    row[i] += q * row[j]

    def col_swap(self, i: int, j: int) -> None:
        if i == j:
            return
        for row in self.a:
            row[i], row[j] = row[j], row[i]
        if self.v is not None:
            for row in self.v:
                row[i], row[j] = row[j], row[i]

    def _smallest(self, t: int) -> tuple[int, int] | None:
        best = None
        for i in range(t, self.m):
            row = self.a[i]
            for j in range(t, self.n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        return i, j
        return None if best is None else (best[1], best[2])

    def run(self) -> None:
        a = self.a
        t = 0
        while t < min(self.m, self.n):
            pos = self._smallest(t)
            if pos is None:
                break
            self.row_swap(t, pos[0])
            self.col_swap(t, pos[1])
            while True:
                p = a[t][t]
                dirty = False
                for i in range(t + 1, self.m):
                    if a[i][t]:
                        q = a[i][t] // p
                        if q:
                            self.row_add(i, t, -q)
                        dirty = dirty or a[i][t] != 0
                for j in range(t + 1, self.n):
                    if a[t][j]:
                        q = a[t][j] // p
                        if q:
                            self.col_add(j, t, -q)
                        dirty = dirty or a[t][j] != 0
                if dirty:
                    best = (abs(p), t, t)
                    for i in range(t + 1, self.m):
                        if a[i][t] and abs(a[i][t]) < best[0]:
                            best = (abs(a[i][t]), i, t)
                    for j in range(t + 1, self.n):
                        if a[t][j] and abs(a[t][j]) < best[0]:
                            best = (abs(a[t][j]), t, j)
                    self.row_swap(t, best[1])
                    self.col_swap(t, best[2])
                    continue
                # ligne et colonne du pivot nettoyées : divisibilité
                bad = next((i for i in range(t + 1, self.m)
                            if any(x % p for x in a[i][t + 1:])), None)
                if bad is None:
                    break
                self.row_add(t, bad, 1)
            if a[t][t] < 0:
                self.row_negate(t)
            t += 1


def _run_snf(a: IntMatrix, track_u: bool = True, track_v: bool = True) -> _SnfWorker:
    worker = _SnfWorker(a, track_u, track_v)
    worker.run()
    return worker


def smith_normal_form(a: IntMatrix) -> SnfDecomposition:
    w = _run_snf(a)
    return SnfDecomposition(
        U=IntMatrix.from_rows(w.u, a.rows),
        D=IntMatrix.from_rows(w.a, a.cols),
        V=IntMatrix.from_rows(w.v, a.cols),
        U_inv=IntMatrix.from_rows(w.u_inv, a.rows),
    )


def _diagonal(w: _SnfWorker) -> list[int]:
    return [w.a[i][i] for i in range(min(w.m, w.n))]


def cokernel(a: IntMatrix) -> FgAbGroup:
    """Z^rows / im(A)."""
    diag = _diagonal(_run_snf(a, track_u=False, track_v=False))
    nonzero = [d for d in diag if d]
    return FgAbGroup(a.rows - len(nonzero), tuple(d for d in nonzero if d != 1))


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """Colonnes = base de ker(A) (sous-réseau saturé de Z^cols)."""
    w = _run_snf(a, track_u=False, track_v=True)
    rank = sum(1 for d in _diagonal(w) if d)
    return IntMatrix.from_rows([row[rank:] for row in w.v], a.cols - rank)


def image_basis(a: IntMatrix) -> IntMatrix:
    """Colonnes = base du sous-réseau im(A) de Z^rows."""
    w = _run_snf(a, track_u=True, track_v=False)
    diag = [d for d in _diagonal(w) if d]
    return IntMatrix.from_rows([[row[i] * d for i, d in enumerate(diag)] for row in w.u_inv], len(diag))


def solve(basis: IntMatrix, b: IntMatrix) -> IntMatrix:
    """
    Résout basis·X = b pour une matrice basis de rang colonne plein.
    Lève ValueError si une colonne de b n'est pas dans le Z-module engendré.
    """
    k = basis.cols
    if k == 0:
        if not b.is_zero():
            raise ValueError("solve: second membre hors du réseau (base vide)")
        return IntMatrix.zeros(0, b.cols)
    w = _run_snf(basis, track_u=True, track_v=True)
    diag = _diagonal(w)
    if any(d == 0 for d in diag[:k]):
        raise ValueError("solve: base de rang non plein")
    ub = IntMatrix.from_rows(w.u, basis.rows) @ b
    y = []
    for i in range(basis.rows):
        row = ub.entries[i]
        if i < k:
            if any(x % diag[i] for x in row):
                raise ValueError("solve: second membre hors du réseau")
            y.append([x // diag[i] for x in row])
        elif any(row):
            raise ValueError("solve: second membre hors du sous-espace engendré")
    return IntMatrix.from_rows(w.v, k) @ IntMatrix.from_rows(y, b.cols)


# -------------------------
# Homologie de suites Z^a -> Z^b -> Z^c (avec modules de relations diagonaux)
# -------------------------
def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) avec s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def echelon_rows(rows: Iterable[Sequence[int]], ncols: int, modulus: int = 0) -> list[list[int]]:
    """
    Forme échelonnée par opérations unimodulaires sur les lignes.

    Les lignes non nulles renvoyées engendrent le même Z-module de lignes
    (resp. le même (Z/modulus)-module si modulus > 0). Sert à compresser les
    grands systèmes de cocycles avant le calcul de noyau.
    """
    pivots: dict[int, list[int]] = {}
    for src in rows:
        r = [x % modulus for x in src] if modulus else list(src)
        while True:
            c = next((j for j in range(ncols) if r[j]), None)
            if c is None:
                break
            prow = pivots.get(c)
            if prow is None:
                if r[c] < 0:
                    r = [-x for x in r]
                pivots[c] = r
                break
            a, b = prow[c], r[c]
            g, s, t = _xgcd(a, b)
            ag, bg = a // g, b // g
            new_p = [s * x + t * y for x, y in zip(prow, r)]
            rest = [ag * y - bg * x for x, y in zip(prow, r)]
            if modulus:
                new_p = [x % modulus for x in new_p]
                rest = [x % modulus for x in rest]
            pivots[c] = new_p
            r = rest
    return [pivots[c] for c in sorted(pivots)]


@dataclass(frozen=True)
class HomologyPresentation:
    """
    Présentation de H = Z/B avec Z de base `basis` (colonnes) et B exprimé
    dans cette base par `relations`. La SNF de `relations` fournit les
    coordonnées canoniques des classes.
    """

    basis: IntMatrix
    relations: IntMatrix
    snf_u: IntMatrix
    snf_u_inv: IntMatrix
    snf_diag: tuple[int, ...]

    @property
    def _padded_diag(self) -> list[int]:
        k = self.basis.cols
        return list(self.snf_diag[:k]) + [0] * (k - len(self.snf_diag[:k]))

    @property
    def kept(self) -> list[int]:
        """Indices des coordonnées non triviales (d_i != 1)."""
        return [i for i, d in enumerate(self._padded_diag) if d != 1]

    @property
    def group(self) -> FgAbGroup:
        diag = self._padded_diag
        return FgAbGroup(sum(1 for d in diag if d == 0), tuple(d for d in diag if d > 1))

    @property
    def moduli(self) -> list[int]:
        """Ordre de chaque générateur conservé (0 pour un facteur libre)."""
        diag = self._padded_diag
        return [diag[i] for i in self.kept]

    def generators(self) -> list[tuple[int, ...]]:
        """Représentants (vecteurs de Z) des générateurs canoniques de H."""
        gens = self.basis @ self.snf_u_inv
        return [gens.column(i) for i in self.kept]

    def coordinates(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Coordonnées canoniques de la classe d'un cycle `vec`."""
        c = solve(self.basis, IntMatrix.from_columns([vec], len(vec)))
        y = self.snf_u @ c
        diag = self._padded_diag
        out = []
        for i in self.kept:
            x = y[i, 0]
            out.append(x % diag[i] if diag[i] else x)
        return tuple(out)

    def contains_boundary(self, vec: Sequence[int]) -> bool:
        return all(x == 0 for x in self.coordinates(vec))


def quotient(z_gens: IntMatrix, b_gens: IntMatrix) -> HomologyPresentation:
    """Z/B pour des générateurs (colonnes) de Z et de B ⊂ Z."""
    basis = image_basis(z_gens) if z_gens.cols else IntMatrix.zeros(z_gens.rows, 0)
    rel = solve(basis, b_gens)
    if basis.cols == 0:
        return HomologyPresentation(basis, rel, IntMatrix.identity(0), IntMatrix.identity(0), ())
    w = _run_snf(rel, track_u=True, track_v=False)
    return HomologyPresentation(
        basis=basis,
        relations=rel,
        snf_u=IntMatrix.from_rows(w.u, basis.cols),
        snf_u_inv=IntMatrix.from_rows(w.u_inv, basis.cols),
        snf_diag=tuple(_diagonal(w)),
    )


def _check_composition(d_in: IntMatrix, d_out: IntMatrix, out_moduli: Sequence[int]) -> None:
    if d_in.rows != d_out.cols:
        raise CompositionError(f"dimensions incompatibles: d_in {d_in.rows}x{d_in.cols}, "
                               f"d_out {d_out.rows}x{d_out.cols}")
    comp = d_out @ d_in
    for i, row in enumerate(comp.entries):
        e = out_moduli[i]
        if any((x % e if e else x) for x in row):
            raise CompositionError(f"d_out·d_in != 0 (ligne {i}) : complexe mal formé")


def subquotient_mod(
    d_in: IntMatrix,
    d_out: IntMatrix,
    mid_moduli: Sequence[int] | None = None,
    out_moduli: Sequence[int] | None = None,
) -> HomologyPresentation:
    """
    Homologie ker(d_out)/im(d_in) où chaque coordonnée i du terme du milieu
    (resp. de sortie) vit dans Z/mid_moduli[i] (0 = Z).

    Les cycles sont {x : d_out·x ≡ 0 coordonnée par coordonnée} ; les bords
    sont im(d_in) + les relations du terme du milieu.
    """
    n = d_out.cols
    mid_moduli = list(mid_moduli) if mid_moduli is not None else [0] * n
    out_moduli = list(out_moduli) if out_moduli is not None else [0] * d_out.rows
    if len(mid_moduli) != n or len(out_moduli) != d_out.rows:
        raise ValueError("subquotient_mod: vecteurs de modules incohérents")
    _check_composition(d_in, d_out, out_moduli)

    # 1) cycles : lignes groupées par module, compressées, plus colonnes e·I
    groups: dict[int, list[tuple[int, ...]]] = {}
    for row, e in zip(d_out.entries, out_moduli):
        if e != 1 and any(row):
            groups.setdefault(e, []).append(row)
    stacked: list[list[int]] = []
    extra: list[int] = []
    for e in sorted(groups):
        for r in echelon_rows(groups[e], n, e):
            stacked.append(r)
            extra.append(e)
    mod_cols = [i for i, e in enumerate(extra) if e]
    if stacked:
        full = [r + [extra[i] if i == c else 0 for c in mod_cols] for i, r in enumerate(stacked)]
        ker = kernel_basis(IntMatrix.from_rows(full, n + len(mod_cols)))
        z_gens = ker.select_rows(range(n))
    else:
        z_gens = IntMatrix.identity(n)
    logger.debug("subquotient_mod: %d lignes compressées en %d", d_out.rows, len(stacked))

    # 2) bords
    rel_cols = [tuple(e if j == i else 0 for j in range(n)) for i, e in enumerate(mid_moduli) if e]
    b_cols = d_in.columns() + rel_cols
    b_gens = IntMatrix.from_columns(b_cols, n) if b_cols else IntMatrix.zeros(n, 0)
    return quotient(z_gens, b_gens)


def subquotient(d_in: IntMatrix, d_out: IntMatrix) -> FgAbGroup:
    """Forme canonique de ker(d_out)/im(d_in) ; exige d_out·d_in = 0."""
    return subquotient_mod(d_in, d_out).group


# -------------------------
# Morphismes induits entre présentations
# -------------------------
@dataclass(frozen=True)
class InducedMap:
    source: FgAbGroup
    target: FgAbGroup
    matrix: IntMatrix  # colonnes : images des générateurs de la source
    kernel_order: int | None
    image_order: int | None

    @property
    def is_injective(self) -> bool:
        return self.kernel_order == 1

    @property
    def is_zero(self) -> bool:
        return self.image_order == 1

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "kernel_order": self.kernel_order,
            "image_order": self.image_order,
        }


def induced_map(src: HomologyPresentation, tgt: HomologyPresentation, chain_map: IntMatrix) -> InducedMap:
    """Application induite en homologie par un morphisme de chaînes."""
    gens = src.generators()
    rows = len(tgt.kept)
    cols = [tgt.coordinates(chain_map.apply(g)) for g in gens]
    mat = IntMatrix.from_columns(cols, rows) if cols else IntMatrix.zeros(rows, 0)
    s_group, t_group = src.group, tgt.group
    image_order = kernel_order = None
    if t_group.is_finite:
        # |im| = |cible| / |cible / im|
        pres = IntMatrix.hstack(mat, IntMatrix.diagonal(tgt.moduli)) if rows else mat
        coker = cokernel(pres)
        image_order = t_group.order // coker.order
        if s_group.is_finite:
            kernel_order = s_group.order // image_order
    return InducedMap(s_group, t_group, mat, kernel_order, image_order)
