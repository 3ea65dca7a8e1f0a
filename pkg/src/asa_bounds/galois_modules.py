"""
Groupes finis Γ (modèles de Gal(L/K)) et Γ-modules de type fini.

Un GaloisModule est présenté comme Z^rank / im(relations) avec une matrice
d'action entière par élément de Γ. Relations vides = réseau.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Sequence

from asa_bounds.errors import EquivarianceError, GroupAxiomError, ModuleError, SubgroupError
from asa_bounds.int_linalg import FgAbGroup, IntMatrix, smith_normal_form, solve, subquotient_mod

logger = logging.getLogger(__name__)


# -------------------------
# Groupes finis
# -------------------------
@dataclass(frozen=True)
class FiniteGroup:
    order: int
    table: tuple[tuple[int, ...], ...]
    identity: int
    name: str = field(default="group", compare=False)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        e = self.identity
        return tuple(next(b for b in range(self.order) if self.table[a][b] == e) for a in range(self.order))

    def inverse(self, a: int) -> int:
        return self.inverses[a]

    @property
    def elements(self) -> range:
        return range(self.order)

    @property
    def non_identity(self) -> list[int]:
        return [g for g in range(self.order) if g != self.identity]

    def power(self, a: int, k: int) -> int:
        out = self.identity
        for _ in range(k):
            out = self.table[out][a]
        return out

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    @property
    def exponent(self) -> int:
        from math import lcm

        return lcm(*(self.element_order(a) for a in self.elements))

    def generated(self, gens: Sequence[int]) -> list[int]:
        """Sous-groupe engendré (clôture), trié."""
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.table[x][g]
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return sorted(seen)

    def is_subgroup(self, elems: Sequence[int]) -> bool:
        s = set(elems)
        if self.identity not in s or any(not 0 <= x < self.order for x in s):
            return False
        return all(self.table[a][self.inverses[b]] in s for a in s for b in s)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


def make_group(mult_table: Sequence[Sequence[int]], name: str = "group") -> FiniteGroup:
    """Valide une table de multiplication et construit le groupe."""
    n = len(mult_table)
    if n == 0:
        raise GroupAxiomError("table vide")
    table = tuple(tuple(int(x) for x in row) for row in mult_table)
    if any(len(row) != n for row in table):
        raise GroupAxiomError("table non carrée")
    if any(not 0 <= x < n for row in table for x in row):
        raise GroupAxiomError("entrée hors de [0, ordre)")

    identity = next((e for e in range(n) if all(table[e][x] == x and table[x][e] == x for x in range(n))), None)
    if identity is None:
        raise GroupAxiomError("pas d'élément neutre")

    for a, b, c in itertools.product(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise GroupAxiomError(f"non associative sur le triplet ({a}, {b}, {c})")

    for a in range(n):
        if not any(table[a][b] == identity and table[b][a] == identity for b in range(n)):
            raise GroupAxiomError(f"pas d'inverse pour l'élément {a}")

    return FiniteGroup(n, table, identity, name)


def cyclic_group(n: int) -> FiniteGroup:
    """C_n ; l'élément k est g^k (générateur désigné : 1)."""
    if n < 1:
        raise GroupAxiomError(f"ordre cyclique invalide: {n}")
    return FiniteGroup(n, tuple(tuple((i + j) % n for j in range(n)) for i in range(n)), 0, f"c{n}")


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """G × H ; l'élément (a, b) a l'indice a·|H| + b."""
    m = h.order
    table = tuple(
        tuple(g.table[a1][a2] * m + h.table[b1][b2] for a2 in range(g.order) for b2 in range(m))
        for a1 in range(g.order) for b1 in range(m)
    )
    return FiniteGroup(g.order * m, table, g.identity * m + h.identity, f"{g.name}x{h.name}")


def symmetric_group(n: int) -> FiniteGroup:
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    # (p·q)(i) = p(q(i))
    table = [[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    return make_group(table, name=f"s{n}")


def subgroup(g: FiniteGroup, elems: Sequence[int]) -> FiniteGroup:
    """Sous-groupe réindexé : l'élément k correspond à elems[k]."""
    if len(set(elems)) != len(elems) or not g.is_subgroup(elems):
        raise SubgroupError(f"{list(elems)} n'est pas un sous-groupe de {g.name}")
    pos = {x: k for k, x in enumerate(elems)}
    table = tuple(tuple(pos[g.table[a][b]] for b in elems) for a in elems)
    return FiniteGroup(len(elems), table, pos[g.identity], f"{g.name}[{','.join(map(str, elems))}]")


def left_cosets(g: FiniteGroup, elems: Sequence[int]) -> list[int]:
    """Représentants t_i des classes t_i·H (le premier est le neutre)."""
    h = set(elems)
    reps: list[int] = []
    covered: set[int] = set()
    for x in [g.identity] + [y for y in g.elements if y != g.identity]:
        if x not in covered:
            reps.append(x)
            covered.update(g.table[x][k] for k in h)
    return reps


# -------------------------
# Modules
# -------------------------
@lru_cache(maxsize=1024)
def _relation_normal_form(relations: IntMatrix) -> tuple[IntMatrix, IntMatrix, tuple[int, ...]]:
    """(U, U^-1, diag) avec U·im(R) = im(diag) ; diag complété par des 0."""
    r = relations.rows
    if relations.cols == 0:
        return IntMatrix.identity(r), IntMatrix.identity(r), (0,) * r
    snf = smith_normal_form(relations)
    diag = list(snf.diagonal) + [0] * (r - len(snf.diagonal))
    return snf.U, snf.U_inv, tuple(diag[:r])


@dataclass(frozen=True)
class NormalizedModule:
    """Coordonnées où les relations sont diagonales (modules >= 2 ou 0)."""

    moduli: tuple[int, ...]
    action: tuple[IntMatrix, ...]
    to_coords: IntMatrix    # r' x r
    from_coords: IntMatrix  # r x r'

    @property
    def rank(self) -> int:
        return len(self.moduli)


def _reduce(mat: IntMatrix, moduli: Sequence[int]) -> IntMatrix:
    return IntMatrix(mat.rows, mat.cols, tuple(
        tuple((x % e if e else x) for x in row) for row, e in zip(mat.entries, moduli)))


@dataclass(frozen=True)
class GaloisModule:
    group: FiniteGroup
    rank: int
    relations: IntMatrix
    action: tuple[IntMatrix, ...]
    name: str = field(default="M", compare=False)

    def __post_init__(self):
        if self.relations.rows != self.rank:
            raise ModuleError(f"{self.name}: relations de {self.relations.rows} lignes pour un rang {self.rank}")
        if len(self.action) != self.group.order:
            raise ModuleError(f"{self.name}: {len(self.action)} matrices d'action pour |Γ| = {self.group.order}")
        for g, a in enumerate(self.action):
            if (a.rows, a.cols) != (self.rank, self.rank):
                raise ModuleError(f"{self.name}: action({g}) n'est pas {self.rank}x{self.rank}")
        self._check_action()

    @property
    def is_lattice(self) -> bool:
        """Pas de relation effective : Z^rank avec action entière."""
        nm = self.normalized
        return nm.rank == self.rank and all(e == 0 for e in nm.moduli)

    @cached_property
    def normalized(self) -> NormalizedModule:
        u, u_inv, diag = _relation_normal_form(self.relations)
        kept = [i for i, d in enumerate(diag) if d != 1]
        p = u.select_rows(kept)
        q = u_inv.select_cols(kept)
        moduli = tuple(diag[i] for i in kept)
        action = tuple(_reduce(p @ a @ q, moduli) for a in self.action)
        return NormalizedModule(moduli, action, p, q)

    @cached_property
    def underlying(self) -> FgAbGroup:
        """Groupe abélien sous-jacent (action oubliée)."""
        return FgAbGroup.from_cyclic_orders(self.normalized.moduli)

    def is_zero_mod_relations(self, mat: IntMatrix) -> bool:
        u, _, diag = _relation_normal_form(self.relations)
        y = u @ mat
        return all((x % d if d else x) == 0 for row, d in zip(y.entries, diag) if d != 1 for x in row)

    def _check_action(self) -> None:
        g = self.group
        ident = IntMatrix.identity(self.rank)
        if not self.is_zero_mod_relations(self.action[g.identity] - ident):
            raise ModuleError(f"{self.name}: action(neutre) != identité")
        if self.relations.cols:
            for k, a in enumerate(self.action):
                if not self.is_zero_mod_relations(a @ self.relations):
                    raise ModuleError(f"{self.name}: action({k}) ne préserve pas les relations")
        for x in g.elements:
            for y in g.elements:
                if not self.is_zero_mod_relations(self.action[x] @ self.action[y] - self.action[g.table[x][y]]):
                    raise ModuleError(f"{self.name}: action({x})·action({y}) != action({g.table[x][y]})")

    def acts_trivially(self, elems: Sequence[int] | None = None) -> bool:
        elems = self.group.elements if elems is None else elems
        ident = IntMatrix.identity(self.rank)
        return all(self.is_zero_mod_relations(self.action[g] - ident) for g in elems)

    def __repr__(self) -> str:
        return f"GaloisModule({self.name}, group={self.group.name}, rank={self.rank}, underlying={self.underlying})"


def _lattice(group: FiniteGroup, action: Sequence[IntMatrix], name: str) -> GaloisModule:
    rank = action[0].rows if action else 0
    return GaloisModule(group, rank, IntMatrix.zeros(rank, 0), tuple(action), name)


def trivial_lattice(group: FiniteGroup, r: int = 1) -> GaloisModule:
    if r < 0:
        raise ModuleError("rang négatif")
    return _lattice(group, [IntMatrix.identity(r)] * group.order, "Z" if r == 1 else f"Z^{r}")


def zero_module(group: FiniteGroup) -> GaloisModule:
    return _lattice(group, [IntMatrix.identity(0)] * group.order, "0")


def sign_character(group: FiniteGroup) -> list[int]:
    """Un morphisme surjectif Γ -> C_2 (0/1 par élément), s'il en existe un."""
    squares = [group.mul(g, g) for g in group.elements]
    commutators = [
        group.mul(group.mul(a, b), group.mul(group.inverse(a), group.inverse(b)))
        for a in group.elements for b in group.elements
    ]
    n = set(group.generated(squares + commutators))
    outside = [g for g in group.elements if g not in n]
    if not outside:
        raise ModuleError(f"{group.name}: aucun morphisme surjectif vers C_2")
    x = outside[0]
    # hyperplan de Γ/N (2-groupe abélien élémentaire) qui évite x
    h = n
    while 2 * len(h) < group.order:
        for y in group.elements:
            if y in h:
                continue
            candidate = set(group.generated(sorted(h) + [y]))
            if x not in candidate:
                h = candidate
                break
    return [0 if g in h else 1 for g in group.elements]


def sign_module(group: FiniteGroup, surjection: Sequence[int]) -> GaloisModule:
    """Z⁻ : g agit par (-1)^s(g) où s : Γ -> C_2 = {0, 1} est un morphisme surjectif."""
    s = [int(x) for x in surjection]
    if len(s) != group.order or any(x not in (0, 1) for x in s):
        raise ModuleError("surjection vers C_2 invalide: une valeur 0/1 par élément attendue")
    if any(s[group.table[a][b]] != (s[a] + s[b]) % 2 for a in group.elements for b in group.elements):
        raise ModuleError("l'application donnée n'est pas un morphisme Γ -> C_2")
    if 1 not in s:
        raise ModuleError("l'application donnée n'est pas surjective")
    return _lattice(group, [IntMatrix.from_rows([[(-1) ** x]]) for x in s], "Z-")


def regular_module(group: FiniteGroup) -> GaloisModule:
    """Z[Γ] : g·e_h = e_{gh}."""
    n = group.order
    action = []
    for g in group.elements:
        rows = [[0] * n for _ in range(n)]
        for h in group.elements:
            rows[group.table[g][h]][h] = 1
        action.append(IntMatrix.from_rows(rows, n))
    return _lattice(group, action, "Z[G]")


def reduction_mod(m: GaloisModule, n: int) -> GaloisModule:
    """M / nM."""
    if n < 2:
        raise ModuleError(f"réduction modulo {n} : n >= 2 attendu")
    rel = IntMatrix.hstack(m.relations, IntMatrix.identity(m.rank).scale(n))
    return GaloisModule(m.group, m.rank, rel, m.action, f"{m.name}/{n}")


def induced_module(group: FiniteGroup, h_elems: Sequence[int], m_over_h: GaloisModule) -> GaloisModule:
    """Ind_H^Γ M = ⊕_i t_i ⊗ M sur les classes t_i·H."""
    h_group = subgroup(group, h_elems)
    if m_over_h.group.table != h_group.table:
        raise SubgroupError("le module induit doit être défini sur le sous-groupe réindexé selon h_elems")
    pos = {x: k for k, x in enumerate(h_elems)}
    reps = left_cosets(group, h_elems)
    k, r = len(reps), m_over_h.rank
    action = []
    for g in group.elements:
        rows = [[0] * (k * r) for _ in range(k * r)]
        for i, t in enumerate(reps):
            gt = group.table[g][t]
            # g·t_i = t_j·h
            for j, tj in enumerate(reps):
                hh = group.table[group.inverse(tj)][gt]
                if hh in pos:
                    block = m_over_h.action[pos[hh]]
                    for a in range(r):
                        for b in range(r):
                            rows[j * r + a][i * r + b] = block[a, b]
                    break
        action.append(IntMatrix.from_rows(rows, k * r))
    rel = IntMatrix.block_diag(*([m_over_h.relations] * k))
    return GaloisModule(group, k * r, rel, tuple(action), f"Ind({m_over_h.name})")


def permutation_module(group: FiniteGroup, h_elems: Sequence[int]) -> GaloisModule:
    """Z[Γ/H], module de caractères de la restriction de Weil de G_m."""
    m = induced_module(group, h_elems, trivial_lattice(subgroup(group, h_elems), 1))
    return GaloisModule(m.group, m.rank, m.relations, m.action, "Z[G/H]")


def sublattice_module(m: GaloisModule, basis: IntMatrix, name: str | None = None) -> GaloisModule:
    """Sous-réseau Γ-stable de base `basis` (colonnes) d'un réseau M."""
    if not m.is_lattice:
        raise ModuleError(f"{m.name}: sous-réseau d'un module non libre")
    try:
        action = [solve(basis, a @ basis) for a in m.action]
    except ValueError as e:
        raise ModuleError(f"{m.name}: sous-réseau non stable par Γ") from e
    return _lattice(m.group, action, name or f"sub({m.name})")


def augmentation_kernel(group: FiniteGroup, h_elems: Sequence[int]) -> GaloisModule:
    """Ker(Z[Γ/H] -> Z), base e_i - e_0."""
    perm = permutation_module(group, h_elems)
    k = perm.rank
    if k == 1:
        return zero_module(group)
    cols = [tuple((1 if j == i else -1 if j == 0 else 0) for j in range(k)) for i in range(1, k)]
    return sublattice_module(perm, IntMatrix.from_columns(cols, k), "I[G/H]")


def dual_module(m: GaloisModule) -> GaloisModule:
    """Hom(M, Z) : action(g) = action(g^-1)^T (transposée-inverse)."""
    if not m.is_lattice:
        raise ModuleError(f"{m.name}: dual de Cartier d'un module fini non pris en charge")
    g = m.group
    return _lattice(g, [m.action[g.inverse(x)].transpose() for x in g.elements], f"dual({m.name})")


def direct_sum(m: GaloisModule, n: GaloisModule) -> GaloisModule:
    if m.group != n.group:
        raise ModuleError("somme directe de modules sur des groupes différents")
    return GaloisModule(
        m.group, m.rank + n.rank,
        IntMatrix.block_diag(m.relations, n.relations),
        tuple(IntMatrix.block_diag(a, b) for a, b in zip(m.action, n.action)),
        f"{m.name}+{n.name}",
    )


def quotient_module(m: GaloisModule, gens: IntMatrix, name: str | None = None) -> GaloisModule:
    """M / <gens> (les générateurs doivent engendrer un sous-module stable)."""
    return GaloisModule(m.group, m.rank, IntMatrix.hstack(m.relations, gens), m.action, name or f"{m.name}/sub")


def restrict_module(m: GaloisModule, h_elems: Sequence[int]) -> GaloisModule:
    h = subgroup(m.group, h_elems)
    return GaloisModule(h, m.rank, m.relations, tuple(m.action[x] for x in h_elems), f"res({m.name})")


def check_surjection(group: FiniteGroup, quotient: FiniteGroup, proj: Sequence[int]) -> None:
    proj = list(proj)
    if len(proj) != group.order:
        raise SubgroupError("projection: une image par élément attendue")
    if any(proj[group.table[a][b]] != quotient.table[proj[a]][proj[b]] for a in group.elements for b in group.elements):
        raise SubgroupError("projection: ce n'est pas un morphisme")
    if set(proj) != set(quotient.elements):
        raise SubgroupError("projection: non surjective")


def inflate_module(m_over_q: GaloisModule, group: FiniteGroup, proj: Sequence[int]) -> GaloisModule:
    """Module sur Γ via Γ ↠ Q."""
    check_surjection(group, m_over_q.group, proj)
    return GaloisModule(group, m_over_q.rank, m_over_q.relations,
                        tuple(m_over_q.action[proj[g]] for g in group.elements), f"inf({m_over_q.name})")


@dataclass(frozen=True)
class FixedPoints:
    group: FgAbGroup
    generators: IntMatrix  # colonnes, coordonnées d'origine


def fixed_points(m: GaloisModule) -> FixedPoints:
    """M^Γ = ∩_g ker(action(g) - id), relations comprises."""
    nm = m.normalized
    r = nm.rank
    ident = IntMatrix.identity(r)
    blocks = [nm.action[g] - ident for g in m.group.non_identity]
    d_out = IntMatrix.vstack(*blocks) if blocks else IntMatrix.zeros(0, r)
    pres = subquotient_mod(IntMatrix.zeros(r, 0), d_out, nm.moduli, list(nm.moduli) * len(blocks))
    gens = pres.generators()
    gen_mat = IntMatrix.from_columns(gens, r) if gens else IntMatrix.zeros(r, 0)
    return FixedPoints(pres.group, nm.from_coords @ gen_mat)


# -------------------------
# Complexes à deux termes
# -------------------------
@dataclass(frozen=True)
class TwoTermComplex:
    """[M_-1 --d--> M_0], M_-1 en degré -1 et M_0 en degré 0."""

    m_minus1: GaloisModule
    m_zero: GaloisModule
    differential: IntMatrix

    @property
    def group(self) -> FiniteGroup:
        return self.m_zero.group

    @cached_property
    def normalized_differential(self) -> IntMatrix:
        n0 = self.m_zero.normalized
        return _reduce(n0.to_coords @ self.differential @ self.m_minus1.normalized.from_coords, n0.moduli)

    def direct_sum(self, other: "TwoTermComplex") -> "TwoTermComplex":
        return make_complex(
            direct_sum(self.m_minus1, other.m_minus1),
            direct_sum(self.m_zero, other.m_zero),
            IntMatrix.block_diag(self.differential, other.differential),
        )


def make_complex(m_minus1: GaloisModule, m_zero: GaloisModule, d: IntMatrix) -> TwoTermComplex:
    if m_minus1.group != m_zero.group:
        raise EquivarianceError("les deux termes du complexe ne sont pas sur le même groupe")
    if (d.rows, d.cols) != (m_zero.rank, m_minus1.rank):
        raise EquivarianceError(
            f"différentielle {d.rows}x{d.cols} incompatible avec les rangs {m_minus1.rank} -> {m_zero.rank}")
    if m_minus1.relations.cols and not m_zero.is_zero_mod_relations(d @ m_minus1.relations):
        raise EquivarianceError("la différentielle n'est pas définie sur les relations de M_-1")
    for g in m_zero.group.elements:
        if not m_zero.is_zero_mod_relations(m_zero.action[g] @ d - d @ m_minus1.action[g]):
            raise EquivarianceError(f"différentielle non équivariante pour g = {g}")
    return TwoTermComplex(m_minus1, m_zero, d)
