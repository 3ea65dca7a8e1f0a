"""
Arithmétique de décomposition des premiers pour L = Q[x]/(f), f unitaire entier.

- type de décomposition de f mod p (factorisation par degrés distincts),
- densités naturelle / de Dirichlet tronquée sur les premiers <= B,
- relation [L:K]·δ_K(S_split) = δ_L(S_L) estimée des deux côtés,
- extension abélienne maximale E_S décomposée sur S, pour S défini par
  congruences sur Q (sous-corps de Q(ζ_m)).

Les polynômes sont des tuples de coefficients entiers, degré décroissant.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import pandas as pd
from sympy import Poly, cyclotomic_poly, discrete_log, factorint, isprime, primerange, primitive_root, symbols, totient
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_ddf_zassenhaus, gf_factor, gf_from_int_poly, gf_sqf_p

from asa_bounds.errors import DensityError, ParseError, PlaceSetError, PrimeError
from asa_bounds.int_linalg import FgAbGroup, IntMatrix, cokernel
from asa_bounds.items import DensityEstimate
from asa_bounds.settings import DENSITY_CHUNK, DIRICHLET_S, MIN_PRIME_BOUND

logger = logging.getLogger(__name__)

X = symbols("x")

PLACE_SET_KINDS = ("split_in_L", "frobenius_pattern", "congruence", "all_places")


# -------------------------
# Corps de nombres
# -------------------------
@dataclass(frozen=True)
class NumberFieldSpec:
    coeffs: tuple[int, ...]
    asserted_galois: bool = False
    name: str = field(default="", compare=False)

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        # zéros de tête ignorés
        while len(coeffs) > 1 and coeffs[0] == 0:
            coeffs = coeffs[1:]
        object.__setattr__(self, "coeffs", coeffs)
        if len(coeffs) < 2:
            raise ParseError(f"polynôme de degré < 1: {list(coeffs)}")
        if coeffs[0] != 1:
            raise ParseError(f"polynôme non unitaire (coefficient dominant {coeffs[0]})")
        poly = Poly(list(coeffs), X)
        if poly.gcd(poly.diff(X)).degree() > 0:
            raise ParseError(f"polynôme non sans facteur carré: {poly.as_expr()}")
        if not self.name:
            object.__setattr__(self, "name", str(poly.as_expr()))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @cached_property
    def discriminant(self) -> int:
        return int(Poly(list(self.coeffs), X).discriminant())

    def to_json(self) -> dict:
        return {"poly": [str(c) for c in self.coeffs], "name": self.name, "asserted_galois": self.asserted_galois}


def cyclotomic_coeffs(m: int) -> tuple[int, ...]:
    if m < 1:
        raise ParseError(f"cyclo:{m} : m >= 1 attendu")
    return tuple(int(c) for c in cyclotomic_poly(m, X, polys=True).all_coeffs())


def cyclotomic_field(m: int) -> NumberFieldSpec:
    return NumberFieldSpec(cyclotomic_coeffs(m), asserted_galois=True, name=f"cyclo:{m}")


def rational_field() -> NumberFieldSpec:
    return NumberFieldSpec((1, 0), asserted_galois=True, name="x")


# -------------------------
# Ensembles de places
# -------------------------
@dataclass(frozen=True)
class PlaceSetSpec:
    kind: str
    include_archimedean: bool = True
    modulus: int | None = None
    residues: tuple[int, ...] = ()
    patterns: tuple[tuple[int, ...], ...] = ()
    symbolic_density: Fraction | None = None

    def __post_init__(self):
        if self.kind not in PLACE_SET_KINDS:
            raise PlaceSetError(f"type d'ensemble de places inconnu: {self.kind!r}")
        if self.kind == "congruence":
            m = self.modulus
            if m is None or m < 2:
                raise PlaceSetError(f"congruence: module m >= 2 attendu (reçu {m})")
            if not self.residues:
                raise DensityError("congruence: ensemble de résidus vide (ensemble insatisfiable)")
            residues = tuple(sorted({int(a) % m for a in self.residues}))
            bad = [a for a in residues if math.gcd(a, m) != 1]
            if bad:
                raise PlaceSetError(f"résidus hors de (Z/{m})^×: {bad}")
            object.__setattr__(self, "residues", residues)
        if self.kind == "frobenius_pattern":
            if not self.patterns:
                raise PlaceSetError("frobenius_pattern: au moins un motif de degrés attendu")
            object.__setattr__(self, "patterns", tuple(sorted({tuple(sorted(p)) for p in self.patterns})))
        if self.symbolic_density is not None:
            d = Fraction(self.symbolic_density)
            if not 0 < d <= 1:
                raise PlaceSetError(f"densité symbolique hors de (0, 1]: {d}")
            object.__setattr__(self, "symbolic_density", d)

    @classmethod
    def split(cls, include_archimedean: bool = True) -> "PlaceSetSpec":
        return cls("split_in_L", include_archimedean)

    @classmethod
    def all_primes(cls, include_archimedean: bool = True) -> "PlaceSetSpec":
        return cls("all_places", include_archimedean)

    @classmethod
    def congruence(cls, m: int, residues: Iterable[int], include_archimedean: bool = True) -> "PlaceSetSpec":
        return cls("congruence", include_archimedean, modulus=int(m), residues=tuple(residues))

    @classmethod
    def frobenius(cls, patterns: Iterable[Sequence[int]], include_archimedean: bool = True) -> "PlaceSetSpec":
        return cls("frobenius_pattern", include_archimedean, patterns=tuple(tuple(p) for p in patterns))

    def with_symbolic_density(self, d: Fraction | str) -> "PlaceSetSpec":
        return PlaceSetSpec(self.kind, self.include_archimedean, self.modulus, self.residues, self.patterns,
                            Fraction(d))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "include_archimedean": self.include_archimedean,
            "modulus": self.modulus,
            "residues": list(self.residues),
            "patterns": [list(p) for p in self.patterns],
            "symbolic_density": None if self.symbolic_density is None else str(self.symbolic_density),
        }


def exact_density(nf: NumberFieldSpec | None, spec: PlaceSetSpec) -> Fraction | None:
    """δ exact quand il est connu sans estimation (sinon None)."""
    if spec.symbolic_density is not None:
        return spec.symbolic_density
    if spec.kind == "all_places":
        return Fraction(1)
    if spec.kind == "congruence":
        # Dirichlet : chaque classe inversible a densité 1/φ(m)
        return Fraction(len(spec.residues), int(totient(spec.modulus)))
    if spec.kind == "split_in_L" and nf is not None and nf.asserted_galois:
        return Fraction(1, nf.degree)
    return None


# -------------------------
# Décomposition mod p
# -------------------------
def _require_prime(p: int) -> None:
    if not isprime(p):
        raise PrimeError(f"{p} n'est pas premier")


@lru_cache(maxsize=65536)
def _factor_degrees(coeffs: tuple[int, ...], p: int) -> tuple[tuple[int, ...], bool]:
    if len(coeffs) == 2:
        return (1,), False
    f = gf_from_int_poly(list(coeffs), p)
    if not gf_sqf_p(f, p, ZZ):
        _, factors = gf_factor(f, p, ZZ)
        degrees = [len(g) - 1 for g, k in factors for _ in range(k)]
        return tuple(sorted(degrees)), True
    degrees: list[int] = []
    for g, d in gf_ddf_zassenhaus(f, p, ZZ):
        degrees.extend([d] * ((len(g) - 1) // d))
    return tuple(sorted(degrees)), False


def factor_degrees_mod_p(nf: NumberFieldSpec | Sequence[int], p: int) -> tuple[tuple[int, ...], bool]:
    """(multiset trié des degrés des facteurs irréductibles de f mod p, ramifié)."""
    _require_prime(p)
    coeffs = nf.coeffs if isinstance(nf, NumberFieldSpec) else tuple(int(c) for c in nf)
    return _factor_degrees(coeffs, p)


def is_totally_split(nf: NumberFieldSpec | Sequence[int], p: int) -> bool:
    degrees, ramified = factor_degrees_mod_p(nf, p)
    return not ramified and all(d == 1 for d in degrees)


def _classify(coeffs: tuple[int, ...], spec: PlaceSetSpec, p: int) -> tuple[bool, tuple[int, ...], bool]:
    """(exclu, degrés, p ∈ S)."""
    degrees, ramified = _factor_degrees(coeffs, p)
    if ramified or (spec.kind == "congruence" and spec.modulus % p == 0):
        return True, degrees, False
    if spec.kind == "split_in_L":
        in_s = all(d == 1 for d in degrees)
    elif spec.kind == "frobenius_pattern":
        in_s = degrees in spec.patterns
    elif spec.kind == "congruence":
        in_s = p % spec.modulus in spec.residues
    else:
        in_s = True
    return False, degrees, in_s


# -------------------------
# Accumulateurs (fusion associative sur des tranches disjointes)
# -------------------------
@dataclass(frozen=True)
class DensityAccumulator:
    matching: int = 0
    total: int = 0
    weight_matching: float = 0.0
    weight_total: float = 0.0
    galois_violations: int = 0

    def merge(self, other: "DensityAccumulator") -> "DensityAccumulator":
        return DensityAccumulator(
            self.matching + other.matching,
            self.total + other.total,
            self.weight_matching + other.weight_matching,
            self.weight_total + other.weight_total,
            self.galois_violations + other.galois_violations,
        )


def _scan_chunk(coeffs: tuple[int, ...], spec: PlaceSetSpec, lo: int, hi: int, s: float | None) -> DensityAccumulator:
    matching = total = violations = 0
    w_match: list[float] = []
    w_total: list[float] = []
    for p in primerange(lo, hi):
        p = int(p)
        excluded, degrees, in_s = _classify(coeffs, spec, p)
        if excluded:
            continue
        if len(set(degrees)) > 1:
            violations += 1
        total += 1
        w = p ** -s if s is not None else 0.0
        w_total.append(w)
        if in_s:
            matching += 1
            w_match.append(w)
    return DensityAccumulator(matching, total, math.fsum(w_match), math.fsum(w_total), violations)


def _chunks(bound: int, size: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + size, bound + 1)) for lo in range(2, bound + 1, size)]


def _run_chunks(fn, args_list: list[tuple], workers: int) -> list:
    """Exécute les tranches ; l'ordre des résultats suit l'ordre des tranches."""
    if workers <= 1 or len(args_list) <= 1:
        return [fn(*a) for a in args_list]
    logger.info("densité: %d tranches sur %d processus", len(args_list), workers)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(fn, *a) for a in args_list]
        return [f.result() for f in futures]


def empirical_interval(value: float, n: int) -> tuple[float, float]:
    """value ± max(3·sqrt(v(1-v)/N), 1/N), borné à [0, 1]."""
    if n <= 0:
        return 0.0, 1.0
    half = max(3 * math.sqrt(max(value * (1 - value), 0.0) / n), 1 / n)
    return max(0.0, value - half), min(1.0, value + half)


def density_estimate(
    nf: NumberFieldSpec,
    spec: PlaceSetSpec,
    bound: int,
    mode: str = "natural",
    s: float = DIRICHLET_S,
    workers: int = 1,
    chunk: int = DENSITY_CHUNK,
) -> DensityEstimate:
    """
    Mode naturel : #{p <= B dans S} / #{p <= B} (p non ramifiés, p ∤ m).
    Mode dirichlet : Σ_{p∈S} p^-s / Σ_p p^-s aux mêmes exclusions, s > 1.
    """
    if bound < MIN_PRIME_BOUND:
        raise DensityError(f"borne B = {bound} < {MIN_PRIME_BOUND}")
    if mode not in ("natural", "dirichlet"):
        raise DensityError(f"mode de densité inconnu: {mode!r}")
    if mode == "dirichlet" and s <= 1:
        raise DensityError(f"mode dirichlet: s > 1 attendu (reçu {s})")

    weight_s = s if mode == "dirichlet" else None
    parts = _run_chunks(_scan_chunk, [(nf.coeffs, spec, lo, hi, weight_s) for lo, hi in _chunks(bound, chunk)],
                        workers)
    acc = DensityAccumulator()
    for part in parts:
        acc = acc.merge(part)
    if acc.total == 0:
        raise DensityError("aucun premier compté sous la borne")

    if mode == "natural":
        value = acc.matching / acc.total
    else:
        value = acc.weight_matching / acc.weight_total

    if nf.asserted_galois and acc.galois_violations:
        logger.warning(
            "%s déclaré galoisien mais %d premiers non ramifiés ont des degrés de facteurs inégaux",
            nf.name, acc.galois_violations,
        )

    expectation = Fraction(1, nf.degree) if spec.kind == "split_in_L" and nf.asserted_galois else None
    if spec.kind == "all_places":
        expectation = Fraction(1)
    return DensityEstimate(
        value=value,
        prime_bound=bound,
        prime_count_total=acc.total,
        prime_count_matching=acc.matching,
        mode=mode,
        interval=empirical_interval(value, acc.total),
        s=s if mode == "dirichlet" else None,
        expectation=expectation,
        galois_violations=acc.galois_violations,
    )


def prime_table(nf: NumberFieldSpec, bound: int, spec: PlaceSetSpec | None = None) -> pd.DataFrame:
    """Une ligne par premier p <= B : type de décomposition et appartenance à S."""
    spec = spec or PlaceSetSpec.split()
    rows = []
    for p in primerange(2, bound + 1):
        p = int(p)
        excluded, degrees, in_s = _classify(nf.coeffs, spec, p)
        rows.append({
            "p": p,
            "degrees": " ".join(map(str, degrees)),
            "ramified": _factor_degrees(nf.coeffs, p)[1],
            "excluded": excluded,
            "totally_split": not excluded and all(d == 1 for d in degrees),
            "in_S": in_s,
        })
    return pd.DataFrame(rows, columns=["p", "degrees", "ramified", "excluded", "totally_split", "in_S"])


# -------------------------
# [L:K]·δ_K(S_split) = δ_L(S_L)
# -------------------------
@dataclass(frozen=True)
class PlaceAccumulator:
    split_matching: int = 0      # p ∈ S totalement décomposé dans L
    primes_total: int = 0
    places_matching: int = 0     # places w | p, p ∈ S, N(w) <= B
    places_total: int = 0

    def merge(self, other: "PlaceAccumulator") -> "PlaceAccumulator":
        return PlaceAccumulator(
            self.split_matching + other.split_matching,
            self.primes_total + other.primes_total,
            self.places_matching + other.places_matching,
            self.places_total + other.places_total,
        )


def _scan_places_chunk(coeffs: tuple[int, ...], spec: PlaceSetSpec, lo: int, hi: int, bound: int) -> PlaceAccumulator:
    split = primes = pm = pt = 0
    for p in primerange(lo, hi):
        p = int(p)
        excluded, degrees, in_s = _classify(coeffs, spec, p)
        if excluded:
            continue
        primes += 1
        if in_s and all(d == 1 for d in degrees):
            split += 1
        # places de L au-dessus de p, de norme p^f <= B
        n_small = sum(1 for d in degrees if p ** d <= bound)
        pt += n_small
        if in_s:
            pm += n_small
    return PlaceAccumulator(split, primes, pm, pt)


@dataclass(frozen=True)
class DensityRelationReport:
    field_name: str
    degree: int
    prime_bound: int
    delta_k_split: float
    lhs: float
    rhs: float
    counts: PlaceAccumulator

    @property
    def difference(self) -> float:
        return abs(self.lhs - self.rhs)

    def to_json(self) -> dict:
        return {
            "field": self.field_name,
            "degree": self.degree,
            "prime_bound": self.prime_bound,
            "delta_K_S_split": self.delta_k_split,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "difference": self.difference,
            "counts": {
                "split_matching": self.counts.split_matching,
                "primes_total": self.counts.primes_total,
                "places_matching": self.counts.places_matching,
                "places_total": self.counts.places_total,
            },
        }


def density_relation_check(
    nf: NumberFieldSpec,
    spec: PlaceSetSpec,
    bound: int,
    workers: int = 1,
    chunk: int = DENSITY_CHUNK,
) -> DensityRelationReport:
    """
    Gauche : [L:Q] × densité naturelle des p ∈ S totalement décomposés.
    Droite : densité naturelle de S_L parmi les places de L de norme <= B.
    """
    if not nf.asserted_galois:
        raise PlaceSetError(f"{nf.name}: la relation de densité exige un corps déclaré galoisien")
    if spec.kind not in ("congruence", "all_places"):
        raise PlaceSetError("la relation de densité attend un ensemble défini par congruences (ou tous les premiers)")
    if bound < MIN_PRIME_BOUND:
        raise DensityError(f"borne B = {bound} < {MIN_PRIME_BOUND}")
    parts = _run_chunks(_scan_places_chunk,
                        [(nf.coeffs, spec, lo, hi, bound) for lo, hi in _chunks(bound, chunk)], workers)
    acc = PlaceAccumulator()
    for part in parts:
        acc = acc.merge(part)
    if not acc.primes_total or not acc.places_total:
        raise DensityError("aucune place comptée sous la borne")
    delta_split = acc.split_matching / acc.primes_total
    return DensityRelationReport(
        field_name=nf.name,
        degree=nf.degree,
        prime_bound=bound,
        delta_k_split=delta_split,
        lhs=nf.degree * delta_split,
        rhs=acc.places_matching / acc.places_total,
        counts=acc,
    )


# -------------------------
# E_S cyclotomique sur Q
# -------------------------
@dataclass(frozen=True)
class CyclotomicSplitField:
    """E_S ⊂ Q(ζ_m) pour S = {p ≡ a mod m, a ∈ A} : Gal(E_S/Q) = (Z/m)^× / <A>."""

    modulus: int
    residues: tuple[int, ...]
    degree: int
    galois_group: FgAbGroup
    subgroup_order: int

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "residues": list(self.residues),
            "degree": self.degree,
            "galois_group": self.galois_group.to_json(),
            "subgroup_order": self.subgroup_order,
        }


def _unit_components(m: int) -> list[tuple[int, int, int | None]]:
    """Facteurs cycliques de (Z/m)^× : (module q, ordre, générateur ; None pour ±1 mod 2^e)."""
    comps: list[tuple[int, int, int | None]] = []
    for p, e in sorted(factorint(m).items()):
        q = int(p) ** int(e)
        if p == 2:
            if e == 2:
                comps.append((4, 2, 3))
            elif e >= 3:
                comps.append((q, 2, None))
                comps.append((q, q // 4, 5))
        else:
            comps.append((q, int(totient(q)), int(primitive_root(q))))
    return comps


def _unit_log(a: int, comps: list[tuple[int, int, int | None]]) -> list[int]:
    """Coordonnées de a dans ⊕ Z/ordre selon les générateurs de _unit_components."""
    out = []
    i = 0
    while i < len(comps):
        q, order, gen = comps[i]
        x = a % q
        if gen is None:
            # 2^e, e >= 3 : x = (-1)^s · 5^k
            sign = 0 if x % 4 == 1 else 1
            y = x if sign == 0 else (-x) % q
            out.append(sign)
            out.append(int(discrete_log(q, y, 5)) if y != 1 else 0)
            i += 2
            continue
        out.append(int(discrete_log(q, x, gen)) if x != 1 else 0)
        i += 1
    return out


def cyclotomic_E_S(m: int, residues: Iterable[int]) -> CyclotomicSplitField:
    spec = PlaceSetSpec.congruence(m, residues)
    comps = _unit_components(m)
    orders = [order for _, order, _ in comps]
    n = len(comps)
    cols = [tuple(o if j == i else 0 for j in range(n)) for i, o in enumerate(orders)]
    cols += [tuple(_unit_log(a, comps)) for a in spec.residues]
    quotient = cokernel(IntMatrix.from_columns(cols, n)) if n else FgAbGroup.trivial()
    degree = quotient.order
    phi = int(totient(m))
    logger.debug("E_S(m=%d, A=%s): [E_S:Q] = %d", m, spec.residues, degree)
    return CyclotomicSplitField(m, spec.residues, degree, quotient, phi // degree)


def sha1_QmodZ_order(m: int, residues: Iterable[int]) -> int:
    """|Ш^1_S(Q, Q/Z)| = |Hom(Gal(E_S/Q), Q/Z)| = [E_S : Q]."""
    return cyclotomic_E_S(m, residues).degree


def sha1_Zn_group(m: int, residues: Iterable[int], n: int) -> FgAbGroup:
    """Ш^1_S(Q, Z/n) = Hom(Gal(E_S/Q), Z/n) = Ш^2_S(Q, Z)[n]."""
    if n < 1:
        raise PlaceSetError(f"Z/{n} : n >= 1 attendu")
    return cyclotomic_E_S(m, residues).galois_group.hom_to_cyclic(n)
