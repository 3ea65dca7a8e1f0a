"""
Cohomologie des groupes finis H^0, H^1, H^2 par la résolution bar normalisée,
H^1 d'un complexe à deux termes par le cône, oracle cyclique et applications
de restriction / inflation.

Une i-cochaîne normalisée est une fonction sur les i-uplets d'éléments non
neutres ; elle est codée par un vecteur colonne de (|Γ|-1)^i blocs, chaque
bloc étant un élément de M en coordonnées normalisées.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from asa_bounds.errors import GroupOrderError, ModuleError, NonCyclicError
from asa_bounds.galois_modules import (
    FiniteGroup,
    GaloisModule,
    NormalizedModule,
    TwoTermComplex,
    check_surjection,
    inflate_module,
    restrict_module,
    subgroup,
)
from asa_bounds.int_linalg import (
    FgAbGroup,
    HomologyPresentation,
    InducedMap,
    IntMatrix,
    induced_map,
    subquotient_mod,
)
from asa_bounds.settings import COHOMOLOGY_CACHE_SIZE as CACHE_SIZE, current_max_group_order

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CohomologyResult:
    group: FgAbGroup
    degree: int
    representative_cocycles: tuple[tuple[int, ...], ...] | None = None

    @property
    def order(self) -> int | None:
        return self.group.order

    def render(self) -> str:
        return self.group.render()

    def to_json(self) -> dict:
        out = {"degree": self.degree, "group": self.group.to_json()}
        if self.representative_cocycles is not None:
            out["representative_cocycles"] = [[str(x) for x in v] for v in self.representative_cocycles]
        return out


def _check_order(group: FiniteGroup) -> None:
    cap = current_max_group_order()
    if group.order > cap:
        raise GroupOrderError(f"|Γ| = {group.order} dépasse la limite {cap} (ASA_MAX_GROUP_ORDER)")
    if group.order > 12:
        logger.info("cohomologie sur un groupe d'ordre %d : systèmes de grande taille", group.order)


def _tuples(group: FiniteGroup, n: int) -> list[tuple[int, ...]]:
    return list(itertools.product(group.non_identity, repeat=n))


def _put(rows: list[list[int]], r0: int, c0: int, block: IntMatrix | int, size: int) -> None:
    if isinstance(block, int):
        for a in range(size):
            rows[r0 + a][c0 + a] += block
    else:
        for a in range(size):
            row = rows[r0 + a]
            for b, x in enumerate(block.entries[a]):
                if x:
                    row[c0 + b] += x


@lru_cache(maxsize=CACHE_SIZE)
def coboundary(group: FiniteGroup, nm: NormalizedModule, n: int) -> IntMatrix:
    """
    ∂ : C^n -> C^{n+1},
    (∂f)(g_1..g_{n+1}) = g_1·f(g_2..) + Σ (-1)^i f(.., g_i g_{i+1}, ..) + (-1)^{n+1} f(g_1..g_n).
    Les termes dont un argument est neutre sont nuls (cochaînes normalisées).
    """
    r = nm.rank
    src = _tuples(group, n)
    index = {t: i for i, t in enumerate(src)}
    tgt = _tuples(group, n + 1)
    rows = [[0] * (len(src) * r) for _ in range(len(tgt) * r)]
    e = group.identity
    for ti, t in enumerate(tgt):
        r0 = ti * r
        _put(rows, r0, index[t[1:]] * r, nm.action[t[0]], r)
        for i in range(n):
            gh = group.mul(t[i], t[i + 1])
            if gh != e:
                _put(rows, r0, index[t[:i] + (gh,) + t[i + 2:]] * r, (-1) ** (i + 1), r)
        _put(rows, r0, index[t[:n]] * r, (-1) ** (n + 1), r)
    return IntMatrix.from_rows(rows, len(src) * r)


def _moduli(nm: NormalizedModule, group: FiniteGroup, n: int) -> list[int]:
    return list(nm.moduli) * ((group.order - 1) ** n)


def _check_module(group: FiniteGroup, module: GaloisModule) -> None:
    if module.group != group:
        raise ModuleError(f"{module.name} n'est pas un module sur {group.name}")


def cohomology_presentation(i: int, group: FiniteGroup, module: GaloisModule) -> HomologyPresentation:
    """H^i(Γ, M) comme sous-quotient des cochaînes normalisées. La limite sur |Γ| est lue à chaque appel."""
    if i not in (0, 1, 2):
        raise ValueError(f"degré {i} non pris en charge (0, 1 ou 2)")
    _check_module(group, module)
    _check_order(group)
    return _cohomology_presentation(i, group, module)


@lru_cache(maxsize=CACHE_SIZE)
def _cohomology_presentation(i: int, group: FiniteGroup, module: GaloisModule) -> HomologyPresentation:
    nm = module.normalized
    d_out = coboundary(group, nm, i)
    if i == 0:
        d_in = IntMatrix.zeros(nm.rank, 0)
    else:
        d_in = coboundary(group, nm, i - 1)
    return subquotient_mod(d_in, d_out, _moduli(nm, group, i), _moduli(nm, group, i + 1))


def h(i: int, group: FiniteGroup, module: GaloisModule, with_cocycles: bool = False) -> CohomologyResult:
    pres = cohomology_presentation(i, group, module)
    cocycles = tuple(pres.generators()) if with_cocycles else None
    return CohomologyResult(pres.group, i, cocycles)


# -------------------------
# Oracle cyclique (résolution périodique)
# -------------------------
def cyclic_oracle(i: int, n: int, module: GaloisModule) -> FgAbGroup:
    """
    Γ = C_n de générateur désigné l'élément 1 :
    H^impair = ker(N)/im(σ-1), H^pair>=2 = M^Γ/N·M.
    """
    if i not in (1, 2):
        raise ValueError("l'oracle cyclique couvre les degrés 1 et 2")
    g = module.group
    if g.order != n:
        raise NonCyclicError(f"groupe d'ordre {g.order}, attendu {n}")
    if n == 1:
        return FgAbGroup.trivial()
    if g.identity == 1 or g.element_order(1) != n:
        raise NonCyclicError(f"{g.name}: l'élément 1 n'engendre pas un groupe cyclique d'ordre {n}")
    nm = module.normalized
    r = nm.rank
    sigma = nm.action[1]
    sigma_minus = sigma - IntMatrix.identity(r)
    norm = IntMatrix.zeros(r, r)
    for k in range(n):
        norm = norm + nm.action[g.power(1, k)]
    moduli = list(nm.moduli)
    if i == 1:
        return subquotient_mod(sigma_minus, norm, moduli, moduli).group
    return subquotient_mod(norm, sigma_minus, moduli, moduli).group


# -------------------------
# Hypercohomologie H^1 d'un complexe [M_-1 -> M_0]
# -------------------------
def _blockwise(mat: IntMatrix, copies: int) -> IntMatrix:
    return IntMatrix.block_diag(*([mat] * copies)) if copies else IntMatrix.zeros(0, 0)


def _total_differential(group: FiniteGroup, cx: TwoTermComplex, n: int) -> IntMatrix:
    """D^n(a, b) = (-∂a, d∘a + ∂b) sur T^n = C^{n+1}(M_-1) ⊕ C^n(M_0)."""
    nm1, n0 = cx.m_minus1.normalized, cx.m_zero.normalized
    k = group.order - 1
    d_m1 = coboundary(group, nm1, n + 1).scale(-1)
    d_0 = coboundary(group, n0, n)
    d_blocks = _blockwise(cx.normalized_differential, k ** (n + 1))
    top = IntMatrix.hstack(d_m1, IntMatrix.zeros(d_m1.rows, d_0.cols))
    bottom = IntMatrix.hstack(d_blocks, d_0)
    return IntMatrix.vstack(top, bottom)


def _total_moduli(group: FiniteGroup, cx: TwoTermComplex, n: int) -> list[int]:
    return _moduli(cx.m_minus1.normalized, group, n + 1) + _moduli(cx.m_zero.normalized, group, n)


def hyper_presentation(group: FiniteGroup, cx: TwoTermComplex) -> HomologyPresentation:
    _check_module(group, cx.m_zero)
    _check_module(group, cx.m_minus1)
    _check_order(group)
    return _hyper_presentation(group, cx)


@lru_cache(maxsize=CACHE_SIZE)
def _hyper_presentation(group: FiniteGroup, cx: TwoTermComplex) -> HomologyPresentation:
    return subquotient_mod(
        _total_differential(group, cx, 0),
        _total_differential(group, cx, 1),
        _total_moduli(group, cx, 1),
        _total_moduli(group, cx, 2),
    )


def hyper_h1(group: FiniteGroup, cx: TwoTermComplex, with_cocycles: bool = False) -> CohomologyResult:
    pres = hyper_presentation(group, cx)
    return CohomologyResult(pres.group, 1, tuple(pres.generators()) if with_cocycles else None)


# -------------------------
# Restriction / inflation
# -------------------------
def _pullback(src: FiniteGroup, tgt: FiniteGroup, phi: Sequence[int], r: int, n: int) -> IntMatrix:
    """C^n(src, M) -> C^n(tgt, M), f ↦ f∘φ pour φ : tgt -> src."""
    src_index = {t: i for i, t in enumerate(_tuples(src, n))}
    tgt_tuples = _tuples(tgt, n)
    rows = [[0] * (len(src_index) * r) for _ in range(len(tgt_tuples) * r)]
    for ti, t in enumerate(tgt_tuples):
        s = tuple(phi[x] for x in t)
        if src.identity not in s:
            _put(rows, ti * r, src_index[s] * r, 1, r)
    return IntMatrix.from_rows(rows, len(src_index) * r)


def cochain_restriction(group: FiniteGroup, h_elems: Sequence[int], module: GaloisModule, n: int) -> IntMatrix:
    h_group = subgroup(group, h_elems)
    return _pullback(group, h_group, list(h_elems), module.normalized.rank, n)


def cochain_inflation(group: FiniteGroup, quotient: FiniteGroup, proj: Sequence[int],
                      module_over_q: GaloisModule, n: int) -> IntMatrix:
    check_surjection(group, quotient, proj)
    return _pullback(quotient, group, list(proj), module_over_q.normalized.rank, n)


def induced_class_map(src: HomologyPresentation, tgt: HomologyPresentation, chain_map: IntMatrix) -> InducedMap:
    """Application induite sur les classes par un morphisme de cochaînes."""
    return induced_map(src, tgt, chain_map)


def restriction_map(group: FiniteGroup, h_elems: Sequence[int], module: GaloisModule, n: int) -> InducedMap:
    res_m = restrict_module(module, h_elems)
    return induced_class_map(
        cohomology_presentation(n, group, module),
        cohomology_presentation(n, res_m.group, res_m),
        cochain_restriction(group, h_elems, module, n),
    )


def inflation_map(group: FiniteGroup, quotient: FiniteGroup, proj: Sequence[int],
                  module_over_q: GaloisModule, n: int) -> InducedMap:
    inf_m = inflate_module(module_over_q, group, proj)
    return induced_class_map(
        cohomology_presentation(n, quotient, module_over_q),
        cohomology_presentation(n, group, inf_m),
        cochain_inflation(group, quotient, proj, module_over_q, n),
    )


def restriction(group: FiniteGroup, h_elems: Sequence[int], module: GaloisModule, n: int,
                cocycle: Sequence[int]) -> tuple[int, ...]:
    """Cocycle restreint à H (coordonnées de cochaîne)."""
    return cochain_restriction(group, h_elems, module, n).apply(cocycle)


def inflation(group: FiniteGroup, quotient: FiniteGroup, proj: Sequence[int], module_over_q: GaloisModule,
              n: int, cocycle: Sequence[int]) -> tuple[int, ...]:
    return cochain_inflation(group, quotient, proj, module_over_q, n).apply(cocycle)


# -------------------------
# Suite exacte longue autour de H^1(C)
# -------------------------
@dataclass(frozen=True)
class Junction:
    name: str
    incoming_image_order: int | None
    outgoing_kernel_order: int | None
    composite_is_zero: bool

    @property
    def exact(self) -> bool:
        return self.composite_is_zero and self.incoming_image_order == self.outgoing_kernel_order

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "incoming_image_order": self.incoming_image_order,
            "outgoing_kernel_order": self.outgoing_kernel_order,
            "composite_is_zero": self.composite_is_zero,
            "exact": self.exact,
        }


@dataclass(frozen=True)
class LongExactReport:
    terms: dict[str, FgAbGroup]
    junctions: tuple[Junction, ...]
    order_identity_holds: bool

    @property
    def all_exact(self) -> bool:
        return all(j.exact for j in self.junctions) and self.order_identity_holds

    def to_json(self) -> dict:
        return {
            "terms": {k: v.to_json() for k, v in self.terms.items()},
            "junctions": [j.to_json() for j in self.junctions],
            "order_identity_holds": self.order_identity_holds,
            "all_exact": self.all_exact,
        }


def _composite_zero(first: InducedMap, second: InducedMap, tgt: HomologyPresentation) -> bool:
    if first.matrix.cols == 0 or second.matrix.rows == 0:
        return True
    comp = second.matrix @ first.matrix
    return all((x % e if e else x) == 0 for row, e in zip(comp.entries, tgt.moduli) for x in row)


def long_exact_check(group: FiniteGroup, cx: TwoTermComplex) -> LongExactReport:
    """
    Fenêtre H^1(M_-1) -> H^1(M_0) -> H^1(C) -> H^2(M_-1) -> H^2(M_0) du triangle
    [0 -> M_0] -> [M_-1 -> M_0] -> [M_-1 -> 0].
    """
    m1, m0 = cx.m_minus1, cx.m_zero
    k = group.order - 1
    h1_m1 = cohomology_presentation(1, group, m1)
    h1_m0 = cohomology_presentation(1, group, m0)
    h1_c = hyper_presentation(group, cx)
    h2_m1 = cohomology_presentation(2, group, m1)
    h2_m0 = cohomology_presentation(2, group, m0)

    r1, r0 = m1.normalized.rank, m0.normalized.rank
    c2_m1, c1_m0 = r1 * k * k, r0 * k
    d_1 = _blockwise(cx.normalized_differential, k)
    d_2 = _blockwise(cx.normalized_differential, k * k)
    iota = IntMatrix.vstack(IntMatrix.zeros(c2_m1, c1_m0), IntMatrix.identity(c1_m0))
    pi = IntMatrix.hstack(IntMatrix.identity(c2_m1), IntMatrix.zeros(c2_m1, c1_m0))

    f1 = induced_class_map(h1_m1, h1_m0, d_1)
    f2 = induced_class_map(h1_m0, h1_c, iota)
    f3 = induced_class_map(h1_c, h2_m1, pi)
    f4 = induced_class_map(h2_m1, h2_m0, d_2)

    junctions = (
        Junction("H1(M0)", f1.image_order, f2.kernel_order, _composite_zero(f1, f2, h1_c)),
        Junction("H1(C)", f2.image_order, f3.kernel_order, _composite_zero(f2, f3, h2_m1)),
        Junction("H2(M-1)", f3.image_order, f4.kernel_order, _composite_zero(f3, f4, h2_m0)),
    )
    # |H^1(C)| = |coker f1| · |ker f4|
    identity = False
    if None not in (h1_c.group.order, h1_m0.group.order, f1.image_order, f4.kernel_order):
        identity = h1_c.group.order == (h1_m0.group.order // f1.image_order) * f4.kernel_order
    terms = {
        "H1(M-1)": h1_m1.group,
        "H1(M0)": h1_m0.group,
        "H1(C)": h1_c.group,
        "H2(M-1)": h2_m1.group,
        "H2(M0)": h2_m0.group,
    }
    report = LongExactReport(terms, junctions, identity)
    logger.debug("long_exact_check %s: %s", group.name, report.all_exact)
    return report
