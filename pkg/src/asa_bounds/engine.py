"""
Moteur ASA : hypothèses du théorème principal, bornes d'indice
(tore, semi-simple, tore maximal), comptage par passage à L,
calcul exact de B_S pour les restrictions de Weil cyclotomiques.

Toutes les bornes sont des Fraction exactes quand δ est exact ;
un δ empirique ne produit qu'un intervalle et jamais ASA_HOLDS_SA.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from asa_bounds.catalog import GroupDescriptor
from asa_bounds.cohomology import h
from asa_bounds.errors import HypothesisError, ModuleError, SubgroupError
from asa_bounds.galois_modules import GaloisModule, TwoTermComplex, quotient_module, sublattice_module, zero_module
from asa_bounds.int_linalg import FgAbGroup, IntMatrix, subquotient_mod
from asa_bounds.items import AsaReport, DeltaValue, Verdict, fraction_str
from asa_bounds.number_fields import NumberFieldSpec, PlaceSetSpec, cyclotomic_E_S, density_estimate, exact_density

logger = logging.getLogger(__name__)

# Étiquettes de provenance (un tag par résultat produit)
PROV_INDEX = "index bound: [G(A^S) : closure of G(K)] <= |B_S(G)|"
PROV_MAIN = "main theorem: Z(G^red)^0 and Q̂ split over L, S contains the archimedean places, δ > 0"
PROV_COROLLARY = "corollary: torus or Pic(Ḡ) split over L, or maximal torus split over L"
PROV_TORUS = "torus bound: δ_L(S_L)^-r · |H²(L/K, T̂)|"
PROV_SEMISIMPLE = "semi-simple bound: δ_L(S_L)^-r · |H¹(L/K, Pic Ḡ)|, Pic Ḡ generated by r elements"
PROV_MAXIMAL_TORUS = "maximal-torus bound: δ_L(S_L)^-r · |H¹(L/K, T̂^sc)| · |H²(L/K, T̂)|"
PROV_GROUP_BY_TORUS = "|B_S(G)| <= |B_S(T)| · |H¹(K, T̂^sc)|"
PROV_GOING_OVER_L = "going over L: |Ш¹_S(K,M)| <= |Ш¹_{S_L}(L,M)| · |H²(L/K, H^-1)| · |H¹(L/K, H^0)|"
PROV_WEIL = "Weil restriction of G_m: |B_S(T)| <= δ_L(S_L)^-1"
PROV_EXACT = "exact cyclotomic: B_S(T) ≅ Ш¹_{S_L}(L, Q/Z) = Hom(Gal(E_S/Q), Q/Z)"
PROV_DENSITY_EXTENSION = "density over E_S: δ_L(S_L) <= 1/[E_S : L]"


def _as_delta(delta: DeltaValue | Fraction | int | str) -> DeltaValue:
    if isinstance(delta, DeltaValue):
        return delta
    return DeltaValue.exact(Fraction(delta), source="user")


def _check_delta(delta: DeltaValue) -> None:
    if delta.is_exact:
        if not 0 < delta.value <= 1:
            raise HypothesisError(f"δ = {fraction_str(delta.value)} hors de (0, 1]")
    elif delta.interval is None or delta.interval[1] <= 0:
        raise HypothesisError("δ empirique sans intervalle positif")


def power_bound(delta: DeltaValue, r: int, factor: int) -> tuple[Fraction | None, tuple[float, float | None] | None]:
    """(δ^-r · factor exact, intervalle) selon la nature de δ."""
    if delta.is_exact:
        return Fraction(factor) / Fraction(delta.value) ** r, None
    lo, hi = delta.interval
    upper = factor / lo ** r if lo > 0 else None
    return None, (factor / hi ** r, upper)


def _verdict(delta: DeltaValue, bound: Fraction | None, hypotheses_ok: bool) -> Verdict:
    if not hypotheses_ok or not delta.certified_positive:
        return Verdict.UNDECIDED
    if delta.is_exact and bound is not None and bound < 2:
        return Verdict.ASA_HOLDS_SA
    return Verdict.ASA_HOLDS


def _report(name: str, route: str, delta: DeltaValue, r: int, h1: int, h2: int, prov: dict[str, str],
            hypotheses_ok: bool = True, notes: Iterable[str] = ()) -> AsaReport:
    bound, interval = power_bound(delta, r, h1 * h2)
    prov = {"index": PROV_INDEX, **prov}
    if delta.source:
        prov.setdefault("delta", delta.source)
    return AsaReport(
        group=name,
        verdict=_verdict(delta, bound, hypotheses_ok),
        route=route,
        delta=delta,
        rank_r=r,
        h1_size=h1,
        h2_size=h2,
        bound=bound,
        bound_interval=interval,
        provenance=prov,
        notes=list(notes),
    )


def _finite_order(group: FgAbGroup, what: str) -> int:
    if group.order is None:
        raise ModuleError(f"{what} = {group} n'est pas fini")
    return group.order


# -------------------------
# Hypothèses
# -------------------------
@dataclass
class HypothesisCheck:
    verdict: Verdict
    split_over_l: bool
    archimedean: bool
    delta_positive: bool
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.split_over_l and self.archimedean and self.delta_positive

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "split_over_L": self.split_over_l,
            "archimedean": self.archimedean,
            "delta_positive": self.delta_positive,
            "notes": list(self.notes),
        }


def _l_subgroup(descriptor: GroupDescriptor, l_subgroup: Sequence[int] | None) -> list[int]:
    gamma = descriptor.gamma
    elems = list(l_subgroup) if l_subgroup is not None else [gamma.identity]
    if not gamma.is_subgroup(elems):
        raise SubgroupError(f"{elems} n'est pas un sous-groupe de {gamma.name}")
    return elems


def check_mainthm(descriptor: GroupDescriptor, l_subgroup: Sequence[int] | None, spec: PlaceSetSpec,
                  delta: DeltaValue | Fraction | None) -> HypothesisCheck:
    """
    (a) le sous-groupe Γ_L agit trivialement sur Ẑ(G^red)^0 et Q̂,
    (b) S contient les places archimédiennes,
    (c) δ > 0 (certifié : exact, ou borne basse de l'intervalle > 0).
    """
    if delta is None:
        raise HypothesisError("données de densité manquantes (δ)")
    delta = _as_delta(delta)
    elems = _l_subgroup(descriptor, l_subgroup)
    notes = []
    split = descriptor.z0_hat.acts_trivially(elems) and descriptor.q_hat.acts_trivially(elems)
    if not split:
        notes.append("hypothesis unmet: Z(G^red)^0 or Q̂ is not split over L")
    arch = spec.include_archimedean
    if not arch:
        notes.append("hypothesis unmet: S must contain the archimedean places")
    positive = delta.certified_positive
    if not positive:
        notes.append("hypothesis unmet: δ not certified positive (interval reaches 0)")
    ok = split and arch and positive
    return HypothesisCheck(Verdict.ASA_HOLDS if ok else Verdict.UNDECIDED, split, arch, positive, notes)


@dataclass(frozen=True)
class CorollaryCheck:
    form: str | None
    holds: bool
    verdict: Verdict

    def to_json(self) -> dict:
        return {"form": self.form, "holds": self.holds, "verdict": self.verdict.value}


def check_corollary(descriptor: GroupDescriptor, l_subgroup: Sequence[int] | None, spec: PlaceSetSpec,
                    delta: DeltaValue | Fraction) -> CorollaryCheck:
    """Formes : tore déployé sur L, semi-simple à Pic(Ḡ) déployé sur L, tore maximal déployé sur L."""
    delta = _as_delta(delta)
    elems = _l_subgroup(descriptor, l_subgroup)
    form = None
    if descriptor.is_torus and descriptor.t_hat.acts_trivially(elems):
        form = "torus split over L"
    elif descriptor.is_semisimple and descriptor.pic_bar.acts_trivially(elems):
        form = "semi-simple with Pic split over L"
    elif descriptor.t_hat.acts_trivially(elems):
        form = "maximal torus split over L"
    holds = form is not None and spec.include_archimedean and delta.certified_positive
    return CorollaryCheck(form, holds, Verdict.ASA_HOLDS if holds else Verdict.UNDECIDED)


# -------------------------
# Bornes
# -------------------------
def bound_torus(t_hat: GaloisModule, delta: DeltaValue | Fraction, name: str = "torus") -> AsaReport:
    delta = _as_delta(delta)
    _check_delta(delta)
    if not t_hat.is_lattice:
        raise ModuleError(f"{t_hat.name}: T̂ doit être un réseau")
    h2 = _finite_order(h(2, t_hat.group, t_hat).group, "H²(Γ, T̂)")
    return _report(name, "torus", delta, t_hat.rank, 1, h2, {"bound": PROV_TORUS, "h2": PROV_TORUS})


def bound_semisimple(pic_bar: GaloisModule, r: int | None, delta: DeltaValue | Fraction,
                     name: str = "semisimple") -> AsaReport:
    delta = _as_delta(delta)
    _check_delta(delta)
    pic = pic_bar.underlying
    if not pic.is_finite:
        raise ModuleError(f"{pic_bar.name}: Pic(Ḡ) doit être fini")
    r = pic.min_generators if r is None else r
    if r < pic.min_generators:
        raise HypothesisError(f"r = {r} < nombre minimal de générateurs de Pic(Ḡ) = {pic.min_generators}")
    h1 = _finite_order(h(1, pic_bar.group, pic_bar).group, "H¹(Γ, Pic Ḡ)")
    return _report(name, "semisimple", delta, r, h1, 1, {"bound": PROV_SEMISIMPLE, "h1": PROV_SEMISIMPLE})


def bound_general(descriptor: GroupDescriptor, delta: DeltaValue | Fraction) -> AsaReport:
    delta = _as_delta(delta)
    _check_delta(delta)
    g = descriptor.gamma
    h1 = _finite_order(h(1, g, descriptor.t_sc_hat).group, "H¹(Γ, T̂^sc)")
    h2 = _finite_order(h(2, g, descriptor.t_hat).group, "H²(Γ, T̂)")
    prov = {"bound": PROV_MAXIMAL_TORUS, "h1": PROV_GROUP_BY_TORUS, "h2": PROV_MAXIMAL_TORUS}
    return _report(descriptor.name, "maximal_torus", delta, descriptor.rank_r, h1, h2, prov)


def bound_weil_restriction(delta: DeltaValue | Fraction, name: str = "resgm") -> AsaReport:
    """T = R_{L/K} G_m : |B_S(T)| <= δ_L(S_L)^-1, indépendamment du rang."""
    delta = _as_delta(delta)
    _check_delta(delta)
    return _report(name, "weil_restriction", delta, 1, 1, 1, {"bound": PROV_WEIL})


# -------------------------
# Passage à L
# -------------------------
@dataclass(frozen=True)
class GoingOverLResult:
    case: str                        # torus | semisimple | acyclic | mixed
    exponent: int | None
    kernel: FgAbGroup
    cokernel: FgAbGroup
    h2_kernel: int
    h1_cokernel: int
    bound: Fraction | None
    bound_interval: tuple[float, float | None] | None = None
    candidate_exponents: tuple[int, int] | None = None

    @property
    def verdict(self) -> Verdict:
        return Verdict.UNDECIDED if self.case == "mixed" else Verdict.ASA_HOLDS

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "exponent": self.exponent,
            "kernel": self.kernel.to_json(),
            "cokernel": self.cokernel.to_json(),
            "h2_kernel": self.h2_kernel,
            "h1_cokernel": self.h1_cokernel,
            "bound": fraction_str(self.bound),
            "bound_interval": list(self.bound_interval) if self.bound_interval else None,
            "candidate_exponents": list(self.candidate_exponents) if self.candidate_exponents else None,
            "provenance": PROV_GOING_OVER_L,
        }


def going_over_L_bound(cx: TwoTermComplex, delta: DeltaValue | Fraction) -> GoingOverLResult:
    """
    H^-1 = ker(d) et H^0 = coker(d) ; borne δ^-g · |H²(Γ, ker)| · |H¹(Γ, coker)|,
    g = rang de ker (type tore) ou nombre de générateurs de coker (type semi-simple).
    """
    delta = _as_delta(delta)
    _check_delta(delta)
    g = cx.group
    m1, m0 = cx.m_minus1, cx.m_zero
    if not m1.is_lattice:
        raise ModuleError(f"{m1.name}: M_-1 doit être un réseau")

    # ker(d) : cycles de d à valeurs dans M_0 modulo ses relations
    n0 = m0.normalized
    pres = subquotient_mod(IntMatrix.zeros(m1.rank, 0), cx.normalized_differential,
                           [0] * m1.rank, n0.moduli)
    if pres.basis.cols:
        ker_mod = sublattice_module(m1, m1.normalized.from_coords @ pres.basis, name=f"ker({m1.name})")
    else:
        ker_mod = zero_module(g)
    coker_mod = quotient_module(m0, cx.differential, name=f"coker({m0.name})")
    ker_group = FgAbGroup(ker_mod.rank, ())
    coker_group = coker_mod.underlying

    h2_ker = _finite_order(h(2, g, ker_mod).group, "H²(Γ, H^-1)")
    h1_coker = _finite_order(h(1, g, coker_mod).group, "H¹(Γ, H^0)")

    if ker_group.is_trivial and coker_group.is_trivial:
        case, exponent = "acyclic", 0
    elif coker_group.is_trivial:
        case, exponent = "torus", ker_group.free_rank
    elif ker_group.is_trivial:
        case, exponent = "semisimple", coker_group.min_generators
    else:
        return GoingOverLResult("mixed", None, ker_group, coker_group, h2_ker, h1_coker, None, None,
                                (ker_group.free_rank, coker_group.min_generators))
    bound, interval = power_bound(delta, exponent, h2_ker * h1_coker)
    return GoingOverLResult(case, exponent, ker_group, coker_group, h2_ker, h1_coker, bound, interval)


# -------------------------
# Cas cyclotomique exact
# -------------------------
def exact_weil_restriction(m: int, residues: Iterable[int], h_subgroup: Sequence[int] | None = None,
                           name: str = "resgm") -> AsaReport:
    """
    S = {p ≡ a mod m, a ∈ A} sur Q : B_S = Hom(Gal(E_S/Q), Q/Z) ≅ (Z/m)^× / <A>,
    borne exacte |B_S| ; ASA vaut puisque [E_S : Q] est fini.
    """
    es = cyclotomic_E_S(m, residues)
    spec = PlaceSetSpec.congruence(m, es.residues)
    delta = DeltaValue.exact(exact_density(None, spec), source=f"congruence density |A|/φ({m})")
    order = es.degree
    notes = [f"[E_S : Q] = {order}, computed over L = Q inside Q(ζ_{m})"]
    if h_subgroup is not None:
        notes.append(f"subgroup data H = {list(h_subgroup)}")
    verdict = Verdict.ASA_HOLDS_SA if order < 2 else Verdict.ASA_HOLDS
    return AsaReport(
        group=name,
        verdict=verdict,
        route="exact_cyclotomic",
        delta=delta,
        rank_r=1,
        h1_size=1,
        h2_size=1,
        bound=Fraction(order),
        exact_b_s=es.galois_group,
        provenance={"index": PROV_INDEX, "bound": PROV_EXACT, "exact_b_s": PROV_EXACT,
                    "delta": PROV_DENSITY_EXTENSION},
        notes=notes,
    )


# -------------------------
# Pilote
# -------------------------
def resolve_delta(
    spec: PlaceSetSpec,
    delta: DeltaValue | Fraction | str | None = None,
    nf: NumberFieldSpec | None = None,
    prime_bound: int | None = None,
    workers: int = 1,
) -> DeltaValue:
    """δ_L(S_L) : fourni, sinon exact (symbolique / congruence / Chebotarev), sinon estimé."""
    if delta is not None:
        return _as_delta(delta)
    exact = exact_density(nf, spec)
    if exact is not None:
        return DeltaValue.exact(exact, source=f"exact density of {spec.kind}")
    if nf is not None and prime_bound is not None:
        est = density_estimate(nf, spec, prime_bound, workers=workers)
        return est.as_delta(source=f"natural density, primes <= {prime_bound}")
    raise HypothesisError("données de densité manquantes : fournir δ, une congruence ou un corps et une borne")


def evaluate(
    descriptor: GroupDescriptor,
    spec: PlaceSetSpec | None = None,
    delta: DeltaValue | Fraction | str | None = None,
    l_subgroup: Sequence[int] | None = None,
    nf: NumberFieldSpec | None = None,
    prime_bound: int | None = None,
    workers: int = 1,
) -> AsaReport:
    """Hypothèses, choix de la route, contrôle croisé par passage à L ; un AsaReport."""
    spec = spec or PlaceSetSpec.all_primes()

    if spec.kind == "congruence" and descriptor.family == "weil_restriction_gm" and delta is None:
        report = exact_weil_restriction(spec.modulus, spec.residues, descriptor.params.get("h"), descriptor.name)
        cross = going_over_L_bound(descriptor.c0_hat, report.delta)
        report.cross_check = cross.to_json()
        if cross.bound is not None and report.bound > cross.bound:
            report.notes.append("exact |B_S| exceeds the going-over-L bound")
        if not spec.include_archimedean:
            report.verdict = Verdict.UNDECIDED
            report.notes.append("hypothesis unmet: S must contain the archimedean places")
        return report

    d = resolve_delta(spec, delta, nf, prime_bound, workers)
    hyp = check_mainthm(descriptor, l_subgroup, spec, d)

    if descriptor.is_torus:
        report = bound_torus(descriptor.t_hat, d, descriptor.name)
    elif descriptor.is_semisimple:
        report = bound_semisimple(descriptor.pic_bar, descriptor.pic_generators, d, descriptor.name)
    else:
        report = bound_general(descriptor, d)

    report.provenance["verdict"] = PROV_MAIN
    report.notes.extend(hyp.notes)
    if not hyp.ok:
        report.verdict = Verdict.UNDECIDED
    if d.is_exact and descriptor.family in ("weil_restriction_gm",):
        alt = bound_weil_restriction(d, descriptor.name)
        report.notes.append(f"Weil restriction bound δ^-1 = {fraction_str(alt.bound)}")

    cross = going_over_L_bound(descriptor.c0_hat, d)
    report.cross_check = cross.to_json()
    logger.info("%s: route %s, borne %s, verdict %s", descriptor.name, report.route,
                fraction_str(report.bound), report.verdict.value)
    return report


def emit_report(report: AsaReport, mode: str = "json") -> str:
    """Rendu déterministe (json) ou lisible (text) ; chaque nombre porte sa provenance."""
    from asa_bounds.pipelines import ReportPipeline
    from asa_bounds.utils.serialize import dumps

    data = ReportPipeline().process_item(report)
    if mode == "json":
        return dumps(data)
    lines = [
        f"group      : {data['group']}",
        f"verdict    : {data['verdict']}",
        f"route      : {data['route']}",
    ]
    if data["delta"]:
        dv = data["delta"]
        extra = f"  interval {dv['interval']}" if dv.get("interval") else ""
        lines.append(f"delta      : {dv['value']} ({dv['kind']}){extra}")
    f = data["factors"]
    lines.append(f"factors    : r = {f['r']}, |H1| = {f['h1']}, |H2| = {f['h2']}")
    if data["bound"] is not None:
        lines.append(f"bound      : {data['bound']}")
    if data["bound_interval"]:
        lines.append(f"bound range: {data['bound_interval']}")
    if data["exact_b_s"]:
        lines.append(f"exact B_S  : {data['exact_b_s']['text']}")
    for p in data["provenance"]:
        lines.append(f"  [{p}]")
    for n in data["notes"]:
        lines.append(f"  note: {n}")
    return "\n".join(lines)
