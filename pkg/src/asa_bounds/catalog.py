"""
Catalogue de groupes linéaires connexes au niveau consommé par les bornes :
Γ, T̂ -> T̂^sc, Ẑ(G^red)^0 -> Q̂, Pic(Ḡ), et les complexes Ĉ, Ĉ0.

Familles déployées (action triviale de Γ) : gl, sl, pgl, sp (forme adjointe),
tores déployés. Tores tordus : restriction de Weil de G_m, tore de norme 1.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from functools import cached_property

from asa_bounds.cohomology import hyper_h1
from asa_bounds.errors import CatalogError, NonCyclicError, ParseError
from asa_bounds.galois_modules import (
    FiniteGroup,
    GaloisModule,
    TwoTermComplex,
    augmentation_kernel,
    cyclic_group,
    direct_sum,
    make_complex,
    permutation_module,
    quotient_module,
    reduction_mod,
    trivial_lattice,
    zero_module,
)
from asa_bounds.int_linalg import FgAbGroup, IntMatrix

logger = logging.getLogger(__name__)

FAMILIES = ("gl", "sl", "pgl", "sp", "split_torus", "weil_restriction_gm", "norm_one", "product")


@dataclass(frozen=True)
class GroupDescriptor:
    name: str
    family: str
    gamma: FiniteGroup
    t_hat: GaloisModule
    t_sc_hat: GaloisModule
    restriction_map: IntMatrix
    z0_hat: GaloisModule
    q_hat: GaloisModule
    z0_to_q: IntMatrix
    params: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def rank_r(self) -> int:
        return self.t_hat.rank

    @cached_property
    def pic_bar(self) -> GaloisModule:
        """Pic(Ḡ) = coker(T̂ -> T̂^sc)."""
        return quotient_module(self.t_sc_hat, self.restriction_map, name=f"Pic({self.name})")

    @property
    def pic_generators(self) -> int:
        return self.pic_bar.underlying.min_generators

    @property
    def is_torus(self) -> bool:
        return self.t_sc_hat.rank == 0

    @property
    def is_semisimple(self) -> bool:
        return not self.is_torus and self.z0_hat.normalized.rank == 0

    @property
    def kind(self) -> str:
        if self.is_torus:
            return "torus"
        return "semisimple" if self.is_semisimple else "reductive"

    @cached_property
    def c_hat(self) -> TwoTermComplex:
        return make_complex(self.t_hat, self.t_sc_hat, self.restriction_map)

    @cached_property
    def c0_hat(self) -> TwoTermComplex:
        return make_complex(self.z0_hat, self.q_hat, self.z0_to_q)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "family": self.family,
            "kind": self.kind,
            "gamma": {"name": self.gamma.name, "order": self.gamma.order},
            "rank_r": self.rank_r,
            "t_hat": self.t_hat.underlying.to_json(),
            "t_sc_hat": self.t_sc_hat.underlying.to_json(),
            "restriction_map": self.restriction_map.to_json(),
            "z0_hat": self.z0_hat.underlying.to_json(),
            "q_hat": self.q_hat.underlying.to_json(),
            "z0_to_q": self.z0_to_q.to_json(),
            "pic_bar": self.pic_bar.underlying.to_json(),
            "pic_generators": self.pic_generators,
        }


def complexes(descriptor: GroupDescriptor) -> tuple[TwoTermComplex, TwoTermComplex]:
    """(Ĉ, Ĉ0)."""
    return descriptor.c_hat, descriptor.c0_hat


# -------------------------
# Validation
# -------------------------
@dataclass(frozen=True)
class QuasiIsoReport:
    descriptor: str
    gamma: str
    h1_c: FgAbGroup
    h1_c0: FgAbGroup

    @property
    def equal(self) -> bool:
        return self.h1_c.order == self.h1_c0.order

    def to_json(self) -> dict:
        return {
            "descriptor": self.descriptor,
            "gamma": self.gamma,
            "h1_C": self.h1_c.to_json(),
            "h1_C0": self.h1_c0.to_json(),
            "equal": self.equal,
        }


def quasi_iso_check(descriptor: GroupDescriptor, gamma: FiniteGroup | None = None) -> QuasiIsoReport:
    """|H^1(Γ, Ĉ)| contre |H^1(Γ, Ĉ0)| ; Γ différent ne vaut que pour les entrées déployées."""
    if gamma is not None and gamma != descriptor.gamma:
        descriptor = rebuild_over(descriptor, gamma)
    c_hat, c0_hat = complexes(descriptor)
    g = descriptor.gamma
    return QuasiIsoReport(descriptor.name, g.name, hyper_h1(g, c_hat).group, hyper_h1(g, c0_hat).group)


def _validate(d: GroupDescriptor, check_quasi_iso: bool = True) -> GroupDescriptor:
    for m in (d.t_hat, d.t_sc_hat, d.z0_hat):
        if not m.is_lattice:
            raise CatalogError(f"{d.name}: {m.name} doit être un réseau")
    if not d.q_hat.underlying.is_finite:
        raise CatalogError(f"{d.name}: Q̂ doit être fini")
    complexes(d)  # équivariance des deux différentielles
    if d.is_semisimple and d.pic_bar.underlying != d.q_hat.underlying:
        raise CatalogError(f"{d.name}: Pic(Ḡ) = {d.pic_bar.underlying} != Q̂ = {d.q_hat.underlying}")
    if check_quasi_iso:
        rep = quasi_iso_check(d)
        if not rep.equal:
            raise CatalogError(
                f"{d.name} sur {d.gamma.name}: |H^1(Ĉ)| = {rep.h1_c.order} != |H^1(Ĉ0)| = {rep.h1_c0.order}")
    logger.debug("descripteur %s validé sur %s", d.name, d.gamma.name)
    return d


# -------------------------
# Familles
# -------------------------
def _cyclic_mod(gamma: FiniteGroup, n: int) -> GaloisModule:
    """Z/n à action triviale (rang 0 si n = 1)."""
    return zero_module(gamma) if n == 1 else reduction_mod(trivial_lattice(gamma, 1), n)


def _gl(gamma: FiniteGroup, n: int) -> GroupDescriptor:
    if n < 1:
        raise CatalogError(f"gl:{n} : n >= 1 attendu")
    # χ ∈ Z^n restreint au tore de SL_n : e_n = -(e_1 + ... + e_{n-1})
    rows = [[int(i == j) for j in range(n - 1)] + [-1] for i in range(n - 1)]
    res = IntMatrix.from_rows(rows, n)
    q_hat = _cyclic_mod(gamma, n)
    z0_to_q = IntMatrix.from_rows([[1]], 1) if q_hat.rank else IntMatrix.zeros(0, 1)
    return GroupDescriptor(f"gl:{n}", "gl", gamma, trivial_lattice(gamma, n), trivial_lattice(gamma, n - 1),
                           res, trivial_lattice(gamma, 1), q_hat, z0_to_q, {"n": n})


def _sl(gamma: FiniteGroup, n: int) -> GroupDescriptor:
    if n < 2:
        raise CatalogError(f"sl:{n} : n >= 2 attendu")
    lat = trivial_lattice(gamma, n - 1)
    return GroupDescriptor(f"sl:{n}", "sl", gamma, lat, lat, IntMatrix.identity(n - 1),
                           zero_module(gamma), zero_module(gamma), IntMatrix.zeros(0, 0), {"n": n})


def _pgl(gamma: FiniteGroup, n: int) -> GroupDescriptor:
    if n < 2:
        raise CatalogError(f"pgl:{n} : n >= 2 attendu")
    # base e_i - e_n du réseau des racines, image e_i + (e_1 + ... + e_{n-1}) : matrice I + J
    res = IntMatrix.from_rows([[int(i == j) + 1 for j in range(n - 1)] for i in range(n - 1)], n - 1)
    q_hat = _cyclic_mod(gamma, n)
    return GroupDescriptor(f"pgl:{n}", "pgl", gamma, trivial_lattice(gamma, n - 1), trivial_lattice(gamma, n - 1),
                           res, zero_module(gamma), q_hat, IntMatrix.zeros(q_hat.rank, 0), {"n": n})


def _sp(gamma: FiniteGroup, two_n: int) -> GroupDescriptor:
    """Forme adjointe de type C_n : réseau des racines {x : Σx_i pair} dans Z^n."""
    if two_n < 2 or two_n % 2:
        raise CatalogError(f"sp:{two_n} : entier pair >= 2 attendu")
    n = two_n // 2
    cols = [tuple(int(j == i) + int(j == n - 1) for j in range(n)) for i in range(n - 1)]
    cols.append(tuple(2 * int(j == n - 1) for j in range(n)))
    res = IntMatrix.from_columns(cols, n)
    q_hat = _cyclic_mod(gamma, 2)
    return GroupDescriptor(f"sp:{two_n}", "sp", gamma, trivial_lattice(gamma, n), trivial_lattice(gamma, n),
                           res, zero_module(gamma), q_hat, IntMatrix.zeros(q_hat.rank, 0), {"2n": two_n})


def _torus(name: str, family: str, gamma: FiniteGroup, t_hat: GaloisModule, params: dict) -> GroupDescriptor:
    r = t_hat.rank
    zero = zero_module(gamma)
    return GroupDescriptor(name, family, gamma, t_hat, zero, IntMatrix.zeros(0, r),
                           t_hat, zero, IntMatrix.zeros(0, r), params)


def _split_torus(gamma: FiniteGroup, r: int) -> GroupDescriptor:
    if r < 0:
        raise CatalogError(f"torus:r={r} : r >= 0 attendu")
    return _torus(f"torus:r={r}", "split_torus", gamma, trivial_lattice(gamma, r), {"r": r})


def _weil_restriction_name(gamma: FiniteGroup, h_elems: list[int]) -> str:
    """resgm:<Γ> pour H = {e}, sinon resgm:group=<Γ>,h=<générateur> (relisible par parse_descriptor)."""
    h = sorted(h_elems)
    if h == [gamma.identity]:
        return f"resgm:{gamma.name}"
    gen = next((g for g in h if gamma.generated([g]) == h), None)
    label = str(gen) if gen is not None else "{" + ",".join(map(str, h)) + "}"
    return f"resgm:group={gamma.name},h={label}"


def _weil_restriction(gamma: FiniteGroup, h_elems: list[int]) -> GroupDescriptor:
    t_hat = permutation_module(gamma, h_elems)
    return _torus(_weil_restriction_name(gamma, h_elems), "weil_restriction_gm", gamma, t_hat,
                  {"h": list(h_elems)})


def _norm_one(gamma: FiniteGroup) -> GroupDescriptor:
    if not any(gamma.element_order(g) == gamma.order for g in gamma.elements):
        raise NonCyclicError(f"normone:{gamma.name} : groupe cyclique attendu")
    # Γ cyclique : ker(augmentation) ≅ Z[Γ]/Z·N
    t_hat = augmentation_kernel(gamma, [gamma.identity])
    return _torus(f"normone:{gamma.name}", "norm_one", gamma, t_hat, {})


def product(d1: GroupDescriptor, d2: GroupDescriptor, check: bool = True) -> GroupDescriptor:
    if d1.gamma != d2.gamma:
        raise CatalogError(f"produit sur des groupes de Galois différents: {d1.gamma.name}, {d2.gamma.name}")
    d = GroupDescriptor(
        f"prod:({d1.name},{d2.name})", "product", d1.gamma,
        direct_sum(d1.t_hat, d2.t_hat), direct_sum(d1.t_sc_hat, d2.t_sc_hat),
        IntMatrix.block_diag(d1.restriction_map, d2.restriction_map),
        direct_sum(d1.z0_hat, d2.z0_hat), direct_sum(d1.q_hat, d2.q_hat),
        IntMatrix.block_diag(d1.z0_to_q, d2.z0_to_q),
        {"factors": [d1.name, d2.name]},
    )
    return _validate(d, check)


def catalog(name: str, params: dict | None = None, gamma: FiniteGroup | None = None,
            check: bool = True) -> GroupDescriptor:
    """
    name ∈ FAMILIES. params : n (gl/sl/pgl), 2n (sp), r (split_torus), h (éléments du
    sous-groupe H pour weil_restriction_gm, {e} par défaut).
    """
    params = dict(params or {})
    gamma = gamma or cyclic_group(1)

    def need(key: str) -> int:
        if key not in params:
            raise CatalogError(f"{name}: paramètre {key!r} manquant")
        return int(params[key])

    if name == "gl":
        d = _gl(gamma, need("n"))
    elif name == "sl":
        d = _sl(gamma, need("n"))
    elif name == "pgl":
        d = _pgl(gamma, need("n"))
    elif name == "sp":
        d = _sp(gamma, need("2n"))
    elif name == "split_torus":
        d = _split_torus(gamma, need("r"))
    elif name == "weil_restriction_gm":
        d = _weil_restriction(gamma, list(params.get("h") or [gamma.identity]))
    elif name == "norm_one":
        d = _norm_one(gamma)
    else:
        raise CatalogError(f"famille inconnue: {name!r} (connues: {', '.join(FAMILIES)})")
    return _validate(d, check)


def rebuild_over(descriptor: GroupDescriptor, gamma: FiniteGroup) -> GroupDescriptor:
    """Même entrée déployée sur un autre Γ (action triviale)."""
    if descriptor.family in ("weil_restriction_gm", "norm_one"):
        raise CatalogError(f"{descriptor.name}: Γ fixé par le tore tordu")
    if descriptor.family == "product":
        raise CatalogError(f"{descriptor.name}: reconstruire les facteurs séparément")
    return catalog(descriptor.family, descriptor.params, gamma)


# -------------------------
# Grammaire des noms : gl:3, pgl:4, sl:2, sp:4, torus:r=2, resgm:c2,
# resgm:group=c4,h=2, normone:group=c2, prod:(a,b)
# -------------------------
def _split_top_level(text: str) -> list[str]:
    depth, start, out = 0, 0, []
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"parenthèses déséquilibrées: {text!r}")
        elif ch == "," and depth == 0:
            out.append(text[start:i])
            start = i + 1
    if depth:
        raise ParseError(f"parenthèses déséquilibrées: {text!r}")
    out.append(text[start:])
    return out


def _kv(arg: str) -> dict[str, str]:
    out = {}
    for part in arg.split(","):
        if "=" in part:
            k, v = part.split("=", 1)
            out[k.strip()] = v.strip()
        elif part.strip():
            out["group"] = part.strip()
    return out


def _declared_gamma(text: str):
    """Γ imposé par un tore tordu dans le nom (None pour une entrée déployée)."""
    from asa_bounds.utils.parsing import parse_group

    family, _, arg = text.partition(":")
    if family in ("resgm", "normone"):
        kv = _kv(arg)
        if "group" not in kv:
            raise ParseError(f"{text!r} : groupe attendu (ex. {family}:c2)")
        return parse_group(kv["group"])
    if family == "prod":
        inner = arg.strip()
        if not (inner.startswith("(") and inner.endswith(")")):
            raise ParseError(f"produit attendu sous la forme prod:(a,b): {text!r}")
        found = [g for g in (_declared_gamma(p) for p in _split_top_level(inner[1:-1])) if g is not None]
        for g in found[1:]:
            if g != found[0]:
                raise CatalogError(f"{text!r} : facteurs sur des groupes de Galois différents")
        return found[0] if found else None
    return None


def parse_descriptor(text: str, gamma: FiniteGroup | None = None, check: bool = True) -> GroupDescriptor:
    """Descripteur depuis la grammaire CLI ; Γ pris dans le nom pour les tores tordus."""
    t = re.sub(r"\s+", "", text or "")
    declared = _declared_gamma(t)
    if declared is not None:
        if gamma is not None and gamma.order > 1 and gamma != declared:
            raise ParseError(f"{text!r} impose Γ = {declared.name}, incompatible avec --gamma {gamma.name}")
        gamma = declared
    return _build(t, gamma or cyclic_group(1), check)


def _build(t: str, gamma: FiniteGroup, check: bool) -> GroupDescriptor:
    family, _, arg = t.partition(":")
    try:
        if family == "prod":
            parts = _split_top_level(arg[1:-1])
            if len(parts) < 2:
                raise ParseError(f"produit à au moins deux facteurs attendu: {t!r}")
            d = _build(parts[0], gamma, check)
            for p in parts[1:]:
                d = product(d, _build(p, gamma, check), check)
            return d
        if family in ("gl", "sl", "pgl"):
            return catalog(family, {"n": int(arg)}, gamma, check)
        if family == "sp":
            return catalog("sp", {"2n": int(arg)}, gamma, check)
        if family == "torus":
            kv = _kv(arg)
            return catalog("split_torus", {"r": int(kv.get("r", kv.get("group", "1")))}, gamma, check)
        if family == "resgm":
            kv = _kv(arg)
            h_elems = gamma.generated([int(kv["h"])]) if "h" in kv else [gamma.identity]
            return catalog("weil_restriction_gm", {"h": h_elems}, gamma, check)
        if family == "normone":
            return catalog("norm_one", {}, gamma, check)
    except ValueError as e:
        raise ParseError(f"paramètre illisible dans {t!r}: {e}") from e
    raise ParseError(f"descripteur inconnu: {t!r} (attendu gl:n, sl:n, pgl:n, sp:2n, torus:r=k, resgm:c2, "
                     f"normone:c2, prod:(a,b))")
