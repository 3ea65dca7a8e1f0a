"""
Grammaires d'entrée de la CLI : groupes, modules, polynômes, rationnels,
congruences et motifs de Frobenius. Toute erreur lève ParseError (code 2).
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from sympy import Poly, symbols
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from asa_bounds.errors import ParseError
from asa_bounds.galois_modules import (
    FiniteGroup,
    GaloisModule,
    cyclic_group,
    direct_product,
    make_group,
    permutation_module,
    reduction_mod,
    regular_module,
    sign_character,
    sign_module,
    symmetric_group,
    trivial_lattice,
)
from asa_bounds.number_fields import NumberFieldSpec, PlaceSetSpec, cyclotomic_coeffs

X = symbols("x")
_TRANSFORMS = standard_transformations + (convert_xor,)


def clean_text(s: str | None) -> str | None:
    """Trim + espaces internes supprimés. None si vide."""
    if s is None:
        return None
    s = re.sub(r"\s+", "", str(s))
    return s or None


# -------------------------
# Groupes
# -------------------------
def parse_group(text: str) -> FiniteGroup:
    """c<n>, c<a>xc<b>[x...], klein, s3."""
    t = (clean_text(text) or "").lower()
    if t in ("klein", "v4"):
        g = direct_product(cyclic_group(2), cyclic_group(2))
        return FiniteGroup(g.order, g.table, g.identity, "klein")
    if t == "s3":
        return symmetric_group(3)
    if t in ("1", "trivial"):
        return cyclic_group(1)
    parts = t.split("x")
    if not all(re.fullmatch(r"c\d+", p) for p in parts):
        raise ParseError(f"groupe inconnu: {text!r} (attendu c<n>, c<a>xc<b>, klein, s3)")
    orders = [int(p[1:]) for p in parts]
    if any(n < 1 for n in orders):
        raise ParseError(f"ordre cyclique invalide dans {text!r}")
    group = cyclic_group(orders[0])
    for n in orders[1:]:
        group = direct_product(group, cyclic_group(n))
    return group


def group_from_json(data: dict) -> FiniteGroup:
    try:
        table = [[int(x) for x in row] for row in data["table"]]
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"table de groupe illisible: {e}") from e
    if int(data.get("order", len(table))) != len(table):
        raise ParseError("ordre incohérent avec la table")
    return make_group(table, name=str(data.get("name", "group")))


# -------------------------
# Modules
# -------------------------
def parse_module(text: str, group: FiniteGroup) -> GaloisModule:
    """trivialZ[:r], sign, regular, mod:<n>, perm:<h>."""
    t = clean_text(text) or ""
    m = re.fullmatch(r"trivialZ(?::(\d+))?", t)
    if m:
        return trivial_lattice(group, int(m.group(1) or 1))
    if t == "sign":
        return sign_module(group, sign_character(group))
    if t == "regular":
        return regular_module(group)
    m = re.fullmatch(r"mod:(\d+)", t)
    if m:
        return reduction_mod(trivial_lattice(group, 1), int(m.group(1)))
    m = re.fullmatch(r"perm:(\d+)", t)
    if m:
        h = int(m.group(1))
        if not 0 <= h < group.order:
            raise ParseError(f"perm:{h} : élément hors du groupe {group.name}")
        return permutation_module(group, group.generated([h]))
    raise ParseError(f"module inconnu: {text!r} (attendu trivialZ[:r], sign, regular, mod:<n>, perm:<h>)")


def load_module_file(path: str | Path) -> GaloisModule:
    from asa_bounds.utils.serialize import module_from_json

    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"fichier de module illisible {path}: {e}") from e
    return module_from_json(data)


# -------------------------
# Polynômes
# -------------------------
def parse_poly(text: str, asserted_galois: bool = False) -> NumberFieldSpec:
    """Liste dense [1,0,1], expression x^2+1, ou cyclo:m (déclaré galoisien)."""
    t = clean_text(text) or ""
    m = re.fullmatch(r"cyclo:(\d+)", t)
    if m:
        return NumberFieldSpec(cyclotomic_coeffs(int(m.group(1))), asserted_galois=True, name=t)
    if re.fullmatch(r"\[?-?\d+(,-?\d+)*\]?", t):
        coeffs = tuple(int(c) for c in t.strip("[]").split(","))
        return NumberFieldSpec(coeffs, asserted_galois=asserted_galois)
    try:
        expr = parse_expr(t, transformations=_TRANSFORMS, local_dict={"x": X})
        poly = Poly(expr, X)
    except Exception as e:  # sympy lève des types variés
        raise ParseError(f"polynôme illisible: {text!r}") from e
    if not all(c.is_integer for c in poly.all_coeffs()):
        raise ParseError(f"coefficients non entiers: {text!r}")
    return NumberFieldSpec(tuple(int(c) for c in poly.all_coeffs()), asserted_galois=asserted_galois, name=t)


# -------------------------
# Rationnels, congruences, motifs
# -------------------------
def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(clean_text(text) or "")
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"rationnel illisible: {text!r}") from e


def parse_congruence(text: str) -> tuple[int, tuple[int, ...]]:
    """"m:a1,a2,..." -> (m, (a1, a2, ...))."""
    m = re.fullmatch(r"(\d+):(-?\d+(?:,-?\d+)*)", clean_text(text) or "")
    if not m:
        raise ParseError(f"congruence illisible: {text!r} (attendu m:a1,a2,...)")
    return int(m.group(1)), tuple(int(a) for a in m.group(2).split(","))


def parse_patterns(text: str) -> tuple[tuple[int, ...], ...]:
    """"1,1;2" -> ((1, 1), (2,))."""
    try:
        return tuple(tuple(int(d) for d in part.split(",")) for part in (clean_text(text) or "").split(";"))
    except ValueError as e:
        raise ParseError(f"motifs de Frobenius illisibles: {text!r}") from e


def build_placeset(
    split: bool = False,
    all_places: bool = False,
    congruence: str | None = None,
    patterns: str | None = None,
    no_archimedean: bool = False,
    symbolic_density: str | None = None,
) -> PlaceSetSpec:
    chosen = [x for x in (split, all_places, congruence, patterns) if x]
    if len(chosen) > 1:
        raise ParseError("un seul type d'ensemble de places à la fois (--split, --all, --congruence, --pattern)")
    inc = not no_archimedean
    if congruence:
        m, residues = parse_congruence(congruence)
        spec = PlaceSetSpec.congruence(m, residues, inc)
    elif patterns:
        spec = PlaceSetSpec.frobenius(parse_patterns(patterns), inc)
    elif all_places:
        spec = PlaceSetSpec.all_primes(inc)
    else:
        spec = PlaceSetSpec.split(inc)
    if symbolic_density is not None:
        spec = spec.with_symbolic_density(parse_fraction(symbolic_density))
    return spec
