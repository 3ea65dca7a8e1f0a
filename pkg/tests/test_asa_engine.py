import json
from fractions import Fraction

import pytest

from asa_bounds.catalog import catalog, parse_descriptor
from asa_bounds.engine import (
    bound_general,
    bound_semisimple,
    bound_torus,
    bound_weil_restriction,
    check_corollary,
    check_mainthm,
    emit_report,
    evaluate,
    exact_weil_restriction,
    going_over_L_bound,
)
from asa_bounds.errors import HypothesisError, ModuleError
from asa_bounds.galois_modules import (
    cyclic_group,
    make_complex,
    reduction_mod,
    regular_module,
    sign_module,
    trivial_lattice,
)
from asa_bounds.int_linalg import FgAbGroup, IntMatrix
from asa_bounds.items import DeltaValue, Verdict
from asa_bounds.number_fields import NumberFieldSpec, PlaceSetSpec

HALF = Fraction(1, 2)


# --- hypothèses ---
def test_mainthm_split_torus_symbolic_density():
    d = catalog("split_torus", {"r": 2})
    spec = PlaceSetSpec.all_primes().with_symbolic_density("1/3")
    assert check_mainthm(d, None, spec, Fraction(1, 3)).verdict is Verdict.ASA_HOLDS


def test_mainthm_needs_archimedean_places():
    check = check_mainthm(parse_descriptor("gl:2"), None, PlaceSetSpec.all_primes(False), HALF)
    assert check.verdict is Verdict.UNDECIDED
    assert any("archimedean" in n for n in check.notes)


def test_mainthm_missing_density():
    with pytest.raises(HypothesisError):
        check_mainthm(parse_descriptor("gl:2"), None, PlaceSetSpec.split(), None)


def test_mainthm_split_over_l():
    d = parse_descriptor("resgm:c2")
    assert check_mainthm(d, None, PlaceSetSpec.all_primes(), HALF).ok
    assert not check_mainthm(d, [0, 1], PlaceSetSpec.all_primes(), HALF).ok


def test_pgl2_over_progression():
    rep = evaluate(parse_descriptor("pgl:2"), PlaceSetSpec.congruence(4, (1,)))
    assert rep.delta.value == HALF
    assert rep.bound == 2
    assert rep.verdict is Verdict.ASA_HOLDS


# --- bornes ---
@pytest.mark.parametrize("n", [1, 2, 3])
def test_bound_torus_split(n):
    g = cyclic_group(1)
    assert bound_torus(trivial_lattice(g, n), HALF).bound == 2 ** n


def test_bound_torus_twisted(c2):
    assert bound_torus(regular_module(c2), HALF).bound == 4
    assert bound_torus(sign_module(c2, [0, 1]), HALF).bound == 2


def test_bound_torus_errors(c2):
    with pytest.raises(ModuleError):
        bound_torus(reduction_mod(trivial_lattice(c2, 1), 2), HALF)
    with pytest.raises(HypothesisError):
        bound_torus(trivial_lattice(c2, 1), Fraction(0))


def test_bound_semisimple_pgl():
    pic = parse_descriptor("pgl:3").pic_bar
    assert bound_semisimple(pic, None, HALF).bound == 2
    rep = bound_semisimple(pic, None, Fraction(3, 5))
    assert rep.bound == Fraction(5, 3)
    assert rep.verdict is Verdict.ASA_HOLDS_SA


def test_bound_semisimple_sl_is_one():
    rep = bound_semisimple(parse_descriptor("sl:3").pic_bar, None, Fraction(1, 7))
    assert rep.bound == 1
    assert rep.rank_r == 0
    assert rep.verdict is Verdict.ASA_HOLDS_SA


def test_bound_semisimple_rejects_small_r():
    pic = parse_descriptor("pgl:2").pic_bar
    with pytest.raises(HypothesisError):
        bound_semisimple(pic, 0, HALF)
    assert bound_semisimple(pic, 2, HALF).bound == 4


@pytest.mark.parametrize("n, delta", [(1, HALF), (2, Fraction(1, 3)), (3, HALF)])
def test_bound_general_gl(n, delta):
    rep = bound_general(parse_descriptor(f"gl:{n}"), delta)
    assert rep.bound == delta ** -n


def test_bound_general_split_torus_over_c2(c2):
    rep = bound_general(catalog("split_torus", {"r": 2}, c2), HALF)
    assert (rep.h1_size, rep.h2_size) == (1, 4)
    assert rep.bound == 16


def test_bound_general_weil_restriction():
    assert bound_general(parse_descriptor("resgm:c2"), HALF).bound == 4
    assert bound_weil_restriction(HALF).bound == 2


def test_bound_monotone_in_delta():
    d = parse_descriptor("gl:3")
    assert bound_general(d, Fraction(1, 4)).bound == 8 * bound_general(d, HALF).bound


def test_empirical_delta_gives_interval_only():
    d = parse_descriptor("gl:2")
    rep = evaluate(d, delta=DeltaValue.empirical(0.5, (0.45, 0.55)))
    assert rep.bound is None
    lo, hi = rep.bound_interval
    assert lo == pytest.approx(0.55 ** -2) and hi == pytest.approx(0.45 ** -2)
    assert rep.verdict is Verdict.ASA_HOLDS


def test_empirical_delta_touching_zero_is_undecided():
    rep = evaluate(parse_descriptor("pgl:2"), delta=DeltaValue.empirical(0.01, (0.0, 0.03)))
    assert rep.verdict is Verdict.UNDECIDED
    assert rep.bound_interval[1] is None


def test_estimated_delta_from_field():
    nf = NumberFieldSpec((1, 0, 0, -2))
    rep = evaluate(parse_descriptor("gl:1"), PlaceSetSpec.split(), nf=nf, prime_bound=2_000)
    assert rep.delta.kind == "empirical"
    assert rep.verdict is Verdict.ASA_HOLDS


def test_missing_density_data():
    with pytest.raises(HypothesisError):
        evaluate(parse_descriptor("gl:1"), PlaceSetSpec.split())


# --- passage à L ---
def test_going_over_L_torus(c2):
    res = going_over_L_bound(catalog("gl", {"n": 1}, c2).c0_hat, HALF)
    assert res.case == "torus"
    assert res.bound == 4


def test_going_over_L_semisimple():
    res = going_over_L_bound(parse_descriptor("pgl:5").c0_hat, HALF)
    assert res.case == "semisimple"
    assert res.exponent == 1
    assert res.bound == 2


def test_going_over_L_acyclic():
    res = going_over_L_bound(parse_descriptor("sl:2").c0_hat, HALF)
    assert res.case == "acyclic"
    assert res.bound == 1


def test_going_over_L_mixed():
    g = cyclic_group(1)
    cx = make_complex(trivial_lattice(g, 1), trivial_lattice(g, 2), IntMatrix.zeros(2, 1))
    res = going_over_L_bound(cx, HALF)
    assert res.case == "mixed"
    assert res.verdict is Verdict.UNDECIDED
    assert res.candidate_exponents == (1, 2)
    assert res.bound is None


def test_going_over_L_kernel_inside_relations(c2):
    # [Z --1--> Z/2] : ker = 2Z, coker = 0
    cx = make_complex(trivial_lattice(c2, 1), reduction_mod(trivial_lattice(c2, 1), 2), IntMatrix.from_rows([[1]]))
    res = going_over_L_bound(cx, HALF)
    assert res.case == "torus"
    assert res.kernel == FgAbGroup(1, ())
    assert res.bound == 4


# --- cas cyclotomique exact ---
@pytest.mark.parametrize(
    "m, residues, order",
    [(4, (1,), 2), (8, (1, 7), 2), (12, (1,), 4), (5, (1, 2, 3, 4), 1)],
)
def test_exact_weil_restriction(m, residues, order):
    rep = exact_weil_restriction(m, residues)
    assert rep.exact_b_s.order == order
    assert rep.bound == order
    expected = Verdict.ASA_HOLDS_SA if order == 1 else Verdict.ASA_HOLDS
    assert rep.verdict is expected
    # |B_S| <= borne du tore avec δ = 1/[E_S : Q]
    t_hat = parse_descriptor("resgm:c2").t_hat
    assert rep.bound <= bound_torus(t_hat, Fraction(1, order)).bound
    # |B_S| <= borne par passage à L avec le δ exact
    assert rep.bound <= going_over_L_bound(parse_descriptor("resgm:c2").c0_hat, rep.delta).bound


def test_evaluate_takes_exact_route():
    rep = evaluate(parse_descriptor("resgm:c2"), PlaceSetSpec.congruence(4, (1,)))
    assert rep.route == "exact_cyclotomic"
    assert rep.exact_b_s == FgAbGroup(0, (2,))
    assert rep.cross_check["case"] == "torus"


# --- corollaires ---
@pytest.mark.parametrize(
    "text, form",
    [("gl:1", "torus split over L"), ("pgl:2", "semi-simple with Pic split over L"),
     ("gl:2", "maximal torus split over L")],
)
def test_corollary_forms(text, form):
    cor = check_corollary(parse_descriptor(text), None, PlaceSetSpec.all_primes(), HALF)
    assert cor.form == form
    assert cor.holds


# --- rendu ---
def test_emit_report_gl3_json():
    rep = evaluate(parse_descriptor("gl:3"), delta=HALF)
    data = json.loads(emit_report(rep, "json"))
    assert data["bound"] == "8"
    assert data["factors"] == {"r": 3, "h1": "1", "h2": "1"}
    assert any("maximal-torus bound" in p for p in data["provenance"])
    assert data["schema_version"] == "asa.report.v1"
    assert data["bound_is_consistent"] and data["verdict_is_consistent"] and data["delta_in_range"]


def test_emit_report_pgl2_sa_text():
    rep = evaluate(parse_descriptor("pgl:2"), delta=Fraction(3, 5))
    text = emit_report(rep, "text")
    assert "ASA_HOLDS_SA" in text
    assert "bound      : 5/3" in text


def test_emit_report_is_deterministic():
    a = emit_report(evaluate(parse_descriptor("sl:2"), delta=HALF))
    b = emit_report(evaluate(parse_descriptor("sl:2"), delta=HALF))
    assert a == b
    assert json.loads(a)["bound"] == "1"
