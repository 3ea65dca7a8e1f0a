from fractions import Fraction

import pytest

from asa_bounds.errors import DensityError, ParseError, PlaceSetError, PrimeError
from asa_bounds.int_linalg import FgAbGroup
from asa_bounds.number_fields import (
    NumberFieldSpec,
    PlaceSetSpec,
    cyclotomic_E_S,
    cyclotomic_field,
    density_estimate,
    density_relation_check,
    empirical_interval,
    exact_density,
    factor_degrees_mod_p,
    is_totally_split,
    prime_table,
    rational_field,
    sha1_QmodZ_order,
    sha1_Zn_group,
)

GAUSS = NumberFieldSpec((1, 0, 1), asserted_galois=True)


@pytest.mark.parametrize(
    "p, degrees, ramified",
    [(5, (1, 1), False), (3, (2,), False), (13, (1, 1), False), (2, (1, 1), True)],
)
def test_factor_degrees_gaussian(p, degrees, ramified):
    assert factor_degrees_mod_p(GAUSS, p) == (degrees, ramified)


def test_factor_degrees_cyclotomic_five():
    nf = cyclotomic_field(5)
    assert factor_degrees_mod_p(nf, 11) == ((1, 1, 1, 1), False)
    assert factor_degrees_mod_p(nf, 2) == ((4,), False)
    assert factor_degrees_mod_p(nf, 19) == ((2, 2), False)
    assert factor_degrees_mod_p(nf, 5)[1] is True


def test_factor_degrees_requires_prime():
    with pytest.raises(PrimeError):
        factor_degrees_mod_p(GAUSS, 9)


def test_is_totally_split():
    assert is_totally_split(GAUSS, 13)
    assert not is_totally_split(GAUSS, 7)
    assert not is_totally_split(GAUSS, 2)
    assert is_totally_split(rational_field(), 7)


@pytest.mark.parametrize("coeffs", [(2, 0, 1), (1, 2, 1), (1,)])
def test_number_field_validation(coeffs):
    with pytest.raises(ParseError):
        NumberFieldSpec(coeffs)


def test_leading_zeros_are_stripped():
    assert NumberFieldSpec((0, 1, 0, 1)).degree == 2


def test_placeset_validation():
    with pytest.raises(PlaceSetError):
        PlaceSetSpec.congruence(4, (2,))
    with pytest.raises(DensityError):
        PlaceSetSpec.congruence(4, ())
    with pytest.raises(PlaceSetError):
        PlaceSetSpec.split().with_symbolic_density("3/2")
    assert PlaceSetSpec.congruence(8, (7, 1, 9)).residues == (1, 7)


def test_exact_densities():
    assert exact_density(None, PlaceSetSpec.congruence(8, (1, 7))) == Fraction(1, 2)
    assert exact_density(None, PlaceSetSpec.all_primes()) == 1
    assert exact_density(GAUSS, PlaceSetSpec.split()) == Fraction(1, 2)
    assert exact_density(NumberFieldSpec((1, 0, 0, -2)), PlaceSetSpec.split()) is None
    assert exact_density(None, PlaceSetSpec.split().with_symbolic_density("1/3")) == Fraction(1, 3)


def test_density_estimate_gaussian():
    est = density_estimate(GAUSS, PlaceSetSpec.split(), 10_000)
    assert abs(est.value - 0.5) < 0.02
    assert est.expectation == Fraction(1, 2)
    assert est.prime_count_total == 1228
    assert est.interval[0] < est.value < est.interval[1]
    assert est.galois_violations == 0


def test_density_all_primes_is_one():
    est = density_estimate(rational_field(), PlaceSetSpec.all_primes(), 1000)
    assert est.value == 1.0
    assert est.ratio == 1


def test_density_dirichlet_mode():
    est = density_estimate(GAUSS, PlaceSetSpec.split(), 5_000, mode="dirichlet", s=1.5)
    assert est.mode == "dirichlet"
    assert 0.15 < est.value < 0.7
    with pytest.raises(DensityError):
        density_estimate(GAUSS, PlaceSetSpec.split(), 5_000, mode="dirichlet", s=1.0)


def test_density_bound_too_small():
    with pytest.raises(DensityError):
        density_estimate(GAUSS, PlaceSetSpec.split(), 50)


def test_density_partition_independent():
    a = density_estimate(GAUSS, PlaceSetSpec.split(), 6_000, chunk=6_000)
    b = density_estimate(GAUSS, PlaceSetSpec.split(), 6_000, chunk=1_000, workers=2)
    assert (a.prime_count_matching, a.prime_count_total) == (b.prime_count_matching, b.prime_count_total)
    assert a.value == b.value


def test_galois_violation_is_logged(caplog):
    nf = NumberFieldSpec((1, 0, 0, -2), asserted_galois=True)
    with caplog.at_level("WARNING", logger="asa_bounds.number_fields"):
        est = density_estimate(nf, PlaceSetSpec.split(), 1_000)
    assert est.galois_violations > 0
    assert "galoisien" in caplog.text


def test_empirical_interval_has_floor():
    lo, hi = empirical_interval(0.0, 100)
    assert lo == 0.0 and hi == pytest.approx(0.01)


@pytest.mark.parametrize("spec", [PlaceSetSpec.all_primes(), PlaceSetSpec.congruence(4, (1,)),
                                  PlaceSetSpec.congruence(8, (1,))])
def test_density_relation(spec):
    rep = density_relation_check(GAUSS, spec, 20_000)
    assert abs(rep.difference) < 0.05


def test_density_relation_needs_galois():
    with pytest.raises(PlaceSetError):
        density_relation_check(NumberFieldSpec((1, 0, 1)), PlaceSetSpec.all_primes(), 1_000)


@pytest.mark.parametrize(
    "m, residues, degree",
    [(4, (1,), 2), (8, (1, 7), 2), (12, (1,), 4), (5, (1, 2, 3, 4), 1), (7, (2,), 2)],
)
def test_cyclotomic_E_S_degree(m, residues, degree):
    assert cyclotomic_E_S(m, residues).degree == degree
    assert sha1_QmodZ_order(m, residues) == degree


def test_cyclotomic_E_S_structure():
    assert cyclotomic_E_S(12, (1,)).galois_group == FgAbGroup(0, (2, 2))
    assert cyclotomic_E_S(16, (1,)).galois_group == FgAbGroup(0, (2, 4))


def test_sha1_Zn():
    assert sha1_Zn_group(12, (1,), 2) == FgAbGroup(0, (2, 2))
    assert sha1_Zn_group(5, (1,), 2) == FgAbGroup(0, (2,))
    assert sha1_Zn_group(5, (1,), 3).is_trivial


def test_prime_table():
    df = prime_table(GAUSS, 30)
    assert list(df.columns) == ["p", "degrees", "ramified", "excluded", "totally_split", "in_S"]
    assert len(df) == 10
    row = df.set_index("p").loc[13]
    assert bool(row["totally_split"]) and bool(row["in_S"])
    assert bool(df.set_index("p").loc[2, "ramified"])
