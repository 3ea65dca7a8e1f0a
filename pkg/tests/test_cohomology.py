import pytest

from asa_bounds.catalog import catalog
from asa_bounds.cohomology import (
    _cohomology_presentation,
    _hyper_presentation,
    cyclic_oracle,
    h,
    hyper_h1,
    inflation_map,
    long_exact_check,
    restriction,
    restriction_map,
)
from asa_bounds.errors import GroupOrderError, ModuleError, NonCyclicError
from asa_bounds.galois_modules import (
    cyclic_group,
    direct_product,
    direct_sum,
    reduction_mod,
    regular_module,
    sign_module,
    trivial_lattice,
)
from asa_bounds.int_linalg import FgAbGroup
from asa_bounds.settings import COHOMOLOGY_CACHE_SIZE


def Z(n):
    return FgAbGroup(0, (n,)) if n > 1 else FgAbGroup.trivial()


@pytest.mark.parametrize("n", range(2, 9))
def test_h2_of_trivial_integers_is_cyclic(n):
    g = cyclic_group(n)
    assert h(2, g, trivial_lattice(g, 1)).group == Z(n)


def test_h0_is_fixed_points():
    g = cyclic_group(1)
    assert h(0, g, trivial_lattice(g, 3)).render() == "ℤ^3"


@pytest.mark.parametrize("i", [1, 2])
@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_shapiro_regular_module_is_acyclic(n, i):
    g = cyclic_group(n)
    assert h(i, g, regular_module(g)).group.is_trivial


@pytest.mark.parametrize("i", [1, 2])
def test_shapiro_on_klein_and_s3(klein, s3, i):
    assert h(i, klein, regular_module(klein)).group.is_trivial
    assert h(i, s3, regular_module(s3)).group.is_trivial


def test_sign_module_over_c2(c2):
    m = sign_module(c2, [0, 1])
    assert h(1, c2, m).group == Z(2)
    assert h(2, c2, m).group.is_trivial


def test_trivial_torsion_coefficients(c4):
    # H^1(C_4, Z/6) = Hom(C_4, Z/6)
    assert h(1, c4, reduction_mod(trivial_lattice(c4, 1), 6)).group == Z(2)


def test_klein_and_s3_second_cohomology(klein, s3):
    assert h(1, klein, trivial_lattice(klein, 1)).group.is_trivial
    assert h(2, klein, trivial_lattice(klein, 1)).group == FgAbGroup(0, (2, 2))
    assert h(2, s3, trivial_lattice(s3, 1)).group == Z(2)


def _battery(g):
    n = g.order
    mods = [trivial_lattice(g, r) for r in (1, 2)] + [regular_module(g)]
    if n % 2 == 0:
        mods.append(sign_module(g, [k % 2 for k in range(n)]))
    mods += [reduction_mod(trivial_lattice(g, 1), m) for m in (2, 3, 4)]
    return mods


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_bar_resolution_matches_cyclic_oracle(n):
    g = cyclic_group(n)
    for m in _battery(g):
        for i in (1, 2):
            assert h(i, g, m).group == cyclic_oracle(i, n, m), (m.name, i)


def test_cyclic_oracle_rejects_non_cyclic(klein):
    with pytest.raises(NonCyclicError):
        cyclic_oracle(1, 4, trivial_lattice(klein, 1))


def test_representative_cocycles(c2):
    res = h(1, c2, sign_module(c2, [0, 1]), with_cocycles=True)
    assert res.representative_cocycles is not None
    assert len(res.representative_cocycles) == 1
    assert res.to_json()["group"]["order"] == "2"


def test_module_over_other_group_is_rejected(c2, c3):
    with pytest.raises(ModuleError):
        h(1, c3, trivial_lattice(c2, 1))


def test_group_order_cap(monkeypatch):
    monkeypatch.setenv("ASA_MAX_GROUP_ORDER", "8")
    g = direct_product(cyclic_group(3), cyclic_group(3))
    with pytest.raises(GroupOrderError):
        h(1, g, regular_module(g))


def test_order_cap_applies_after_cache(monkeypatch, c4):
    m = trivial_lattice(c4, 1)
    cx = catalog("gl", {"n": 1}, c4).c_hat
    assert h(2, c4, m).group == Z(4)
    assert hyper_h1(c4, cx).group == Z(4)

    monkeypatch.setenv("ASA_MAX_GROUP_ORDER", "3")
    with pytest.raises(GroupOrderError):
        h(2, c4, m)
    with pytest.raises(GroupOrderError):
        hyper_h1(c4, cx)


def test_presentation_caches_are_bounded():
    assert _cohomology_presentation.cache_info().maxsize == COHOMOLOGY_CACHE_SIZE
    assert _hyper_presentation.cache_info().maxsize == COHOMOLOGY_CACHE_SIZE


@pytest.mark.parametrize("i", [0, 1, 2])
@pytest.mark.parametrize(
    "build",
    [
        lambda: (trivial_lattice(cyclic_group(2), 1), sign_module(cyclic_group(2), [0, 1])),
        lambda: (regular_module(cyclic_group(2)), reduction_mod(trivial_lattice(cyclic_group(2), 1), 4)),
        lambda: (trivial_lattice(cyclic_group(3), 1), regular_module(cyclic_group(3))),
        lambda: (sign_module(cyclic_group(4), [0, 1, 0, 1]), trivial_lattice(cyclic_group(4), 2)),
    ],
)
def test_cohomology_is_additive_on_direct_sums(build, i):
    m, n = build()
    g = m.group
    assert h(i, g, direct_sum(m, n)).group == h(i, g, m).group.direct_sum(h(i, g, n).group)


def test_hyper_h1_torus_shift(c2):
    # [Z -> 0] : H^1(C) = H^2(Γ, Z)
    d = catalog("gl", {"n": 1}, c2)
    assert hyper_h1(c2, d.c_hat).group == Z(2)


def test_hyper_h1_acyclic(c2):
    d = catalog("sl", {"n": 2}, c2)
    assert hyper_h1(c2, d.c_hat).group.is_trivial


def test_hyper_h1_pgl2(c2):
    d = catalog("pgl", {"n": 2}, c2)
    assert hyper_h1(c2, d.c_hat).group == Z(2)
    assert hyper_h1(c2, d.c0_hat).group == Z(2)


@pytest.mark.parametrize("family", ["gl", "pgl"])
def test_long_exact_window(c2, family):
    d = catalog(family, {"n": 2}, c2)
    rep = long_exact_check(c2, d.c_hat)
    assert rep.all_exact
    assert set(rep.terms) == {"H1(M-1)", "H1(M0)", "H1(C)", "H2(M-1)", "H2(M0)"}


def test_restriction_to_index_two_subgroup(c4):
    m = trivial_lattice(c4, 1)
    f = restriction_map(c4, [0, 2], m, 2)
    assert f.source == Z(4)
    assert f.target == Z(2)
    assert f.image_order == 2
    assert f.kernel_order == 2


def test_restriction_of_cocycle_vector(c4):
    m = trivial_lattice(c4, 1)
    cocycle = [0] * 9
    assert restriction(c4, [0, 2], m, 2, cocycle) == (0,)


def test_inflation_is_injective_on_h2(c4, c2):
    f = inflation_map(c4, c2, [0, 1, 0, 1], trivial_lattice(c2, 1), 2)
    assert f.is_injective
    assert f.image_order == 2
