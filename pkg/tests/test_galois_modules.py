import pytest

from asa_bounds.errors import EquivarianceError, GroupAxiomError, ModuleError, SubgroupError
from asa_bounds.galois_modules import (
    GaloisModule,
    augmentation_kernel,
    cyclic_group,
    direct_product,
    direct_sum,
    dual_module,
    fixed_points,
    induced_module,
    inflate_module,
    make_complex,
    make_group,
    permutation_module,
    quotient_module,
    reduction_mod,
    regular_module,
    restrict_module,
    sign_character,
    sign_module,
    subgroup,
    trivial_lattice,
)
from asa_bounds.int_linalg import FgAbGroup, IntMatrix


def test_make_group_accepts_cyclic_table():
    g = make_group([[0, 1, 2], [1, 2, 0], [2, 0, 1]], name="c3")
    assert g.order == 3
    assert g.identity == 0
    assert g.element_order(1) == 3


def test_make_group_rejects_missing_inverse():
    with pytest.raises(GroupAxiomError):
        make_group([[0, 1], [1, 1]])


def test_make_group_names_failing_triple():
    table = [[0, 1, 2], [1, 0, 0], [2, 0, 0]]
    with pytest.raises(GroupAxiomError, match="triplet|inverse"):
        make_group(table)


def test_direct_product_indexing(c2, c3):
    g = direct_product(c2, c3)
    assert g.order == 6
    assert g.element_order(1 * 3 + 1) == 6
    assert g.name == "c2xc3"


def test_s3_is_not_abelian(s3):
    assert any(s3.mul(a, b) != s3.mul(b, a) for a in s3.elements for b in s3.elements)
    rotations = [g for g in s3.elements if s3.element_order(g) in (1, 3)]
    assert len(rotations) == 3


def test_subgroup_reindexes(c4):
    h = subgroup(c4, [0, 2])
    assert h.order == 2
    assert h.table == cyclic_group(2).table
    with pytest.raises(SubgroupError):
        subgroup(c4, [0, 1])


def test_regular_module_acts_by_permutation(c3):
    m = regular_module(c3)
    assert m.rank == 3
    assert m.is_lattice
    assert not m.acts_trivially()
    assert m.acts_trivially([c3.identity])


def test_action_must_be_a_homomorphism(c2):
    bad = (IntMatrix.identity(1), IntMatrix.from_rows([[2]]))
    with pytest.raises(ModuleError):
        GaloisModule(c2, 1, IntMatrix.zeros(1, 0), bad)


def test_reduction_mod_underlying_group(c2):
    m = reduction_mod(trivial_lattice(c2, 1), 4)
    assert m.underlying == FgAbGroup(0, (4,))
    assert not m.is_lattice


@pytest.mark.parametrize("n", [2, 3, 6])
@pytest.mark.parametrize(
    "build",
    [
        lambda: trivial_lattice(cyclic_group(3), 2),
        lambda: regular_module(cyclic_group(3)),
        lambda: sign_module(cyclic_group(2), [0, 1]),
        lambda: permutation_module(cyclic_group(4), [0, 2]),
    ],
)
def test_reduction_mod_has_order_n_to_the_rank(build, n):
    m = build()
    reduced = reduction_mod(m, n)
    assert reduced.underlying.order == n ** m.rank
    assert reduced.underlying == FgAbGroup.from_cyclic_orders([n] * m.rank)


def test_sign_module_on_klein(klein):
    s = sign_character(klein)
    assert sorted(s).count(1) == 2
    m = sign_module(klein, s)
    assert not m.acts_trivially()


def test_sign_character_needs_index_two_subgroup(c3):
    with pytest.raises(ModuleError):
        sign_character(c3)


def test_dual_of_sign_is_sign(c2):
    m = sign_module(c2, [0, 1])
    assert dual_module(m) == m


def test_induced_module_from_index_two_subgroup(c4):
    h = subgroup(c4, [0, 2])
    m = induced_module(c4, [0, 2], trivial_lattice(h, 1))
    assert m.rank == 2
    assert m == permutation_module(c4, [0, 2])


def test_augmentation_kernel_rank(c3):
    assert augmentation_kernel(c3, [0]).rank == 2
    assert augmentation_kernel(c3, [0, 1, 2]).rank == 0


@pytest.mark.parametrize("r", [1, 2, 3])
def test_fixed_points_of_trivial_lattice(c2, r):
    assert fixed_points(trivial_lattice(c2, r)).group == FgAbGroup(r, ())


def test_fixed_points_of_regular_module_is_norm_line(c3):
    fp = fixed_points(regular_module(c3))
    assert fp.group == FgAbGroup(1, ())
    col = fp.generators.column(0)
    assert len(set(col)) == 1 and col[0] != 0


def test_fixed_points_of_sign_module_mod_two(c2):
    m = reduction_mod(sign_module(c2, [0, 1]), 2)
    assert fixed_points(m).group == FgAbGroup(0, (2,))


def test_direct_sum_and_quotient(c2):
    m = direct_sum(trivial_lattice(c2, 1), sign_module(c2, [0, 1]))
    assert m.rank == 2
    q = quotient_module(trivial_lattice(c2, 1), IntMatrix.from_rows([[3]]))
    assert q.underlying == FgAbGroup(0, (3,))


def test_restrict_and_inflate(c4, c2):
    m = regular_module(c4)
    res = restrict_module(m, [0, 2])
    assert res.group.order == 2
    inf = inflate_module(sign_module(c2, [0, 1]), c4, [0, 1, 0, 1])
    assert inf.acts_trivially([0, 2])
    assert not inf.acts_trivially([1])


def test_make_complex_checks_equivariance(c2):
    with pytest.raises(EquivarianceError):
        make_complex(trivial_lattice(c2, 1), sign_module(c2, [0, 1]), IntMatrix.from_rows([[1]]))


def test_make_complex_checks_shape(c2):
    with pytest.raises(EquivarianceError):
        make_complex(trivial_lattice(c2, 2), trivial_lattice(c2, 1), IntMatrix.from_rows([[1]]))


def test_make_complex_accepts_torsion_target(c2):
    cx = make_complex(trivial_lattice(c2, 1), reduction_mod(trivial_lattice(c2, 1), 2), IntMatrix.from_rows([[1]]))
    assert cx.group == c2
