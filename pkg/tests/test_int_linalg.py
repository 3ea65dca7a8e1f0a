import random

import pytest

from asa_bounds.errors import CompositionError
from asa_bounds.int_linalg import (
    FgAbGroup,
    IntMatrix,
    cokernel,
    image_basis,
    kernel_basis,
    smith_normal_form,
    solve,
    subquotient,
    subquotient_mod,
)


def test_snf_diagonal_and_factorisation():
    a = IntMatrix.from_rows([[2, 4], [6, 8]])
    snf = smith_normal_form(a)
    assert snf.diagonal == (2, 4)
    assert snf.U @ a @ snf.V == snf.D
    assert snf.U @ snf.U_inv == IntMatrix.identity(2)


def test_snf_rank_deficient():
    a = IntMatrix.from_rows([[1, 2, 3], [2, 4, 6]])
    snf = smith_normal_form(a)
    assert snf.rank == 1
    assert snf.U @ a @ snf.V == snf.D


@pytest.mark.parametrize(
    "rows, expected",
    [
        ([[2, 0], [0, 3]], FgAbGroup(0, (6,))),
        ([[2, 0], [0, 4]], FgAbGroup(0, (2, 4))),
        ([[0], [0]], FgAbGroup(2, ())),
        ([[1, 0], [0, 1]], FgAbGroup.trivial()),
    ],
)
def test_cokernel(rows, expected):
    assert cokernel(IntMatrix.from_rows(rows)) == expected


def test_kernel_basis_is_annihilated():
    a = IntMatrix.from_rows([[1, 1, 0], [0, 2, 2]])
    k = kernel_basis(a)
    assert k.cols == 1
    assert (a @ k).is_zero()


def test_image_basis_spans_image():
    a = IntMatrix.from_rows([[2, 4], [0, 0]])
    b = image_basis(a)
    assert b.cols == 1
    assert solve(b, a).cols == 2


def test_solve_rejects_vector_outside_lattice():
    basis = IntMatrix.from_rows([[2], [0]])
    with pytest.raises(ValueError):
        solve(basis, IntMatrix.from_rows([[1], [0]]))


def test_subquotient_multiplication_by_two():
    # Z --2--> Z, homologie au milieu d'un complexe [Z --2--> Z --> 0]
    assert subquotient(IntMatrix.from_rows([[2]]), IntMatrix.zeros(0, 1)) == FgAbGroup(0, (2,))


def test_subquotient_rejects_non_complex():
    with pytest.raises(CompositionError):
        subquotient(IntMatrix.from_rows([[1]]), IntMatrix.from_rows([[1]]))


def test_subquotient_mod_respects_relations():
    # Z/4 --·2--> Z/4 : noyau {0, 2}, image de Z --1--> Z/4 triviale en quotient
    pres = subquotient_mod(IntMatrix.zeros(1, 0), IntMatrix.from_rows([[2]]), [4], [4])
    assert pres.group == FgAbGroup(0, (2,))


def test_from_cyclic_orders_canonical():
    assert FgAbGroup.from_cyclic_orders([2, 3]) == FgAbGroup(0, (6,))
    assert FgAbGroup.from_cyclic_orders([4, 2, 0, 1]) == FgAbGroup(1, (2, 4))


def test_invalid_divisibility_chain():
    with pytest.raises(ValueError):
        FgAbGroup(0, (2, 3))


def test_group_properties_and_render():
    g = FgAbGroup(1, (2, 4))
    assert g.order is None
    assert g.min_generators == 3
    assert g.render() == "ℤ ⊕ ℤ/2 ⊕ ℤ/4"
    assert FgAbGroup.trivial().render() == "0"
    assert FgAbGroup(0, (6,)).hom_to_cyclic(4) == FgAbGroup(0, (2,))


def test_json_roundtrip_of_matrix_with_big_entries():
    m = IntMatrix.from_rows([[10 ** 30, -1]])
    assert IntMatrix.from_json(m.to_json()) == m
    assert m.to_json() == [[str(10 ** 30), "-1"]]


# -------------------------
# Invariants sur matrices aléatoires (graines fixes)
# -------------------------
def _random_matrix(rng, rows, cols, span=6):
    return IntMatrix.from_rows([[rng.randint(-span, span) for _ in range(cols)] for _ in range(rows)], cols)


def _unimodular_pair(rng, n, steps=8):
    """(P, P^-1) produits de transvections (n >= 2)."""
    p, p_inv = IntMatrix.identity(n), IntMatrix.identity(n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        q = rng.choice([-2, -1, 1, 2])
        e = [[int(r == c) for c in range(n)] for r in range(n)]
        e_inv = [row[:] for row in e]
        e[i][j], e_inv[i][j] = q, -q
        p, p_inv = IntMatrix.from_rows(e, n) @ p, p_inv @ IntMatrix.from_rows(e_inv, n)
    return p, p_inv


@pytest.mark.parametrize("seed", range(12))
def test_snf_invariants_on_random_matrices(seed):
    rng = random.Random(seed)
    rows, cols = rng.randint(1, 4), rng.randint(1, 4)
    a = _random_matrix(rng, rows, cols)
    snf = smith_normal_form(a)

    assert snf.U @ a @ snf.V == snf.D
    assert snf.U @ snf.U_inv == IntMatrix.identity(rows)
    assert abs(snf.U.det()) == 1
    assert abs(snf.V.det()) == 1
    assert all(snf.D[i, j] == 0 for i in range(rows) for j in range(cols) if i != j)
    diag = snf.diagonal
    assert all(d >= 0 for d in diag)
    nonzero = [d for d in diag if d]
    assert diag[:len(nonzero)] == tuple(nonzero)
    assert all(b % a_ == 0 for a_, b in zip(nonzero, nonzero[1:]))


@pytest.mark.parametrize("seed", range(10))
def test_cokernel_order_is_determinant(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    a = _random_matrix(rng, n, n)
    while a.det() == 0:
        a = _random_matrix(rng, n, n)
    assert cokernel(a).order == abs(a.det())


@pytest.mark.parametrize("seed", range(10))
def test_subquotient_is_invariant_under_change_of_basis(seed):
    rng = random.Random(seed)
    k, n, m = rng.randint(1, 2), rng.randint(3, 4), rng.randint(1, 3)
    d_in = _random_matrix(rng, n, k, span=4)
    # lignes de d_out dans l'orthogonal de im(d_in) : d_out·d_in = 0
    left_kernel = kernel_basis(d_in.transpose())
    d_out = _random_matrix(rng, m, left_kernel.cols, span=3) @ left_kernel.transpose()
    p, p_inv = _unimodular_pair(rng, n)

    assert p @ p_inv == IntMatrix.identity(n)
    assert subquotient(p @ d_in, d_out @ p_inv) == subquotient(d_in, d_out)
