from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skeleta.exactla import (
    InconsistentSystemError,
    IntMatrix,
    RankDeficientError,
    bareiss_det,
    gcd_of_minors,
    integer_kernel,
    invariant_factors,
    rank_multimodular,
    rank_q,
    smith_normal_form,
    solve_exact,
    wedge_matrix,
)

TRIANGLE_D10 = [
    [-1, -1, -1, -1, -1, -1, 0, 0, 0],
    [1, 1, 1, 0, 0, 0, -1, -1, -1],
    [0, 0, 0, 1, 1, 1, 1, 1, 1],
]


def matrices(max_dim=6, lo=-9, hi=9):
    return st.integers(0, max_dim).flatmap(
        lambda m: st.integers(0, max_dim).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=m, max_size=m
            ).map(lambda rows: IntMatrix(rows, (m, n)))
        )
    )


def check_snf_contract(a: IntMatrix):
    snf = smith_normal_form(a)
    assert snf.u @ a @ snf.v == snf.s
    assert abs(snf.u.det()) == 1
    assert abs(snf.v.det()) == 1
    s = snf.s.tolist()
    m, n = a.shape
    diag = []
    for i in range(m):
        for j in range(n):
            if i != j:
                assert s[i][j] == 0
    diag = [s[i][i] for i in range(min(m, n))]
    assert all(x >= 0 for x in diag)
    nz = [x for x in diag if x]
    assert diag[: len(nz)] == nz  # zeros trail
    for x, y in zip(nz, nz[1:]):
        assert y % x == 0
    assert snf.invariant_factors == tuple(nz)
    return snf


# -------------------------------------------------------------- smith form


def test_snf_row_vector():
    a = IntMatrix([[-1, -1]])
    snf = check_snf_contract(a)
    assert snf.s == IntMatrix([[1, 0]])
    assert snf.invariant_factors == (1,)


def test_snf_identity():
    snf = check_snf_contract(IntMatrix.identity(3))
    assert snf.s == IntMatrix.identity(3)


def test_snf_diag_4_6():
    a = IntMatrix([[4, 0], [0, 6]])
    snf = check_snf_contract(a)
    assert snf.invariant_factors == (2, 12)
    # gcd-of-minors oracle: d1 = gcd of entries, d1*d2 = |det|
    assert gcd_of_minors(a, 1) == 2
    assert gcd_of_minors(a, 2) == 24


@pytest.mark.parametrize("shape", [(0, 0), (0, 3), (3, 0)])
def test_snf_empty(shape):
    snf = check_snf_contract(IntMatrix.zeros(*shape))
    assert snf.invariant_factors == ()


def test_snf_large_entries_stay_exact():
    big = 10**30
    a = IntMatrix([[big, 3 * big + 1], [7, 11]])
    snf = check_snf_contract(a)
    assert snf.invariant_factors[-1] == abs(a.det())


def test_snf_deterministic():
    a = IntMatrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert smith_normal_form(a) == smith_normal_form(a)
    assert smith_normal_form(a).invariant_factors == (2, 6, 12)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_contract_property(a):
    snf = check_snf_contract(a)
    # invariant factors against the gcd-of-minors oracle, prefix by prefix
    prod = 1
    for k, x in enumerate(snf.invariant_factors, start=1):
        prod *= x
        assert gcd_of_minors(a, k) == prod
    assert invariant_factors(a) == snf.invariant_factors


# ------------------------------------------------------------------ kernel


def test_kernel_row_vector():
    k = integer_kernel(IntMatrix([[-1, -1]]))
    assert k.shape == (2, 1)
    assert k.tolist() in ([[1], [-1]], [[-1], [1]])


def test_kernel_injective():
    assert integer_kernel(IntMatrix.identity(2)).shape == (2, 0)


def test_kernel_coordinate():
    k = integer_kernel(IntMatrix([[1, 0, 0], [0, 1, 0]]))
    assert k.tolist() in ([[0], [0], [1]], [[0], [0], [-1]])


def test_kernel_saturated_not_just_rational():
    # x + y + 2z = 0 over Z: the kernel lattice has index 1 in its rational span
    a = IntMatrix([[2, 4, 6], [1, 1, 2]])
    k = integer_kernel(a)
    assert (a @ k).is_zero()
    assert invariant_factors(k) == (1,) * k.cols


@settings(max_examples=100, deadline=None)
@given(matrices(max_dim=5))
def test_kernel_property(a):
    k = integer_kernel(a)
    assert (a @ k).is_zero()
    assert rank_q(a) + k.cols == a.cols
    assert invariant_factors(k) == (1,) * k.cols


# ------------------------------------------------------------------- wedge


def test_wedge_identity():
    assert wedge_matrix(IntMatrix.identity(3), 2) == IntMatrix.identity(3)


def test_wedge_degree_one_and_zero():
    t = IntMatrix([[1, 2, 3], [4, 5, 6]])
    assert wedge_matrix(t, 1) == t
    assert wedge_matrix(t, 0) == IntMatrix([[1]])


def test_wedge_determinant():
    assert wedge_matrix(IntMatrix([[3, 5], [7, 11]]), 2) == IntMatrix([[3 * 11 - 5 * 7]])


def test_wedge_out_of_range():
    with pytest.raises(ValueError):
        wedge_matrix(IntMatrix.identity(2), 3)
    with pytest.raises(ValueError):
        wedge_matrix(IntMatrix.identity(2), -1)


def test_wedge_shape_and_order():
    t = IntMatrix([[1, 0, 2], [0, 1, 3], [4, 5, 6], [7, 8, 9]])
    w = wedge_matrix(t, 2)
    assert w.shape == (6, 3)
    rows, cols = list(combinations(range(4), 2)), list(combinations(range(3), 2))
    for i, rs in enumerate(rows):
        for j, cs in enumerate(cols):
            assert w[i, j] == bareiss_det([[t[a, b] for b in cs] for a in rs])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.data())
def test_wedge_functorial(m, k, n, data):
    ints = st.integers(-5, 5)
    t1 = IntMatrix(data.draw(st.lists(st.lists(ints, min_size=k, max_size=k), min_size=m, max_size=m)), (m, k))
    t2 = IntMatrix(data.draw(st.lists(st.lists(ints, min_size=n, max_size=n), min_size=k, max_size=k)), (k, n))
    for r in range(min(m, k, n) + 1):
        assert wedge_matrix(t1 @ t2, r) == wedge_matrix(t1, r) @ wedge_matrix(t2, r)


# -------------------------------------------------------------------- rank


def test_rank_triangle_differential():
    assert rank_q(IntMatrix(TRIANGLE_D10)) == 2
    assert rank_multimodular(IntMatrix(TRIANGLE_D10)) == 2


def test_rank_zero():
    assert rank_q(IntMatrix.zeros(3, 4)) == 0
    assert rank_multimodular(IntMatrix.zeros(3, 4)) == 0


def test_rank_modular_needs_several_primes():
    # rank drops modulo the first prime below 2**31, not over Q
    from skeleta.exactla import _prime

    p = _prime(0)
    a = IntMatrix([[p, 0], [0, 1]])
    assert rank_q(a) == 2
    assert rank_multimodular(a) == 2


@settings(max_examples=100, deadline=None)
@given(matrices(max_dim=7))
def test_rank_routes_agree(a):
    expected = max((k for k in range(min(a.shape) + 1) if gcd_of_minors(a, k) != 0), default=0)
    assert rank_q(a) == expected
    assert rank_multimodular(a) == expected


# ------------------------------------------------------------------- solve


def test_solve_identity():
    b = IntMatrix([[1, 2], [3, 4]])
    assert solve_exact(IntMatrix.identity(2), b) == [[1, 2], [3, 4]]


def test_solve_rational():
    x = solve_exact(IntMatrix([[2, 0], [0, 3]]), IntMatrix([[1], [1]]))
    assert x == [[Fraction(1, 2)], [Fraction(1, 3)]]


def test_solve_errors_are_distinct():
    with pytest.raises(InconsistentSystemError):
        solve_exact(IntMatrix([[1, 1], [1, 1]]), IntMatrix([[1], [2]]))
    with pytest.raises(RankDeficientError):
        solve_exact(IntMatrix([[1, 1], [1, 1]]), IntMatrix([[2], [2]]))
    x = solve_exact(IntMatrix([[1, 1], [1, 1]]), IntMatrix([[2], [2]]), allow_free=True)
    assert x == [[2], [0]]


# ------------------------------------------------------------------ matrix


def test_intmatrix_immutable_and_exact():
    a = IntMatrix([[2**70, 1], [0, 1]])
    with pytest.raises(ValueError):
        a._a[0, 0] = 5
    assert (a @ a)[0, 0] == 2**140
    assert a.entries == (2**70, 1, 0, 1)
    with pytest.raises(OverflowError):
        a.to_int64()


def test_intmatrix_rejects_non_integers():
    with pytest.raises(TypeError):
        IntMatrix([[1.5]])
    with pytest.raises(TypeError):
        IntMatrix([[True]])
    assert IntMatrix(np.array([[1, 2]], dtype=np.int64)) == IntMatrix([[1, 2]])


def test_rank_with_zero_rows_and_columns():
    assert rank_multimodular(IntMatrix([[0, 0], [0, 1]])) == 1
    assert rank_multimodular(IntMatrix([[0, 0, 0], [0, 5, 0], [0, 0, 0]])) == 1
