from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flange.exactlinalg import (
    F2,
    DependentColumns,
    Field,
    NoSolution,
    column_basis,
    extend_to_basis,
    inverse,
    kernel_basis,
    quotient_projection,
    rank,
    rank_profile,
    solve,
)

F5 = Field(5)
Q = Field(0)


def test_field_rejects_composite_characteristic():
    with pytest.raises(ValueError):
        Field(4)


def test_large_prime_uses_python_integers():
    big = Field(2_147_483_647)
    A = big.array([[2**30, 1], [3, 2**30]])
    assert A.dtype == object
    assert rank(A, big) == 2


class TestRankProfile:
    def test_identity(self):
        r, piv, R = rank_profile(F2.eye(2), F2)
        assert (r, piv) == (2, [0, 1])
        assert np.array_equal(R, F2.eye(2))

    def test_zero(self):
        r, piv, _ = rank_profile(F2.zeros(3, 4), F2)
        assert (r, piv) == (0, [])

    def test_all_ones_over_f2(self):
        r, piv, R = rank_profile(F2.array([[1, 1], [1, 1]]), F2)
        assert (r, piv) == (1, [0])
        assert R.tolist() == [[1, 1], [0, 0]]

    def test_rational_rref(self):
        r, piv, R = rank_profile(Q.array([[2, 4], [1, 3]]), Q)
        assert (r, piv) == (2, [0, 1])
        assert R.tolist() == [[1, 0], [0, 1]]
        assert all(isinstance(x, Fraction) for x in R.flat)


class TestSolve:
    def test_identity(self):
        b = F5.array([3, 1, 4])
        assert np.array_equal(solve(F5.eye(3), b, F5), b)

    def test_zero_system(self):
        assert solve(F2.zeros(2, 2), F2.zeros(2, 1), F2).tolist() == [[0], [0]]

    def test_free_variables_are_zero(self):
        assert solve(F2.array([[1, 1]]), F2.array([1]), F2).tolist() == [1, 0]

    def test_inconsistent(self):
        with pytest.raises(NoSolution):
            solve(F2.zeros(1, 2), F2.array([1]), F2)


class TestKernel:
    def test_identity(self):
        assert kernel_basis(F2.eye(3), F2).shape == (3, 0)

    def test_zero(self):
        assert np.array_equal(kernel_basis(F2.zeros(2, 3), F2), F2.eye(3))

    def test_all_ones_row(self):
        assert kernel_basis(F2.array([[1, 1]]), F2).tolist() == [[1], [1]]

    def test_no_rows(self):
        assert np.array_equal(kernel_basis(F2.zeros(0, 2), F2), F2.eye(2))


class TestExtendToBasis:
    def test_empty(self):
        assert np.array_equal(extend_to_basis(F2.zeros(2, 0), 2, F2), F2.eye(2))

    def test_second_unit_vector(self):
        assert extend_to_basis(F2.array([[0], [1]]), 2, F2).tolist() == [[1], [0]]

    def test_diagonal_vector(self):
        assert extend_to_basis(F2.array([[1], [1]]), 2, F2).tolist() == [[1], [0]]

    def test_dependent_columns(self):
        with pytest.raises(DependentColumns):
            extend_to_basis(F2.array([[1, 1], [0, 0]]), 2, F2)


def test_inverse_and_singular():
    A = F5.array([[1, 2], [3, 4]])
    assert np.array_equal(F5.matmul(A, inverse(A, F5)), F5.eye(2))
    with pytest.raises(ValueError):
        inverse(F5.array([[1, 2], [2, 4]]), F5)


def test_quotient_projection():
    sub = F2.array([[1], [1], [0]])
    proj, sect = quotient_projection(sub, 3, F2)
    assert not F2.matmul(proj, sub).any()
    assert np.array_equal(F2.matmul(proj, sect), F2.eye(2))


# -- properties ------------------------------------------------------------

fields = st.sampled_from([F2, F5])


@st.composite
def matrices(draw, max_side=8):
    F = draw(fields)
    m = draw(st.integers(1, max_side))
    k = draw(st.integers(1, max_side))
    seed = draw(st.integers(0, 2**32 - 1))
    return F, F.random(np.random.default_rng(seed), m, k)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_nullity(data):
    F, A = data
    K = kernel_basis(A, F)
    assert rank(A, F) + K.shape[1] == A.shape[1]
    assert not F.matmul(A, K).any()
    assert rank(K, F) == K.shape[1]


@settings(max_examples=150, deadline=None)
@given(matrices(), st.integers(0, 2**32 - 1))
def test_solve_round_trip(data, seed):
    F, A = data
    x = F.random(np.random.default_rng(seed), A.shape[1], 2)
    b = F.matmul(A, x)
    assert np.array_equal(F.matmul(A, solve(A, b, F)), b)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_extension_has_full_rank(data):
    F, A = data
    V = column_basis(A, F)
    W = np.concatenate([V, extend_to_basis(V, A.shape[0], F)], axis=1)
    assert W.shape == (A.shape[0], A.shape[0])
    assert rank(W, F) == A.shape[0]
