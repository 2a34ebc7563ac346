import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra import numpy as hnp

from qdeform.exceptions import Infeasible
from qdeform.linalg import (IncrementalEchelon, default_rank_tol, entrywise_norm,
                            rank_nullspace, solve_least_norm)
from oracles import minor_rank


class TestEntrywiseNorm:
    def test_integer_matrix(self):
        assert entrywise_norm(np.array([[1, -2], [3, 4]])) == 10

    def test_zero_extent(self):
        assert entrywise_norm(np.zeros((3, 0))) == 0

    def test_complex_modulus(self):
        assert entrywise_norm(np.array([[3 + 4j]])) == 5

    @settings(max_examples=200, deadline=None)
    @given(a=st.floats(-10, 10), b=st.floats(-10, 10),
           P=hnp.arrays(float, (3, 2), elements=st.floats(-100, 100)),
           Q=hnp.arrays(float, (3, 2), elements=st.floats(-100, 100)))
    def test_triangle_inequality(self, a, b, P, Q):
        lhs = entrywise_norm(a * P + b * Q)
        rhs = abs(a) * entrywise_norm(P) + abs(b) * entrywise_norm(Q)
        assert lhs <= rhs * (1 + 1e-12) + 1e-300

    @settings(max_examples=200, deadline=None)
    @given(P=hnp.arrays(float, (2, 3), elements=st.floats(-100, 100)),
           Q=hnp.arrays(float, (3, 4), elements=st.floats(-100, 100)))
    def test_submultiplicative(self, P, Q):
        assert entrywise_norm(P @ Q) <= entrywise_norm(P) * entrywise_norm(Q) * (1 + 1e-12)

    def test_empty_product_is_zero_matrix(self):
        prod = np.zeros((2, 0)) @ np.zeros((0, 3))
        assert prod.shape == (2, 3) and entrywise_norm(prod) == 0


class TestRankNullspace:
    def test_identity(self):
        rank, basis = rank_nullspace(np.eye(3), 1e-10)
        assert rank == 3 and basis == []

    def test_ones(self):
        rank, basis = rank_nullspace(np.ones((2, 2)), 1e-10)
        assert rank == 1 and len(basis) == 1
        v = basis[0] / basis[0][0]
        np.testing.assert_allclose(v, [1, -1])

    def test_outer_product_rank_two(self, rng):
        u, v = rng.standard_normal((2, 6)), rng.standard_normal((2, 4))
        M = np.outer(u[0], v[0]) + np.outer(u[1], v[1])
        rank, basis = rank_nullspace(M)
        assert rank == 2 and len(basis) == 2
        for x in basis:
            assert np.linalg.norm(M @ x) < 1e-10

    def test_zero_extent(self):
        assert rank_nullspace(np.zeros((0, 3)))[0] == 0
        assert len(rank_nullspace(np.zeros((0, 3)))[1]) == 3
        assert rank_nullspace(np.zeros((2, 0))) == (0, [])

    def test_default_tol_formula(self):
        M = np.array([[1.0, -3.0], [2.0, 0.5]])
        assert default_rank_tol(M) == 2 * np.finfo(float).eps * 4.0

    def test_complex(self):
        M = np.array([[1, 1j], [1j, -1]])
        rank, basis = rank_nullspace(M)
        assert rank == 1
        assert np.linalg.norm(M @ basis[0]) < 1e-12

    def test_agrees_with_minor_enumeration(self, rng):
        for _ in range(300):
            r, c = rng.integers(1, 5, size=2)
            M = rng.integers(-2, 3, size=(r, c)) * (rng.random((r, c)) < 0.6)
            if rng.random() < 0.3 and r > 1:      # force a dependent row
                M[-1] = M[0] - M[1 % r]
            rank, basis = rank_nullspace(M.astype(float))
            assert rank == minor_rank(M)
            assert rank + len(basis) == c
            if basis:
                B = np.column_stack(basis)
                assert np.linalg.matrix_rank(B) == len(basis)
                assert np.abs(M @ B).max() < 1e-10


class TestSolveLeastNorm:
    def test_identity(self):
        np.testing.assert_allclose(solve_least_norm(np.eye(2), [1, 2]), [1, 2])

    def test_infeasible(self):
        with pytest.raises(Infeasible):
            solve_least_norm(np.array([[1.0, 0], [0, 0]]), [0, 1])

    def test_minimum_norm_matches_normal_equations(self):
        M = np.array([[1.0, 1.0]])
        x = solve_least_norm(M, [2.0])
        # minimum-norm solution is M^T (M M^T)^{-1} b
        expected = M.T @ np.linalg.solve(M @ M.T, [2.0])
        np.testing.assert_allclose(x, expected)
        np.testing.assert_allclose(x, [1, 1])

    def test_matrix_rhs(self, rng):
        M = rng.standard_normal((3, 5))
        B = rng.standard_normal((3, 2))
        X = solve_least_norm(M, B)
        np.testing.assert_allclose(M @ X, B, atol=1e-12)
        np.testing.assert_allclose(X, np.linalg.pinv(M) @ B, atol=1e-12)


class TestIncrementalEchelon:
    def test_rank_matches_dense(self, rng):
        ech = IncrementalEchelon(5)
        vecs = []
        for _ in range(8):
            v = rng.integers(-1, 2, size=5).astype(float)
            before = np.linalg.matrix_rank(np.array(vecs)) if vecs else 0
            vecs.append(v)
            after = np.linalg.matrix_rank(np.array(vecs))
            assert ech.add(v, 1e-9) == (after > before)
        assert ech.rank == np.linalg.matrix_rank(np.array(vecs))
