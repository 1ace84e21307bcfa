import numpy as np
import pytest

from fcmsc.exceptions import (
    IllConditionedError,
    InvalidInputError,
    InvalidParameterError,
    ShapeError,
)
from fcmsc.linalg import col_l21_prox, l21_norm, nuclear_norm, solve_sylvester, svt

from oracles import (
    eig_nuclear_norm,
    kron_sylvester_solve,
    line_search_col_prox_objective,
    prox_l21_objective,
    scalar_l21_norm,
)


class TestL21Norm:
    def test_zero_matrix(self):
        assert l21_norm(np.zeros((3, 4))) == 0.0

    def test_single_345_column(self):
        assert l21_norm(np.array([[3.0], [4.0]])) == pytest.approx(5.0, abs=1e-15)

    def test_matches_scalar_loop_oracle(self):
        rng = np.random.default_rng(7)
        M = rng.normal(size=(4, 6))
        assert abs(l21_norm(M) - scalar_l21_norm(M)) < 1e-12

    def test_rejects_non_finite(self):
        M = np.ones((2, 2))
        M[0, 1] = np.nan
        with pytest.raises(InvalidInputError):
            l21_norm(M)


class TestNuclearNorm:
    def test_identity(self):
        assert nuclear_norm(np.eye(3)) == pytest.approx(3.0, abs=1e-12)

    def test_rank_one_diagonal(self):
        assert nuclear_norm(np.diag([2.0, 0.0])) == pytest.approx(2.0, abs=1e-12)

    def test_matches_eigendecomposition_oracle(self):
        rng = np.random.default_rng(11)
        M = rng.normal(size=(5, 5))
        assert abs(nuclear_norm(M) - eig_nuclear_norm(M)) < 1e-9


class TestColL21Prox:
    def test_345_column_tau_one(self):
        out = col_l21_prox(np.array([[3.0], [4.0]]), 1.0)
        np.testing.assert_allclose(out, [[2.4], [3.2]], atol=1e-12)
        # the closed form beats a fine line search along the target column
        obj = prox_l21_objective(out, np.array([[3.0], [4.0]]), 1.0)
        oracle = line_search_col_prox_objective(np.array([[3.0], [4.0]]), 1.0)
        assert obj <= oracle + 1e-12
        assert abs(obj - oracle) < 1e-9

    def test_below_threshold_column_zeroed(self):
        col = np.array([[0.3], [0.4]])  # norm 0.5
        np.testing.assert_array_equal(col_l21_prox(col, 1.0), np.zeros((2, 1)))

    def test_zero_matrix_fixed_point(self):
        np.testing.assert_array_equal(col_l21_prox(np.zeros((4, 3)), 0.7), np.zeros((4, 3)))

    def test_rejects_nonpositive_tau(self):
        with pytest.raises(InvalidParameterError):
            col_l21_prox(np.ones((2, 2)), 0.0)
        with pytest.raises(InvalidParameterError):
            col_l21_prox(np.ones((2, 2)), -1.0)

    def test_columns_shrink_and_keep_direction(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            T = rng.normal(size=(5, 8))
            tau = float(rng.uniform(0.05, 3.0))
            E = col_l21_prox(T, tau)
            in_norms = np.linalg.norm(T, axis=0)
            out_norms = np.linalg.norm(E, axis=0)
            assert (out_norms <= in_norms + 1e-12).all()
            for j in range(T.shape[1]):
                if out_norms[j] > 0:
                    scale = E[:, j] / T[:, j]
                    assert scale.min() >= -1e-12
                    assert np.ptp(scale) < 1e-10

    def test_beats_random_perturbations(self):
        rng = np.random.default_rng(5)
        T = rng.normal(size=(6, 5))
        tau = 0.8
        E = col_l21_prox(T, tau)
        base = prox_l21_objective(E, T, tau)
        for _ in range(1000):
            trial = E + rng.normal(scale=rng.uniform(1e-4, 0.5), size=E.shape)
            assert prox_l21_objective(trial, T, tau) >= base - 1e-12


class TestSvt:
    def test_diag_shrinkage(self):
        out = svt(np.diag([3.0, 1.0]), 2.0)
        np.testing.assert_allclose(out, np.diag([1.0, 0.0]), atol=1e-12)

    def test_tau_above_top_singular_value(self):
        rng = np.random.default_rng(13)
        T = rng.normal(size=(4, 5))
        top = np.linalg.svd(T, compute_uv=False)[0]
        np.testing.assert_allclose(svt(T, top * 1.01), np.zeros_like(T), atol=1e-12)

    def test_vanishing_shrinkage(self):
        rng = np.random.default_rng(17)
        T = rng.normal(size=(5, 4))
        assert np.linalg.norm(svt(T, 1e-12) - T) < 1e-9

    def test_rejects_nonpositive_tau(self):
        with pytest.raises(InvalidParameterError):
            svt(np.ones((2, 2)), 0.0)

    def test_output_spectrum_is_shrunken_input_spectrum(self):
        rng = np.random.default_rng(23)
        for _ in range(10):
            T = rng.normal(size=(6, 7))
            tau = float(rng.uniform(0.05, 2.0))
            J = svt(T, tau)
            s_in = np.linalg.svd(T, compute_uv=False)
            s_out = np.linalg.svd(J, compute_uv=False)
            np.testing.assert_allclose(s_out, np.maximum(s_in - tau, 0.0), atol=1e-8)
            assert nuclear_norm(J) <= nuclear_norm(T) + 1e-10


class TestSolveSylvester:
    def test_identity_operator(self):
        rng = np.random.default_rng(29)
        R = rng.normal(size=(4, 3))
        np.testing.assert_allclose(
            solve_sylvester(np.eye(4), np.zeros((3, 3)), R), R, atol=1e-12
        )

    def test_scalar_spectrum(self):
        rng = np.random.default_rng(31)
        R = rng.normal(size=(3, 3))
        np.testing.assert_allclose(
            solve_sylvester(2 * np.eye(3), np.eye(3), R), R / 3.0, atol=1e-12
        )

    def test_matches_kronecker_oracle(self):
        rng = np.random.default_rng(37)
        for _ in range(5):
            G = rng.normal(size=(5, 5))
            A = G @ G.T + 0.5 * np.eye(5)  # SPD
            H = rng.normal(size=(5, 5))
            B = (H + H.T) / 2 + 0.3 * np.eye(5)  # symmetric, spectrum clear of -alpha
            R = rng.normal(size=(5, 5))
            Z = solve_sylvester(A, B, R)
            assert np.abs(A @ Z + Z @ B - R).max() < 1e-8
            np.testing.assert_allclose(Z, kron_sylvester_solve(A, B, R), atol=1e-8)

    def test_singular_pair_raises(self):
        # alpha = {1, 2}, beta = {-1, 3}: pair 1 + (-1) = 0 must be refused
        A = np.diag([1.0, 2.0])
        B = np.diag([-1.0, 3.0])
        with pytest.raises(IllConditionedError, match="eigenvalue pair"):
            solve_sylvester(A, B, np.ones((2, 2)))

    def test_shape_and_symmetry_validation(self):
        with pytest.raises(ShapeError):
            solve_sylvester(np.eye(3), np.eye(2), np.ones((2, 2)))
        asym = np.array([[1.0, 5.0], [0.0, 1.0]])
        with pytest.raises(InvalidInputError):
            solve_sylvester(asym, np.eye(2), np.ones((2, 2)))

    def test_deterministic(self):
        rng = np.random.default_rng(41)
        G = rng.normal(size=(6, 6))
        A = G @ G.T + np.eye(6)
        H = rng.normal(size=(6, 6))
        B = (H + H.T) / 2 + np.eye(6)
        R = rng.normal(size=(6, 6))
        Z1 = solve_sylvester(A, B, R)
        Z2 = solve_sylvester(A, B, R)
        assert (Z1 == Z2).all()
