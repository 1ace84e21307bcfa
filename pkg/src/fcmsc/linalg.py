r"""Dense matrix primitives for the alternating-direction solver.

Matrices are 2-D ``numpy.float64`` arrays in C (row-major) order. Every
operation validates that its inputs are nonempty and finite, and every
operation is a pure function: identical inputs produce bit-identical
outputs within one build.
"""

import numpy as np
import scipy.linalg

from .exceptions import (
    IllConditionedError,
    InvalidInputError,
    InvalidParameterError,
    NumericalError,
    ShapeError,
)

# Relative asymmetry tolerated by the symmetric Sylvester route.
SYLVESTER_SYM_TOL = 1e-8

# Relative guard on eigenvalue-pair sums; below it the spectral division
# in the Sylvester solve is refused rather than silently regularized.
SYLVESTER_PAIR_TOL = 1e-10


def as_matrix(M, name="matrix"):
    """Coerce `M` to a float64 2-D array, rejecting empty or non-finite input."""
    A = np.ascontiguousarray(M, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise InvalidInputError(
            f"{name} must be a nonempty 2-D array, got shape {A.shape}"
        )
    if not np.isfinite(A).all():
        raise InvalidInputError(f"{name} contains non-finite entries")
    return A


def l21_norm(M):
    r"""Sum of the Euclidean norms of the columns of `M`.

    ||M||_{2,1} = sum_j ||M[:, j]||_2
    """
    M = as_matrix(M, "M")
    return float(np.linalg.norm(M, axis=0).sum())


def _thin_svd(M, compute_uv=True):
    """Thin SVD with a fallback from the fast divide-and-conquer driver to
    the slower but more robust QR-iteration one."""
    try:
        return np.linalg.svd(M, full_matrices=False, compute_uv=compute_uv)
    except np.linalg.LinAlgError:
        pass
    try:
        if compute_uv:
            return scipy.linalg.svd(M, full_matrices=False, lapack_driver="gesvd")
        return scipy.linalg.svd(M, compute_uv=False, lapack_driver="gesvd")
    except Exception as e:
        raise NumericalError(
            f"SVD did not converge on a {M.shape[0]}x{M.shape[1]} matrix "
            f"(both gesdd and gesvd drivers failed): {e}"
        ) from e


def nuclear_norm(M):
    """Sum of the singular values of `M` (trace norm)."""
    M = as_matrix(M, "M")
    s = _thin_svd(M, compute_uv=False)
    return float(s.sum())


def col_l21_prox(T, tau):
    r"""Proximal operator of ``tau * ||.||_{2,1}`` evaluated at `T`.

    Returns the minimizer E* of

        tau * ||E||_{2,1} + 1/2 * ||E - T||_F^2,

    obtained column by column: a column with Euclidean norm above `tau`
    is scaled by ``(norm - tau) / norm``, any other column is zeroed.

    Parameters
    ----------
    T : array_like, shape (p, q)
        Prox target.
    tau : float
        Shrinkage threshold, must be positive.

    Returns
    -------
    ndarray, shape (p, q)
    """
    T = as_matrix(T, "T")
    if not (np.isfinite(tau) and tau > 0):
        raise InvalidParameterError(f"tau must be positive, got {tau}")
    norms = np.linalg.norm(T, axis=0)
    scale = np.zeros_like(norms)
    above = norms > tau
    scale[above] = (norms[above] - tau) / norms[above]
    return T * scale


def svt(T, tau):
    r"""Singular value thresholding, the proximal operator of the trace norm.

    Returns the minimizer J* of

        tau * ||J||_* + 1/2 * ||J - T||_F^2,

    computed from a thin SVD ``T = U diag(s) V^T`` by shrinking every
    singular value toward zero by `tau` and clamping at zero.

    Parameters
    ----------
    T : array_like, shape (p, q)
        Prox target.
    tau : float
        Shrinkage amount, must be positive.

    Returns
    -------
    ndarray, shape (p, q)
    """
    T = as_matrix(T, "T")
    if not (np.isfinite(tau) and tau > 0):
        raise InvalidParameterError(f"tau must be positive, got {tau}")
    U, s, Vt = _thin_svd(T)
    shrunk = np.maximum(s - tau, 0.0)
    return (U * shrunk) @ Vt


def _check_symmetric(A, name):
    scale = max(1.0, float(np.abs(A).max()))
    if float(np.abs(A - A.T).max()) > SYLVESTER_SYM_TOL * scale:
        raise InvalidInputError(f"{name} must be symmetric for the spectral solve")


def _sylvester_from_eigs(alpha, QA, beta, QB, RHS):
    """Core spectral-division step shared with the solver's cached path."""
    denom = alpha[:, None] + beta[None, :]
    tol = SYLVESTER_PAIR_TOL * max(
        float(np.abs(alpha).max()), float(np.abs(beta).max()), 1.0
    )
    bad = np.abs(denom) < tol
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise IllConditionedError(
            "Sylvester equation is singular or nearly so: eigenvalue pair "
            f"alpha[{i}]={alpha[i]:.6e}, beta[{j}]={beta[j]:.6e} sums to "
            f"{denom[i, j]:.3e} (guard {tol:.3e})"
        )
    M = QA.T @ RHS @ QB
    return QA @ (M / denom) @ QB.T


def _sym_eig(A, name):
    try:
        return np.linalg.eigh(A)
    except np.linalg.LinAlgError as e:
        raise NumericalError(f"eigendecomposition of {name} failed: {e}") from e


def solve_sylvester(A, B, RHS):
    r"""Solve ``A Z + Z B = RHS`` for symmetric `A` and `B`.

    Both coefficient matrices are diagonalized, ``A = Q_A diag(a) Q_A^T``
    and ``B = Q_B diag(b) Q_B^T``, and the solution is recovered from the
    entrywise division ``(Q_A^T RHS Q_B)[i, j] / (a[i] + b[j])``. With
    every pair sum ``a[i] + b[j]`` clear of the guard tolerance, the
    residual ``max|A Z + Z B - RHS|`` lands at roughly machine precision
    times the magnitude of RHS and the spectra (well below 1e-8 for the
    desk-scale systems this package produces).

    Parameters
    ----------
    A : array_like, shape (p, p)
        Symmetric (positive definite in solver use).
    B : array_like, shape (q, q)
        Symmetric.
    RHS : array_like, shape (p, q)

    Returns
    -------
    ndarray, shape (p, q)

    Raises
    ------
    IllConditionedError
        If some eigenvalue pair satisfies ``|a[i] + b[j]| < tol`` with
        ``tol = 1e-10 * max(|a|_max, |b|_max, 1)``. No silent
        regularization is applied.
    """
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    RHS = as_matrix(RHS, "RHS")
    p, p2 = A.shape
    q, q2 = B.shape
    if p != p2:
        raise ShapeError(f"A must be square, got {A.shape}")
    if q != q2:
        raise ShapeError(f"B must be square, got {B.shape}")
    if RHS.shape != (p, q):
        raise ShapeError(f"RHS must have shape ({p}, {q}), got {RHS.shape}")
    _check_symmetric(A, "A")
    _check_symmetric(B, "B")
    alpha, QA = _sym_eig(A, "A")
    beta, QB = _sym_eig(B, "B")
    return _sylvester_from_eigs(alpha, QA, beta, QB, RHS)
