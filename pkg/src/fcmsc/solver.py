r"""Alternating-direction solvers for self-expressive subspace models.

Two models are covered. The single-matrix low-rank representation
baseline recovers ``Z`` and column-sparse noise ``E_x`` from

    min ||E_x||_{2,1} + lambda * ||Z||_*   s.t.  X = X Z + E_x.

The feature-concatenation model additionally splits off the coefficient
structure shared by all views: with an auxiliary ``J`` standing in for
the trace norm of ``C``, it minimizes

    ||E_x||_{2,1} + lambda1 * ||E_z||_{2,1} + lambda2 * ||J||_*
    s.t.  X = X Z + E_x,   Z = Z C + E_z,   C = J,

optionally plus ``lambda3 * sum_i Tr(C^T L_i C)`` for per-view graph
Laplacians. Both are driven by inexact augmented-Lagrangian iterations
with closed-form subproblem updates, multiplier ascent and a penalty
``mu`` grown by ``rho`` per step up to ``mu_max``.

Every solve is a deterministic function of its inputs and the seed; the
only random draw is the uniform initialization of ``Z``.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .exceptions import (
    DivergenceError,
    IllConditionedError,
    InvalidInputError,
    InvalidParameterError,
)
from .linalg import (
    _sylvester_from_eigs,
    as_matrix,
    col_l21_prox,
    l21_norm,
    nuclear_norm,
    solve_sylvester,
    svt,
)


@dataclass
class SolverConfig:
    """Solver hyperparameters; defaults follow standard inexact-ALM practice."""

    lambda1: float = 1.0
    lambda2: float = 1.0
    lambda3: float = 0.0
    mu0: float = 1e-4
    mu_max: float = 1e6
    rho: float = 1.1
    epsilon: float = 1e-6
    max_iter: int = 500
    seed: int = 0
    z_init_scale: float = 0.01

    def __post_init__(self):
        if self.lambda1 <= 0 or self.lambda2 <= 0:
            raise InvalidParameterError("lambda1 and lambda2 must be positive")
        if self.lambda3 < 0:
            raise InvalidParameterError("lambda3 must be nonnegative")
        if not 0 < self.mu0 <= self.mu_max:
            raise InvalidParameterError("need 0 < mu0 <= mu_max")
        if self.rho <= 1:
            raise InvalidParameterError("rho must exceed 1")
        if self.epsilon <= 0:
            raise InvalidParameterError("epsilon must be positive")
        if self.max_iter < 1:
            raise InvalidParameterError("max_iter must be >= 1")
        if self.z_init_scale < 0:
            raise InvalidParameterError("z_init_scale must be nonnegative")


@dataclass
class SolverState:
    """All solver variables plus per-iteration diagnostics."""

    Z: np.ndarray
    C: np.ndarray
    E_x: np.ndarray
    E_z: np.ndarray
    J: np.ndarray
    Y1: np.ndarray
    Y2: np.ndarray
    Y3: np.ndarray
    mu: float
    iter: int = 0
    residuals: tuple = (math.inf, math.inf, math.inf)
    objective: float = math.nan
    converged: bool = False
    residual_history: list = field(default_factory=list)
    objective_history: list = field(default_factory=list)

    def cluster_specific_corruption(self, X):
        """The view-disagreement term expressed in feature space, X @ E_z."""
        return as_matrix(X, "X") @ self.E_z


@dataclass
class LrrResult:
    """Outcome of the low-rank representation baseline."""

    Z: np.ndarray
    E_x: np.ndarray
    iters: int
    converged: bool


def _maxabs(M):
    return float(np.abs(M).max())


def _joint_matrix(X):
    return as_matrix(getattr(X, "X", X), "X")


def _require_positive_mu(mu):
    if not mu > 0:
        raise InvalidParameterError(f"mu must be positive, got {mu}")


def update_Ex(X, Z, Y1, mu):
    """Column-sparse noise step: prox of the l2,1 norm at X - XZ + Y1/mu."""
    _require_positive_mu(mu)
    X = as_matrix(X, "X")
    return col_l21_prox(X - X @ Z + Y1 / mu, 1.0 / mu)


def update_Ez(Z, C, Y2, mu, lambda1):
    """Coefficient-space noise step: l2,1 prox at Z - ZC + Y2/mu."""
    _require_positive_mu(mu)
    Z = as_matrix(Z, "Z")
    return col_l21_prox(Z - Z @ C + Y2 / mu, lambda1 / mu)


def update_J(C, Y3, mu, lambda2):
    """Trace-norm auxiliary step: singular value thresholding of C + Y3/mu."""
    _require_positive_mu(mu)
    C = as_matrix(C, "C")
    return svt(C + Y3 / mu, lambda2 / mu)


def update_C(Z, E_z, J, Y2, Y3, mu, graph_term=None):
    """Coefficient step: solve the normal equations of the C subproblem.

    Without a graph term the system matrix is ``mu * (I + Z^T Z)``; with
    ``graph_term=(laplacians, lambda3)`` it gains
    ``lambda3 * sum_i (L_i^T + L_i)``. The system is solved directly, no
    explicit inverse is formed.
    """
    _require_positive_mu(mu)
    Z = as_matrix(Z, "Z")
    n = Z.shape[1]
    lhs = mu * (np.eye(n) + Z.T @ Z)
    if graph_term is not None:
        laplacians, lambda3 = graph_term
        if lambda3 < 0:
            raise InvalidParameterError("lambda3 must be nonnegative")
        if lambda3 > 0:
            for g in laplacians:
                L = as_matrix(getattr(g, "L", g), "laplacian")
                if L.shape != (n, n):
                    raise InvalidInputError(
                        f"laplacian shape {L.shape} does not match n = {n}"
                    )
                lhs += lambda3 * (L.T + L)
    rhs = mu * J - Y3 + Z.T @ Y2 + mu * (Z.T @ Z - Z.T @ E_z)
    try:
        return np.linalg.solve(lhs, rhs)
    except np.linalg.LinAlgError as e:
        raise IllConditionedError(f"coefficient system is singular: {e}") from e


def update_Z(X, C, E_x, E_z, Y1, Y2, mu, _cache=None):
    """Representation step: solve the Sylvester system of the Z subproblem.

    The equation is ``(X^T X + I) Z + Z (C C^T - C - C^T) = T`` with

        T = X^T X - X^T E_x + E_z - E_z C^T + (X^T Y1 + Y2 C^T - Y2) / mu.
    """
    _require_positive_mu(mu)
    X = as_matrix(X, "X")
    xtx = _cache["xtx"] if _cache is not None else X.T @ X
    B = C @ C.T - C - C.T
    T = xtx - X.T @ E_x + E_z - E_z @ C.T + (X.T @ Y1 + Y2 @ C.T - Y2) / mu
    if _cache is not None:
        beta, QB = np.linalg.eigh(B)
        return _sylvester_from_eigs(_cache["alpha"], _cache["QA"], beta, QB, T)
    return solve_sylvester(xtx + np.eye(X.shape[1]), B, T)


def update_multipliers(state, X, rho=1.1, mu_max=1e6):
    """Ascend Y1, Y2, Y3 along the three constraint residuals and grow mu.

    The residual infinity norms (max absolute entry) at the current
    primal variables are stored on the state before the ascent.
    """
    X = _joint_matrix(X)
    R1 = X - X @ state.Z - state.E_x
    R2 = state.Z - state.Z @ state.C - state.E_z
    R3 = state.C - state.J
    state.residuals = (_maxabs(R1), _maxabs(R2), _maxabs(R3))
    state.Y1 = state.Y1 + state.mu * R1
    state.Y2 = state.Y2 + state.mu * R2
    state.Y3 = state.Y3 + state.mu * R3
    state.mu = min(rho * state.mu, mu_max)
    return state


def objective_value(state, config, laplacians=None):
    """Model objective at the current state (diagnostic, not a descent bound).

    Adds the graph regularizer ``lambda3 * sum_i Tr(C^T L_i C)`` whenever
    `laplacians` is given.
    """
    val = (
        l21_norm(state.E_x)
        + config.lambda1 * l21_norm(state.E_z)
        + config.lambda2 * nuclear_norm(state.J)
    )
    if laplacians is not None:
        for g in laplacians:
            L = getattr(g, "L", g)
            val += config.lambda3 * float((state.C * (L @ state.C)).sum())
    return float(val)


def _check_finite(state, it):
    arrays = (
        state.Z, state.C, state.E_x, state.E_z, state.J,
        state.Y1, state.Y2, state.Y3,
    )
    if not all(np.isfinite(A).all() for A in arrays):
        raise DivergenceError(
            f"solver state became non-finite at iteration {it} "
            f"(last good iteration {it - 1})"
        )


def _alm_loop(X, config, laplacians=None):
    X = _joint_matrix(X)
    d, n = X.shape
    rng = np.random.default_rng(config.seed)
    state = SolverState(
        Z=rng.uniform(0.0, config.z_init_scale, size=(n, n)),
        C=np.zeros((n, n)),
        E_x=np.zeros((d, n)),
        E_z=np.zeros((n, n)),
        J=np.zeros((n, n)),
        Y1=np.zeros((d, n)),
        Y2=np.zeros((n, n)),
        Y3=np.zeros((n, n)),
        mu=config.mu0,
    )
    graph_term = None
    if laplacians is not None:
        graph_term = (laplacians, config.lambda3)

    # X is fixed, so the symmetric factorization behind the Z step is
    # computed once and reused; results are bit-identical to fresh calls.
    xtx = X.T @ X
    alpha, QA = np.linalg.eigh(xtx + np.eye(n))
    cache = {"xtx": xtx, "alpha": alpha, "QA": QA}

    for it in range(1, config.max_iter + 1):
        state.E_x = update_Ex(X, state.Z, state.Y1, state.mu)
        state.Z = update_Z(
            X, state.C, state.E_x, state.E_z, state.Y1, state.Y2, state.mu,
            _cache=cache,
        )
        state.E_z = update_Ez(state.Z, state.C, state.Y2, state.mu, config.lambda1)
        state.C = update_C(
            state.Z, state.E_z, state.J, state.Y2, state.Y3, state.mu,
            graph_term=graph_term,
        )
        state.J = update_J(state.C, state.Y3, state.mu, config.lambda2)
        update_multipliers(state, X, rho=config.rho, mu_max=config.mu_max)
        state.iter = it
        _check_finite(state, it)
        state.objective = objective_value(state, config, laplacians)
        state.residual_history.append(state.residuals)
        state.objective_history.append(state.objective)
        if max(state.residuals) < config.epsilon:
            state.converged = True
            break
    return state


def fcmsc_solve(X, config):
    """Run the feature-concatenation model on a joint representation.

    `X` may be a JointRepresentation or a plain (d, n) array. Variables
    start at zero except ``Z``, whose entries are drawn i.i.d. uniform
    from ``[0, z_init_scale]`` with the configured seed; the loop updates
    ``E_x, Z, E_z, C, J`` in that order, then the multipliers, until all
    three constraint residuals drop below ``epsilon`` or `max_iter` is
    reached (returned with ``converged=False``, not an error).
    """
    return _alm_loop(X, config, laplacians=None)


def grfcmsc_solve(X, laplacians, config):
    """Graph-regularized variant: the C step carries the Laplacian term.

    Expects one Laplacian per view; the count is validated when `X` is a
    JointRepresentation carrying view offsets.
    """
    offsets = getattr(X, "view_offsets", None)
    if offsets is not None and len(laplacians) != len(offsets):
        raise InvalidInputError(
            f"{len(laplacians)} laplacians for {len(offsets)} views"
        )
    if len(laplacians) < 1:
        raise InvalidInputError("need at least one view laplacian")
    return _alm_loop(X, config, laplacians=laplacians)


def lrr_solve(X, lam, config):
    """Low-rank representation baseline on a single feature matrix.

    Alternates singular value thresholding for the trace-norm auxiliary,
    a Cholesky solve for ``Z`` and the column prox for ``E_x``, with the
    same multiplier ascent and penalty schedule as the joint model.
    """
    X = _joint_matrix(X)
    if not lam > 0:
        raise InvalidParameterError(f"lambda must be positive, got {lam}")
    d, n = X.shape
    rng = np.random.default_rng(config.seed)
    Z = rng.uniform(0.0, config.z_init_scale, size=(n, n))
    E = np.zeros((d, n))
    J = np.zeros((n, n))
    Y1 = np.zeros((d, n))
    Y2 = np.zeros((n, n))
    mu = config.mu0

    xtx = X.T @ X
    factor = cho_factor(xtx + np.eye(n))

    converged = False
    it = 0
    for it in range(1, config.max_iter + 1):
        E = col_l21_prox(X - X @ Z + Y1 / mu, 1.0 / mu)
        Z = cho_solve(factor, xtx - X.T @ E + J + (X.T @ Y1 - Y2) / mu)
        J = svt(Z + Y2 / mu, lam / mu)
        R1 = X - X @ Z - E
        R2 = Z - J
        Y1 = Y1 + mu * R1
        Y2 = Y2 + mu * R2
        mu = min(config.rho * mu, config.mu_max)
        if not (np.isfinite(Z).all() and np.isfinite(E).all()):
            raise DivergenceError(
                f"baseline iterates became non-finite at iteration {it}"
            )
        if max(_maxabs(R1), _maxabs(R2)) < config.epsilon:
            converged = True
            break
    return LrrResult(Z=Z, E_x=E, iters=it, converged=converged)


def save_state(state, path):
    """Persist a solver state as an .npz archive."""
    np.savez(
        path,
        Z=state.Z, C=state.C, E_x=state.E_x, E_z=state.E_z, J=state.J,
        Y1=state.Y1, Y2=state.Y2, Y3=state.Y3,
        mu=state.mu, iter=state.iter,
        residuals=np.asarray(state.residuals),
        objective=state.objective,
        converged=state.converged,
    )


def load_state(path):
    """Load a solver state written by :func:`save_state`."""
    with np.load(path) as f:
        return SolverState(
            Z=f["Z"], C=f["C"], E_x=f["E_x"], E_z=f["E_z"], J=f["J"],
            Y1=f["Y1"], Y2=f["Y2"], Y3=f["Y3"],
            mu=float(f["mu"]), iter=int(f["iter"]),
            residuals=tuple(float(r) for r in f["residuals"]),
            objective=float(f["objective"]),
            converged=bool(f["converged"]),
        )
