"""Per-view similarity graphs and unnormalized Laplacians.

The coefficient-matrix regularizer sums ``Tr(C^T L_i C)`` over views,
with ``L_i = D_i - W_i`` built from a k-nearest-neighbor adjacency.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import (
    DegenerateBandwidthError,
    InvalidInputError,
    InvalidParameterError,
)
from .linalg import as_matrix
from .data import normalize_view


@dataclass
class ViewGraph:
    """Adjacency W, diagonal degree D and Laplacian L = D - W of one view."""

    W: np.ndarray
    D: np.ndarray
    L: np.ndarray


def knn_adjacency(view, k=5, sigma=None):
    """Gaussian-weighted k-nearest-neighbor adjacency over the columns of `view`.

    Each sample is connected to its `k` nearest neighbors under Euclidean
    distance with weight ``exp(-dist^2 / (2 sigma^2))``; the result is
    symmetrized by ``max(W, W^T)`` and has a zero diagonal. With
    ``sigma=None`` the bandwidth is the median of all retained neighbor
    distances.
    """
    V = as_matrix(view, "view")
    n = V.shape[1]
    if not 1 <= k < n:
        raise InvalidParameterError(f"k must satisfy 1 <= k < n = {n}, got {k}")

    sq = (V * V).sum(axis=0)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (V.T @ V)
    np.clip(d2, 0.0, None, out=d2)
    np.fill_diagonal(d2, np.inf)  # a sample is never its own neighbor

    order = np.argsort(d2, axis=1)[:, :k]
    kept = np.take_along_axis(d2, order, axis=1)

    if sigma is None:
        sigma = float(np.median(np.sqrt(kept)))
        if sigma == 0.0:
            raise DegenerateBandwidthError(
                "median k-NN distance is zero; pass an explicit sigma"
            )
    elif sigma <= 0:
        raise InvalidParameterError(f"sigma must be positive, got {sigma}")

    W = np.zeros((n, n))
    weights = np.exp(-kept / (2.0 * sigma * sigma))
    rows = np.repeat(np.arange(n), k)
    W[rows, order.ravel()] = weights.ravel()
    W = np.maximum(W, W.T)
    np.fill_diagonal(W, 0.0)
    return W


def laplacian(W):
    """Degree and unnormalized Laplacian of a symmetric nonnegative adjacency."""
    W = as_matrix(W, "W")
    n, n2 = W.shape
    if n != n2:
        raise InvalidInputError(f"adjacency must be square, got {W.shape}")
    if np.abs(W - W.T).max() > 1e-10:
        raise InvalidInputError("adjacency must be symmetric (within 1e-10)")
    if W.min() < 0:
        raise InvalidInputError("adjacency must be nonnegative")
    if np.abs(np.diagonal(W)).max() > 1e-12:
        raise InvalidInputError("adjacency must have a zero diagonal")
    W = (W + W.T) / 2.0
    np.fill_diagonal(W, 0.0)
    D = np.diag(W.sum(axis=1))
    return ViewGraph(W=W, D=D, L=D - W)


def build_view_graphs(dataset, k=5, sigma=None, normalize=True):
    """One ViewGraph per view of `dataset`, built on the normalized features
    by default so the graphs match the concatenated representation."""
    graphs = []
    for V in dataset.views:
        base = normalize_view(V) if normalize else V
        graphs.append(laplacian(knn_adjacency(base, k=k, sigma=sigma)))
    return graphs
