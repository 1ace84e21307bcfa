"""Affinity construction, spectral clustering and clustering metrics."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .exceptions import InvalidInputError, InvalidParameterError
from .linalg import as_matrix


@dataclass
class ClusteringResult:
    labels: np.ndarray
    m: int
    affinity: np.ndarray | None = None


@dataclass
class MetricTriple:
    nmi: float
    acc: float
    fscore: float

    @classmethod
    def from_labels(cls, pred, truth):
        return cls(nmi=nmi(pred, truth), acc=acc(pred, truth),
                   fscore=pairwise_fscore(pred, truth))


def build_affinity(C):
    """Symmetrized magnitude affinity (|C| + |C^T|) / 2 of a square C."""
    C = as_matrix(C, "C")
    if C.shape[0] != C.shape[1]:
        raise InvalidInputError(f"C must be square, got {C.shape}")
    return (np.abs(C) + np.abs(C.T)) / 2.0


def _kmeans_pp_init(rows, k, rng):
    n = rows.shape[0]
    centers = np.empty((k, rows.shape[1]))
    centers[0] = rows[rng.integers(n)]
    d2 = ((rows - centers[0]) ** 2).sum(axis=1)
    for i in range(1, k):
        total = d2.sum()
        if total <= 0:
            centers[i] = rows[rng.integers(n)]
        else:
            centers[i] = rows[rng.choice(n, p=d2 / total)]
        d2 = np.minimum(d2, ((rows - centers[i]) ** 2).sum(axis=1))
    return centers


def _kmeans(rows, k, rng, n_init=20, max_iter=300, tol=1e-6):
    """Seeded k-means with k-means++ starts; ties go to the lowest center
    index, empty clusters are reseeded to the point farthest from its
    center. The best of `n_init` runs by within-cluster sum is kept."""
    n = rows.shape[0]
    scale = float(np.abs(rows).max())
    scale = scale if scale > 0 else 1.0
    best_labels = None
    best_inertia = math.inf
    for _ in range(n_init):
        centers = _kmeans_pp_init(rows, k, rng)
        labels = None
        for _ in range(max_iter):
            d2 = ((rows[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
            labels = np.argmin(d2, axis=1)
            new_centers = centers.copy()
            for c in range(k):
                members = labels == c
                if members.any():
                    new_centers[c] = rows[members].mean(axis=0)
                else:
                    far = int(np.argmax(d2[np.arange(n), labels]))
                    new_centers[c] = rows[far]
            shift = float(np.abs(new_centers - centers).max())
            centers = new_centers
            if shift <= tol * scale:
                break
        d2 = ((rows[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        labels = np.argmin(d2, axis=1)
        inertia = float(d2[np.arange(n), labels].sum())
        if inertia < best_inertia - 1e-12:
            best_inertia = inertia
            best_labels = labels
    return best_labels


def spectral_cluster(W, m, seed=0, keep_affinity=False):
    """Normalized spectral clustering of a symmetric nonnegative affinity.

    Embeds samples with the ``m`` eigenvectors of the smallest eigenvalues
    of ``I - D^{-1/2} W D^{-1/2}`` (zero-degree samples get unit
    self-degree), row-normalizes the embedding (zero rows stay zero), and
    clusters the rows with seeded k-means, 20 restarts.
    """
    W = as_matrix(W, "W")
    n = W.shape[0]
    if W.shape[0] != W.shape[1]:
        raise InvalidInputError(f"affinity must be square, got {W.shape}")
    if not 2 <= m <= n:
        raise InvalidParameterError(f"m must be in [2, {n}], got {m}")
    if np.abs(W - W.T).max() > 1e-8 * max(1.0, np.abs(W).max()):
        raise InvalidInputError("affinity must be symmetric")
    if W.min() < 0:
        raise InvalidInputError("affinity must be nonnegative")

    deg = W.sum(axis=1)
    deg = np.where(deg > 0, deg, 1.0)
    inv_sqrt = 1.0 / np.sqrt(deg)
    L_sym = np.eye(n) - inv_sqrt[:, None] * W * inv_sqrt[None, :]
    L_sym = (L_sym + L_sym.T) / 2.0
    _, vecs = np.linalg.eigh(L_sym)
    embedding = vecs[:, :m]
    row_norms = np.linalg.norm(embedding, axis=1, keepdims=True)
    embedding = np.where(row_norms > 0, embedding / np.where(row_norms > 0, row_norms, 1.0), 0.0)

    rng = np.random.default_rng(seed)
    labels = _kmeans(embedding, m, rng)
    return ClusteringResult(
        labels=np.asarray(labels, dtype=np.int64),
        m=m,
        affinity=W.copy() if keep_affinity else None,
    )


def _check_label_pair(pred, truth):
    pred = np.asarray(pred).ravel()
    truth = np.asarray(truth).ravel()
    if pred.shape[0] != truth.shape[0]:
        raise InvalidInputError(
            f"label lengths differ: {pred.shape[0]} vs {truth.shape[0]}"
        )
    if pred.shape[0] < 1:
        raise InvalidInputError("labels must be nonempty")
    return pred, truth


def _contingency(pred, truth):
    _, pi = np.unique(pred, return_inverse=True)
    _, ti = np.unique(truth, return_inverse=True)
    table = np.zeros((pi.max() + 1, ti.max() + 1), dtype=np.int64)
    np.add.at(table, (pi, ti), 1)
    return table


def nmi(pred, truth):
    """Normalized mutual information with sqrt-of-entropy-product scaling.

    Identical single-cluster partitions score 1.0; if exactly one side
    has zero entropy the partitions differ and the score is 0.0.
    """
    pred, truth = _check_label_pair(pred, truth)
    table = _contingency(pred, truth)
    n = table.sum()
    pi = table.sum(axis=1) / n
    qj = table.sum(axis=0) / n
    nz = table > 0
    pij = table[nz] / n
    outer = np.outer(pi, qj)[nz]
    mi = float((pij * np.log(pij / outer)).sum())
    hp = float(-(pi[pi > 0] * np.log(pi[pi > 0])).sum())
    ht = float(-(qj[qj > 0] * np.log(qj[qj > 0])).sum())
    if hp == 0.0 and ht == 0.0:
        return 1.0
    if hp == 0.0 or ht == 0.0:
        return 0.0
    return float(min(1.0, max(0.0, mi / math.sqrt(hp * ht))))


def acc(pred, truth):
    """Clustering accuracy under the best one-to-one id mapping.

    The optimal assignment over the contingency table is found with the
    Hungarian method; unequal cluster counts are handled by the implicit
    zero padding of the rectangular assignment.
    """
    pred, truth = _check_label_pair(pred, truth)
    table = _contingency(pred, truth)
    rows, cols = linear_sum_assignment(table, maximize=True)
    return float(table[rows, cols].sum() / pred.shape[0])


def pairwise_fscore(pred, truth):
    """Harmonic mean of pairwise co-clustering precision and recall.

    Over all unordered sample pairs: a true positive is co-clustered in
    both partitions, a false positive only in `pred`, a false negative
    only in `truth`. Zero when precision + recall is zero; 1.0 when both
    partitions are all singletons (they are then the same partition).
    """
    pred, truth = _check_label_pair(pred, truth)
    if pred.shape[0] < 2:
        raise InvalidInputError("pairwise f-score needs at least two samples")
    table = _contingency(pred, truth)

    def pairs(counts):
        return float((counts * (counts - 1) // 2).sum())

    tp = pairs(table)
    pred_pairs = pairs(table.sum(axis=1))
    truth_pairs = pairs(table.sum(axis=0))
    fp = pred_pairs - tp
    fn = truth_pairs - tp
    if tp == 0:
        return 1.0 if (fp == 0 and fn == 0) else 0.0
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return float(2 * precision * recall / (precision + recall))
