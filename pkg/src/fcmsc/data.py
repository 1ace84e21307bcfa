"""Multi-view data model: loading, normalization, concatenation, synthesis.

A dataset holds one feature matrix per view, all with shape
``(d_i, n)`` (features by samples). On disk the convention is the
transpose: plain numeric CSV, one row per sample, one column per
feature, no header unless requested.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    InvalidInputError,
    InvalidParameterError,
    LabelRangeError,
    ParseError,
    ShapeError,
)
from .linalg import as_matrix


@dataclass
class MultiViewDataset:
    """`v` per-view feature matrices of shape (d_i, n) plus optional labels."""

    views: list
    labels: np.ndarray | None = None
    names: list | None = None

    def __post_init__(self):
        if len(self.views) < 1:
            raise InvalidInputError("dataset needs at least one view")
        self.views = [as_matrix(V, f"view {i}") for i, V in enumerate(self.views)]
        n = self.views[0].shape[1]
        for i, V in enumerate(self.views[1:], start=1):
            if V.shape[1] != n:
                raise ShapeError(
                    f"view 0 has {n} samples but view {i} has {V.shape[1]}"
                )
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64).ravel()
            if self.labels.shape[0] != n:
                raise ShapeError(
                    f"{self.labels.shape[0]} labels for {n} samples"
                )
            m = int(self.labels.max()) + 1 if self.labels.size else 0
            present = np.unique(self.labels)
            if self.labels.min() < 0 or len(present) != m:
                raise LabelRangeError(
                    "labels must cover 0..m-1 contiguously, got ids "
                    f"{present.tolist()}"
                )
        if self.names is not None and len(self.names) != len(self.views):
            raise ShapeError("one name per view required")

    @property
    def n_views(self):
        return len(self.views)

    @property
    def n_samples(self):
        return self.views[0].shape[1]

    @property
    def n_clusters(self):
        if self.labels is None:
            return None
        return int(self.labels.max()) + 1


@dataclass
class JointRepresentation:
    """Stacked view features: X has shape (sum d_i, n)."""

    X: np.ndarray
    view_offsets: list = field(default_factory=list)

    def split(self):
        """Recover the per-view blocks of X."""
        return [self.X[lo:hi, :] for lo, hi in self.view_offsets]


def _read_csv_matrix(path, header=False):
    rows = []
    width = None
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for r, row in enumerate(reader):
            if header and r == 0:
                continue
            if not row or all(cell.strip() == "" for cell in row):
                continue
            values = []
            for c, cell in enumerate(row):
                try:
                    values.append(float(cell))
                except ValueError:
                    raise ParseError(
                        f"{path}: non-numeric value {cell.strip()!r} at "
                        f"row {r + 1}, column {c + 1}"
                    ) from None
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise ParseError(
                    f"{path}: row {r + 1} has {len(values)} fields, expected {width}"
                )
            rows.append(values)
    if not rows:
        raise InvalidInputError(f"{path}: empty file")
    return np.asarray(rows, dtype=np.float64)


def load_views(paths, label_path=None, header=False):
    """Load per-view CSVs (rows = samples) into a dataset.

    Arbitrary integer labels in `label_path` are relabeled to 0..m-1 in
    first-appearance order.
    """
    views = []
    names = []
    n = None
    first = None
    for path in paths:
        M = _read_csv_matrix(path, header=header)  # samples x features
        if n is None:
            n, first = M.shape[0], path
        elif M.shape[0] != n:
            raise ShapeError(
                f"{first} has {n} samples but {path} has {M.shape[0]}"
            )
        views.append(M.T.copy())
        names.append(str(path))
    labels = None
    if label_path is not None:
        raw = _read_csv_matrix(label_path)
        if raw.shape[1] != 1:
            raise ParseError(f"{label_path}: label file must have one column")
        raw = raw[:, 0]
        if raw.shape[0] != n:
            raise ShapeError(
                f"{label_path} has {raw.shape[0]} labels for {n} samples"
            )
        if not np.all(raw == np.round(raw)):
            raise ParseError(f"{label_path}: labels must be integers")
        labels = _relabel_first_appearance(raw.astype(np.int64))
    return MultiViewDataset(views=views, labels=labels, names=names)


def _relabel_first_appearance(raw):
    mapping = {}
    out = np.empty(raw.shape[0], dtype=np.int64)
    for i, v in enumerate(raw):
        v = int(v)
        if v not in mapping:
            mapping[v] = len(mapping)
        out[i] = mapping[v]
    return out


def normalize_view(view):
    """Per-feature (per-row) min-max scaling into [0, 1].

    Constant rows map to all zeros so configured dimensions survive.
    """
    V = as_matrix(view, "view")
    lo = V.min(axis=1, keepdims=True)
    hi = V.max(axis=1, keepdims=True)
    span = hi - lo
    out = np.zeros_like(V)
    varying = (span > 0).ravel()
    out[varying, :] = (V[varying, :] - lo[varying]) / span[varying]
    return out


def concatenate(dataset, normalize=True):
    """Stack the views of `dataset` into one joint matrix, in view order.

    Column j of the result stacks the view features of sample j; the
    returned offsets give each view's row range.
    """
    blocks = []
    offsets = []
    row = 0
    n = dataset.n_samples
    for V in dataset.views:
        if V.shape[1] != n:
            raise ShapeError("views disagree on the number of samples")
        B = normalize_view(V) if normalize else V
        blocks.append(B)
        offsets.append((row, row + B.shape[0]))
        row += B.shape[0]
    return JointRepresentation(X=np.vstack(blocks), view_offsets=offsets)


def generate_synthetic(
    m,
    n_per_cluster,
    v,
    dims,
    subspace_rank,
    noise_level=0.0,
    cluster_corruption_fraction=0.0,
    sample_corruption_fraction=0.0,
    seed=0,
    center_scale=3.0,
):
    """Draw a union-of-subspaces multi-view dataset with known labels.

    Each view places each cluster's samples in a random
    `subspace_rank`-dimensional linear subspace of that view's feature
    space; the cluster's coefficients are drawn around a random center of
    scale `center_scale` (clusters occupy distinct regions of their
    subspaces, as real clusters do, which keeps them separable after
    per-feature normalization). Isotropic Gaussian noise of scale
    `noise_level` is added on top.

    Two corruption knobs mimic the failure modes multi-view data shows
    in practice. Cluster-specific corruption relocates, for a fraction
    of samples, the features of one randomly chosen view into a wrong
    cluster's subspace (the views then disagree about those samples).
    Sample-specific corruption replaces whole samples, the same column
    indices in every view, with large-magnitude noise.

    The base data draws are independent of the corruption draws, so two
    runs that share a seed but differ in corruption fractions agree on
    every untouched column.
    """
    dims = [int(d) for d in np.atleast_1d(dims)]
    if len(dims) == 1 and v > 1:
        dims = dims * v
    if len(dims) != v:
        raise InvalidParameterError(f"expected {v} view dims, got {len(dims)}")
    if m < 1 or n_per_cluster < 1 or v < 1:
        raise InvalidParameterError("m, n_per_cluster and v must be >= 1")
    if not (1 <= subspace_rank < min(dims)):
        raise InvalidParameterError(
            f"subspace_rank must be in [1, {min(dims) - 1}], got {subspace_rank}"
        )
    for name, frac in (
        ("cluster_corruption_fraction", cluster_corruption_fraction),
        ("sample_corruption_fraction", sample_corruption_fraction),
    ):
        if not 0.0 <= frac <= 1.0:
            raise InvalidParameterError(f"{name} must be in [0, 1], got {frac}")
    if noise_level < 0:
        raise InvalidParameterError("noise_level must be nonnegative")
    if cluster_corruption_fraction > 0 and m < 2:
        raise InvalidParameterError(
            "cluster corruption needs at least two clusters"
        )

    ss = np.random.SeedSequence(seed)
    rng_data, rng_cluster, rng_sample = (
        np.random.default_rng(c) for c in ss.spawn(3)
    )
    n = m * n_per_cluster
    labels = np.repeat(np.arange(m), n_per_cluster)
    r = subspace_rank

    bases = []  # bases[i][c] is an orthonormal (d_i, r) block
    centers = []  # centers[i][c] is that cluster's coefficient-space center
    views = []
    for d in dims:
        view_bases = []
        view_centers = []
        V = np.empty((d, n))
        for c in range(m):
            Q, _ = np.linalg.qr(rng_data.normal(size=(d, r)))
            center = center_scale * rng_data.normal(size=(r, 1))
            view_bases.append(Q)
            view_centers.append(center)
            cols = slice(c * n_per_cluster, (c + 1) * n_per_cluster)
            V[:, cols] = Q @ (center + rng_data.normal(size=(r, n_per_cluster)))
        if noise_level > 0:
            V += noise_level * rng_data.normal(size=(d, n))
        bases.append(view_bases)
        centers.append(view_centers)
        views.append(V)

    n_relocate = math.floor(cluster_corruption_fraction * n)
    if n_relocate > 0:
        relocate = rng_cluster.choice(n, size=n_relocate, replace=False)
        for j in relocate:
            i = int(rng_cluster.integers(v))
            wrong = int(rng_cluster.integers(m - 1))
            if wrong >= labels[j]:
                wrong += 1
            coeff = centers[i][wrong][:, 0] + rng_cluster.normal(size=r)
            views[i][:, j] = bases[i][wrong] @ coeff

    n_bad = math.floor(sample_corruption_fraction * n)
    if n_bad > 0:
        bad = rng_sample.choice(n, size=n_bad, replace=False)
        for i, V in enumerate(views):
            # full-range noise: far from every rank-r subspace, yet it
            # does not stretch the per-feature scale of the clean samples
            lo = V.min(axis=1, keepdims=True)
            hi = V.max(axis=1, keepdims=True)
            V[:, bad] = lo + (hi - lo) * rng_sample.uniform(
                size=(V.shape[0], n_bad)
            )

    return MultiViewDataset(views=views, labels=labels)
