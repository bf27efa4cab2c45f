"""Gaussian RBF kernel, Gram matrices, and random Fourier feature maps.

The feature map follows Rahimi-Recht: phi_i(x) = sqrt(2/d) * cos(w_i . x + b_i)
with w_i ~ N(0, sigma^-2 I) and b_i ~ U[0, 2pi), so that phi(x) . phi(y)
approximates exp(-||x - y||^2 / (2 sigma^2)).  Replacing the (n+m)^2 Gram
matrix with (n+m) x d features drops the per-step optimization cost from
quadratic to linear in the pooled sample count.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist, pdist

from .errors import InvalidInputError

DEFAULT_FEATURE_DIM = 1024


@dataclass(frozen=True)
class KernelSpec:
    """Gaussian RBF kernel with length scale ``bandwidth`` (same units as the data)."""

    bandwidth: float

    def __post_init__(self):
        if not np.isfinite(self.bandwidth) or self.bandwidth <= 0:
            raise InvalidInputError(f"bandwidth must be a positive finite real, got {self.bandwidth}")


@dataclass(frozen=True)
class GramMatrix:
    """Pairwise kernel evaluations over the pooled samples.

    Rows 1..n correspond to X-samples, rows n+1..n+m to Y-samples.
    Entries lie in (0, 1] with a unit diagonal and the matrix is symmetric PSD.
    """

    entries: np.ndarray
    n: int
    m: int

    @property
    def size(self):
        return self.n + self.m


@dataclass(frozen=True)
class FeatureMap:
    """Sampled random-feature projection approximating an RBF kernel.

    frequencies: (d, D) rows drawn N(0, bandwidth^-2 I); offsets: (d,) phases.
    Each feature coordinate is bounded by sqrt(2/d), so ||phi(x)||^2 <= 2.
    """

    frequencies: np.ndarray
    offsets: np.ndarray

    @property
    def dim(self):
        return self.frequencies.shape[0]

    @property
    def input_dim(self):
        return self.frequencies.shape[1]


def _as_2d(samples, name):
    arr = np.asarray(samples, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise InvalidInputError(f"{name} must be a nonempty n x D sample matrix")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite values")
    return arr


def rbf_kernel(x, y, spec):
    """Evaluate exp(-||x - y||^2 / (2 sigma^2)); always in (0, 1], symmetric."""
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise InvalidInputError("rbf_kernel inputs must be finite")
    if x.shape != y.shape:
        raise InvalidInputError(f"dimension mismatch: {x.shape} vs {y.shape}")
    sq = float(np.sum((x - y) ** 2))
    return float(np.exp(-sq / (2.0 * spec.bandwidth**2)))


def build_gram(X, Y, spec):
    """Kernel matrix over the pooled samples Z = X ++ Y (X rows first)."""
    X = _as_2d(X, "X")
    Y = _as_2d(Y, "Y")
    if X.shape[1] != Y.shape[1]:
        raise InvalidInputError(f"X has dimension {X.shape[1]} but Y has dimension {Y.shape[1]}")
    Z = np.vstack([X, Y])
    sq = cdist(Z, Z, metric="sqeuclidean")
    entries = np.exp(-sq / (2.0 * spec.bandwidth**2))
    # exact symmetry / unit diagonal regardless of cdist rounding
    entries = 0.5 * (entries + entries.T)
    np.fill_diagonal(entries, 1.0)
    return GramMatrix(entries=entries, n=X.shape[0], m=Y.shape[0])


def median_heuristic_bandwidth(X, Y, max_points=1000, seed=0):
    """Median pairwise distance over a subsample of <= max_points pooled points.

    Deterministic given the seed.  Falls back to 1.0 when all sampled points
    coincide (zero median), so downstream code never divides by zero.
    """
    X = _as_2d(X, "X")
    Y = _as_2d(Y, "Y")
    Z = np.vstack([X, Y])
    if Z.shape[0] > max_points:
        rng = np.random.default_rng(seed)
        idx = rng.choice(Z.shape[0], size=max_points, replace=False)
        Z = Z[idx]
    dists = pdist(Z)
    med = float(np.median(dists)) if dists.size else 0.0
    return med if med > 0 else 1.0


def sample_feature_map(input_dim, feature_dim, spec, seed=0):
    """Draw a random Fourier feature map for the given RBF kernel.

    Deterministic given the seed; frequencies i.i.d. N(0, bandwidth^-2) per
    coordinate, offsets i.i.d. uniform on [0, 2pi).
    """
    if input_dim < 1 or feature_dim < 1:
        raise InvalidInputError("input_dim and feature_dim must be >= 1")
    rng = np.random.default_rng(seed)
    frequencies = rng.normal(0.0, 1.0 / spec.bandwidth, size=(feature_dim, input_dim))
    offsets = rng.uniform(0.0, 2.0 * np.pi, size=feature_dim)
    return FeatureMap(frequencies=frequencies, offsets=offsets)


def apply_feature_map(fm, x, dtype=float):
    """Map one D-vector (or an n x D matrix, row-wise) into feature space.

    ``dtype=np.float32`` computes the projection in single precision, which
    roughly halves the cost for large sample matrices.
    """
    x = np.asarray(x, dtype=dtype)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != fm.input_dim:
        raise InvalidInputError(f"input dimension {x.shape} does not match feature map ({fm.input_dim})")
    proj = x @ fm.frequencies.T.astype(dtype)
    proj += fm.offsets.astype(dtype)
    np.cos(proj, out=proj)
    proj *= np.sqrt(2.0 / fm.dim)
    return proj[0] if single else proj
