"""Dense vector arithmetic and convex-combination helpers.

Vectors are 1-D ``float64`` numpy arrays. Point lists are 2-D arrays with
one point per row.
"""

import numpy as np

from .errors import DimensionError, InvalidWeightsError

WEIGHT_SUM_TOL = 1e-12


def as_vector(x, dim=None, name="vector"):
    """Return `x` as a finite 1-D float array, optionally checking its length."""
    v = np.asarray(x, dtype=float)
    if v.ndim == 0:
        v = v.reshape(1)
    if v.ndim != 1:
        raise DimensionError(f"{name} must be 1-D, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise DimensionError(f"{name} has dimension {v.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} has non-finite entries")
    return v


def as_points(points, dim=None, name="points"):
    """Return `points` as a finite (k, n) float array."""
    p = np.asarray(points, dtype=float)
    if p.ndim == 1:
        p = p.reshape(-1, 1) if dim == 1 else p.reshape(1, -1)
    if p.ndim != 2:
        raise DimensionError(f"{name} must be a list of vectors, got shape {p.shape}")
    if dim is not None and p.shape[1] != dim:
        raise DimensionError(f"{name} have dimension {p.shape[1]}, expected {dim}")
    if not np.all(np.isfinite(p)):
        raise ValueError(f"{name} have non-finite entries")
    return p


def dot(u, v):
    """Inner product summed in index order."""
    u = as_vector(u, name="u")
    v = as_vector(v, name="v")
    if u.shape != v.shape:
        raise DimensionError(f"dimension mismatch: {u.shape[0]} vs {v.shape[0]}")
    total = 0.0
    for a, b in zip(u.tolist(), v.tolist()):
        total += a * b
    return total


def check_weights(weights):
    """Validate convex weights and return them as an array."""
    w = as_vector(weights, name="weights")
    if w.size == 0:
        raise InvalidWeightsError("weights must be non-empty")
    if np.any(w < 0):
        raise InvalidWeightsError(f"negative weight {w.min()!r}")
    if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
        raise InvalidWeightsError(f"weights sum to {w.sum()!r}, not 1")
    return w


def convex_combination(points, weights):
    """Return ``sum_i weights[i] * points[i]``."""
    pts = as_points(points)
    w = check_weights(weights)
    if pts.shape[0] != w.shape[0]:
        raise InvalidWeightsError(
            f"{pts.shape[0]} points but {w.shape[0]} weights")
    if np.all(pts == pts[0]):
        return pts[0].copy()
    out = np.zeros(pts.shape[1])
    for wi, p in zip(w, pts):
        out += wi * p
    return out


def sample_simplex_weights(k, rng):
    """Draw weights uniformly from the standard (k-1)-simplex.

    Uses normalized unit exponentials, i.e. a flat Dirichlet draw.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if k == 1:
        return np.ones(1)
    e = rng.standard_exponential(k)
    w = e / e.sum()
    # renormalize once more so the sum is 1 to machine precision
    w = w / w.sum()
    return w
