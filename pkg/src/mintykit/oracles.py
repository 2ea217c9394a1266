"""Brute-force sampling oracles for low-dimensional cross-checks.

These avoid the LP machinery entirely: hull membership comes from qhull
facet equations (or a parametrized segment), and predicates are evaluated
on a dense sample of the hull.
"""

import numpy as np
from scipy.spatial import ConvexHull


def hull_samples(V, count=10_000):
    """Dense sample of conv(V) for 1-D or 2-D generator sets.

    Returns ``(samples, radius)`` where every hull point lies within
    `radius` of some sample. At least `count` samples are produced unless
    the hull is a single point.
    """
    V = np.asarray(V, dtype=float)
    n = V.shape[1]
    if n > 2:
        raise ValueError("grid oracle supports dimensions 1 and 2 only")
    center = V.mean(axis=0)
    U, s, Wt = np.linalg.svd(V - center, full_matrices=False)
    scale = s[0] if s.size else 0.0
    rank = int(np.sum(s > 1e-12 * max(scale, 1.0)))
    if rank == 0:
        return V[:1].copy(), 0.0
    if rank == 1:
        u = Wt[0]
        t = (V - center) @ u
        ts = np.linspace(t.min(), t.max(), count)
        return center + ts[:, None] * u, (t.max() - t.min()) / (2 * (count - 1))
    hull = ConvexHull(V)
    lo, hi = V.min(axis=0), V.max(axis=0)
    side = int(np.ceil(np.sqrt(count)))
    while True:
        xs = np.linspace(lo[0], hi[0], side)
        ys = np.linspace(lo[1], hi[1], side)
        G = np.stack(np.meshgrid(xs, ys), axis=-1).reshape(-1, 2)
        inside = np.all(G @ hull.equations[:, :2].T + hull.equations[:, 2] <= 1e-12,
                        axis=1)
        G = G[inside]
        if G.shape[0] >= count:
            break
        side = int(side * 1.5) + 1
    h = max(xs[1] - xs[0], ys[1] - ys[0])
    # edge samples keep thin corners within one grid step of a sample
    verts = V[hull.vertices]
    edges = []
    for a, b in zip(verts, np.roll(verts, -1, axis=0)):
        m = max(2, int(np.ceil(np.linalg.norm(b - a) / h)) + 1)
        edges.append(a + np.linspace(0, 1, m)[:, None] * (b - a))
    return np.vstack([G] + edges), h


def uncovered_margin(sys, X):
    """For each sample: how far it is outside every Gamma value.

    Value ``min_i max_a (-normalized slack of dual a of base point i)``;
    positive means the sample escapes all Gamma sets by that margin.
    """
    margins = np.full(X.shape[0], np.inf)
    for poly in sys.polyhedra:
        worst = np.full(X.shape[0], -np.inf)
        for h in poly:
            w = np.linalg.norm(h.normal)
            if w == 0:
                v = np.full(X.shape[0], -np.inf)   # whole space: never escaped
            else:
                v = -(X @ h.normal - h.offset) / w
            worst = np.maximum(worst, v)
        margins = np.minimum(margins, worst)
    return margins


def min_raw_slack(cons, X):
    """Smallest raw slack over all constraints, per sample."""
    out = np.full(X.shape[0], np.inf)
    for h in cons:
        out = np.minimum(out, X @ h.normal - h.offset)
    return out


def min_normalized_slack(cons, X):
    out = np.full(X.shape[0], np.inf)
    for h in cons:
        w = np.linalg.norm(h.normal)
        if w > 0:
            out = np.minimum(out, (X @ h.normal - h.offset) / w)
    return out
