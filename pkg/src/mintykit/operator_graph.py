"""Finite set-valued operators T: R^n => R^n stored as graphs."""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .linalg import as_points, as_vector, dot
from .polyhedra import DEFAULT_TOL, contains


class OperatorGraph:
    """A finite graph ``{(x_i, x_i^*)}`` grouped by point.

    Entries with equal points (within ``tol.eq_tol`` in every coordinate)
    are merged and their duals deduplicated. A point with no duals lies
    outside the domain D(T).

    Parameters
    ----------
    entries : iterable of (point, duals)
        `duals` is a (possibly empty) list of vectors.
    dim : int, optional
        Ambient dimension; inferred from the first point when omitted.
    """

    def __init__(self, entries, dim=None, label=None, tol=DEFAULT_TOL):
        points, duals = [], []
        for idx, (x, ds) in enumerate(entries):
            x = as_vector(x, dim=dim, name=f"entry {idx} point")
            dim = x.shape[0]
            ds = np.asarray(ds, dtype=float)
            if ds.size == 0:
                ds = np.zeros((0, dim))
            ds = as_points(ds.reshape(-1, dim) if ds.ndim == 1 else ds,
                           dim=dim, name=f"entry {idx} duals")
            for j, p in enumerate(points):
                if np.all(np.abs(p - x) <= tol.eq_tol):
                    duals[j] = np.vstack([duals[j], ds])
                    break
            else:
                points.append(x)
                duals.append(ds)
        if dim is None:
            raise ValueError("cannot infer dimension of an empty graph")
        self.dim = int(dim)
        self.label = label
        self._points = np.array(points, dtype=float).reshape(len(points), self.dim)
        self._points.setflags(write=False)
        merged = []
        for ds in duals:
            uniq = []
            for d in ds:
                if not any(np.all(np.abs(u - d) <= tol.eq_tol) for u in uniq):
                    uniq.append(d)
            arr = np.array(uniq, dtype=float).reshape(len(uniq), self.dim)
            arr.setflags(write=False)
            merged.append(arr)
        self._duals = tuple(merged)

    @classmethod
    def single_valued(cls, points, duals, label=None):
        """Graph with exactly one dual per point."""
        points = as_points(points)
        duals = as_points(duals, dim=points.shape[1])
        if len(points) != len(duals):
            raise DimensionError("points and duals differ in length")
        return cls([(p, [d]) for p, d in zip(points, duals)],
                   dim=points.shape[1], label=label)

    @property
    def points(self):
        return self._points

    @property
    def duals(self):
        return self._duals

    def __len__(self):
        return self._points.shape[0]

    def __iter__(self):
        return iter(zip(self._points, self._duals))

    def __repr__(self):
        return (f"OperatorGraph(dim={self.dim}, entries={len(self)}, "
                f"pairs={self.num_pairs})")

    def __eq__(self, other):
        if not isinstance(other, OperatorGraph):
            return NotImplemented
        return (self.dim == other.dim and len(self) == len(other)
                and np.array_equal(self._points, other._points)
                and all(a.shape == b.shape and np.array_equal(a, b)
                        for a, b in zip(self._duals, other._duals)))

    @property
    def num_pairs(self):
        return sum(d.shape[0] for d in self._duals)

    def domain_indices(self):
        """Indices of entries in D(T)."""
        return [i for i, d in enumerate(self._duals) if d.shape[0] > 0]

    def find(self, y, tol=DEFAULT_TOL):
        """Index of the entry at point `y`, or None."""
        y = as_vector(y, dim=self.dim, name="y")
        hits = np.nonzero(np.all(np.abs(self._points - y) <= tol.eq_tol, axis=1))[0]
        return int(hits[0]) if hits.size else None

    def flat(self):
        """Expand to one row per (point, dual) pair.

        Returns ``(owner, dual_index, P, D)`` where row r pairs point
        ``P[r]`` (entry ``owner[r]``) with its dual ``D[r]``.
        """
        owner, didx, P, D = [], [], [], []
        for i, (p, ds) in enumerate(self):
            for a, d in enumerate(ds):
                owner.append(i)
                didx.append(a)
                P.append(p)
                D.append(d)
        n = self.dim
        return (np.array(owner, dtype=int), np.array(didx, dtype=int),
                np.array(P, dtype=float).reshape(-1, n),
                np.array(D, dtype=float).reshape(-1, n))

    def subgraph(self, indices):
        return OperatorGraph([(self._points[i], self._duals[i]) for i in indices],
                             dim=self.dim, label=self.label)


@dataclass(frozen=True)
class Violation:
    """A pair ``((x, x*), (y, y*))`` and the pairing value it attains."""

    x: np.ndarray
    xstar: np.ndarray
    y: np.ndarray
    ystar: np.ndarray
    value: float
    entries: tuple   # (i, j) entry indices
    dual_indices: tuple   # (a, b) dual indices within those entries

    @property
    def pair(self):
        return (self.x, self.xstar), (self.y, self.ystar)


@dataclass(frozen=True)
class PairVerdict:
    holds: bool
    violation: Violation = None

    def __bool__(self):
        return self.holds


def monotone_pairing(x, xstar, y, ystar):
    """``<y* - x*, y - x>``."""
    return dot(np.subtract(ystar, xstar), np.subtract(y, x))


def quasimonotone_pairing(x, xstar, y, ystar):
    """``max(<x*, x - y>, <y*, y - x>)``."""
    return max(dot(xstar, np.subtract(x, y)), dot(ystar, np.subtract(y, x)))


def _pair_scan(T, values_fn, recompute, tol):
    owner, didx, P, D = T.flat()
    if owner.size < 2:
        return PairVerdict(True)
    M = D @ P.T                      # M[r, c] = <d_r, p_c>
    vals = values_fn(M)
    vals = np.where(owner[:, None] < owner[None, :], vals, np.inf)
    # argmin over row-major order breaks ties lexicographically
    r, c = np.unravel_index(np.argmin(vals), vals.shape)
    if not vals[r, c] < -tol.eq_tol:
        return PairVerdict(True)
    value = recompute(P[r], D[r], P[c], D[c])
    return PairVerdict(False, Violation(
        P[r].copy(), D[r].copy(), P[c].copy(), D[c].copy(), value,
        (int(owner[r]), int(owner[c])), (int(didx[r]), int(didx[c]))))


def is_monotone(T, tol=DEFAULT_TOL):
    """Check ``<y* - x*, y - x> >= -eq_tol`` over all pairs of the graph.

    On failure the most violating pair is returned.
    """
    def values(M):
        diag = np.diag(M)
        return diag[:, None] + diag[None, :] - M - M.T
    return _pair_scan(T, values, monotone_pairing, tol)


def is_quasimonotone(T, tol=DEFAULT_TOL):
    """Check ``max(<x*, x - y>, <y*, y - x>) >= -eq_tol`` over all pairs."""
    def values(M):
        diag = np.diag(M)
        return np.maximum(diag[:, None] - M, diag[None, :] - M.T)
    return _pair_scan(T, values, quasimonotone_pairing, tol)


def shift(T, xstar):
    """The operator ``x -> T(x) - xstar``."""
    xstar = as_vector(xstar, dim=T.dim, name="xstar")
    return OperatorGraph([(p, ds - xstar) for p, ds in T], dim=T.dim, label=T.label)


def restrict(T, K, tol=DEFAULT_TOL):
    """Entries of `T` whose point lies in the polytope `K`."""
    if K.dim != T.dim:
        raise DimensionError(f"K has dim {K.dim}, graph has dim {T.dim}")
    keep = [i for i, p in enumerate(T.points) if contains(K, [], p, tol)]
    return T.subgraph(keep)
