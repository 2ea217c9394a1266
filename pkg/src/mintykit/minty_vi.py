"""Minty variational inequalities on polytopes and the converse-Minty witness.

MVI(T, x*, K): find ``xbar in K`` with ``<y* - x*, y - xbar> >= 0`` for every
``(y, y*)`` in T with ``y in K``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InternalInconsistency
from .gamma_map import gamma_halfspace
from .linalg import as_vector, dot
from .operator_graph import OperatorGraph, is_monotone, restrict
from .polyhedra import DEFAULT_TOL, VPolytope, feasible_in_hull


@dataclass(frozen=True)
class MVIProblem:
    T: OperatorGraph
    xstar: np.ndarray
    K: VPolytope

    def __post_init__(self):
        xs = as_vector(self.xstar, name="xstar")
        if not self.T.dim == xs.shape[0] == self.K.dim:
            raise DimensionError(
                f"dimensions disagree: T {self.T.dim}, x* {xs.shape[0]}, "
                f"K {self.K.dim}")
        object.__setattr__(self, "xstar", xs)


def mvi_constraints(T, xstar):
    """One half-space per graph pair, with its (entry, dual) label."""
    cons, labels = [], []
    for i, (p, ds) in enumerate(T):
        for a, d in enumerate(ds):
            cons.append(gamma_halfspace(p, d, xstar))
            labels.append((i, a))
    return cons, labels


def solve_mvi(p, tol=DEFAULT_TOL):
    """Solve MVI(T, x*) over K by a barycentric LP.

    The infeasibility certificate lists ``(entry, dual)`` labels, indexed
    into the restricted graph ``restrict(T, K)``, of an irreducible
    infeasible subset of the inequalities.
    """
    TK = restrict(p.T, p.K, tol)
    cons, labels = mvi_constraints(TK, p.xstar)
    res = feasible_in_hull(p.K, cons, tol)
    if res.feasible:
        return res
    cert = tuple(labels[j] for j in res.certificate)
    return type(res)(res.status, slack=res.slack, certificate=cert,
                     meta={"restricted": TK})


def solve_finite_mvi(T, subset, xstar, tol=DEFAULT_TOL):
    """Finite subsystem: K is the hull of the chosen entries' points."""
    subset = [int(i) for i in subset]
    if not subset:
        raise ValueError("subset must be non-empty")
    for i in subset:
        if not 0 <= i < len(T):
            raise IndexError(f"entry index {i} out of range for {len(T)} entries")
    sub = T.subgraph(subset)
    K = VPolytope(sub.points)
    cons, labels = mvi_constraints(sub, xstar)
    res = feasible_in_hull(K, cons, tol)
    if res.feasible:
        return res
    cert = tuple((subset[labels[j][0]], labels[j][1]) for j in res.certificate)
    return type(res)(res.status, slack=res.slack, certificate=cert)


@dataclass(frozen=True)
class MonotonicityWitness:
    """Shift z* making the two-point MVI on a violating pair unsolvable."""

    zstar: np.ndarray
    pair: tuple
    delta: float

    @property
    def a(self):
        """``<x* - z*, y - x>``, equal to delta / 2."""
        (x, xs), (y, _) = self.pair
        return dot(xs - self.zstar, y - x)

    @property
    def b(self):
        """``<y* - z*, y - x>``, equal to -delta / 2."""
        (x, _), (y, ys) = self.pair
        return dot(ys - self.zstar, y - x)

    def problem(self):
        (x, xs), (y, ys) = self.pair
        T = OperatorGraph([(x, [xs]), (y, [ys])])
        return MVIProblem(T, self.zstar, VPolytope(np.array([x, y])))


def construct_witness(pair, tol=DEFAULT_TOL):
    """Build ``z* = x* - delta / (2 ||y - x||^2) (y - x)`` for a violating pair.

    Here ``delta = -<y* - x*, y - x> > 0``. Then ``<x* - z*, y - x> = delta/2``
    and ``<y* - z*, y - x> = -delta/2``, so on the segment [x, y] the first
    Minty inequality pins xbar to x and the second pins it to y.
    """
    (x, xs), (y, ys) = pair
    x, xs, y, ys = (as_vector(v) for v in (x, xs, y, ys))
    d = y - x
    nd2 = dot(d, d)
    if nd2 == 0:
        raise ValueError("pair points coincide")
    delta = -dot(ys - xs, d)
    if not delta > tol.eq_tol:
        raise ValueError(f"pair is not a monotonicity violation (delta={delta!r})")
    zstar = xs - (delta / (2.0 * nd2)) * d
    return MonotonicityWitness(zstar, ((x, xs), (y, ys)), delta)


def classify_via_mvi(T, trials, rng, tol=DEFAULT_TOL, max_subset=6):
    """Monotonicity verdict cross-validated by Minty probes.

    The pairwise check decides. When T is monotone, `trials` random
    ``(x*, subset)`` finite MVIs must all be solvable; otherwise the witness
    built from the violating pair must give an unsolvable two-point MVI.
    Any disagreement raises :class:`InternalInconsistency`.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    verdict = is_monotone(T, tol)
    dom = T.domain_indices()
    if verdict.holds:
        if not dom:
            return verdict
        scale = _dual_scale(T)
        for _ in range(trials):
            xstar = rng.normal(scale=scale, size=T.dim)
            size = int(rng.integers(1, min(max_subset, len(dom)) + 1))
            subset = sorted(rng.choice(dom, size=size, replace=False).tolist())
            if not solve_finite_mvi(T, subset, xstar, tol).feasible:
                raise InternalInconsistency(
                    f"monotone graph but MVI infeasible for subset {subset}")
        return verdict
    w = construct_witness(verdict.violation.pair, tol)
    if solve_mvi(w.problem(), tol).feasible:
        raise InternalInconsistency("witness shift did not make the MVI infeasible")
    return verdict


def _dual_scale(T):
    _, _, _, D = T.flat()
    return float(np.max(np.abs(D))) + 1.0 if D.size else 1.0
