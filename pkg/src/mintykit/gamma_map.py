"""The convex-valued map Gamma_{T - x*} and its KKM / finite-intersection tests.

For a graph T and a shift x*, ``Gamma(y) = {x : <y* - x*, y - x> >= 0 for all
y* in T(y)}``; it is the whole space when y has no duals.
"""

import itertools
import logging
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import (ConvergenceError, InvariantBreach,
                     SelectionCapExceeded)
from .linalg import as_vector
from .polyhedra import (DEFAULT_TOL, HalfSpace, HPolyhedron, VPolytope,
                        feasible_in_hull, project_onto,
                        strictly_feasible_in_hull)

log = logging.getLogger(__name__)

DEFAULT_SELECTION_CAP = 10**5


def selection_cap():
    """Selection cap, overridable through ``MINTYKIT_SELECTION_CAP``."""
    raw = os.environ.get("MINTYKIT_SELECTION_CAP")
    return int(raw) if raw else DEFAULT_SELECTION_CAP


def gamma_halfspace(y, ystar, xstar):
    """``{x : <y* - x*, y - x> >= 0}`` written as ``<-(y* - x*), x> >= -<y* - x*, y>``."""
    a = np.asarray(ystar, dtype=float) - np.asarray(xstar, dtype=float)
    if not np.any(a):
        return HalfSpace(np.zeros_like(a), 0.0)
    return HalfSpace(-a, -float(a @ np.asarray(y, dtype=float)))


def gamma_polyhedron(T, y, xstar, tol=DEFAULT_TOL):
    """Gamma_{T - x*}(y) as an H-polyhedron, one half-space per dual of y."""
    y = as_vector(y, dim=T.dim, name="y")
    xstar = as_vector(xstar, dim=T.dim, name="xstar")
    i = T.find(y, tol)
    if i is None:
        return HPolyhedron((), T.dim)
    return HPolyhedron(tuple(gamma_halfspace(y, d, xstar) for d in T.duals[i]),
                       T.dim)


@dataclass(frozen=True)
class GammaSystem:
    """Base points A, their Gamma polyhedra, and the hull [A]."""

    base_indices: tuple
    base_points: np.ndarray
    duals: tuple
    polyhedra: tuple
    hull: VPolytope
    shift_used: np.ndarray

    @property
    def size(self):
        return len(self.base_indices)

    def all_constraints(self):
        return [h for poly in self.polyhedra for h in poly]

    def sub(self, positions):
        """Subsystem on the given base positions, with its own hull."""
        positions = tuple(positions)
        return GammaSystem(
            tuple(self.base_indices[p] for p in positions),
            self.base_points[list(positions)],
            tuple(self.duals[p] for p in positions),
            tuple(self.polyhedra[p] for p in positions),
            VPolytope(self.base_points[list(positions)]),
            self.shift_used)


def build_gamma_system(T, A, xstar):
    """GammaSystem for base entries `A` (indices into T, all in D(T))."""
    xstar = as_vector(xstar, dim=T.dim, name="xstar")
    A = tuple(int(i) for i in A)
    if not A:
        raise ValueError("base set A must be non-empty")
    for i in A:
        if not 0 <= i < len(T):
            raise IndexError(f"entry index {i} out of range for {len(T)} entries")
        if T.duals[i].shape[0] == 0:
            raise ValueError(f"entry {i} is outside D(T) (no duals)")
    pts = T.points[list(A)].copy()
    duals = tuple(T.duals[i] for i in A)
    polys = tuple(
        HPolyhedron(tuple(gamma_halfspace(p, d, xstar) for d in ds), T.dim)
        for p, ds in zip(pts, duals))
    return GammaSystem(A, pts, duals, polys, VPolytope(pts), xstar)


@dataclass(frozen=True)
class KKMVerdict:
    holds: bool
    point: np.ndarray = None
    selection: tuple = None
    slack: float = None

    def __bool__(self):
        return self.holds


def check_kkm(sys, tol=DEFAULT_TOL, cap=None):
    """Decide whether [A] is covered by the union of the Gamma values.

    A point is uncovered iff for every base point some dual is strictly
    violated, so the uncovered set is a union over dual selections of open
    polyhedra. Selections are scanned in lexicographic order; the first one
    with a strictly feasible point (slack >= strict_margin) gives the
    counterexample. Only the full base set is tested; see
    :func:`kkm_property` for the condition over all sub-collections.
    """
    cap = selection_cap() if cap is None else cap
    sizes = [d.shape[0] for d in sys.duals]
    product = math.prod(sizes)
    if product > cap:
        raise SelectionCapExceeded(product, cap)
    for sel in itertools.product(*(range(s) for s in sizes)):
        opens = []
        for poly, a in zip(sys.polyhedra, sel):
            h = poly.constraints[a]
            if h.is_degenerate:
                break   # Gamma is the whole space, nothing escapes it
            opens.append(h.complement())
        else:
            res = strictly_feasible_in_hull(sys.hull, opens, tol)
            if res.feasible:
                return KKMVerdict(False, res.witness, tuple(sel), res.slack)
    return KKMVerdict(True)


def check_fip(sys, tol=DEFAULT_TOL):
    """Decide whether [A] meets the intersection of all Gamma values.

    As with :func:`check_kkm`, only the full base set is tested.
    """
    return feasible_in_hull(sys.hull, sys.all_constraints(), tol)


@dataclass(frozen=True)
class SubsetVerdict:
    """Outcome of a predicate required on every sub-collection of A.

    `subset` names the first failing sub-collection (as indices into T) and
    `result` carries that sub-collection's KKMVerdict or FeasibilityResult.
    """

    holds: bool
    subset: tuple = None
    result: object = None

    def __bool__(self):
        return self.holds


def subcollections(sys, proper=False):
    """Non-empty position tuples of the base points, smallest first."""
    m = sys.size
    top = m - 1 if proper else m
    for r in range(1, top + 1):
        yield from itertools.combinations(range(m), r)


def kkm_property(sys, tol=DEFAULT_TOL, cap=None, proper=False):
    """(KKM) for the Gamma map with domain A: check_kkm on every sub-collection."""
    for pos in subcollections(sys, proper):
        v = check_kkm(sys.sub(pos), tol, cap)
        if not v.holds:
            return SubsetVerdict(False, tuple(sys.base_indices[p] for p in pos), v)
    return SubsetVerdict(True)


def fip_property(sys, tol=DEFAULT_TOL, proper=False):
    """(FIP) for the Gamma map with domain A: check_fip on every sub-collection."""
    for pos in subcollections(sys, proper):
        r = check_fip(sys.sub(pos), tol)
        if not r.feasible:
            return SubsetVerdict(False, tuple(sys.base_indices[p] for p in pos), r)
    return SubsetVerdict(True)


def _settled(y, f, sets, tol):
    """f within fip_tol and every Gamma constraint met within eq_tol."""
    if f > tol.fip_tol:
        return False
    return all(h.slack(y) >= -tol.eq_tol for _, cons in sets for h in cons)


def _fip_value(y, sets, tol):
    """``f(y) = max_i d(y, G_i)``, the farthest set index and its nearest point."""
    best = (-1.0, None, None)
    for i, (hull, cons) in enumerate(sets):
        d, p = project_onto(y, hull, cons, tol)
        if d > best[0]:
            best = (d, i, p)
    return best


def constructive_fip(sys, tol=DEFAULT_TOL, max_iters=2000, stats=None):
    """Find a point of ``[A] ∩ Gamma(x_1) ∩ ... ∩ Gamma(x_m)`` by induction on m.

    For each j a point y_j of the intersection of the other sets is found
    recursively (on the subsystem without x_j and its own hull). Then
    ``f(y) = max_i d(y, G_i)``, with ``G_i = Gamma(x_i) ∩ [A]``, is minimized
    over ``conv{y_1, ..., y_m}`` by projected subgradient steps with the
    Polyak step length for optimal value 0. Since each d(., G_i) has unit
    gradient, the Polyak step lands exactly on the projection onto the
    farthest G_i; the result is then projected back onto the hull of the
    y_j. Iteration stops once f <= fip_tol and every Gamma constraint holds
    within eq_tol. Success is guaranteed when :func:`kkm_property` holds,
    since the recursion visits every sub-collection of A.

    Raises
    ------
    ConvergenceError
        `max_iters` exhausted with ``f > tol.fip_tol``; ``.value`` holds f.
    InvariantBreach
        A subsystem turned out to have empty intersection.

    If `stats` is a dict it receives ``subsystems`` (recursion nodes solved)
    and ``iterations`` (minimax steps taken over all nodes).
    """
    memo = {}
    counts = {"subsystems": 0, "iterations": 0}
    if stats is not None:
        stats.update(counts)
        counts = stats

    def solve(positions):
        if positions in memo:
            return memo[positions]
        counts["subsystems"] += 1
        sub = sys.sub(positions)
        sets = [(sub.hull, list(poly)) for poly in sub.polyhedra]
        if len(positions) == 1:
            x1 = sub.base_points[0]
            d, p = project_onto(x1, *sets[0], tol)
            memo[positions] = p
            return p
        ys = []
        for j in range(len(positions)):
            rest = positions[:j] + positions[j + 1:]
            ys.append(solve(rest))
        for y in ys:
            f, _, _ = _fip_value(y, sets, tol)
            if _settled(y, f, sets, tol):
                memo[positions] = y
                return y
        K = VPolytope(np.array(ys))
        y = K.vertices.mean(axis=0)
        f = np.inf
        for _ in range(max_iters):
            f, _, p = _fip_value(y, sets, tol)
            counts["iterations"] += 1
            if _settled(y, f, sets, tol):
                memo[positions] = y
                return y
            _, y = project_onto(p, K, [], tol)
        f, _, _ = _fip_value(y, sets, tol)
        if _settled(y, f, sets, tol):
            memo[positions] = y
            return y
        if len(positions) < sys.size:
            raise InvariantBreach(
                f"subsystem {tuple(sub.base_indices)} failed to reach "
                f"f <= fip_tol (f = {f:.3e}); intersection likely empty")
        raise ConvergenceError(
            f"constructive FIP stopped at f = {f:.3e} after {max_iters} "
            "iterations", value=f)

    return solve(tuple(range(sys.size)))


def fip_objective(sys, y, tol=DEFAULT_TOL):
    """``max_i d(y, Gamma(x_i) ∩ [A])`` for the full system."""
    sets = [(sys.hull, list(poly)) for poly in sys.polyhedra]
    return _fip_value(as_vector(y, dim=sys.hull.dim), sets, tol)[0]
