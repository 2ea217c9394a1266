"""Linear and conic feasibility over V-polytopes cut by half-spaces.

Every problem is posed in barycentric coordinates: a point of the hull is
``V.T @ lam`` with ``lam >= 0`` and ``sum(lam) == 1``, so affinely
dependent generators need no special handling. LPs are solved with HiGHS
(via :func:`scipy.optimize.linprog`); Euclidean projections are solved as
second-order cone programs with Clarabel.
"""

import dataclasses
import enum
import logging
from dataclasses import dataclass, field

import clarabel
import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from .errors import DimensionError, EmptySetError, InternalInconsistency
from .linalg import as_points, as_vector

log = logging.getLogger(__name__)

# slack noise tolerated on top of eq_tol when re-verifying LP witnesses
_FUZZ = 1e-12
_HIGHS = {"primal_feasibility_tolerance": 1e-10,
          "dual_feasibility_tolerance": 1e-10}


@dataclass(frozen=True)
class Tolerance:
    """All comparison thresholds used by the package."""

    eq_tol: float = 1e-9
    strict_margin: float = 1e-7
    qp_tol: float = 1e-8
    fip_tol: float = 1e-6

    def __post_init__(self):
        if not self.qp_tol > 0:
            raise ValueError("qp_tol must be positive")
        if not 0 < self.eq_tol < self.strict_margin:
            raise ValueError("need 0 < eq_tol < strict_margin")
        if not self.fip_tol > 0:
            raise ValueError("fip_tol must be positive")

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_overrides(cls, **kw):
        """Defaults updated by `kw`, ignoring None values.

        Raising eq_tol alone past the default strict_margin carries the
        margin along at the default ratio, so a loosened tolerance stays valid.
        """
        kw = {k: v for k, v in kw.items() if v is not None}
        if "strict_margin" not in kw and kw.get("eq_tol", 0) >= cls.strict_margin:
            kw["strict_margin"] = kw["eq_tol"] * (cls.strict_margin / cls.eq_tol)
        return cls(**kw)

    def as_dict(self):
        return dataclasses.asdict(self)


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class HalfSpace:
    """``{x : <normal, x> >= offset}``, or ``>`` when `strict`.

    A zero normal is only allowed for the non-strict whole-space case
    (``offset <= 0``).
    """

    normal: np.ndarray
    offset: float
    strict: bool = False

    def __post_init__(self):
        a = as_vector(self.normal, name="normal")
        a.setflags(write=False)
        object.__setattr__(self, "normal", a)
        object.__setattr__(self, "offset", float(self.offset))
        if not np.isfinite(self.offset):
            raise ValueError("offset must be finite")
        if self.is_degenerate and (self.strict or self.offset > 0):
            raise ValueError("zero normal only allowed for the whole space")

    @property
    def dim(self):
        return self.normal.shape[0]

    @property
    def is_degenerate(self):
        return not np.any(self.normal)

    def slack(self, x):
        """``<normal, x> - offset``; non-negative means satisfied."""
        return float(self.normal @ np.asarray(x, dtype=float)) - self.offset

    def complement(self):
        """The open half-space of points violating this closed one."""
        if self.strict:
            raise ValueError("complement of a strict half-space is not open")
        return HalfSpace(-self.normal, -self.offset, strict=True)

    def relaxed(self):
        return HalfSpace(self.normal, self.offset, strict=False)


@dataclass(frozen=True)
class HPolyhedron:
    """Intersection of closed half-spaces; no constraints means all of R^n."""

    constraints: tuple
    dim: int

    def __post_init__(self):
        cons = tuple(self.constraints)
        for h in cons:
            if h.strict:
                raise ValueError("HPolyhedron constraints must be non-strict")
            if h.dim != self.dim:
                raise DimensionError(f"half-space of dim {h.dim} in R^{self.dim}")
        object.__setattr__(self, "constraints", cons)

    def __len__(self):
        return len(self.constraints)

    def __iter__(self):
        return iter(self.constraints)

    def min_slack(self, x):
        if not self.constraints:
            return np.inf
        return min(h.slack(x) for h in self.constraints)


@dataclass(frozen=True)
class VPolytope:
    """Convex hull of a non-empty list of generators (rows of `vertices`)."""

    vertices: np.ndarray

    def __post_init__(self):
        v = as_points(self.vertices, name="vertices")
        if v.shape[0] == 0:
            raise ValueError("VPolytope needs at least one generator")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def dim(self):
        return self.vertices.shape[1]

    def __len__(self):
        return self.vertices.shape[0]

    def point(self, lam):
        return self.vertices.T @ lam


class Status(enum.Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class FeasibilityResult:
    status: Status
    witness: np.ndarray = None
    weights: np.ndarray = None
    slack: float = None
    certificate: tuple = None
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def feasible(self):
        return self.status is Status.FEASIBLE

    def __bool__(self):
        return self.feasible


def _check_dims(hull, cons):
    for j, h in enumerate(cons):
        if h.dim != hull.dim:
            raise DimensionError(
                f"constraint {j} has dim {h.dim}, hull has dim {hull.dim}")


def _clean_weights(lam):
    lam = np.clip(np.asarray(lam, dtype=float), 0.0, None)
    s = lam.sum()
    if s <= 0:
        raise InternalInconsistency("LP returned all-zero weights")
    return lam / s


def _first_vertex(V):
    lam = np.zeros(V.shape[0])
    lam[0] = 1.0
    return lam


def _max_slack_lp(V, N, b, cap):
    """Maximize s subject to N V^T lam >= b + s, lam in the simplex, s <= cap.

    Returns (s, lam). The LP is always feasible (s may be very negative).
    """
    k = V.shape[0]
    m = N.shape[0]
    c = np.zeros(k + 1)
    c[-1] = -1.0
    A_ub = np.hstack([-(N @ V.T), np.ones((m, 1))])
    b_ub = -b
    A_eq = np.hstack([np.ones((1, k)), np.zeros((1, 1))])
    bounds = [(0, None)] * k + [(None, cap)]
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1.0],
                  bounds=bounds, method="highs", options=_HIGHS)
    if res.status != 0:
        raise InternalInconsistency(f"max-slack LP failed: {res.message}")
    return float(res.x[-1]), _clean_weights(res.x[:k])


def _stack(cons):
    N = np.array([h.normal for h in cons], dtype=float).reshape(len(cons), -1)
    b = np.array([h.offset for h in cons], dtype=float)
    return N, b


def _slack_cap(hull):
    v = hull.vertices
    return 1.0 + 2.0 * float(np.max(np.linalg.norm(v - v.mean(axis=0), axis=1)))


def _infeasible_subset(hull, cons, tol):
    """Deletion filter: indices of an irreducible infeasible subsystem."""
    keep = list(range(len(cons)))
    for j in list(keep):
        trial = [i for i in keep if i != j]
        if not _relaxed_feasible(hull, [cons[i] for i in trial], tol)[0]:
            keep = trial
    return tuple(keep)


def _relaxed_feasible(hull, cons, tol):
    """Core of feasible_in_hull: returns (feasible, lam, normalized slack)."""
    live = []
    for h in cons:
        if h.is_degenerate:
            if h.offset > tol.eq_tol:
                return False, None, None
            continue
        live.append(h)
    V = hull.vertices
    if not live:
        return True, _first_vertex(V), np.inf
    N, b = _stack(live)
    w = np.linalg.norm(N, axis=1)
    # s is a Euclidean slack on top of the eq_tol relaxation
    s, lam = _max_slack_lp(V, N / w[:, None], (b - tol.eq_tol) / w, _slack_cap(hull))
    if s < -_FUZZ:
        return False, None, s
    return True, lam, s


def feasible_in_hull(hull, cons, tol=DEFAULT_TOL):
    """Decide whether ``hull`` meets every closed half-space in `cons`.

    Constraints are relaxed by ``tol.eq_tol``. A feasible witness is the
    point of maximal normalized slack, so it sits as deep inside the
    feasible region as possible. An infeasible result carries the indices
    of an irreducible infeasible subsystem of `cons`.
    """
    cons = list(cons)
    _check_dims(hull, cons)
    for h in cons:
        if h.strict:
            raise ValueError("feasible_in_hull takes non-strict constraints")
    ok, lam, s = _relaxed_feasible(hull, cons, tol)
    if not ok:
        return FeasibilityResult(Status.INFEASIBLE, slack=s,
                                 certificate=_infeasible_subset(hull, cons, tol))
    x = hull.point(lam)
    for j, h in enumerate(cons):
        if h.slack(x) < -tol.eq_tol - _FUZZ:
            raise InternalInconsistency(
                f"LP witness violates constraint {j} by {-h.slack(x)!r}")
    return FeasibilityResult(Status.FEASIBLE, witness=x, weights=lam, slack=s)


def strictly_feasible_in_hull(hull, cons, tol=DEFAULT_TOL):
    """Decide whether some hull point satisfies every open half-space.

    Maximizes the common normalized slack; feasible iff the optimum is at
    least ``tol.strict_margin``. Optima between eq_tol and strict_margin
    are reported infeasible and logged as near-degenerate.
    """
    cons = list(cons)
    _check_dims(hull, cons)
    V = hull.vertices
    if not cons:
        lam = _first_vertex(V)
        return FeasibilityResult(Status.FEASIBLE, witness=hull.point(lam),
                                 weights=lam, slack=np.inf)
    N, b = _stack(cons)
    w = np.linalg.norm(N, axis=1)
    s, lam = _max_slack_lp(V, N / w[:, None], b / w, _slack_cap(hull))
    if s >= tol.strict_margin:
        return FeasibilityResult(Status.FEASIBLE, witness=hull.point(lam),
                                 weights=lam, slack=s)
    near = tol.eq_tol < s
    if near:
        log.info("near-degenerate strict feasibility: max slack %.3e in "
                 "(eq_tol, strict_margin)", s)
    return FeasibilityResult(Status.INFEASIBLE, slack=s,
                             certificate=tuple(range(len(cons))),
                             meta={"near_degenerate": near})


_CLARABEL_OK = {"Solved", "AlmostSolved"}


def project_onto(y, hull, cons, tol=DEFAULT_TOL):
    """Euclidean projection of `y` onto ``hull`` intersected with `cons`.

    Returns ``(distance, nearest)``. Solved as the cone program
    ``min t  s.t. ||y - V^T lam|| <= t``, which keeps the distance accurate
    even when it is close to zero.
    """
    cons = list(cons)
    _check_dims(hull, cons)
    y = as_vector(y, dim=hull.dim, name="y")
    V = hull.vertices
    k, n = V.shape
    live = [h for h in cons if not h.is_degenerate]
    m = len(live)
    if m:
        N, b = _stack(live)
        C = N @ V.T
    else:
        b = np.zeros(0)
        C = np.zeros((0, k))
    # variables (t, lam); rows: sum(lam)=1 | lam>=0 | C lam>=b | SOC
    A = np.vstack([
        np.r_[0.0, np.ones(k)][None, :],
        np.hstack([np.zeros((k, 1)), -np.eye(k)]),
        np.hstack([np.zeros((m, 1)), -C]),
        np.r_[-1.0, np.zeros(k)][None, :],
        np.hstack([np.zeros((n, 1)), V.T]),
    ])
    rhs = np.r_[1.0, np.zeros(k), -b, 0.0, y]
    q = np.r_[1.0, np.zeros(k)]
    cones = [clarabel.ZeroConeT(1), clarabel.NonnegativeConeT(k + m),
             clarabel.SecondOrderConeT(n + 1)]
    settings = clarabel.DefaultSettings()
    settings.verbose = False
    settings.tol_gap_abs = 1e-12
    settings.tol_gap_rel = 1e-12
    settings.tol_feas = 1e-12
    settings.tol_ktratio = 1e-10
    solver = clarabel.DefaultSolver(sp.csc_matrix((k + 1, k + 1)), q,
                                    sp.csc_matrix(A), rhs, cones, settings)
    sol = solver.solve()
    status = str(sol.status)
    if "Infeasible" in status:
        raise EmptySetError("projection target set is empty")
    if status not in _CLARABEL_OK:
        raise InternalInconsistency(f"projection solver status {status}")
    lam = _clean_weights(np.array(sol.x)[1:])
    nearest = hull.point(lam)
    return float(np.linalg.norm(y - nearest)), nearest


def contains(hull, cons, p, tol=DEFAULT_TOL):
    """Is `p` in the hull (per coordinate within eq_tol) and in every constraint?"""
    cons = list(cons)
    _check_dims(hull, cons)
    p = as_vector(p, dim=hull.dim, name="p")
    if any(h.slack(p) < -tol.eq_tol for h in cons):
        return False
    V = hull.vertices
    k = V.shape[0]
    if k == 1:
        return bool(np.all(np.abs(V[0] - p) <= tol.eq_tol))
    A_ub = np.vstack([V.T, -V.T])
    b_ub = np.r_[p + tol.eq_tol, -(p - tol.eq_tol)]
    res = linprog(np.zeros(k), A_ub=A_ub, b_ub=b_ub,
                  A_eq=np.ones((1, k)), b_eq=[1.0], bounds=(0, None),
                  method="highs", options=_HIGHS)
    if res.status == 2:
        return False
    if res.status != 0:
        raise InternalInconsistency(f"membership LP failed: {res.message}")
    return True
