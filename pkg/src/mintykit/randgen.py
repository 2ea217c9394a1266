"""Seeded generators of finite operator graphs.

All randomness comes from numpy's PCG64 bit generator seeded directly
with the integer seed, so equal seeds give bit-identical graphs on any
platform running the same numpy PCG64.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvariantBreach
from .operator_graph import OperatorGraph, is_monotone, is_quasimonotone

FAMILIES = ("psd_linear", "convex_gradient", "cubic_like", "perturbed")


@dataclass(frozen=True)
class GenSpec:
    dim: int
    num_points: int
    family: str = "psd_linear"
    magnitude: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.dim < 1 or self.num_points < 1:
            raise ValueError("dim and num_points must be at least 1")
        if self.magnitude < 0:
            raise ValueError("magnitude must be non-negative")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")

    def label(self):
        return f"{self.family}-d{self.dim}-n{self.num_points}-s{self.seed}"


def make_rng(seed, stream=0):
    """PCG64 generator for (seed, stream); stream 0 is used for generation."""
    if stream == 0:
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64([seed, stream]))


def random_orthogonal(n, rng):
    """Haar orthogonal matrix: QR of a Gaussian matrix with sign-fixed R diagonal."""
    G = rng.standard_normal((n, n))
    Q, R = np.linalg.qr(G)
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return Q * signs


def _sample_points(spec, rng):
    return rng.uniform(-1.0, 1.0, size=(spec.num_points, spec.dim))


def linear_graph(points, M, c=None, label=None):
    """Samples of ``x -> M x + c``."""
    points = np.asarray(points, dtype=float)
    M = np.asarray(M, dtype=float)
    c = np.zeros(points.shape[1]) if c is None else np.asarray(c, dtype=float)
    return OperatorGraph.single_valued(points, points @ M.T + c, label=label)


def gen_psd_linear(spec, D=None, S=None, Q=None, c=None):
    """Samples of ``x -> M x + c`` with ``M = Q^T D Q + S``.

    D is a non-negative diagonal (given as a vector), Q orthogonal and S
    skew-symmetric, so the symmetric part of M is positive semidefinite.
    Any of the factors can be supplied to pin the example.
    """
    rng = make_rng(spec.seed)
    n = spec.dim
    pts = _sample_points(spec, rng)
    if D is None:
        D = rng.uniform(0.0, 2.0, size=n)
    if Q is None:
        Q = random_orthogonal(n, rng)
    if S is None:
        B = rng.standard_normal((n, n))
        S = 0.5 * (B - B.T)
    if c is None:
        c = rng.standard_normal(n)
    M = Q.T @ np.diag(D) @ Q + np.asarray(S, dtype=float)
    T = linear_graph(pts, M, c, label=spec.label())
    _assert(is_monotone(T), "psd_linear sample is not monotone")
    return T


def convex_gradient_graph(points, quartic=1.0, P=None, q=None, label=None):
    """Samples of the gradient of ``quartic*||x||^4 + x^T P x / 2 + q^T x``."""
    points = np.asarray(points, dtype=float)
    n = points.shape[1]
    P = np.zeros((n, n)) if P is None else np.asarray(P, dtype=float)
    q = np.zeros(n) if q is None else np.asarray(q, dtype=float)
    sq = np.sum(points**2, axis=1, keepdims=True)
    grads = 4.0 * quartic * sq * points + points @ P.T + q
    return OperatorGraph.single_valued(points, grads, label=label)


def gen_convex_gradient(spec):
    """Gradients of ``||x||^4 + x^T P x / 2 + q^T x`` with P = B B^T."""
    rng = make_rng(spec.seed)
    n = spec.dim
    pts = _sample_points(spec, rng)
    B = rng.standard_normal((n, n))
    P = B @ B.T
    q = rng.standard_normal(n)
    T = convex_gradient_graph(pts, 1.0, P, q, label=spec.label())
    _assert(is_monotone(T), "convex_gradient sample is not monotone")
    return T


def cubic_graph(params, direction=None, offset=None, label=None):
    """Samples of ``t -> 3 t^2`` embedded on the line ``offset + t * direction``.

    ``direction`` must be a unit vector; the dual at parameter t is
    ``3 t^2 * direction``.
    """
    t = np.asarray(params, dtype=float)
    u = np.ones(1) if direction is None else np.asarray(direction, dtype=float)
    o = np.zeros_like(u) if offset is None else np.asarray(offset, dtype=float)
    pts = o + t[:, None] * u
    duals = 3.0 * t[:, None] ** 2 * u
    return OperatorGraph.single_valued(pts, duals, label=label)


def gen_cubic_like(spec, max_attempts=100):
    """Quasimonotone but non-monotone samples of the derivative of x^3.

    Parameters are redrawn until some pair (s, t) has ``s + t < 0``, the
    condition for ``3 (s^2 - t^2)(s - t) < 0``.
    """
    if spec.num_points < 3:
        raise ValueError("cubic_like needs at least 3 points")
    rng = make_rng(spec.seed)
    n = spec.dim
    u = rng.standard_normal(n)
    u /= np.linalg.norm(u)
    o = rng.uniform(-0.5, 0.5, size=n)
    for _ in range(max_attempts):
        t = rng.uniform(-1.0, 1.0, size=spec.num_points)
        if t.min() >= 0 or t.max() < 0:
            continue
        T = cubic_graph(t, u, o, label=spec.label())
        if len(T) == spec.num_points and not is_monotone(T):
            _assert(is_quasimonotone(T), "cubic_like sample is not quasimonotone")
            return T
    raise InvariantBreach(f"could not draw a non-monotone cubic sample for {spec}")


def gen_perturbed(base, magnitude, seed):
    """Add uniform noise in ``[-magnitude, magnitude]`` to every dual."""
    if magnitude < 0:
        raise ValueError("magnitude must be non-negative")
    if magnitude == 0:
        return base
    rng = make_rng(seed, stream=1)
    entries = [(p, ds + rng.uniform(-magnitude, magnitude, size=ds.shape))
               for p, ds in base]
    return OperatorGraph(entries, dim=base.dim, label=base.label)


def generate(spec):
    """Dispatch on ``spec.family``; `perturbed` perturbs a psd_linear base."""
    if spec.family == "psd_linear":
        return gen_psd_linear(spec)
    if spec.family == "convex_gradient":
        return gen_convex_gradient(spec)
    if spec.family == "cubic_like":
        return gen_cubic_like(spec)
    base = gen_psd_linear(GenSpec(spec.dim, spec.num_points, "psd_linear", 0.0, spec.seed))
    T = gen_perturbed(base, spec.magnitude, spec.seed)
    return OperatorGraph(list(T), dim=T.dim, label=spec.label())


def _assert(verdict, message):
    if not verdict:
        raise InvariantBreach(f"{message}: {verdict.violation}")
