"""Standalone SVG pictures of Gamma coverage for 2-D instances."""

from xml.sax.saxutils import escape

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .gamma_map import build_gamma_system, check_fip, check_kkm
from .oracles import uncovered_margin
from .polyhedra import DEFAULT_TOL

SIZE = 480
PAD = 30
GRID = 200


def _frame(points, extra=()):
    pts = np.vstack([points] + [np.atleast_2d(e) for e in extra if e is not None])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = float(np.max(hi - lo)) or 1.0
    lo = lo - 0.15 * span
    span *= 1.3
    scale = (SIZE - 2 * PAD) / span

    def to_px(p):
        p = np.asarray(p, dtype=float)
        return (PAD + (p[..., 0] - lo[0]) * scale,
                SIZE - PAD - (p[..., 1] - lo[1]) * scale)
    return lo, span, to_px


def _hull_order(V):
    if len(V) < 3:
        return V
    try:
        return V[ConvexHull(V).vertices]
    except QhullError:
        # collinear generators: draw the extreme segment
        c = V.mean(axis=0)
        u = np.linalg.svd(V - c)[2][0]
        t = (V - c) @ u
        return V[[np.argmin(t), np.argmax(t)]]


def render_coverage(T, xstar, subset=None, tol=DEFAULT_TOL, title=None):
    """SVG text showing the hull of A, Gamma boundaries and the covered region.

    Coverage is shaded on a GRID x GRID sample of the bounding box; cells
    inside the hull and outside every Gamma value are drawn in red.
    """
    if T.dim != 2:
        raise ValueError(f"render needs a 2-D instance, got dim {T.dim}")
    A = T.domain_indices() if subset is None else list(subset)
    sys = build_gamma_system(T, A, xstar)
    kkm = check_kkm(sys, tol)
    fip = check_fip(sys, tol)
    V = sys.hull.vertices
    lo, span, to_px = _frame(V, (kkm.point, fip.witness))

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" '
             f'height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
             '<rect width="100%" height="100%" fill="white"/>']

    step = span / GRID
    xs = lo[0] + (np.arange(GRID) + 0.5) * step
    ys = lo[1] + (np.arange(GRID) + 0.5) * step
    X = np.stack(np.meshgrid(xs, ys), axis=-1).reshape(-1, 2)
    inside = _in_hull(V, X, step)
    escaped = uncovered_margin(sys, X) > 0
    cell = (SIZE - 2 * PAD) / GRID
    for p, bad in zip(X[inside], escaped[inside]):
        px, py = to_px(p)
        colour = "#f4a6a6" if bad else "#b9dcb4"
        parts.append(f'<rect x="{px - cell / 2:.2f}" y="{py - cell / 2:.2f}" '
                     f'width="{cell:.2f}" height="{cell:.2f}" fill="{colour}"/>')

    for poly, x in zip(sys.polyhedra, sys.base_points):
        for h in poly:
            seg = _boundary_segment(h, lo, span)
            if seg is not None:
                (x1, y1), (x2, y2) = (to_px(seg[0]), to_px(seg[1]))
                parts.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" '
                             f'y2="{y2:.2f}" stroke="#555" stroke-dasharray="4 3"/>')

    ring = _hull_order(V)
    pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(*to_px(ring)))
    tag = "polygon" if len(ring) > 2 else "polyline"
    parts.append(f'<{tag} points="{pts}" fill="none" stroke="black" stroke-width="1.5"/>')

    for x in V:
        px, py = to_px(x)
        parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="4" fill="black"/>')
    if fip.feasible:
        px, py = to_px(fip.witness)
        parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="5" fill="#1f6fd1">'
                     '<title>FIP witness</title></circle>')
    if not kkm.holds:
        px, py = to_px(kkm.point)
        parts.append(f'<path d="M{px - 5:.2f},{py - 5:.2f} L{px + 5:.2f},{py + 5:.2f} '
                     f'M{px - 5:.2f},{py + 5:.2f} L{px + 5:.2f},{py - 5:.2f}" '
                     'stroke="#c00" stroke-width="2"><title>KKM counterexample</title></path>')
    caption = title or (T.label or "instance")
    verdict = "KKM holds" if kkm.holds else "KKM fails"
    parts.append(f'<text x="{PAD}" y="18" font-family="sans-serif" font-size="13">'
                 f'{escape(caption)}: {verdict}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _in_hull(V, X, step):
    if len(V) >= 3:
        try:
            eq = ConvexHull(V).equations
            return np.all(X @ eq[:, :2].T + eq[:, 2] <= 0, axis=1)
        except QhullError:
            pass
    # point or segment: cells within half a cell of it
    if len(V) == 1:
        return np.linalg.norm(X - V[0], axis=1) <= step
    c = V.mean(axis=0)
    u = np.linalg.svd(V - c)[2][0]
    t = (V - c) @ u
    tx = np.clip((X - c) @ u, t.min(), t.max())
    return np.linalg.norm(X - (c + tx[:, None] * u), axis=1) <= step


def _boundary_segment(h, lo, span):
    """Clip the line <normal, x> = offset to the drawing box."""
    a, b = h.normal, h.offset
    if not np.any(a):
        return None
    d = np.array([-a[1], a[0]])
    p0 = a * b / (a @ a)
    hi = lo + span
    ts = []
    for k in range(2):
        if d[k] != 0:
            ts.extend([(lo[k] - p0[k]) / d[k], (hi[k] - p0[k]) / d[k]])
    pts = [p0 + t * d for t in ts]
    pts = [p for p in pts if np.all(p >= lo - 1e-9) and np.all(p <= hi + 1e-9)]
    if len(pts) < 2:
        return None
    pts.sort(key=lambda p: (p - p0) @ d)
    return pts[0], pts[-1]
