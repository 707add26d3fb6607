"""SVG drawings of weighted complexes in the plane."""

from __future__ import annotations

from fractions import Fraction

from ..errors import NotTwoDimensional
from ..troppoly import WeightedComplex

SIZE = 400


def default_viewport(W: WeightedComplex) -> tuple:
    """Bounding box of the vertices, padded; ``[-5, 5]^2`` when there are none."""
    pts = [v for c in W.cells for v in c.poly.vertices]
    if not pts:
        return (-5, -5, 5, 5)
    xs = [float(p[0]) for p in pts]
    ys = [float(p[1]) for p in pts]
    pad = max(2.0, 0.25 * max(max(xs) - min(xs), max(ys) - min(ys)))
    return (min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)


def clip_segment(p, d, t0: float, t1: float, viewport) -> tuple | None:
    """Liang-Barsky clipping of ``p + t d`` for ``t`` in ``[t0, t1]``; ``None`` if outside."""
    xmin, ymin, xmax, ymax = viewport
    for q, r in ((-d[0], p[0] - xmin), (d[0], xmax - p[0]),
                 (-d[1], p[1] - ymin), (d[1], ymax - p[1])):
        if q == 0:
            if r < 0:
                return None
            continue
        t = r / q
        if q < 0:
            t0 = max(t0, t)
        else:
            t1 = min(t1, t)
        if t0 > t1:
            return None
    return ((p[0] + t0 * d[0], p[1] + t0 * d[1]), (p[0] + t1 * d[0], p[1] + t1 * d[1]))


def _segment(poly, viewport) -> tuple | None:
    big = 4 * max(abs(x) for x in viewport) + 1
    verts = [tuple(float(x) for x in v) for v in poly.vertices]
    if poly.lineality:
        d = tuple(float(x) for x in poly.lineality[0])
        return clip_segment(verts[0], d, -big * 10, big * 10, viewport)
    if poly.rays:
        d = tuple(float(x) for x in poly.rays[0])
        return clip_segment(verts[0], d, 0.0, big * 10, viewport)
    a, b = verts[0], verts[1]
    return clip_segment(a, (b[0] - a[0], b[1] - a[1]), 0.0, 1.0, viewport)


def render_svg(W: WeightedComplex, viewport: tuple | None = None) -> str:
    """Draw the one-dimensional cells of a planar complex.

    Rays and lines are clipped to ``viewport = (xmin, ymin, xmax, ymax)``;
    cells of weight at least 2 get a text label. Element order follows the
    complex's canonical cell order.

    Raises:
        NotTwoDimensional: the complex does not live in the plane.
    """
    if W.ambient_dim != 2:
        raise NotTwoDimensional(f"cannot draw a complex in dimension {W.ambient_dim}")
    viewport = tuple(float(Fraction(x)) if not isinstance(x, float) else x
                     for x in (viewport or default_viewport(W)))
    xmin, ymin, xmax, ymax = viewport
    sx = SIZE / (xmax - xmin)
    sy = SIZE / (ymax - ymin)

    def px(p):
        return f"{(p[0] - xmin) * sx:.3f}", f"{(ymax - p[1]) * sy:.3f}"

    body = []
    for c in W.cells_of_dim(1):
        seg = _segment(c.poly, viewport)
        if seg is None:
            continue
        (x1, y1), (x2, y2) = px(seg[0]), px(seg[1])
        body.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="black" stroke-width="2"/>')
        if c.weight is not None and c.weight >= 2:
            mx, my = px(((seg[0][0] + seg[1][0]) / 2, (seg[0][1] + seg[1][1]) / 2))
            body.append(f'<text x="{mx}" y="{my}" font-size="14">{c.weight}</text>')
    for c in W.cells_of_dim(0):
        v = tuple(float(x) for x in c.poly.vertices[0])
        if xmin <= v[0] <= xmax and ymin <= v[1] <= ymax:
            cx, cy = px(v)
            body.append(f'<circle cx="{cx}" cy="{cy}" r="3" fill="black"/>')
    group = '<g class="complex"/>' if not body else \
        '<g class="complex">\n' + "\n".join(f"  {e}" for e in body) + "\n</g>"
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
            f'viewBox="0 0 {SIZE} {SIZE}">\n{group}\n</svg>\n')
