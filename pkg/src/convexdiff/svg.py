"""Deterministic SVG rendering of 2D polytopes."""

from __future__ import annotations

from .geometry import DimensionError, EmptySet, Polytope

__all__ = ["render_svg"]

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2",
            "#7f7f7f", "#bcbd22", "#17becf")


def _fmt(v: float) -> str:
    s = f"{v:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _points(X):
    if X.dim != 2:
        raise DimensionError("only 2D polytopes can be drawn")
    return [(float(v[0]), float(v[1])) for v in X.vertices]


def render_svg(items, labels: bool = False, size: int = 480) -> str:
    """Draw polytopes into a standalone SVG document.

    Parameters
    ----------
    items : iterable
        Polytopes or minimal-element reports, optionally as ``(item, label)``
        pairs.  Empty sets are skipped.
    labels : bool
        Write each label next to its first vertex.
    size : int
        Width of the canvas in pixels; the height follows the aspect ratio.

    Returns
    -------
    str
        The document.  The view box is the bounding box of all vertices with
        a 10% margin, and the y axis points up.  Output depends only on the
        input, so equal inputs give byte-identical files.
    """
    shapes = []
    for k, it in enumerate(items):
        X, label = it if isinstance(it, tuple) else (it, f"P{k}")
        X = getattr(X, "element", X)
        if isinstance(X, EmptySet):
            continue
        if not isinstance(X, Polytope):
            raise TypeError(f"cannot draw {type(X).__name__}")
        shapes.append((_points(X), str(label), _PALETTE[k % len(_PALETTE)]))
    pts = [p for s in shapes for p in s[0]]
    if pts:
        x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
        y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
    else:
        x0 = y0 = -1.0
        x1 = y1 = 1.0
    w, h = max(x1 - x0, 1e-6), max(y1 - y0, 1e-6)
    span = max(w, h)
    mx, my = 0.1 * max(w, 0.1 * span), 0.1 * max(h, 0.1 * span)
    vx, vy, vw, vh = x0 - mx, -(y1 + my), w + 2 * mx, h + 2 * my
    stroke = 0.005 * max(vw, vh)
    height = max(1, round(size * vh / vw))
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{height}" '
           f'viewBox="{_fmt(vx)} {_fmt(vy)} {_fmt(vw)} {_fmt(vh)}">']
    for poly, label, color in shapes:
        coords = " ".join(f"{_fmt(x)},{_fmt(-y)}" for x, y in poly)
        if len(poly) == 1:
            x, y = poly[0]
            out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(-y)}" r="{_fmt(2 * stroke)}" '
                       f'fill="{color}"><title>{label}</title></circle>')
        elif len(poly) == 2:
            out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" '
                       f'stroke-width="{_fmt(stroke)}"><title>{label}</title></polyline>')
        else:
            out.append(f'<polygon points="{coords}" fill="{color}" fill-opacity="0.15" '
                       f'stroke="{color}" stroke-width="{_fmt(stroke)}">'
                       f'<title>{label}</title></polygon>')
        if labels:
            x, y = poly[0]
            out.append(f'<text x="{_fmt(x)}" y="{_fmt(-y)}" font-size="{_fmt(4 * stroke)}" '
                       f'fill="{color}">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
