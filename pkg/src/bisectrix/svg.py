"""Self-contained SVG 1.1 figures of a recovered configuration."""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

from .geometry import TriangleSolution, _EXTERNAL_PATTERN, embed_reference
from .bisector_system import InstanceSquaredSides

CANVAS = 1000.0
PAD = 0.10


def _num(v: float) -> str:
    s = f"{round(v, 3):.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _Frame:
    """Maps model coordinates to pixels: longest bbox side -> CANVAS, 10% padding, y down."""

    def __init__(self, pts: Sequence):
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        self.x0, self.y1 = min(xs), max(ys)
        span = max(max(xs) - self.x0, self.y1 - min(ys)) or 1.0
        self.k = CANVAS / span
        self.pad = PAD * CANVAS
        self.width = (max(xs) - self.x0) * self.k + 2 * self.pad
        self.height = (self.y1 - min(ys)) * self.k + 2 * self.pad

    def __call__(self, p):
        return ((p[0] - self.x0) * self.k + self.pad, (self.y1 - p[1]) * self.k + self.pad)


def render_svg(inst: InstanceSquaredSides, sol: TriangleSolution, title: str = "") -> str:
    ref = embed_reference(inst)
    verts = sol.vertices
    center = sol.center_cart
    pts = [tuple(p) for p in ref] + [tuple(v) for v in verts]
    if center is not None:
        pts.append(tuple(center))
    fr = _Frame(pts)
    R = [fr(tuple(p)) for p in ref]
    V = [fr(tuple(v)) for v in verts]
    external = _EXTERNAL_PATTERN.get(sol.classification, (False, False, False))
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_num(fr.width)}" '
        f'height="{_num(fr.height)}" viewBox="0 0 {_num(fr.width)} {_num(fr.height)}">',
        f"<title>{escape(title or sol.classification)}</title>",
        '<rect x="0" y="0" width="100%" height="100%" fill="white"/>',
        '<polygon id="solution" points="' + " ".join(f"{_num(x)},{_num(y)}" for x, y in V)
        + '" fill="none" stroke="#1f4e9c" stroke-width="2"/>',
        '<polygon id="reference" points="' + " ".join(f"{_num(x)},{_num(y)}" for x, y in R)
        + '" fill="#f2c14e" fill-opacity="0.25" stroke="#b5651d" stroke-width="2"/>',
    ]
    for i, name in enumerate("ABC"):
        style = 'stroke-dasharray="8 5"' if external[i] else ""
        cls = "external" if external[i] else "internal"
        out.append(
            f'<line id="bisector-{name}" class="{cls}" x1="{_num(V[i][0])}" y1="{_num(V[i][1])}" '
            f'x2="{_num(R[i][0])}" y2="{_num(R[i][1])}" stroke="#555555" stroke-width="1.5" {style}/>'.replace(" />", "/>")
        )
    for (x, y), name in zip(R, "ABC"):
        out.append(f'<circle cx="{_num(x)}" cy="{_num(y)}" r="4" fill="#b5651d"/>')
        out.append(f'<text x="{_num(x + 8)}" y="{_num(y - 8)}" font-family="sans-serif" font-size="18">{name}</text>')
    for (x, y), name in zip(V, "ABC"):
        out.append(f'<circle cx="{_num(x)}" cy="{_num(y)}" r="4" fill="#1f4e9c"/>')
        out.append(f'<text x="{_num(x + 8)}" y="{_num(y - 8)}" font-family="sans-serif" font-size="18">{name}\'</text>')
    if center is not None:
        cx, cy = fr(tuple(center))
        out.append(f'<circle id="center" cx="{_num(cx)}" cy="{_num(cy)}" r="5" fill="#c0392b"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
