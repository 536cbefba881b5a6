"""Static SVG pictures of surfaces.

Exact coordinates are converted to decimals only here, for drawing; nothing
computed in this module feeds back into any predicate.  With a direction
overlay the surface is redrawn as its cylinder diagram, one polygon per
cylinder, shaded by declared class.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from .catalog import TaggedSurface
from .cylinders import cylinder_decomposition
from .flow import DEFAULT_BUDGET, as_direction
from .surface import Surface
from .surgery import diagram_from_decomposition

PALETTE = ["#9ecae1", "#fc9272", "#a1d99b", "#dadaeb", "#fdd0a2", "#c7e9c0"]
UNCLASSED = "#f0f0f0"
GAP = 0.4
WIDTH = 800.0


def _f(x) -> float:
    return float(x)


def _layout(s: Surface) -> list[tuple[float, float]]:
    """Left-to-right offsets so polygons do not overlap."""
    offsets = []
    cursor = 0.0
    for p in range(len(s.polygons)):
        vs = [(_f(v.x), _f(v.y)) for v in s.vertices(p)]
        xmin = min(x for x, _ in vs)
        xmax = max(x for x, _ in vs)
        offsets.append((cursor - xmin, 0.0))
        cursor += (xmax - xmin) + GAP
    return offsets


def _marked(x: float, y: float) -> str:
    return f'<circle class="marked" cx="{x:.4f}" cy="{y:.4f}" r="5" fill="white" stroke="#000" stroke-width="2"/>'


def render_svg(
    t: TaggedSurface | Surface,
    direction=None,
    budget: int = DEFAULT_BUDGET,
    title: str | None = None,
) -> str:
    """SVG text for a surface; ``direction`` turns on the cylinder overlay."""
    tagged = t if isinstance(t, TaggedSurface) else None
    s = tagged.surface if tagged else t
    fills: dict[int, str] = {}
    legend: list[tuple[str, str]] = []
    if direction is not None:
        d = as_direction(direction)
        dec = cylinder_decomposition(s, d, budget)
        if dec.complete:
            s = diagram_from_decomposition(dec).realize()
            for k in range(len(dec.cylinders)):
                fills[k] = UNCLASSED
            if tagged:
                for i, cls in enumerate(tagged.classes):
                    if as_direction(cls.direction) != d:
                        continue
                    colour = PALETTE[i % len(PALETTE)]
                    try:
                        members = cls.locate(dec)
                    except Exception:
                        continue
                    legend.append((cls.name, colour))
                    for c in members:
                        fills[dec.cylinders.index(c)] = colour
    offsets = _layout(s)
    pts = []
    for p in range(len(s.polygons)):
        ox, oy = offsets[p]
        pts.append([(_f(v.x) + ox, _f(v.y) + oy) for v in s.vertices(p)])
    xs = [x for poly in pts for x, _ in poly]
    ys = [y for poly in pts for _, y in poly]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    scale = WIDTH / span
    pad = 30.0
    top = max(ys)

    def tx(x, y):
        return (x - min(xs)) * scale + pad, (top - y) * scale + pad

    w = (max(xs) - min(xs)) * scale + 2 * pad
    h = (max(ys) - min(ys)) * scale + 2 * pad + 20 * (len(legend) + 1)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.2f}" height="{h:.2f}" '
        f'viewBox="0 0 {w:.2f} {h:.2f}">'
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")
    # pair labels: the same number appears on both edges of a gluing
    labels = {}
    for e, f in sorted(s.pairing.items()):
        if e not in labels:
            labels[e] = labels[f] = len({v for v in labels.values()})
    for p, poly in enumerate(pts):
        path = " ".join(f"{x:.4f},{y:.4f}" for x, y in (tx(*q) for q in poly))
        fill = fills.get(p, UNCLASSED)
        out.append(f'<polygon points="{path}" fill="{fill}" stroke="#333" stroke-width="1"/>')
        n = len(poly)
        for i in range(n):
            (x0, y0), (x1, y1) = tx(*poly[i]), tx(*poly[(i + 1) % n])
            mx, my = (x0 + x1) / 2, (y0 + y1) / 2
            out.append(
                f'<text x="{mx:.4f}" y="{my:.4f}" font-size="11" text-anchor="middle" '
                f'fill="#555">{labels[(p, i)]}</text>'
            )
    zero_colours = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"]
    for sing in s.singularities:
        if sing.is_vertex:
            for p, i in sing.corners:
                ox, oy = offsets[p]
                v = s.vertex(p, i)
                x, y = tx(_f(v.x) + ox, _f(v.y) + oy)
                if sing.order == 0:
                    out.append(_marked(x, y))
                else:
                    colour = zero_colours[sing.id % len(zero_colours)]
                    out.append(f'<circle cx="{x:.4f}" cy="{y:.4f}" r="{4 + sing.order}" fill="{colour}"/>')
        else:
            p, v = s.marked_points[sing.marked_index]
            ox, oy = offsets[p]
            x, y = tx(_f(v.x) + ox, _f(v.y) + oy)
            out.append(_marked(x, y))
    for k, (name, colour) in enumerate(legend):
        y = (max(ys) - min(ys)) * scale + 2 * pad + 20 * k
        out.append(f'<rect x="{pad:.2f}" y="{y:.2f}" width="14" height="14" fill="{colour}" stroke="#333"/>')
        out.append(f'<text x="{pad + 20:.2f}" y="{y + 12:.2f}" font-size="13">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
