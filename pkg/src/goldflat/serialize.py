"""Canonical text forms: SurfaceSpec documents and decomposition reports.

Both are JSON with sorted keys and every number written as a field literal,
so printing then parsing gives back exactly the same values.
"""

from __future__ import annotations

import json
from typing import Any

from .cylinders import Decomposition, classify_cylinder
from .linalg import Vec2
from .qfield import FieldElement, format_literal, parse_literal
from .surface import Surface, SurfaceError, build_surface

SPEC_FORMAT = "goldflat-surface/1"


class SpecError(SurfaceError):
    pass


def canonical_json(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _lit(x: FieldElement) -> str:
    return format_literal(x)


def _vec_out(v: Vec2) -> list[str]:
    return [_lit(v.x), _lit(v.y)]


def _vec_in(item, where: str) -> Vec2:
    if not isinstance(item, list) or len(item) != 2:
        raise SpecError(f"{where}: expected [x, y], got {item!r}")
    try:
        return Vec2(parse_literal(str(item[0])), parse_literal(str(item[1])))
    except ValueError as exc:
        raise SpecError(f"{where}: {exc}") from None


def surface_to_spec(s: Surface) -> dict:
    pairs = sorted({tuple(sorted((e, f))) for e, f in s.pairing.items()})
    return {
        "format": SPEC_FORMAT,
        "polygons": [[_vec_out(v) for v in poly] for poly in s.polygons],
        "pairing": [[list(e), list(f)] for e, f in pairs],
        "marked_points": [[p, *_vec_out(pt)] for p, pt in s.marked_points],
    }


def spec_to_surface(doc: dict) -> Surface:
    if not isinstance(doc, dict):
        raise SpecError("a surface spec must be a JSON object")
    fmt = doc.get("format", SPEC_FORMAT)
    if fmt != SPEC_FORMAT:
        raise SpecError(f"unsupported spec format {fmt!r}")
    if "polygons" not in doc or "pairing" not in doc:
        raise SpecError("spec needs 'polygons' and 'pairing'")
    polys = []
    for p, poly in enumerate(doc["polygons"]):
        polys.append([_vec_in(v, f"polygon {p} edge {i}") for i, v in enumerate(poly)])
    pairing = {}
    for k, item in enumerate(doc["pairing"]):
        try:
            (p, i), (q, j) = item
            e, f = (int(p), int(i)), (int(q), int(j))
        except (TypeError, ValueError):
            raise SpecError(f"pairing entry {k}: expected [[p, i], [q, j]], got {item!r}") from None
        for x in (e, f):
            if x in pairing:
                raise SpecError(f"edge {x} is paired twice")
        pairing[e] = f
        pairing[f] = e
    marks = []
    for k, item in enumerate(doc.get("marked_points", [])):
        if not isinstance(item, list) or len(item) != 3:
            raise SpecError(f"marked point {k}: expected [polygon, x, y]")
        marks.append((int(item[0]), _vec_in(item[1:], f"marked point {k}")))
    return build_surface(polys, pairing, marks)


def dump_surface(s: Surface) -> str:
    # one line per top-level key keeps specs short and diffable
    doc = surface_to_spec(s)
    lines = [f"  {json.dumps(k)}: {json.dumps(doc[k], separators=(', ', ': '))}" for k in sorted(doc)]
    return "{\n" + ",\n".join(lines) + "\n}\n"


def load_surface(text: str) -> Surface:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec is not valid JSON: {exc}") from None
    return spec_to_surface(doc)


def decomposition_report(dec: Decomposition, tags: dict[int, str] | None = None) -> dict:
    """Exact per-cylinder data; ``tags`` maps cylinder ids to class names."""
    tags = tags or {}
    cyls = []
    for c in dec.cylinders:
        cyls.append(
            {
                "id": c.id,
                "circumference": _lit(c.circumference),
                "height": _lit(c.height),
                "twist": _lit(c.twist),
                "modulus": _lit(c.modulus),
                "bottom": list(c.bottom),
                "top": list(c.top),
                "kind": classify_cylinder(c),
                "class": tags.get(c.id),
            }
        )
    saddles = [
        {
            "id": sc.id,
            "start": sc.start,
            "end": sc.end,
            "holonomy": _vec_out(sc.holonomy),
            "crossings": len(sc.crossing_word),
        }
        for sc in dec.saddles
    ]
    return {
        "direction": _vec_out(dec.direction.v),
        "status": dec.status,
        "cylinders": cyls,
        "saddle_connections": saddles,
        "unfinished_separatrices": [list(u) for u in dec.unfinished],
    }
