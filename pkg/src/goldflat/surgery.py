"""Cylinder surgery: collapse, gluing cylinders into slits, and twist shears.

All moves work on a :class:`CylinderDiagram`, the presentation of a surface
that is completely periodic in some direction as one polygon per cylinder.
Each cylinder polygon is its bottom saddle connections (in flow order), the
side vector, its top saddle connections backwards, and the side again.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Hashable, Iterable, Sequence

from .cylinders import Cylinder, Decomposition, cylinder_decomposition
from .flow import DEFAULT_BUDGET, Direction, as_direction
from .linalg import Vec2
from .qfield import FieldElement, as_element
from .surface import Surface


class SurgeryError(ValueError):
    pass


@dataclass
class CylSpec:
    bottom: list[Hashable]
    top: list[Hashable]
    side: Vec2
    name: str = ""


@dataclass
class CylinderDiagram:
    direction: Direction
    lengths: dict[Hashable, FieldElement]
    cylinders: list[CylSpec]

    def circumference(self, k: int, which: str = "bottom") -> FieldElement:
        total = FieldElement(0)
        for lab in getattr(self.cylinders[k], which):
            total = total + self.lengths[lab]
        return total

    def height(self, k: int) -> FieldElement:
        d = self.direction.v
        side = self.cylinders[k].side
        return d.x * side.y - d.y * side.x

    def twist(self, k: int) -> FieldElement:
        d = self.direction.v
        side = self.cylinders[k].side
        return (d.x * side.x + d.y * side.y) / (d.x * d.x + d.y * d.y)

    def check(self) -> None:
        bottoms, tops = {}, {}
        for k, c in enumerate(self.cylinders):
            for lab in c.bottom:
                if lab in bottoms:
                    raise SurgeryError(f"saddle {lab!r} is on two bottoms")
                bottoms[lab] = k
            for lab in c.top:
                if lab in tops:
                    raise SurgeryError(f"saddle {lab!r} is on two tops")
                tops[lab] = k
            if self.circumference(k, "bottom") != self.circumference(k, "top"):
                raise SurgeryError(f"cylinder {k}: top and bottom lengths differ")
            if self.height(k).sign() <= 0:
                raise SurgeryError(f"cylinder {k}: height must be positive")
        if set(bottoms) != set(tops):
            raise SurgeryError("every saddle connection needs one bottom and one top side")

    def realize(self) -> Surface:
        surface, _ = self.realize_with_map()
        return surface

    def realize_with_map(self) -> tuple[Surface, dict]:
        """Build the polygons; also return label -> (bottom edge, top edge)."""
        self.check()
        d = self.direction.v
        polys = []
        where_bottom, where_top = {}, {}
        pairing = {}
        for k, c in enumerate(self.cylinders):
            edges = [d * self.lengths[lab] for lab in c.bottom]
            for i, lab in enumerate(c.bottom):
                where_bottom[lab] = (k, i)
            m = len(edges)
            edges.append(c.side)
            for j, lab in enumerate(reversed(c.top)):
                where_top[lab] = (k, m + 1 + j)
                edges.append(-(d * self.lengths[lab]))
            edges.append(-c.side)
            pairing[(k, m)] = (k, len(edges) - 1)
            polys.append(edges)
        for lab, e in where_bottom.items():
            pairing[e] = where_top[lab]
        edge_map = {lab: (where_bottom[lab], where_top[lab]) for lab in where_bottom}
        return Surface(polys, pairing), edge_map


def diagram_from_decomposition(dec: Decomposition) -> CylinderDiagram:
    if not dec.complete:
        raise SurgeryError(f"direction {dec.direction} is not known to be completely periodic")
    lengths = {sc.id: sc.length for sc in dec.saddles}
    cyls = [CylSpec(list(c.bottom), list(c.top), c.side, f"cyl{c.id}") for c in dec.cylinders]
    return CylinderDiagram(dec.direction, lengths, cyls)


def _mod(x: FieldElement, m: FieldElement) -> FieldElement:
    from .cylinders import _mod as mod

    return mod(x, m)


def _locate(diagram: CylinderDiagram, labels: Sequence, x: FieldElement):
    """Saddle index and offset of circle coordinate x (0 <= x < circumference)."""
    acc = FieldElement(0)
    for i, lab in enumerate(labels):
        nxt = acc + diagram.lengths[lab]
        if (x - nxt).sign() < 0:
            return i, x - acc
        acc = nxt
    raise SurgeryError("coordinate outside circle")


def _offset_of(diagram: CylinderDiagram, labels: Sequence, i: int) -> FieldElement:
    acc = FieldElement(0)
    for lab in labels[:i]:
        acc = acc + diagram.lengths[lab]
    return acc


def collapse_diagram(diagram: CylinderDiagram, collapsed: Iterable[int]) -> CylinderDiagram:
    """Send the heights of the chosen cylinders to zero, keeping their twists."""
    K = set(collapsed)
    if not K:
        return diagram
    n = len(diagram.cylinders)
    remaining = [k for k in range(n) if k not in K]
    if not remaining:
        raise SurgeryError("the collapsed cylinders cover the whole surface")
    above = {}
    for k, c in enumerate(diagram.cylinders):
        for i, lab in enumerate(c.bottom):
            above[lab] = (k, i)

    max_steps = 4 * n + 4
    pieces_top: dict[int, list[tuple[tuple, FieldElement]]] = {k: [] for k in remaining}
    arrivals: dict[int, list[tuple[FieldElement, tuple, FieldElement]]] = {k: [] for k in remaining}

    def push(src_key, lab, y0, length, steps, out):
        """Follow saddle ``lab`` from offset y0 for ``length`` upward to a remaining bottom."""
        if steps > max_steps:
            raise SurgeryError("the collapsed cylinders cover a whole component")
        U, i = above[lab]
        x = _offset_of(diagram, diagram.cylinders[U].bottom, i) + y0
        if U not in K:
            out.append((U, x, length))
            return
        c_u = diagram.circumference(U)
        z = _mod(x - diagram.twist(U), c_u)
        top = diagram.cylinders[U].top
        left = length
        while left.sign() > 0:
            j, off = _locate(diagram, top, z)
            avail = diagram.lengths[top[j]] - off
            take = avail if (avail - left).sign() <= 0 else left
            push(src_key, top[j], off, take, steps + 1, out)
            left = left - take
            z = _mod(z + take, c_u)

    for R in remaining:
        for lab in diagram.cylinders[R].top:
            out: list = []
            push(R, lab, FieldElement(0), diagram.lengths[lab], 0, out)
            for U, x, length in out:
                key = ("p", R, len(pieces_top[R]))
                pieces_top[R].append((key, length))
                arrivals[U].append((x, key, length))

    lengths = {}
    cyls = []
    for R in remaining:
        old = diagram.cylinders[R]
        top = [key for key, _ in pieces_top[R]]
        for key, length in pieces_top[R]:
            lengths[key] = length
        arr = sorted(arrivals[R], key=lambda t: t[0])
        acc = FieldElement(0)
        for x, key, length in arr:
            if x != acc:
                raise SurgeryError("collapsed gluing does not tile a bottom boundary")
            acc = acc + length
        bottom = [key for _, key, _ in arr]
        cyls.append(CylSpec(bottom, top, old.side, old.name))
    # relabel pieces compactly for readability
    out = CylinderDiagram(diagram.direction, lengths, cyls)
    out.check()
    return out


def glue_diagram(
    diagram: CylinderDiagram,
    slit: Hashable | tuple[Hashable, Hashable],
    height,
    twist=0,
    name: str = "glued",
) -> CylinderDiagram:
    """Cut open one saddle connection (or two of equal length) and insert a cylinder."""
    height, twist = as_element(height), as_element(twist)
    if height.sign() <= 0:
        raise SurgeryError("glued cylinder needs positive height")
    if isinstance(slit, tuple) and len(slit) == 2 and slit[0] != slit[1]:
        s0, s1 = slit
    else:
        s0 = s1 = slit[0] if isinstance(slit, tuple) else slit
    for lab in (s0, s1):
        if lab not in diagram.lengths:
            raise SurgeryError(f"no saddle connection {lab!r} in this direction")
    if diagram.lengths[s0] != diagram.lengths[s1]:
        raise SurgeryError("slit saddle connections have unequal holonomy")
    d = diagram.direction.v
    side = d * twist + diagram.direction.normal * (height / (d.x * d.x + d.y * d.y))
    lengths = dict(diagram.lengths)
    lo, hi = (name, "lo"), (name, "hi")
    lengths[lo] = lengths[hi] = diagram.lengths[s0]
    cyls = [replace(c, bottom=list(c.bottom), top=list(c.top)) for c in diagram.cylinders]
    for c in cyls:
        c.top = [lo if lab == s0 else lab for lab in c.top]
        c.bottom = [hi if lab == s1 else lab for lab in c.bottom]
    if s0 != s1:
        cross_lab = (name, "x")
        lengths[cross_lab] = diagram.lengths[s0]
        for c in cyls:
            c.top = [cross_lab if lab == s1 else lab for lab in c.top]
            c.bottom = [cross_lab if lab == s0 else lab for lab in c.bottom]
        del lengths[s1]
    del lengths[s0]
    cyls.append(CylSpec([lo], [hi], side, name))
    out = CylinderDiagram(diagram.direction, lengths, cyls)
    out.check()
    return out


def shear_diagram(diagram: CylinderDiagram, which: Sequence[int], t) -> CylinderDiagram:
    """Displace each chosen cylinder's top by t * height / (height of the first)."""
    t = as_element(t)
    if not which:
        return diagram
    ref = diagram.height(which[0])
    d = diagram.direction.v
    cyls = [replace(c) for c in diagram.cylinders]
    for k in which:
        disp = t * diagram.height(k) / ref
        cyls[k] = replace(cyls[k], side=cyls[k].side + d * disp)
    return CylinderDiagram(diagram.direction, dict(diagram.lengths), cyls)


def alignment_shears(diagram: CylinderDiagram, which: Sequence[int], window: int = 3) -> dict:
    """Shear parameters (as in :func:`shear_diagram`) that make crossings perpendicular.

    A crossing joins a bottom vertex of a cylinder to a top vertex, winding m
    times around it.  Returns ``t -> [(cylinder, bottom offset, top offset, m)]``
    for |m| <= window.
    """
    ref = diagram.height(which[0])
    out: dict = {}
    for k in which:
        c = diagram.circumference(k)
        tau = diagram.twist(k)
        cyl = diagram.cylinders[k]
        xs = [_offset_of(diagram, cyl.bottom, i) for i in range(len(cyl.bottom))]
        zs = [_offset_of(diagram, cyl.top, j) for j in range(len(cyl.top))]
        for x in xs:
            for z in zs:
                for m in range(-window, window + 1):
                    t = -(tau + z - x + c * m) * ref / diagram.height(k)
                    out.setdefault(t, []).append((k, x, z, m))
    return out


# -- surface-level operations -------------------------------------------------------------


def _check_parallel(cyls: Sequence[Cylinder]) -> Direction:
    if not cyls:
        raise SurgeryError("no cylinders given")
    d = cyls[0].direction
    for c in cyls:
        if c.direction != d:
            raise SurgeryError("cylinders are not parallel")
    return d


def _indices(dec: Decomposition, cyls: Sequence[Cylinder]) -> list[int]:
    out = []
    for c in cyls:
        for k, c2 in enumerate(dec.cylinders):
            if c2.bottom == c.bottom and c2.top == c.top:
                out.append(k)
                break
        else:
            raise SurgeryError("cylinder does not belong to this decomposition")
    return out


def collapse(
    s: Surface, cyls: Sequence[Cylinder], budget: int = DEFAULT_BUDGET, dec: Decomposition | None = None
) -> Surface:
    d = _check_parallel(cyls)
    dec = dec or cylinder_decomposition(s, d, budget)
    diagram = diagram_from_decomposition(dec)
    idx = _indices(dec, cyls)
    return collapse_diagram(diagram, idx).realize()


def glue_cylinder(
    s: Surface,
    slit,
    height,
    twist=0,
    budget: int = DEFAULT_BUDGET,
) -> Surface:
    """Glue a flat cylinder into a slit.

    ``slit`` is a saddle connection, or a pair of parallel saddle connections
    of equal holonomy (from any decomposition or saddle-connection listing).
    """
    pair = tuple(slit) if isinstance(slit, (tuple, list)) else (slit, slit)
    s0, s1 = pair
    if s0.holonomy != s1.holonomy:
        raise SurgeryError("slit saddle connections have unequal holonomy")
    dec = cylinder_decomposition(s, s0.holonomy, budget)
    diagram = diagram_from_decomposition(dec)

    def match(sc):
        for sc2 in dec.saddles:
            if (sc2.start, sc2.end, sc2.holonomy, sc2.segments[0]) == (
                sc.start, sc.end, sc.holonomy, sc.segments[0]
            ):
                return sc2.id
        raise SurgeryError("slit is not a saddle connection of this surface")

    labs = (match(s0), match(s1))
    return glue_diagram(diagram, labs, height, twist).realize()


def twist_shear(
    s: Surface, cyls: Sequence[Cylinder], t, budget: int = DEFAULT_BUDGET, dec: Decomposition | None = None
) -> Surface:
    d = _check_parallel(cyls)
    dec = dec or cylinder_decomposition(s, d, budget)
    diagram = diagram_from_decomposition(dec)
    return shear_diagram(diagram, _indices(dec, cyls), t).realize()
