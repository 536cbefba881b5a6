"""Saddle connections and cylinder decompositions in a fixed direction.

Lengths are measured in units of the (normalized) direction vector ``d``:
a saddle connection of holonomy ``t*d`` has length ``t``.  A cylinder's height
is ``cross(d, w)`` for any vector ``w`` crossing it, so circumference times
height is always the cylinder's area.  For the axis directions these are the
Euclidean lengths.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .flow import (
    DEFAULT_BUDGET,
    Direction,
    Obstacle,
    Trajectory,
    arrival_corner,
    as_direction,
    corners_with_direction,
    flow,
)
from .linalg import Vec2, angle_less, cross, in_sector, on_segment, ratio
from .qfield import PHI, FieldElement
from .surface import Edge, Surface, point_in_polygon


class DecompositionError(RuntimeError):
    """The traced data does not assemble into cylinders (a kernel bug)."""


@dataclass(frozen=True)
class SaddleConnection:
    id: int
    start: int  # singularity id
    end: int
    holonomy: Vec2
    length: FieldElement
    segments: tuple[tuple[int, Vec2, Vec2], ...]
    crossing_word: tuple[Edge, ...]
    out_slot: int  # index of the outgoing ray in the start's ray list
    in_slot: int  # index of the incoming ray in the end's ray list


@dataclass(frozen=True)
class Cylinder:
    id: int
    direction: Direction
    circumference: FieldElement
    height: FieldElement
    twist: FieldElement
    bottom: tuple[int, ...]  # saddle ids, in flow order from the canonical one
    top: tuple[int, ...]
    core_crossing_word: tuple[Edge, ...] = ()

    @property
    def modulus(self) -> FieldElement:
        return self.height / self.circumference

    @property
    def area(self) -> FieldElement:
        return self.height * self.circumference

    @property
    def core_holonomy(self) -> Vec2:
        return self.direction.v * self.circumference

    @property
    def side(self) -> Vec2:
        """Vector from the canonical bottom vertex to the canonical top vertex."""
        d = self.direction.v
        n = self.direction.normal
        return d * self.twist + n * (self.height / (d.x * d.x + d.y * d.y))


@dataclass
class Decomposition:
    surface: Surface
    direction: Direction
    status: str  # "complete" or "unknown"
    saddles: list[SaddleConnection] = field(default_factory=list)
    cylinders: list[Cylinder] = field(default_factory=list)
    unfinished: list[tuple[int, int]] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return self.status == "complete"

    def cylinder_above(self, saddle_id: int) -> Cylinder:
        for c in self.cylinders:
            if saddle_id in c.bottom:
                return c
        raise KeyError(saddle_id)

    def cylinder_below(self, saddle_id: int) -> Cylinder:
        for c in self.cylinders:
            if saddle_id in c.top:
                return c
        raise KeyError(saddle_id)

    def find(self, circumference=None, height=None) -> list[Cylinder]:
        return [
            c
            for c in self.cylinders
            if (circumference is None or c.circumference == circumference)
            and (height is None or c.height == height)
        ]


# -- ray bookkeeping at singular points ---------------------------------------------


def ray_list(s: Surface, sid: int, d: Vec2) -> list[tuple[str, Edge | None]]:
    """Outgoing (+d) and incoming (-d) rays at a singular point in ccw order."""
    sing = s.singularities[sid]
    if not sing.is_vertex:
        return [("out", None), ("in", None)]
    out: list[tuple[str, Edge | None]] = []
    for c in sing.corners:
        u, w = s.corner_sector(c)
        here = []
        if in_sector(u, w, d):
            here.append(("out", d))
        if in_sector(u, w, -d):
            here.append(("in", -d))
        if len(here) == 2 and angle_less(u, here[1][1], here[0][1]):
            here.reverse()
        out.extend((kind, c) for kind, _ in here)
    return out


def _ray_slot(rays, kind: str, corner: Edge | None) -> int:
    for k, (kk, c) in enumerate(rays):
        if kk == kind and c == corner:
            return k
    raise DecompositionError("ray not found in ray list")


def saddle_connections_in_direction(
    s: Surface, d, budget: int = DEFAULT_BUDGET
) -> tuple[list[SaddleConnection], list[tuple[int, int]]]:
    """Trace every outgoing d-separatrix.

    Returns the saddle connections found and the (singularity, slot) pairs of
    separatrices that exceeded the budget (nonempty means possibly incomplete).
    """
    saddles, unfinished, _ = _trace_separatrices(s, as_direction(d), budget)
    return saddles, unfinished


def _trace_separatrices(s: Surface, direction: Direction, budget: int):
    dv = direction.v
    saddles: list[SaddleConnection] = []
    unfinished: list[tuple[int, int]] = []
    rays = {sing.id: ray_list(s, sing.id, dv) for sing in s.singularities}
    for sing in s.singularities:
        for slot, (kind, corner) in enumerate(rays[sing.id]):
            if kind != "out":
                continue
            if corner is None:
                p, pos = s.marked_points[sing.marked_index]
            else:
                p, pos = corner[0], s.vertex(*corner)
            traj = flow(s, p, pos, dv, budget)
            if traj.status != "hit":
                unfinished.append((sing.id, slot))
                continue
            end = traj.end_singularity
            arr = arrival_corner(s, traj)
            in_slot = _ray_slot(rays[end], "in", arr)
            hol = traj.holonomy
            saddles.append(
                SaddleConnection(
                    len(saddles),
                    sing.id,
                    end,
                    hol,
                    direction.length_of(hol),
                    tuple(traj.segments),
                    tuple(traj.crossing_word),
                    slot,
                    in_slot,
                )
            )
    return saddles, unfinished, rays


# -- decomposition ----------------------------------------------------------------


def _cycles(perm: dict[int, int]) -> list[list[int]]:
    seen = set()
    out = []
    for k in sorted(perm):
        if k in seen:
            continue
        cyc = []
        x = k
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = perm[x]
        if x != k:
            raise DecompositionError("boundary map is not a permutation")
        out.append(cyc)
    return out


def _obstacles(s: Surface, saddles: Sequence[SaddleConnection], direction: Direction):
    obs: list[Obstacle] = []
    for sc in saddles:
        offset = FieldElement(0)
        for p, a, b in sc.segments:
            obs.append(Obstacle(p, a, b, sc.id, offset))
            # pieces running along an edge are registered on both sides
            verts = s.vertices(p)
            n = len(verts)
            for i in range(n):
                e = s.edge(p, i)
                c, d = verts[i], verts[(i + 1) % n]
                if on_segment(a, c, d) and on_segment(b, c, d):
                    q, a2 = s.glue_point(p, i, a)
                    _, b2 = s.glue_point(p, i, b)
                    obs.append(Obstacle(q, a2, b2, sc.id, offset))
                    break
            offset = offset + direction.length_of(b - a)
    return obs


def _start_inside(s: Surface, p: int, pt: Vec2, up: Vec2) -> tuple[int, Vec2]:
    """Move a boundary point to the polygon into which ``up`` points."""
    verts = s.vertices(p)
    n = len(verts)
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        if on_segment(pt, a, b):
            if cross(s.edge(p, i), up).sign() > 0:
                return p, pt
            return s.glue_point(p, i, pt)
    return p, pt


_FRACTIONS = [Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 4), Fraction(3, 4),
              Fraction(1, 5), Fraction(2, 5), Fraction(3, 5), Fraction(4, 5)]


def _transverse(s, sc: SaddleConnection, direction, obstacles, budget):
    """Cross the cylinder above ``sc``: (offset on sc, top saddle, offset on it, t)."""
    up = direction.normal
    for frac in _FRACTIONS:
        offset = FieldElement(0)
        for p, a, b in sc.segments:
            seg_len = direction.length_of(b - a)
            pt = a + (b - a) * frac
            q, start = _start_inside(s, p, pt, up)
            traj = flow(s, q, start, up, budget, obstacles)
            if traj.status == "budget":
                raise DecompositionError("transverse trace exceeded budget")
            h = traj.end
            if h.kind == "obstacle":
                ob = h.obstacle
                y = ob.offset + direction.length_of(h.point - ob.start)
                t = FieldElement(0)
                for _, a2, b2 in traj.segments:
                    t = t + ratio_up(b2 - a2, up)
                return offset + seg_len * frac, ob.tag, y, t
            offset = offset + seg_len
    raise DecompositionError(f"could not cross the cylinder above saddle {sc.id}")


def ratio_up(w: Vec2, up: Vec2) -> FieldElement:
    return ratio(w, up)


def cylinder_decomposition(s: Surface, d, budget: int = DEFAULT_BUDGET) -> Decomposition:
    direction = as_direction(d)
    dv = direction.v
    saddles, unfinished, rays = _trace_separatrices(s, direction, budget)
    dec = Decomposition(s, direction, "complete", saddles, [], unfinished)
    if unfinished:
        dec.status = "unknown"
        return dec
    by_start = {(sc.start, sc.out_slot): sc.id for sc in saddles}
    above, below = {}, {}
    for sc in saddles:
        rl = rays[sc.end]
        m = len(rl)
        prev_slot = (sc.in_slot - 1) % m
        next_slot = (sc.in_slot + 1) % m
        if rl[prev_slot][0] != "out" or rl[next_slot][0] != "out":
            raise DecompositionError("rays do not alternate at a singular point")
        above[sc.id] = by_start[(sc.end, prev_slot)]
        below[sc.id] = by_start[(sc.end, next_slot)]
    bottoms = _cycles(above)
    tops = _cycles(below)
    if len(bottoms) != len(tops):
        raise DecompositionError("bottom and top boundaries do not match up")
    top_of = {}
    for k, cyc in enumerate(tops):
        for sid in cyc:
            top_of[sid] = k
    obstacles = _obstacles(s, saddles, direction)
    used = set()
    for cid, cyc in enumerate(bottoms):
        offs, acc = {}, FieldElement(0)
        for sid in cyc:
            offs[sid] = acc
            acc = acc + saddles[sid].length
        circ = acc
        x, top_sc, y, t = _transverse(s, saddles[cyc[0]], direction, obstacles, budget)
        k = top_of[top_sc]
        if k in used:
            raise DecompositionError("two cylinders share a top boundary")
        used.add(k)
        tcyc = tops[k]
        start = tcyc.index(min(tcyc))
        tcyc = tcyc[start:] + tcyc[:start]
        toffs, tacc = {}, FieldElement(0)
        for sid in tcyc:
            toffs[sid] = tacc
            tacc = tacc + saddles[sid].length
        if tacc != circ:
            raise DecompositionError("cylinder boundaries have different lengths")
        height = t * (dv.x * dv.x + dv.y * dv.y)
        twist = (offs[cyc[0]] + x) - (toffs[top_sc] + y)
        twist = _mod(twist, circ)
        core = []
        dec.cylinders.append(
            Cylinder(cid, direction, circ, height, twist, tuple(cyc), tuple(tcyc), tuple(core))
        )
    total = FieldElement(0)
    for c in dec.cylinders:
        total = total + c.area
    if total != s.area():
        raise DecompositionError(f"cylinder areas sum to {total}, surface area {s.area()}")
    return dec


def _mod(x: FieldElement, m: FieldElement) -> FieldElement:
    # exact floor of x/m via float estimate then correction
    import math

    q = math.floor(float(x / m))
    r = x - m * q
    while r.sign() < 0:
        r = r + m
    while (r - m).sign() >= 0:
        r = r - m
    return r


# -- predicates on cylinders ----------------------------------------------------------


def classify_cylinder(c: Cylinder) -> str:
    """'simple' if both boundaries are single saddle connections, 'half_simple'
    if exactly one is, 'other' otherwise (including a boundary shared with itself)."""
    b, t = len(c.bottom) == 1, len(c.top) == 1
    if b and t:
        return "other" if c.bottom == c.top else "simple"
    if b or t:
        return "half_simple"
    return "other"


@dataclass(frozen=True)
class GoldenWitness:
    holds: bool
    shared_saddle: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.holds


def golden_configuration(c1: Cylinder, c2: Cylinder) -> GoldenWitness:
    if c1 == c2:
        return GoldenWitness(False, reason="same cylinder")
    if c1.direction != c2.direction:
        return GoldenWitness(False, reason="not parallel")
    if c1.modulus != c2.modulus:
        return GoldenWitness(False, reason="moduli differ")
    if "simple" not in (classify_cylinder(c1), classify_cylinder(c2)):
        return GoldenWitness(False, reason="neither cylinder is simple")
    r = c1.circumference / c2.circumference
    if r != PHI and 1 / r != PHI:
        return GoldenWitness(False, reason="circumference ratio is not the golden ratio")
    shared = sorted((set(c1.bottom) | set(c1.top)) & (set(c2.bottom) | set(c2.top)))
    if not shared:
        return GoldenWitness(False, reason="no shared boundary saddle connection")
    return GoldenWitness(True, shared[0], "")
