"""Exact straight-line flow on a translation surface.

Trajectories are followed polygon by polygon; every event (leaving through
an edge, reaching a vertex, reaching a marked point, crossing a registered
obstacle segment) is decided with exact sign tests.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Sequence

from .linalg import Vec2, cross, cross_sign, dot_sign, in_sector, ratio, same_direction
from .qfield import FieldElement, as_element
from .surface import Edge, Surface

DEFAULT_BUDGET = int(os.environ.get("GOLDFLAT_BUDGET", "100000"))


class BudgetExceeded(RuntimeError):
    """A trajectory did not terminate within its crossing budget."""


@dataclass(frozen=True)
class Direction:
    """A nonzero direction, normalized so its first nonzero coordinate is +-1."""

    v: Vec2

    @classmethod
    def of(cls, v: Vec2) -> Direction:
        if v.is_zero():
            raise ValueError("direction must be nonzero")
        lead = v.x if v.x.sign() != 0 else v.y
        return cls(v / abs(lead))

    @property
    def normal(self) -> Vec2:
        """The direction rotated by +pi/2; 'up' relative to the flow."""
        return Vec2(-self.v.y, self.v.x)

    def length_of(self, w: Vec2) -> FieldElement:
        """Signed length of w measured in units of the direction vector."""
        return ratio(w, self.v)

    def __str__(self):
        return str(self.v)


def as_direction(d) -> Direction:
    if isinstance(d, Direction):
        return d
    return Direction.of(d)


@dataclass(frozen=True)
class Obstacle:
    """A registered segment (e.g. a piece of a saddle connection) in a polygon."""

    polygon: int
    start: Vec2
    end: Vec2
    tag: object
    offset: FieldElement  # position of ``start`` along the tagged object


@dataclass
class Hit:
    kind: str  # "vertex", "marked", "obstacle", "edge"
    t: FieldElement
    point: Vec2
    index: int = -1
    obstacle: Obstacle | None = None


def _first_event(
    s: Surface,
    p: int,
    start: Vec2,
    d: Vec2,
    obstacles: Sequence[Obstacle] = (),
) -> Hit:
    best: Hit | None = None
    rank = {"vertex": 0, "marked": 0, "obstacle": 1, "edge": 2}

    def consider(h: Hit):
        nonlocal best
        if best is None:
            best = h
            return
        c = (h.t - best.t).sign()
        if c < 0 or (c == 0 and rank[h.kind] < rank[best.kind]):
            best = h

    verts = s.vertices(p)
    for k, v in enumerate(verts):
        w = v - start
        if cross_sign(w, d) == 0 and dot_sign(w, d) > 0:
            consider(Hit("vertex", ratio(w, d), v, k))
    for m, (q, pt) in enumerate(s.marked_points):
        if q != p:
            continue
        w = pt - start
        if cross_sign(w, d) == 0 and dot_sign(w, d) > 0:
            consider(Hit("marked", ratio(w, d), pt, m))
    # signs are compared before dividing: t = tn / den, lam = ln / den
    n = len(verts)
    for i in range(n):
        e = s.edge(p, i)
        den = cross(d, e)
        sd = den.sign()
        if sd == 0:
            continue
        a = verts[i] - start
        tn = cross(a, e)
        if tn.sign() * sd <= 0:
            continue
        ln = cross(a, d)
        if ln.sign() * sd <= 0 or (ln - den).sign() * sd >= 0:
            continue
        t = tn / den
        consider(Hit("edge", t, start + d * t, i))
    for ob in obstacles:
        if ob.polygon != p:
            continue
        e = ob.end - ob.start
        den = cross(d, e)
        sd = den.sign()
        if sd == 0:
            continue
        a = ob.start - start
        tn = cross(a, e)
        if tn.sign() * sd <= 0:
            continue
        ln = cross(a, d)
        if ln.sign() * sd < 0 or (ln - den).sign() * sd > 0:
            continue
        t = tn / den
        consider(Hit("obstacle", t, start + d * t, obstacle=ob))
    if best is None:
        raise RuntimeError(f"trajectory escaped polygon {p} from {start} along {d}")
    return best


@dataclass
class Trajectory:
    """Result of following a straight line until it stops."""

    start_polygon: int
    start_point: Vec2
    direction: Vec2
    segments: list[tuple[int, Vec2, Vec2]] = field(default_factory=list)
    crossing_word: list[Edge] = field(default_factory=list)
    end: Hit | None = None
    end_polygon: int = -1
    status: str = "running"  # "hit", "budget"
    end_singularity: int | None = None

    @property
    def holonomy(self) -> Vec2:
        total = Vec2.of(0, 0)
        for _, a, b in self.segments:
            total = total + (b - a)
        return total

    @property
    def crossings(self) -> int:
        return len(self.crossing_word)


def flow(
    s: Surface,
    p: int,
    start: Vec2,
    d: Vec2,
    budget: int = DEFAULT_BUDGET,
    obstacles: Sequence[Obstacle] = (),
) -> Trajectory:
    """Follow the ray from ``start`` (in polygon p) until it stops.

    The first segment must enter polygon p's interior or run along its boundary.
    """
    traj = Trajectory(p, start, d)
    pt = start
    by_polygon: dict[int, list[Obstacle]] = {}
    for ob in obstacles:
        by_polygon.setdefault(ob.polygon, []).append(ob)
    while True:
        h = _first_event(s, p, pt, d, by_polygon.get(p, ()))
        traj.segments.append((p, pt, h.point))
        if h.kind != "edge":
            traj.end, traj.end_polygon, traj.status = h, p, "hit"
            if h.kind == "vertex":
                traj.end_singularity = s.corner_to_singularity[(p, h.index)]
            elif h.kind == "marked":
                traj.end_singularity = s.marked_singularity(h.index)
            return traj
        if len(traj.crossing_word) >= budget:
            traj.status = "budget"
            traj.end_polygon = p
            return traj
        traj.crossing_word.append((p, h.index))
        p, pt = s.glue_point(p, h.index, h.point)


def corners_with_direction(s: Surface, sid: int, d: Vec2) -> list[Edge]:
    """Corners of a vertex orbit whose half-open sector contains d (ccw order)."""
    return [c for c in s.singularities[sid].corners if in_sector(*s.corner_sector(c), d)]


def arrival_corner(s: Surface, traj: Trajectory) -> Edge | None:
    """For a trajectory ending at a vertex, the corner containing the backward ray."""
    if traj.end is None or traj.end.kind != "vertex":
        return None
    back = -traj.direction
    # start at the corner reached; a ray along the closing edge of that corner
    # belongs to the next corner counterclockwise
    c = (traj.end_polygon, traj.end.index)
    for _ in range(len(s.singularities[traj.end_singularity].corners)):
        if in_sector(*s.corner_sector(c), back):
            return c
        c = s.next_corner(c)
    raise RuntimeError("no corner contains the arrival direction")


def start_point(s: Surface, sid: int, d: Vec2, which: int = 0) -> tuple[int, Vec2]:
    """Polygon and position from which the ``which``-th outgoing d-ray of sid leaves."""
    sing = s.singularities[sid]
    if not sing.is_vertex:
        return s.marked_points[sing.marked_index]
    c = corners_with_direction(s, sid, d)[which]
    return c[0], s.vertex(*c)


def trace_ray(
    s: Surface,
    point,
    d,
    budget: int = DEFAULT_BUDGET,
) -> Trajectory:
    """Trace from a singularity id or a (polygon, position) pair in direction d.

    Returns a trajectory with ``status == "hit"`` and the singularity reached,
    or ``status == "budget"`` when the budget ran out (no claim either way).
    """
    dv = d.v if isinstance(d, Direction) else d
    if isinstance(point, int):
        p, pos = start_point(s, point, dv)
    else:
        p, pos = point
    return flow(s, p, pos, dv, budget)
