"""Translation surfaces presented as polygons glued by translations.

A polygon is a cyclic tuple of edge vectors; vertex 0 sits at the origin of
the polygon's own coordinates and vertex ``i`` is the sum of the first ``i``
edges.  Edge ``(p, i)`` runs from vertex ``i`` to vertex ``i + 1`` of polygon
``p``.  Every vertex of every polygon is a point of interest: a cone point
if its total angle exceeds 2*pi, otherwise a marked point.  Additional marked
points strictly inside polygons are carried separately.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .linalg import (
    ZERO,
    Matrix2,
    Vec2,
    cross,
    cross_sign,
    dot_sign,
    in_sector,
    on_segment,
    orient,
    same_direction,
    vec,
)
from .qfield import FieldElement

Edge = tuple[int, int]

REFERENCE_RAY = vec(1, 0)


class SurfaceError(ValueError):
    """A surface description violates a structural invariant."""


@dataclass(frozen=True)
class Singularity:
    """A vertex orbit or interior marked point with cone angle 2*pi*k."""

    id: int
    angle_multiple: int
    corners: tuple[Edge, ...] = ()
    marked_index: int | None = None

    @property
    def order(self) -> int:
        return self.angle_multiple - 1

    @property
    def is_vertex(self) -> bool:
        return self.marked_index is None


@dataclass(frozen=True)
class ComponentSignature:
    orders: tuple[int, ...]
    marked: int

    @property
    def genus(self) -> int:
        return sum(self.orders) // 2 + 1

    def __str__(self):
        entries = list(self.orders) + [0] * self.marked
        return "H(" + ",".join(map(str, entries)) + ")"


@dataclass(frozen=True)
class StratumSignature:
    components: tuple[ComponentSignature, ...]

    def __str__(self):
        return " x ".join(str(c) for c in self.components)

    @property
    def marked(self) -> int:
        return sum(c.marked for c in self.components)

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(sorted((o for c in self.components for o in c.orders), reverse=True))


def _signed_area2(verts: Sequence[Vec2]) -> FieldElement:
    n = len(verts)
    total = FieldElement(0)
    for i in range(n):
        total = total + cross(verts[i], verts[(i + 1) % n])
    return total


def _segments_intersect(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool:
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return (
        (o1 == 0 and on_segment(c, a, b))
        or (o2 == 0 and on_segment(d, a, b))
        or (o3 == 0 and on_segment(a, c, d))
        or (o4 == 0 and on_segment(b, c, d))
    )


def point_in_polygon(p: Vec2, verts: Sequence[Vec2]) -> int:
    """+1 strictly inside, 0 on the boundary, -1 outside (exact)."""
    n = len(verts)
    winding = 0
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        if on_segment(p, a, b):
            return 0
        if (a.y <= p.y) and (b.y > p.y) and orient(a, b, p) > 0:
            winding += 1
        elif (a.y > p.y) and (b.y <= p.y) and orient(a, b, p) < 0:
            winding -= 1
    return 1 if winding else -1


def _upper(v: Vec2) -> bool:
    """Direction angle in [0, pi)."""
    sy = v.y.sign()
    return sy > 0 or (sy == 0 and v.x.sign() > 0)


def _check_polygon(pid: int, edges: Sequence[Vec2]) -> None:
    n = len(edges)
    if n < 3:
        raise SurfaceError(f"polygon {pid}: needs at least 3 edges")
    for i, e in enumerate(edges):
        if e.is_zero():
            raise SurfaceError(f"polygon {pid}: edge {i} has zero length")
    total = ZERO
    for e in edges:
        total = total + e
    if not total.is_zero():
        raise SurfaceError(f"polygon {pid}: edge loop is open (sum {total})")
    verts = _vertices(edges)
    if _signed_area2(verts).sign() <= 0:
        raise SurfaceError(f"polygon {pid}: not positively oriented")
    left_turns = True
    wraps = 0
    for i in range(n):
        # adjacent edges may only share their common vertex
        e, nxt = edges[i], edges[(i + 1) % n]
        turn = cross_sign(e, nxt)
        if turn == 0 and dot_sign(e, nxt) < 0:
            raise SurfaceError(f"polygon {pid}: edges {i} and {(i + 1) % n} fold back")
        left_turns = left_turns and turn >= 0
        wraps += not _upper(e) and _upper(nxt)
    if left_turns and wraps == 1:
        return  # convex: edge directions turn left and wind once
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            c, d = verts[j], verts[(j + 1) % n]
            if _segments_intersect(a, b, c, d):
                raise SurfaceError(f"polygon {pid}: edges {i} and {j} intersect (not simple)")


def _vertices(edges: Sequence[Vec2]) -> tuple[Vec2, ...]:
    out = [ZERO]
    for e in edges[:-1]:
        out.append(out[-1] + e)
    return tuple(out)


class Surface:
    """An immutable, validated translation surface."""

    def __init__(
        self,
        polygons: Iterable[Sequence[Vec2]],
        pairing: Mapping[Edge, Edge] | Iterable[tuple[Edge, Edge]],
        marked_points: Iterable[tuple[int, Vec2]] = (),
    ):
        polys = [tuple(p) for p in polygons]
        pairs = dict(pairing.items() if isinstance(pairing, Mapping) else pairing)
        for e, f in list(pairs.items()):
            pairs.setdefault(f, e)
        marks = [(int(p), pt) for p, pt in marked_points]
        polys, pairs, marks = _absorb_edge_marks(polys, pairs, marks)
        self.polygons: tuple[tuple[Vec2, ...], ...] = tuple(polys)
        self.pairing: dict[Edge, Edge] = pairs
        self.marked_points: tuple[tuple[int, Vec2], ...] = tuple(marks)
        self._validate()

    # -- validation -----------------------------------------------------------

    def _validate(self) -> None:
        for pid, edges in enumerate(self.polygons):
            _check_polygon(pid, edges)
        all_edges = {(p, i) for p, edges in enumerate(self.polygons) for i in range(len(edges))}
        for e in all_edges:
            if e not in self.pairing:
                raise SurfaceError(f"edge {e} is dangling (no partner)")
        for e, f in self.pairing.items():
            if e not in all_edges or f not in all_edges:
                raise SurfaceError(f"pairing {e}<->{f} names a nonexistent edge")
            if e == f:
                raise SurfaceError(f"edge {e} is paired with itself")
            if self.pairing.get(f) != e:
                raise SurfaceError(f"pairing is not an involution at {e}<->{f}")
            if not (self.edge(*e) + self.edge(*f)).is_zero():
                raise SurfaceError(
                    f"pairing mismatch {e}<->{f}: vec {self.edge(*e)} != -{self.edge(*f)}"
                )
        for k, (p, pt) in enumerate(self.marked_points):
            if not 0 <= p < len(self.polygons):
                raise SurfaceError(f"marked point {k}: no polygon {p}")
            where = point_in_polygon(pt, self.vertices(p))
            if where < 0:
                raise SurfaceError(f"marked point {k} lies outside polygon {p}")
            if where == 0:
                raise SurfaceError(f"marked point {k} coincides with a vertex of polygon {p}")

    # -- basic geometry ---------------------------------------------------------

    def edge(self, p: int, i: int) -> Vec2:
        edges = self.polygons[p]
        return edges[i % len(edges)]

    def vertices(self, p: int) -> tuple[Vec2, ...]:
        return self._vertex_cache[p]

    @cached_property
    def _vertex_cache(self) -> tuple[tuple[Vec2, ...], ...]:
        return tuple(_vertices(edges) for edges in self.polygons)

    def vertex(self, p: int, i: int) -> Vec2:
        v = self.vertices(p)
        return v[i % len(v)]

    def edges(self) -> list[Edge]:
        return [(p, i) for p, edges in enumerate(self.polygons) for i in range(len(edges))]

    def opposite(self, e: Edge) -> Edge:
        return self.pairing[e]

    def glue_point(self, p: int, i: int, pt: Vec2) -> tuple[int, Vec2]:
        """Map a point on edge (p, i) to the same surface point seen from the partner."""
        q, j = self.pairing[(p, i)]
        return q, pt - self.vertex(p, i) + self.vertex(q, j + 1)

    # -- cone points ------------------------------------------------------------

    def next_corner(self, corner: Edge) -> Edge:
        """The corner following ``corner`` counterclockwise around its vertex."""
        p, i = corner
        n = len(self.polygons[p])
        return self.pairing[(p, (i - 1) % n)]

    def corner_sector(self, corner: Edge) -> tuple[Vec2, Vec2]:
        """(u, w): the corner spans the ccw sector from u to w."""
        p, i = corner
        return self.edge(p, i), -self.edge(p, i - 1)

    @cached_property
    def singularities(self) -> tuple[Singularity, ...]:
        seen: dict[Edge, int] = {}
        out: list[Singularity] = []
        for start in self.edges():
            if start in seen:
                continue
            orbit = []
            c = start
            while c not in seen:
                seen[c] = len(out)
                orbit.append(c)
                c = self.next_corner(c)
            k = sum(1 for corner in orbit if in_sector(*self.corner_sector(corner), REFERENCE_RAY))
            out.append(Singularity(len(out), k, tuple(orbit)))
        for m in range(len(self.marked_points)):
            out.append(Singularity(len(out), 1, (), m))
        return tuple(out)

    @cached_property
    def corner_to_singularity(self) -> dict[Edge, int]:
        return {c: s.id for s in self.singularities for c in s.corners}

    def marked_singularity(self, m: int) -> int:
        return self.num_vertex_orbits + m

    @cached_property
    def num_vertex_orbits(self) -> int:
        return sum(1 for s in self.singularities if s.is_vertex)

    def polygon_of_singularity(self, sid: int) -> int:
        s = self.singularities[sid]
        if s.is_vertex:
            return s.corners[0][0]
        return self.marked_points[s.marked_index][0]

    # -- global invariants ----------------------------------------------------------

    @cached_property
    def component_of_polygon(self) -> tuple[int, ...]:
        parent = list(range(len(self.polygons)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (p, _), (q, _) in self.pairing.items():
            rp, rq = find(p), find(q)
            if rp != rq:
                parent[max(rp, rq)] = min(rp, rq)
        roots: dict[int, int] = {}
        labels = []
        for p in range(len(self.polygons)):
            r = find(p)
            labels.append(roots.setdefault(r, len(roots)))
        return tuple(labels)

    def area(self) -> FieldElement:
        total = FieldElement(0)
        for p in range(len(self.polygons)):
            total = total + _signed_area2(self.vertices(p))
        return total / 2

    def __eq__(self, other):
        if not isinstance(other, Surface):
            return NotImplemented
        return (
            self.polygons == other.polygons
            and self.pairing == other.pairing
            and self.marked_points == other.marked_points
        )

    def __hash__(self):
        return hash((self.polygons, tuple(sorted(self.pairing.items()))))

    def __repr__(self):
        return f"<Surface {len(self.polygons)} polygons, {stratum(self)}>"


def _absorb_edge_marks(polys, pairs, marks):
    """Turn marked points lying on edges into polygon vertices.

    Both copies of the edge are subdivided so the pairing stays a translation.
    """
    interior = []
    for p, pt in marks:
        if not 0 <= p < len(polys):
            raise SurfaceError(f"marked point names missing polygon {p}")
        verts = _vertices(polys[p])
        hit = None
        n = len(polys[p])
        for i in range(n):
            a, b = verts[i], verts[(i + 1) % n]
            if on_segment(pt, a, b):
                if pt == a or pt == b:
                    raise SurfaceError(f"marked point {pt} coincides with a vertex of polygon {p}")
                hit = i
                break
        if hit is None:
            interior.append((p, pt))
            continue
        polys, pairs = _split_edge(polys, pairs, p, hit, pt - verts[hit])
    return polys, pairs, interior


def _split_edge(polys, pairs, p, i, offset: Vec2):
    """Subdivide edge (p, i) at ``offset`` from its start, and its partner to match."""
    q, j = pairs[(p, i)]
    e = polys[p][i]
    keyed = [[[(v, (r, k, 0))] for k, v in enumerate(edges)] for r, edges in enumerate(polys)]
    keyed[p][i] = [(offset, (p, i, 0)), (e - offset, (p, i, 1))]
    keyed[q][j] = [(offset - e, (q, j, 0)), (-offset, (q, j, 1))]
    flat = [[item for group in row for item in group] for row in keyed]
    index = {key: (r, k) for r, row in enumerate(flat) for k, (_, key) in enumerate(row)}
    new_pairs: dict[Edge, Edge] = {}
    for (r, k), (r2, k2) in pairs.items():
        if (r, k) in ((p, i), (q, j)):
            continue
        new_pairs[index[(r, k, 0)]] = index[(r2, k2, 0)]
    for a, b in (((p, i, 0), (q, j, 1)), ((p, i, 1), (q, j, 0))):
        new_pairs[index[a]] = index[b]
        new_pairs[index[b]] = index[a]
    return [tuple(v for v, _ in row) for row in flat], new_pairs


# -- operations ----------------------------------------------------------------


def build_surface(polygons, pairing, marked_points=()) -> Surface:
    return Surface(polygons, pairing, marked_points)


def cone_data(s: Surface) -> list[Singularity]:
    return list(s.singularities)


def components(s: Surface) -> list[list[int]]:
    groups: dict[int, list[int]] = {}
    for p, c in enumerate(s.component_of_polygon):
        groups.setdefault(c, []).append(p)
    return [groups[c] for c in sorted(groups)]


def singularity_component(s: Surface, sid: int) -> int:
    return s.component_of_polygon[s.polygon_of_singularity(sid)]


def stratum(s: Surface) -> StratumSignature:
    comps: list[tuple[list[int], int]] = [([], 0) for _ in components(s)]
    for sing in s.singularities:
        c = singularity_component(s, sing.id)
        orders, marked = comps[c]
        if sing.order > 0:
            orders.append(sing.order)
            comps[c] = (orders, marked)
        else:
            comps[c] = (orders, marked + 1)
    return StratumSignature(
        tuple(ComponentSignature(tuple(sorted(o, reverse=True)), m) for o, m in comps)
    )


def genus(s: Surface) -> list[int]:
    out = []
    for sig in stratum(s).components:
        total = sum(sig.orders)
        if total % 2:
            raise SurfaceError("odd total order violates Gauss-Bonnet")
        out.append(total // 2 + 1)
    return out


def euler_genus(s: Surface) -> list[int]:
    """Genus per component from V - E + F, independent of cone angles."""
    comp = s.component_of_polygon
    n = len(components(s))
    V, E, F = [0] * n, [0] * n, [0] * n
    for p in range(len(s.polygons)):
        F[comp[p]] += 1
        E[comp[p]] += len(s.polygons[p])
    for sing in s.singularities:
        if sing.is_vertex:
            V[comp[sing.corners[0][0]]] += 1
    out = []
    for c in range(n):
        chi = V[c] - E[c] // 2 + F[c]
        out.append((2 - chi) // 2)
    return out


def area(s: Surface) -> FieldElement:
    return s.area()


def apply_matrix(s: Surface, m: Matrix2) -> Surface:
    det = m.det()
    if det.sign() == 0:
        raise SurfaceError("matrix is singular")
    if det.sign() > 0:
        polys = [tuple(m(e) for e in edges) for edges in s.polygons]
        pairing = dict(s.pairing)
        marks = [(p, m(pt)) for p, pt in s.marked_points]
        return Surface(polys, pairing, marks)
    # orientation reversing: reverse each loop to keep polygons ccw
    polys = []
    for edges in s.polygons:
        n = len(edges)
        polys.append(tuple(-m(edges[n - 1 - k]) for k in range(n)))

    def re(e: Edge) -> Edge:
        p, i = e
        return (p, len(s.polygons[p]) - 1 - i)

    pairing = {re(e): re(f) for e, f in s.pairing.items()}
    marks = [(p, m(pt)) for p, pt in s.marked_points]
    return Surface(polys, pairing, marks)


# -- involutions ---------------------------------------------------------------


@dataclass(frozen=True)
class InvolutionCandidate:
    """Polygon p maps onto polygon ``targets[p]`` rotated by pi, with edge i
    of p going to edge ``i + shifts[p]`` of the target."""

    targets: tuple[int, ...]
    shifts: tuple[int, ...]


class InvolutionError(ValueError):
    pass


@dataclass(frozen=True)
class FixedPoint:
    kind: str  # "interior", "edge", "singularity"
    polygon: int
    position: Vec2
    singularity: int | None = None


def _involution_translation(s: Surface, cand: InvolutionCandidate, p: int) -> Vec2:
    q, sh = cand.targets[p], cand.shifts[p]
    return s.vertex(q, sh) + s.vertex(p, 0)


def central_symmetry(s: Surface, p: int = 0) -> InvolutionCandidate:
    """Point reflection of a single even-sided polygon onto itself."""
    if len(s.polygons) != 1 or len(s.polygons[p]) % 2:
        raise InvolutionError("central symmetry needs a single even-sided polygon")
    return InvolutionCandidate((0,), (len(s.polygons[0]) // 2,))


def verify_involution(s: Surface, cand: InvolutionCandidate) -> list[FixedPoint]:
    n_poly = len(s.polygons)
    if len(cand.targets) != n_poly or len(cand.shifts) != n_poly:
        raise InvolutionError("candidate does not cover every polygon")
    for p in range(n_poly):
        q = cand.targets[p]
        if not 0 <= q < n_poly or len(s.polygons[q]) != len(s.polygons[p]):
            raise InvolutionError(f"polygon {p}: target {q} has the wrong shape")
        n = len(s.polygons[p])
        if cand.targets[q] != p or (cand.shifts[p] + cand.shifts[q]) % n:
            raise InvolutionError(f"polygon {p}: candidate does not square to the identity")

    def img(e: Edge) -> Edge:
        p, i = e
        n = len(s.polygons[p])
        return (cand.targets[p], (i + cand.shifts[p]) % n)

    for p in range(n_poly):
        for i in range(len(s.polygons[p])):
            q, j = img((p, i))
            if not (s.edge(q, j) + s.edge(p, i)).is_zero():
                raise InvolutionError(f"edge {(p, i)}: derivative is not -identity")
            if img(s.pairing[(p, i)]) != s.pairing[(q, j)]:
                raise InvolutionError(f"edge {(p, i)}: gluing not preserved")
    marks = {}
    for k, (p, pt) in enumerate(s.marked_points):
        marks[(p, pt)] = k
    for k, (p, pt) in enumerate(s.marked_points):
        q = cand.targets[p]
        image = _involution_translation(s, cand, p) - pt
        if (q, image) not in marks:
            raise InvolutionError(f"marked point {k} is not mapped to a marked point")

    fixed: list[FixedPoint] = []
    for p in range(n_poly):
        if cand.targets[p] != p:
            continue
        centre = _involution_translation(s, cand, p) / 2
        if point_in_polygon(centre, s.vertices(p)) > 0:
            fixed.append(FixedPoint("interior", p, centre))
    done = set()
    for e in s.edges():
        if e in done:
            continue
        done.add(e)
        done.add(s.pairing[e])
        if img(e) == s.pairing[e]:
            p, i = e
            mid = s.vertex(p, i) + s.edge(p, i) / 2
            fixed.append(FixedPoint("edge", p, mid))
    c2s = s.corner_to_singularity
    for sing in s.singularities:
        if sing.is_vertex:
            if c2s[img(sing.corners[0])] == sing.id:
                p, i = sing.corners[0]
                fixed.append(FixedPoint("singularity", p, s.vertex(p, i), sing.id))
        else:
            p, pt = s.marked_points[sing.marked_index]
            if cand.targets[p] == p and _involution_translation(s, cand, p) - pt == pt:
                fixed.append(FixedPoint("singularity", p, pt, sing.id))
    return fixed


def involution_image_singularity(s: Surface, cand: InvolutionCandidate, sid: int) -> int:
    sing = s.singularities[sid]
    if sing.is_vertex:
        p, i = sing.corners[0]
        n = len(s.polygons[p])
        return s.corner_to_singularity[(cand.targets[p], (i + cand.shifts[p]) % n)]
    p, pt = s.marked_points[sing.marked_index]
    image = _involution_translation(s, cand, p) - pt
    for k, (q, qt) in enumerate(s.marked_points):
        if q == cand.targets[p] and qt == image:
            return s.marked_singularity(k)
    raise InvolutionError("marked point image not found")


def find_involutions(s: Surface) -> list[InvolutionCandidate]:
    """All combinatorial candidates (polygon -> rotated polygon) that verify."""
    n_poly = len(s.polygons)
    options: list[list[tuple[int, int]]] = []
    for p in range(n_poly):
        opts = []
        n = len(s.polygons[p])
        for q in range(n_poly):
            if len(s.polygons[q]) != n:
                continue
            for sh in range(n):
                if all((s.edge(q, i + sh) + s.edge(p, i)).is_zero() for i in range(n)):
                    opts.append((q, sh))
        options.append(opts)
    found = []

    def rec(p, targets, shifts):
        if p == n_poly:
            cand = InvolutionCandidate(tuple(targets), tuple(shifts))
            try:
                verify_involution(s, cand)
            except InvolutionError:
                return
            found.append(cand)
            return
        if targets[p] is not None:
            rec(p + 1, targets, shifts)
            return
        for q, sh in options[p]:
            if targets[q] is not None and q != p:
                continue
            n = len(s.polygons[p])
            if q == p and (2 * sh) % n:
                continue
            targets[p], shifts[p] = q, sh
            targets[q], shifts[q] = p, (-sh) % n
            rec(p + 1, targets, shifts)
            targets[p] = targets[q] = None
            shifts[p] = shifts[q] = None

    rec(0, [None] * n_poly, [None] * n_poly)
    return found
