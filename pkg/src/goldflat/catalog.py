"""Named surfaces with their cylinder classes and distinguished saddle connections.

Most surfaces are built from a horizontal cylinder diagram: a list of
cylinders, each with its bottom and top saddle connections (left to right),
and a side vector fixing height and twist.  Constraint equations are stored
as (lhs, rhs) pairs of length names and are re-checked on every instance.
"""

from __future__ import annotations

import inspect
from dataclasses import dataclass, field
from typing import Callable

from .cylinders import Cylinder, Decomposition, cylinder_decomposition, golden_configuration
from .flow import Direction
from .linalg import Matrix2, Vec2, dot, vec
from .qfield import PHI, FieldElement, as_element, qf
from .surface import Surface, SurfaceError, apply_matrix, build_surface
from .surgery import (
    CylinderDiagram,
    CylSpec,
    alignment_shears,
    collapse_diagram,
    diagram_from_decomposition,
    glue_diagram,
    shear_diagram,
)

HORIZONTAL = Direction.of(vec(1, 0))
VERTICAL = Direction.of(vec(0, 1))


class CatalogError(ValueError):
    pass


@dataclass
class CylinderClass:
    """A declared class of parallel cylinders, located by circumference and height."""

    name: str
    direction: Vec2
    members: list[tuple[FieldElement, FieldElement]]
    role: str = "subequivalence"
    golden: bool | None = None  # expected golden_configuration verdict for pairs

    def locate(self, dec: Decomposition) -> list[Cylinder]:
        found = []
        for circ, height in self.members:
            hits = [c for c in dec.cylinders if c.circumference == circ and c.height == height]
            hits = [c for c in hits if c not in found]
            if not hits:
                raise CatalogError(f"class {self.name}: no cylinder with circumference {circ}, height {height}")
            found.append(hits[0])
        return found


@dataclass
class TaggedSurface:
    name: str
    surface: Surface
    params: dict[str, FieldElement]
    lengths: dict[str, FieldElement] = field(default_factory=dict)
    constraints: list[tuple[str, FieldElement, str]] = field(default_factory=list)
    classes: list[CylinderClass] = field(default_factory=list)
    tags: dict[str, object] = field(default_factory=dict)
    diagram: CylinderDiagram | None = None

    def check_constraints(self) -> list[tuple[str, bool]]:
        """Each constraint ``lhs = factor * rhs`` checked exactly."""
        out = []
        for lhs, factor, rhs in self.constraints:
            ok = self.lengths[lhs] == factor * self.lengths[rhs]
            out.append((f"{lhs} = ({factor}) * {rhs}", ok))
        return out

    def cylinder_class(self, name: str) -> CylinderClass:
        for c in self.classes:
            if c.name == name:
                return c
        raise KeyError(name)

    def decompose(self, direction, budget: int | None = None) -> Decomposition:
        if budget is None:
            return cylinder_decomposition(self.surface, direction)
        return cylinder_decomposition(self.surface, direction, budget)


@dataclass(frozen=True)
class SlitTag:
    """A saddle connection named by holonomy and the base polygons it crosses."""

    holonomy: Vec2
    polygons: frozenset[int]
    pick: int | None = None

    def resolve(self, dec: Decomposition):
        return _find_slit(dec, self.holonomy, set(self.polygons), self.pick)


def _positive(params: dict[str, FieldElement], *names: str) -> None:
    for n in names:
        if params[n].sign() <= 0:
            raise CatalogError(f"parameter {n} must be positive, got {params[n]}")


def _opposite_sides(edges: list[Vec2]) -> Surface:
    n = len(edges)
    pairing = {(0, i): (0, (i + n // 2) % n) for i in range(n)}
    return build_surface([edges], pairing)


# -- classical examples ---------------------------------------------------------------------


def torus(side=1) -> TaggedSurface:
    a = as_element(side)
    s = build_surface([[vec(a, 0), vec(0, a), vec(-a, 0), vec(0, -a)]], {(0, 0): (0, 2), (0, 1): (0, 3)})
    return TaggedSurface("torus", s, {"side": a})


def octagon(side=1) -> TaggedSurface:
    """Regular octagon over Q(sqrt 2), opposite sides glued."""
    a = as_element(side)
    h = qf(0, "1/2", 2) * a  # side * sqrt(2)/2
    edges = [vec(a, 0), vec(h, h), vec(0, a), vec(-h, h), vec(-a, 0), vec(-h, -h), vec(0, -a), vec(h, -h)]
    return TaggedSurface("octagon", _opposite_sides(edges), {"side": a})


def decagon(side=1) -> TaggedSurface:
    """Affine image of the regular decagon with exact Q(sqrt 5) side vectors.

    Side k is (cos(k pi/5), sin(k pi/5) / sin(pi/5)); the affine map keeps the
    stratum and the central symmetry.
    """
    a = as_element(side)
    phi = PHI
    xs = [1, phi / 2, (phi - 1) / 2, -(phi - 1) / 2, -phi / 2]
    ys = [0, 1, phi, phi, 1]
    half = [vec(x, y) * a for x, y in zip(xs, ys)]
    edges = half + [-v for v in half]
    return TaggedSurface("decagon", _opposite_sides(edges), {"side": a})


def double_pentagon(side=1) -> TaggedSurface:
    """Two (affinely regular) pentagons, each side glued to its parallel partner."""
    a = as_element(side)
    phi = PHI
    pent = [vec(1, 0), vec((phi - 1) / 2, phi), vec(-phi / 2, 1), vec(-phi / 2, -1), vec((phi - 1) / 2, -phi)]
    pent = [v * a for v in pent]
    other = [-v for v in pent]
    pairing = {(0, i): (1, i) for i in range(5)}
    return TaggedSurface("double_pentagon", build_surface([pent, other], pairing), {"side": a})


def golden_l(side=1) -> TaggedSurface:
    """The golden L: squares of sides phi and 1 stacked, an eigenform in H(2)."""
    a = as_element(side)
    phi = PHI
    lengths = {"x": a, "y": (phi - 1) * a}  # bottom of the big square split at the small square
    diagram = CylinderDiagram(
        HORIZONTAL,
        {"x": a, "y": (phi - 1) * a, "t": a},
        [
            CylSpec(["x", "y"], ["t", "y"], vec(0, phi * a), "big"),
            CylSpec(["t"], ["x"], vec(0, a), "small"),
        ],
    )
    s = diagram.realize()
    lengths = {"big": phi * a, "small": a}
    classes = [CylinderClass("B", vec(1, 0), [(phi * a, phi * a), (a, a)], golden=True)]
    return TaggedSurface(
        "golden_L", s, {"side": a}, lengths, [("big", phi, "small")], classes, diagram=diagram
    )


# -- the golden cylinder configuration ------------------------------------------------------


def _figure1_diagram(h1, h2, ell, p_shift) -> CylinderDiagram:
    phi = PHI
    lengths = {"alpha": ell, "gamma": ell, "beta": phi * ell, "delta": phi * ell, "pi": phi * ell}
    return CylinderDiagram(
        HORIZONTAL,
        lengths,
        [
            CylSpec(["beta"], ["pi"], vec(p_shift, phi * h1), "C3low"),
            CylSpec(["pi"], ["delta"], vec(-p_shift, h2), "C3up"),
            CylSpec(["gamma", "delta"], ["alpha", "beta"], vec(0, phi * h2), "C2"),
            CylSpec(["alpha"], ["gamma"], vec(0, h1), "C1"),
        ],
    )


def figure1(h1=1, h2=1, ell=1, p_shift=0) -> TaggedSurface:
    """Genus two golden eigenform with the golden point p marked.

    Horizontal cylinders: C1 (circumference l, height h1), C2 (phi^2 l, phi h2)
    and the cylinder of circumference phi l, split by the horizontal loop pi
    through p into C3low (height phi h1) and C3up (height h2).  Class A =
    {C1, C3low} is a pair of disjoint simple cylinders, class B = {C2, C3up}
    is in the golden configuration.  ``p_shift`` moves p along pi's circle.
    """
    h1, h2, ell, p_shift = map(as_element, (h1, h2, ell, p_shift))
    params = {"h1": h1, "h2": h2, "ell": ell, "p_shift": p_shift}
    _positive(params, "h1", "h2", "ell")
    phi = PHI
    diagram = _figure1_diagram(h1, h2, ell, p_shift)
    s = diagram.realize()
    lengths = dict(diagram.lengths)
    lengths.update({"C1": ell, "C3low": phi * ell, "C2": phi * phi * ell, "C3up": phi * ell})
    classes = [
        CylinderClass("A", vec(1, 0), [(ell, h1), (phi * ell, phi * h1)], golden=False),
        CylinderClass("B", vec(1, 0), [(phi * phi * ell, phi * h2), (phi * ell, h2)], golden=True),
    ]
    constraints = [("C3low", phi, "C1"), ("C2", phi, "C3up"), ("beta", phi, "alpha")]
    # the golden point is the vertex orbit at the start of pi
    return TaggedSurface("figure1", s, params, lengths, constraints, classes, {"p": "pi"}, diagram)


def figure2a(h1=1, h2=1, ell=1) -> TaggedSurface:
    """The figure1 surface with p directly above the zero of beta.

    Both A cylinders then carry a vertical saddle connection (of lengths h1
    and phi h1), the unique pair of vertical saddle connections outside the
    golden configuration.
    """
    t = figure1(h1, h2, ell, 0)
    t.name = "figure2a"
    phi = PHI
    t.tags.update(
        {
            "slit_short": SlitTag(vec(0, t.params["h1"]), frozenset({3})),
            "slit_long": SlitTag(vec(0, phi * t.params["h1"]), frozenset({0})),
        }
    )
    return t


def _find_slit(dec: Decomposition, holonomy: Vec2, polygons: set[int], pick: int | None = None):
    """The saddle connection with this holonomy crossing exactly these polygons.

    With ``pick`` set, several matches are allowed and ordered by where they start.
    """
    hits = [sc for sc in dec.saddles if sc.holonomy == holonomy and {p for p, _, _ in sc.segments} == polygons]
    if pick is not None and len(hits) > pick:
        hits.sort(key=lambda sc: (sc.segments[0][0], sc.segments[0][1].x, sc.segments[0][1].y))
        return hits[pick]
    if len(hits) != 1:
        raise CatalogError(f"expected one saddle connection {holonomy} in polygons {sorted(polygons)}, found {len(hits)}")
    return hits[0]


def _glue_pair(base: TaggedSurface, direction: Direction, slits, widths) -> CylinderDiagram:
    """Glue simple cylinders of the given horizontal widths into slits parallel to direction."""
    dec = cylinder_decomposition(base.surface, direction)
    diagram = diagram_from_decomposition(dec)
    d = direction.v
    ids = [_find_slit(dec, *slit).id for slit in slits]
    for sid, x, name in zip(ids, widths, ("V1", "V2")):
        # a glued cylinder with a horizontal side of width x
        diagram = glue_diagram(diagram, sid, d.y * x, -x * d.x / dot(d, d), name)
    return diagram


def locus_1117(h1=1, h2=1, ell=1, w=1) -> TaggedSurface:
    """Glue simple vertical cylinders of widths w and phi w into the two slits of figure2a.

    Classes: C1 = the two glued vertical cylinders (simple), C2 = the
    horizontal golden pair inherited from class B of figure2a.
    """
    base = figure2a(h1, h2, ell)
    w = as_element(w)
    _positive({"w": w}, "w")
    phi = PHI
    h1, h2, ell = base.params["h1"], base.params["h2"], base.params["ell"]
    vdec = cylinder_decomposition(base.surface, VERTICAL)
    diagram = diagram_from_decomposition(vdec)
    # polygons of the base are the horizontal cylinders in diagram order
    short = base.tags["slit_short"].resolve(vdec)
    long = base.tags["slit_long"].resolve(vdec)
    # vertical flow: 'up' is -x, so a glued cylinder's height is its horizontal width
    diagram = glue_diagram(diagram, short.id, w, 0, "V1")
    diagram = glue_diagram(diagram, long.id, phi * w, 0, "V2")
    s = diagram.realize()
    params = {"h1": h1, "h2": h2, "ell": ell, "w": w}
    lengths = {"V1": h1, "V2": phi * h1, "C2": phi * phi * ell, "C3up": phi * ell}
    classes = [
        CylinderClass("C1", vec(0, 1), [(h1, w), (phi * h1, phi * w)], role="equivalence", golden=False),
        CylinderClass("C2", vec(1, 0), [(phi * phi * ell, phi * h2), (phi * ell, h2)], role="equivalence", golden=True),
    ]
    constraints = [("V2", phi, "V1"), ("C2", phi, "C3up")]
    return TaggedSurface("locus_1117", s, params, lengths, constraints, classes, {}, diagram)


def figure2b(h1=1, h2=1, ell=1) -> TaggedSurface:
    """Mirror image of figure2a under (x, y) -> (-x, y).

    Cylinder data and the vertical slit pair are unchanged; saddle
    connections leaning one way in figure2a lean the other way here.
    """
    t = figure2a(h1, h2, ell)
    t.name = "figure2b"
    t.surface = apply_matrix(t.surface, Matrix2.of(-1, 0, 0, 1))
    t.diagram = None
    return t


def _figure3(name: str, lean: int, scale) -> TaggedSurface:
    a0 = as_element(scale)
    _positive({"scale": a0}, "scale")
    phi = PHI
    base = figure2a(a0, a0, a0)
    slit_dir = Direction.of(vec(lean, 1))
    short = (vec(lean * phi, phi) * a0, {2})
    long = (vec(lean * phi * phi, phi * phi) * a0, {1, 2})
    diagram = _glue_pair(base, slit_dir, [short, long], [a0, phi * a0])
    s = diagram.realize()
    across = vec(-lean, 1)
    # lengths in units of the normalized slit and class directions
    narrow, wide = ("g", "f") if lean > 0 else ("f", "g")
    lengths = {
        "a": phi * a0,
        "d": phi * phi * a0,
        "c": phi * phi * a0,
        "b": phi**3 * a0,
        "e": phi * phi * a0,
        "h": phi**3 * a0,
        narrow: a0,
        wide: phi * a0,
    }
    constraints = [("d", phi, "a"), ("b", phi, "c"), (wide, phi, narrow), ("h", phi, "e")]
    classes = [
        CylinderClass("C1", vec(lean, 1), [(phi * a0, a0), (phi * phi * a0, phi * a0)], role="equivalence", golden=False),
        CylinderClass("blue", across, [(phi**3 * a0, phi * a0), (phi * phi * a0, a0)], golden=False),
        CylinderClass("red_white", across, [(phi**3 * a0, a0), (phi * phi * a0, (phi - 1) * a0)], golden=True),
    ]
    tags = {"red": phi**3 * a0, "white": phi * phi * a0, "slit_direction": vec(lean, 1)}
    return TaggedSurface(name, s, {"scale": a0}, lengths, constraints, classes, tags, diagram)


def figure3a(scale=1) -> TaggedSurface:
    """Simple cylinders glued into the two diagonal slits of the golden pair.

    The cylinders of the opposite diagonal direction split into two blue
    cylinders and a red/white pair; the red/white pair is in the golden
    configuration.
    """
    return _figure3("figure3a", 1, scale)


def figure3b(scale=1) -> TaggedSurface:
    """Mirror image of figure3a; the labels f and g trade places."""
    return _figure3("figure3b", -1, scale)


def figure4a(scale=1, w=None) -> TaggedSurface:
    """Simple vertical cylinders glued into the two vertical slits of the golden pair.

    Widths are w and phi w (default w = scale, which is the extra relation
    g = phi f under the labels below).  Classes: C1 the glued pair, C2 the
    horizontal simple pair, B the remaining horizontal cylinders.
    """
    a0 = as_element(scale)
    w = a0 if w is None else as_element(w)
    _positive({"scale": a0, "w": w}, "scale", "w")
    phi = PHI
    base = figure2a(a0, a0, a0)
    short = (vec(0, a0), {1})
    long = (vec(0, phi * a0), {2}, 0)
    diagram = _glue_pair(base, VERTICAL, [short, long], [w, phi * w])
    s = diagram.realize()
    lengths = {
        "a": a0,
        "d": phi * a0,
        "c": a0,
        "b": phi * a0,
        "e": phi * a0,
        "g": phi * phi * a0,
        "h": w,
        "f": phi * w,
    }
    constraints = [("d", phi, "a"), ("b", phi, "c"), ("f", phi, "h"), ("g", phi, "e")]
    classes = [
        CylinderClass("C1", vec(0, 1), [(a0, w), (phi * a0, phi * w)], role="equivalence", golden=False),
        CylinderClass("C2", vec(1, 0), [(a0, a0), (phi * a0, phi * a0)], role="equivalence", golden=False),
        CylinderClass("B", vec(1, 0), [(phi * phi * a0 + phi * w, phi * a0), (phi * a0 + w, a0)], golden=False),
    ]
    params = {"scale": a0, "w": w}
    return TaggedSurface("figure4a", s, params, lengths, constraints, classes, {"extra": ("g", phi, "f")}, diagram)


@dataclass
class Degeneration:
    shear: FieldElement
    aligned: list
    sheared: CylinderDiagram
    collapsed: list[int]
    result: Surface | None


def figure4_degeneration(t: TaggedSurface, aligned: int = 3, budget: int | None = None) -> Degeneration:
    """Shear the horizontal cylinders outside C2 so that exactly ``aligned``
    crossings become vertical, then collapse those cylinders.

    The smallest such |t| is used, positive first on ties.  Raises
    CatalogError when no shear aligns that many crossings.
    """
    dec = t.decompose(HORIZONTAL, budget)
    keep = {c.id for c in t.cylinder_class("C2").locate(dec)}
    others = [k for k, c in enumerate(dec.cylinders) if c.id not in keep]
    diagram = diagram_from_decomposition(dec)
    cands = alignment_shears(diagram, others)
    good = [x for x, v in cands.items() if len(v) == aligned]
    if not good:
        raise CatalogError(f"no shear makes exactly {aligned} crossings vertical")
    shear = min(good, key=lambda x: (abs(x), -x.sign()))
    sheared = shear_diagram(diagram, others, shear)
    result = collapse_diagram(sheared, others).realize()
    return Degeneration(shear, cands[shear], sheared, others, result)


def figure5(h1=1, h2=1, ell=1, w=1, k=1) -> TaggedSurface:
    """locus_1117 with a third pair of simple cylinders, heights k and phi k.

    They are glued into the two horizontal saddle connections on top of the
    larger golden cylinder.  Classes: C1 (vertical, glued first), C2 (the
    horizontal golden pair), C3 (horizontal, glued here); the three are
    pairwise disjoint.
    """
    base = locus_1117(h1, h2, ell, w)
    k = as_element(k)
    _positive({"k": k}, "k")
    phi = PHI
    dec = base.decompose(HORIZONTAL)
    big = base.cylinder_class("C2").locate(dec)[0]
    tops = sorted(big.top, key=lambda i: dec.saddles[i].length)
    if len(tops) != 2 or dec.saddles[tops[1]].length != phi * dec.saddles[tops[0]].length:
        raise CatalogError("top of the larger golden cylinder is not a golden pair of saddle connections")
    short, long = (dec.saddles[i].length for i in tops)
    diagram = diagram_from_decomposition(dec)
    diagram = glue_diagram(diagram, tops[0], k, 0, "G1")
    diagram = glue_diagram(diagram, tops[1], phi * k, 0, "G2")
    s = diagram.realize()
    params = dict(base.params, k=k)
    lengths = dict(base.lengths, G1=short, G2=long)
    classes = list(base.classes) + [
        CylinderClass("C3", vec(1, 0), [(short, k), (long, phi * k)], role="equivalence", golden=False)
    ]
    constraints = list(base.constraints) + [("G2", phi, "G1")]
    return TaggedSurface("figure5", s, params, lengths, constraints, classes, {}, diagram)


CONSTRUCTORS: dict[str, Callable[..., TaggedSurface]] = {
    "torus": torus,
    "octagon": octagon,
    "decagon": decagon,
    "double_pentagon": double_pentagon,
    "golden_L": golden_l,
    "figure1": figure1,
    "figure2a": figure2a,
    "figure2b": figure2b,
    "figure3a": figure3a,
    "figure3b": figure3b,
    "figure4a": figure4a,
    "figure5": figure5,
    "locus_1117": locus_1117,
}
NAMES = sorted(CONSTRUCTORS)


def parameters(name: str) -> list[str]:
    return list(inspect.signature(_constructor(name)).parameters)


def _constructor(name: str):
    try:
        return CONSTRUCTORS[name]
    except KeyError:
        raise CatalogError(f"unknown surface {name!r}; known: {', '.join(NAMES)}") from None


def make_named(name: str, params: dict | None = None) -> TaggedSurface:
    """Instantiate a catalog surface; parameter values may be field literals."""
    ctor = _constructor(name)
    params = dict(params or {})
    allowed = parameters(name)
    extra = sorted(set(params) - set(allowed))
    if extra:
        raise CatalogError(f"{name} has no parameter(s) {', '.join(extra)}; takes {', '.join(allowed) or 'none'}")
    values = {}
    for k, v in params.items():
        try:
            values[k] = as_element(v)
        except (TypeError, ValueError) as exc:
            raise CatalogError(f"parameter {k}: {exc}") from None
    try:
        t = ctor(**values)
    except SurfaceError as exc:
        raise CatalogError(f"{name}: {exc}") from None
    bad = [c for c, ok in t.check_constraints() if not ok]
    if bad:
        raise CatalogError(f"{name}: constraint(s) fail: {'; '.join(bad)}")
    return t
