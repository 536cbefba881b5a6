"""Planar vectors, 2x2 matrices and exact orientation predicates."""

from __future__ import annotations

from typing import NamedTuple

from .qfield import FieldElement, as_element, det2, det2_sign, format_literal, parse_literal


class Vec2(NamedTuple):
    x: FieldElement
    y: FieldElement

    @classmethod
    def of(cls, x, y) -> Vec2:
        return cls(as_element(x), as_element(y))

    def __add__(self, other):  # type: ignore[override]
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return Vec2(self.x - other.x, self.y - other.y)

    def __neg__(self):
        return Vec2(-self.x, -self.y)

    def __mul__(self, k):  # type: ignore[override]
        return Vec2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __truediv__(self, k):
        return Vec2(self.x / k, self.y / k)

    def is_zero(self) -> bool:
        return self.x.sign() == 0 and self.y.sign() == 0

    def __str__(self):
        return f"({format_literal(self.x)}, {format_literal(self.y)})"

    def to_float(self) -> tuple[float, float]:
        return float(self.x), float(self.y)


ZERO = Vec2.of(0, 0)


def vec(x, y) -> Vec2:
    return Vec2.of(x, y)


def parse_vec(text: str) -> Vec2:
    """Parse ``DX,DY`` (both field literals)."""
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected 'DX,DY', got {text!r}")
    return Vec2(parse_literal(parts[0]), parse_literal(parts[1]))


def cross(u: Vec2, v: Vec2) -> FieldElement:
    return det2(u.x, u.y, v.x, v.y)


def cross_sign(u: Vec2, v: Vec2) -> int:
    return det2_sign(u.x, u.y, v.x, v.y)


def dot_sign(u: Vec2, v: Vec2) -> int:
    return det2_sign(u.x, -u.y, v.y, v.x)


def dot(u: Vec2, v: Vec2) -> FieldElement:
    return u.x * v.x + u.y * v.y


def orient(a: Vec2, b: Vec2, c: Vec2) -> int:
    """+1 if a, b, c turn counterclockwise, -1 clockwise, 0 collinear."""
    return cross_sign(b - a, c - a)


def parallel(u: Vec2, v: Vec2) -> bool:
    return cross_sign(u, v) == 0


def same_direction(u: Vec2, v: Vec2) -> bool:
    return parallel(u, v) and dot_sign(u, v) > 0


def ratio(u: Vec2, v: Vec2) -> FieldElement:
    """The scalar t with u = t v; v must be nonzero and parallel to u."""
    if v.x.sign() != 0:
        return u.x / v.x
    return u.y / v.y


def _half(u: Vec2, v: Vec2) -> int:
    """0 if the ccw angle from u to v lies in [0, pi), else 1."""
    c = cross_sign(u, v)
    if c > 0 or (c == 0 and dot_sign(u, v) > 0):
        return 0
    return 1


def angle_less(u: Vec2, v: Vec2, w: Vec2) -> bool:
    """Whether ccw angle u->v is strictly less than ccw angle u->w (in [0, 2pi))."""
    hv, hw = _half(u, v), _half(u, w)
    if hv != hw:
        return hv < hw
    return cross_sign(v, w) > 0


def in_sector(u: Vec2, w: Vec2, r: Vec2) -> bool:
    """Whether direction r lies in the half-open ccw sector [u, w).

    The sector opening is taken in (0, 2pi]; ``u == w`` means the full turn.
    """
    if same_direction(u, r):
        return True
    if same_direction(u, w):
        return True
    return angle_less(u, r, w)


def on_segment(p: Vec2, a: Vec2, b: Vec2) -> bool:
    """Whether p lies on the closed segment [a, b]."""
    if cross_sign(b - a, p - a) != 0:
        return False
    return dot_sign(p - a, p - b) <= 0


class Matrix2(NamedTuple):
    a: FieldElement
    b: FieldElement
    c: FieldElement
    d: FieldElement

    @classmethod
    def of(cls, a, b, c, d) -> Matrix2:
        return cls(as_element(a), as_element(b), as_element(c), as_element(d))

    @classmethod
    def identity(cls) -> Matrix2:
        return cls.of(1, 0, 0, 1)

    def det(self) -> FieldElement:
        return self.a * self.d - self.b * self.c

    def __call__(self, v: Vec2) -> Vec2:
        return Vec2(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)

    def __matmul__(self, other: Matrix2) -> Matrix2:
        return Matrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> Matrix2:
        det = self.det()
        if det.sign() == 0:
            raise ValueError("singular matrix")
        return Matrix2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def __str__(self):
        return "[[{}, {}], [{}, {}]]".format(*map(format_literal, self))


def parse_matrix(text: str) -> Matrix2:
    """Parse ``a,b,c,d`` (row-major field literals)."""
    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError(f"expected 'a,b,c,d', got {text!r}")
    return Matrix2(*(parse_literal(p) for p in parts))
