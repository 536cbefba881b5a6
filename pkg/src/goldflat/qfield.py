"""Exact arithmetic in real quadratic fields Q(sqrt(D)).

Elements are ``a + b*sqrt(D)`` with ``a, b`` rational and ``sqrt(D)`` the
positive root.  Rational elements (``b == 0``) are compatible with every
``D``; combining two irrational elements over different ``D`` is an error.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache, total_ordering
from math import gcd, lcm
from numbers import Rational
from typing import Union

DEFAULT_D = 5


class FieldError(ValueError):
    """Raised on mismatched fields, division by zero or bad literals."""


@lru_cache(maxsize=None)
def _squarefree(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def _sgn(q) -> int:
    return (q > 0) - (q < 0)


def _make(p: int, q: int, d: int, D: int) -> FieldElement:
    # (p + q*sqrt(D)) / d, stored with d > 0 and gcd(p, q, d) == 1
    if d < 0:
        p, q, d = -p, -q, -d
    if d != 1:
        g = gcd(p, q, d)
        if g != 1:
            p, q, d = p // g, q // g, d // g
    x = _alloc(FieldElement)
    _set_p(x, p)
    _set_q(x, q)
    _set_d(x, d)
    _set_D(x, D)
    return x


@total_ordering
class FieldElement:
    """``a + b*sqrt(D)``, held as integers ``(p + q*sqrt(D)) / d`` in lowest terms."""

    __slots__ = ("_p", "_q", "_d", "D")

    def __init__(self, a=0, b=0, D: int = DEFAULT_D):
        if not _squarefree(D):
            raise FieldError(f"D={D} is not a squarefree integer > 1")
        fa, fb = Fraction(a), Fraction(b)
        d = lcm(fa.denominator, fb.denominator)
        p = fa.numerator * (d // fa.denominator)
        q = fb.numerator * (d // fb.denominator)
        g = gcd(p, q, d)
        object.__setattr__(self, "_p", p // g)
        object.__setattr__(self, "_q", q // g)
        object.__setattr__(self, "_d", d // g)
        object.__setattr__(self, "D", D)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def a(self) -> Fraction:
        return Fraction(self._p, self._d)

    @property
    def b(self) -> Fraction:
        return Fraction(self._q, self._d)

    # -- coercion -----------------------------------------------------------

    def _coerce(self, other) -> tuple[FieldElement, FieldElement]:
        if isinstance(other, FieldElement):
            if self.D == other.D:
                return self, other
            if other._q == 0:
                return self, _make(other._p, 0, other._d, self.D)
            if self._q == 0:
                return _make(self._p, 0, self._d, other.D), other
            raise FieldError(f"mismatched fields: D={self.D} and D={other.D}")
        if isinstance(other, int):
            return self, _make(other, 0, 1, self.D)
        if isinstance(other, Rational):
            return self, _make(other.numerator, 0, other.denominator, self.D)
        return NotImplemented  # type: ignore[return-value]

    def is_rational(self) -> bool:
        return self._q == 0

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        x, y = c
        if x._d == y._d:
            return _make(x._p + y._p, x._q + y._q, x._d, x.D)
        return _make(x._p * y._d + y._p * x._d, x._q * y._d + y._q * x._d, x._d * y._d, x.D)

    __radd__ = __add__

    def __neg__(self):
        return _make(-self._p, -self._q, self._d, self.D)

    def __pos__(self):
        return self

    def __sub__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        x, y = c
        if x._d == y._d:
            return _make(x._p - y._p, x._q - y._q, x._d, x.D)
        return _make(x._p * y._d - y._p * x._d, x._q * y._d - y._q * x._d, x._d * y._d, x.D)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        x, y = c
        if not y._q:
            return _make(x._p * y._p, x._q * y._p, x._d * y._d, x.D)
        if not x._q:
            return _make(x._p * y._p, x._p * y._q, x._d * y._d, x.D)
        return _make(
            x._p * y._p + x._q * y._q * x.D, x._p * y._q + x._q * y._p, x._d * y._d, x.D
        )

    __rmul__ = __mul__

    def _norm_numerator(self) -> int:
        return self._p * self._p - self.D * self._q * self._q

    def norm(self) -> Fraction:
        """Field norm ``a^2 - D b^2`` (product with the conjugate)."""
        return Fraction(self._norm_numerator(), self._d * self._d)

    def inverse(self) -> FieldElement:
        n = self._norm_numerator()
        if n == 0:
            # norm vanishes only at zero since D is not a square
            raise ZeroDivisionError("division by zero in Q(sqrt(%d))" % self.D)
        return _make(self._d * self._p, -self._d * self._q, n, self.D)

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        x, y = c
        return x * y.inverse()

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        x, y = c
        return y * x.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = _make(1, 0, 1, self.D)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> FieldElement:
        return _make(self._p, -self._q, self._d, self.D)

    # -- order --------------------------------------------------------------

    def sign(self) -> int:
        sp, sq = _sgn(self._p), _sgn(self._q)
        if sp >= 0 and sq >= 0:
            return 1 if (sp or sq) else 0
        if sp <= 0 and sq <= 0:
            return -1
        # opposite signs: compare p^2 with D q^2
        cmp = _sgn(self._norm_numerator())
        return cmp if sp > 0 else -cmp

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            if self._q == 0 and other._q == 0:
                return self._p == other._p and self._d == other._d
            return self.D == other.D and (self._p, self._q, self._d) == (other._p, other._q, other._d)
        if isinstance(other, (int, Rational)):
            return self._q == 0 and Fraction(self._p, self._d) == other
        return NotImplemented

    def __lt__(self, other):
        diff = self - other
        if diff is NotImplemented:
            return NotImplemented
        return diff.sign() < 0

    def __hash__(self):
        if self._q == 0:
            return hash(Fraction(self._p, self._d))
        return hash((self._p, self._q, self._d, self.D))

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return bool(self._p or self._q)

    def __float__(self):
        return (self._p + self._q * (self.D ** 0.5)) / self._d

    # -- text ---------------------------------------------------------------

    def __str__(self):
        return format_literal(self)

    def __repr__(self):
        return f"FieldElement({format_literal(self)!r})"


# slot setters bypass the immutability guard in __setattr__
_alloc = object.__new__
_set_p = FieldElement._p.__set__
_set_q = FieldElement._q.__set__
_set_d = FieldElement._d.__set__
_set_D = FieldElement.D.__set__

Number = Union[FieldElement, int, Fraction]


def _det2_parts(a, b, c, d):
    # numerator (p, q) and positive denominator of a*d - b*c, unreduced
    D = a.D
    if not (type(a) is type(b) is type(c) is type(d) is FieldElement and b.D == D and c.D == D and d.D == D):
        return None
    ap, aq, ad = a._p, a._q, a._d
    bp, bq, bd = b._p, b._q, b._d
    cp, cq, cd = c._p, c._q, c._d
    dp, dq, dd = d._p, d._q, d._d
    l, r = ad * dd, bd * cd
    p = (ap * dp + D * aq * dq) * r - (bp * cp + D * bq * cq) * l
    q = (ap * dq + aq * dp) * r - (bp * cq + bq * cp) * l
    return p, q, l * r, D


def det2(a, b, c, d) -> FieldElement:
    """``a*d - b*c`` with a single normalization."""
    parts = _det2_parts(a, b, c, d)
    if parts is None:
        return a * d - b * c
    return _make(*parts)


def det2_sign(a, b, c, d) -> int:
    """Sign of ``a*d - b*c`` without building the element."""
    parts = _det2_parts(a, b, c, d)
    if parts is None:
        return (a * d - b * c).sign()
    p, q, _, D = parts
    sp, sq = _sgn(p), _sgn(q)
    if sp >= 0 and sq >= 0:
        return 1 if (sp or sq) else 0
    if sp <= 0 and sq <= 0:
        return -1
    cmp = _sgn(p * p - D * q * q)
    return cmp if sp > 0 else -cmp


def qf(a=0, b=0, D: int = DEFAULT_D) -> FieldElement:
    return FieldElement(a, b, D)


def sqrt_d(D: int = DEFAULT_D) -> FieldElement:
    return FieldElement(0, 1, D)


def golden_ratio(D: int = 5) -> FieldElement:
    if D != 5:
        raise FieldError("the golden ratio lives in Q(sqrt(5))")
    return FieldElement(Fraction(1, 2), Fraction(1, 2), 5)


PHI = golden_ratio()


def as_element(x, D: int = DEFAULT_D) -> FieldElement:
    if isinstance(x, FieldElement):
        return x
    if isinstance(x, str):
        return parse_literal(x)
    return FieldElement(x, 0, D)


def qf_arith(op: str, x: FieldElement, y: FieldElement) -> FieldElement:
    if x.b != 0 and y.b != 0 and x.D != y.D:
        raise FieldError(f"mismatched fields: D={x.D} and D={y.D}")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        if as_element(y).sign() == 0:
            raise ZeroDivisionError("division by zero")
        return x / y
    raise FieldError(f"unknown operation {op!r}")


def qf_sign(x: FieldElement) -> int:
    return as_element(x).sign()


def qf_conjugate(x: FieldElement) -> FieldElement:
    return as_element(x).conjugate()


# -- literal syntax: ``p/q + r/s*rt(D)`` -----------------------------------

_RAT = r"\d+(?:/\d+)?"
_TERM_RE = re.compile(
    rf"\s*([+-])?\s*(?:({_RAT})\s*\*\s*rt\((\d+)\)|rt\((\d+)\)|({_RAT}))\s*"
)


def format_literal(x: FieldElement) -> str:
    if x.b == 0:
        return str(x.a)
    rad = f"rt({x.D})"
    coef = abs(x.b)
    irr = rad if coef == 1 else f"{coef}*{rad}"
    if x.a == 0:
        return irr if x.b > 0 else f"-{irr}"
    return f"{x.a} {'+' if x.b > 0 else '-'} {irr}"


def parse_literal(text: str, D: int | None = None) -> FieldElement:
    """Parse a literal such as ``1/2 + 1/2*rt(5)`` or ``-3``."""
    s = text.strip()
    if not s:
        raise FieldError("empty field literal")
    pos = 0
    a = Fraction(0)
    b = Fraction(0)
    seen_d = D
    first = True
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or m.end() == pos:
            raise FieldError(f"bad field literal {text!r}")
        sign_tok, coef, d1, d2, rat = m.groups()
        if sign_tok is None and not first:
            raise FieldError(f"bad field literal {text!r}")
        sgn = -1 if sign_tok == "-" else 1
        if rat is not None:
            a += sgn * Fraction(rat)
        else:
            d = int(d1 or d2)
            if seen_d is not None and d != seen_d:
                raise FieldError(f"mixed radicals in {text!r}")
            seen_d = d
            b += sgn * (Fraction(coef) if coef else Fraction(1))
        pos = m.end()
        first = False
    return FieldElement(a, b, seen_d if seen_d is not None else DEFAULT_D)
