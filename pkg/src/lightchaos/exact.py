"""Exact scalars.

Rationals are plain :class:`fractions.Fraction`.  Irrational rotation angles
live in the quadratic field Q(sqrt(d)) through :class:`Surd`, which keeps
ordering and ``mod 1`` decidable without ever rounding.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering
from typing import Union

INF = math.inf

Rational = Fraction
Scalar = Union[Fraction, "Surd"]


def to_fraction(value) -> Fraction:
    """Parse ints, Fractions, ``"p/q"`` strings and finite floats exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"cannot convert {value!r} to an exact rational")
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"unsupported scalar {value!r}")


def to_scalar(value):
    """Like :func:`to_fraction` but lets Surds and infinities through."""
    if isinstance(value, Surd):
        return value.simplify()
    if isinstance(value, float) and math.isinf(value):
        return value
    if isinstance(value, str) and value.strip() in ("inf", "+inf", "-inf"):
        return float(value)
    if isinstance(value, str) and "sqrt" in value:
        return Surd.parse(value)
    return to_fraction(value)


def is_exact(value) -> bool:
    if isinstance(value, (Fraction, int, Surd)):
        return True
    if isinstance(value, float):
        return math.isinf(value)
    return False


def fmt(value) -> str:
    """Canonical text form used in reports (round-trips through to_scalar)."""
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    if isinstance(value, Surd):
        return str(value)
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _isqrt_exact(n: int) -> int | None:
    r = math.isqrt(n)
    return r if r * r == n else None


@total_ordering
class Surd:
    """The number ``a + b*sqrt(d)`` with rational ``a, b`` and square-free ``d > 1``."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d: int = 5):
        if d <= 1 or _isqrt_exact(d) is not None:
            raise ValueError(f"radicand {d} must be a positive non-square")
        self.a = to_fraction(a)
        self.b = to_fraction(b)
        self.d = int(d)

    @classmethod
    def parse(cls, text: str) -> "Surd":
        # format produced by __str__: "a+b*sqrt(d)"
        text = text.replace(" ", "")
        head, _, rest = text.partition("*sqrt(")
        d = int(rest.rstrip(")"))
        split = max(head.rfind("+"), head.rfind("-", 1))
        if split <= 0:
            return cls(0, head, d)
        return cls(head[:split], head[split:].lstrip("+"), d)

    def simplify(self):
        return self.a if self.b == 0 else self

    def _coerce(self, other):
        if isinstance(other, Surd):
            if other.d != self.d:
                raise ValueError("mixed radicands")
            return other
        if isinstance(other, (int, Fraction)):
            return Surd(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, float) and math.isinf(other):
            return other
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Surd(self.a + o.a, self.b + o.b, self.d).simplify()

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        if isinstance(other, float) and math.isinf(other):
            return -other
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Surd(self.a - o.a, self.b - o.b, self.d).simplify()

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Surd(self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a, self.d).simplify()

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Surd(self.a / other, self.b / other, self.d).simplify()
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        norm = o.a * o.a - self.d * o.b * o.b
        conj = Surd(o.a, -o.b, self.d)
        return (self * conj) / norm

    def sign(self) -> int:
        a, b = self.a, self.b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with d b^2
        lhs, rhs = a * a, self.d * b * b
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def _cmp(self, other) -> int:
        if isinstance(other, float):
            if math.isinf(other):
                return -1 if other > 0 else 1
            other = Fraction(other)
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare Surd with {other!r}")
        return (self - o).sign() if isinstance(self - o, Surd) else _fsign(self - o)

    def __eq__(self, other):
        try:
            return self._cmp(other) == 0
        except TypeError:
            return NotImplemented

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __floor__(self) -> int:
        guess = math.floor(float(self))
        # float guess can be off by one near integers; settle it exactly
        while self < guess:
            guess -= 1
        while self >= guess + 1:
            guess += 1
        return guess

    def __repr__(self):
        return f"Surd({fmt(self.a)}, {fmt(self.b)}, {self.d})"

    def __str__(self):
        b = fmt(self.b)
        sign = "" if b.startswith("-") else "+"
        return f"{fmt(self.a)}{sign}{b}*sqrt({self.d})"


def _fsign(x) -> int:
    return (x > 0) - (x < 0)


GOLDEN = Surd(Fraction(-1, 2), Fraction(1, 2), 5)
"""Fractional part of the golden ratio, (sqrt 5 - 1)/2."""


def mod1(x):
    """Reduce an exact scalar to [0, 1)."""
    return x - math.floor(x)


def floor_exact(x) -> int:
    return math.floor(x)
