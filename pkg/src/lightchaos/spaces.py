"""Phase spaces, their points, and metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction

import mpmath

from .exact import INF, Surd, fmt, mod1, to_fraction, to_scalar
from .intervals import Interval, IntervalUnion

LOOKAHEAD_CAP = 2**16


class LookaheadExceeded(RuntimeError):
    """Two sequences agree on every coordinate inspected within the cap."""


# -- the transitive stream -------------------------------------------------
#
# s* is the concatenation of every finite binary word, shortest first and
# lexicographic within a length: 0 1 00 01 10 11 000 ...


def _block_start(length: int) -> int:
    # bits used by all words shorter than ``length``
    return (length - 2) * (1 << length) + 2


def stream_bit(n: int) -> int:
    if n < 0:
        raise IndexError(n)
    length = 1
    while _block_start(length + 1) <= n:
        length += 1
    r = n - _block_start(length)
    word, pos = divmod(r, length)
    return (word >> (length - 1 - pos)) & 1


def stream_bits(start: int, count: int) -> tuple:
    return tuple(stream_bit(start + i) for i in range(count))


def stream_find(word: tuple, start: int = 0, limit: int = LOOKAHEAD_CAP) -> int | None:
    """First offset ``n >= start`` where ``word`` occurs in the stream."""
    L = len(word)
    window = list(stream_bits(start, L))
    n = start
    while n - start <= limit:
        if tuple(window) == word:
            return n
        window.pop(0)
        window.append(stream_bit(n + L))
        n += 1
    return None


@dataclass(frozen=True)
class BinarySequence:
    """Prefix word followed by a computable tail.

    ``tail`` is ``("const", 0)``, ``("const", 1)`` or ``("stream", offset)``,
    the latter meaning the stream read from ``offset`` on.  Construction
    canonicalizes so that equal sequences have equal fields.
    """

    prefix: tuple = ()
    tail: tuple = ("const", 0)

    def __post_init__(self):
        prefix = tuple(int(b) for b in self.prefix)
        if any(b not in (0, 1) for b in prefix):
            raise ValueError("binary sequences take bits 0/1")
        kind, val = self.tail
        if kind == "const":
            if val not in (0, 1):
                raise ValueError("constant tail must be 0 or 1")
            while prefix and prefix[-1] == val:
                prefix = prefix[:-1]
        elif kind == "stream":
            val = int(val)
            if val < 0:
                raise ValueError("stream offset must be >= 0")
            while prefix and val > 0 and prefix[-1] == stream_bit(val - 1):
                prefix = prefix[:-1]
                val -= 1
        else:
            raise ValueError(f"unknown tail {kind!r}")
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "tail", (kind, val))

    @classmethod
    def constant(cls, v: int) -> "BinarySequence":
        return cls((), ("const", v))

    @classmethod
    def transitive_point(cls, offset: int = 0) -> "BinarySequence":
        return cls((), ("stream", offset))

    @classmethod
    def from_word(cls, word, tail_bit: int = 0) -> "BinarySequence":
        return cls(tuple(word), ("const", tail_bit))

    def __getitem__(self, n: int) -> int:
        if n < len(self.prefix):
            return self.prefix[n]
        kind, val = self.tail
        if kind == "const":
            return val
        return stream_bit(val + n - len(self.prefix))

    def word(self, length: int) -> tuple:
        return tuple(self[i] for i in range(length))

    def shift(self, k: int = 1) -> "BinarySequence":
        if k <= len(self.prefix):
            return BinarySequence(self.prefix[k:], self.tail)
        kind, val = self.tail
        rest = k - len(self.prefix)
        if kind == "const":
            return BinarySequence((), self.tail)
        return BinarySequence((), ("stream", val + rest))

    @property
    def is_eventually_constant(self) -> bool:
        return self.tail[0] == "const"

    @property
    def is_constant(self) -> bool:
        return self.tail[0] == "const" and not self.prefix

    def first_difference(self, other: "BinarySequence", cap: int = LOOKAHEAD_CAP) -> int | None:
        """Least index where the sequences differ; ``None`` when equal."""
        if self == other:
            return None
        for n in range(cap):
            if self[n] != other[n]:
                return n
        raise LookaheadExceeded(f"no difference within {cap} coordinates")

    def __str__(self):
        word = "".join(map(str, self.prefix))
        kind, val = self.tail
        if kind == "const":
            return f"{word}({val})^inf"
        return f"{word}s*[{val}:]"

    def to_json(self):
        return {"prefix": "".join(map(str, self.prefix)), "tail": list(self.tail)}

    @classmethod
    def from_json(cls, data):
        return cls(tuple(int(c) for c in data["prefix"]), tuple(data["tail"]))


def _iv_frac(q):
    return mpmath.iv.mpf(q.numerator) / q.denominator


@dataclass(frozen=True)
class ConePoint:
    """Point of the double cone at angle ``theta`` (turns) and altitude ``t``.

    The radius is implied as ``1 - |t|``; at the vertices the angle is
    normalized to 0.
    """

    theta: object
    t: object

    def __post_init__(self):
        t = to_fraction(self.t)
        if t < -1 or t > 1:
            raise ValueError("altitude must lie in [-1, 1]")
        theta = mod1(to_scalar(self.theta))
        if abs(t) == 1:
            theta = Fraction(0)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "t", t)

    @property
    def radius(self):
        return 1 - abs(self.t)

    def embed(self) -> tuple:
        r = float(self.radius)
        ang = 2 * math.pi * float(self.theta)
        return (r * math.cos(ang), r * math.sin(ang), float(self.t))

    def embed_exact(self):
        """Exact rational embedding when the angle is a multiple of 1/4, else ``None``."""
        q = self.theta * 4 if isinstance(self.theta, Fraction) else None
        if q is None or q.denominator != 1:
            return None
        c, s = {0: (1, 0), 1: (0, 1), 2: (-1, 0), 3: (0, -1)}[int(q)]
        r = self.radius
        return (r * c, r * s, self.t)

    def embed_interval(self, prec: int = 80):
        """Rigorous mpmath interval enclosure of the embedding."""
        return _embed_interval(self, prec)

    def __str__(self):
        return f"cone(theta={fmt(self.theta)}, t={fmt(self.t)})"

    def to_json(self):
        return {"theta": fmt(self.theta), "t": fmt(self.t)}

    @classmethod
    def from_json(cls, data):
        return cls(to_scalar(data["theta"]), to_fraction(data["t"]))


@lru_cache(maxsize=1 << 14)
def _embed_interval(p: ConePoint, prec: int):
    iv = mpmath.iv
    old = iv.prec
    iv.prec = prec
    try:
        theta = p.theta
        if isinstance(theta, Surd):
            th = _iv_frac(theta.a) + _iv_frac(theta.b) * iv.sqrt(theta.d)
        else:
            th = _iv_frac(theta)
        ang = 2 * iv.pi * th
        r = _iv_frac(p.radius)
        return (r * iv.cos(ang), r * iv.sin(ang), _iv_frac(p.t))
    finally:
        iv.prec = old


KINDS = ("interval", "real_line", "circle", "cantor", "shift_subsystem", "double_cone")


@dataclass(frozen=True)
class PhaseSpace:
    kind: str
    lo: object = None
    hi: object = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown space kind {self.kind!r}")
        if self.kind == "interval":
            lo, hi = to_fraction(self.lo), to_fraction(self.hi)
            if not lo < hi:
                raise ValueError("interval space needs lo < hi")
            object.__setattr__(self, "lo", lo)
            object.__setattr__(self, "hi", hi)

    @property
    def is_compact(self) -> bool:
        return self.kind != "real_line" and self.kind != "shift_subsystem"

    @property
    def is_linear(self) -> bool:
        """Interval-type spaces whose open sets are exact :class:`IntervalUnion` s."""
        return self.kind in ("interval", "real_line", "circle")

    def region(self) -> IntervalUnion:
        if self.kind == "interval":
            return IntervalUnion([Interval(self.lo, self.hi)])
        if self.kind == "real_line":
            return IntervalUnion.real_line()
        if self.kind == "circle":
            return IntervalUnion([Interval(Fraction(0), Fraction(1), True, False)])
        raise TypeError(f"{self.kind} has no interval realization")

    def contains(self, p) -> bool:
        if self.kind in ("interval", "real_line", "circle"):
            if isinstance(p, (BinarySequence, ConePoint)):
                return False
            return p in self.region()
        if self.kind == "cantor":
            return isinstance(p, BinarySequence)
        if self.kind == "shift_subsystem":
            # X = eventually constant sequences plus the shift orbit of s*
            return isinstance(p, BinarySequence) and (p.is_eventually_constant or not p.prefix)
        return isinstance(p, ConePoint)

    def metric(self, p, q):
        return metric(self, p, q)

    def __str__(self):
        if self.kind == "interval":
            return f"[{fmt(self.lo)}, {fmt(self.hi)}]"
        return self.kind

    def to_json(self):
        d = {"kind": self.kind}
        if self.kind == "interval":
            d.update(lo=fmt(self.lo), hi=fmt(self.hi))
        return d


UNIT_INTERVAL = PhaseSpace("interval", 0, 1)
SYMMETRIC_INTERVAL = PhaseSpace("interval", -1, 1)
REAL_LINE = PhaseSpace("real_line")
CIRCLE = PhaseSpace("circle")
CANTOR = PhaseSpace("cantor")
SHIFT_X = PhaseSpace("shift_subsystem")
DOUBLE_CONE = PhaseSpace("double_cone")


def metric(space: PhaseSpace, p, q):
    """Distance in ``space``; exact except on the double cone (float)."""
    if not (space.contains(p) and space.contains(q)):
        raise ValueError(f"points {p}, {q} are not both in {space}")
    kind = space.kind
    if kind in ("interval", "real_line"):
        return abs(p - q)
    if kind == "circle":
        d = abs(p - q)
        return min(d, 1 - d)
    if kind in ("cantor", "shift_subsystem"):
        n = p.first_difference(q)
        return Fraction(0) if n is None else Fraction(1, 2**n)
    a, b = p.embed(), q.embed()
    return math.dist(a, b)


def sequence_net(depth: int, fixed: dict | None = None) -> list:
    """All words of length ``depth`` agreeing with ``fixed`` {index: bit}, with a 0 tail."""
    fixed = fixed or {}
    free = [i for i in range(depth) if i not in fixed]
    out = []
    for m in range(1 << len(free)):
        bits = [0] * depth
        for i, v in fixed.items():
            if i < depth:
                bits[i] = v
        for j, i in enumerate(free):
            bits[i] = (m >> (len(free) - 1 - j)) & 1
        out.append(BinarySequence(tuple(bits), ("const", 0)))
    return out


def finite(x) -> bool:
    return not (isinstance(x, float) and math.isinf(x))


__all__ = [
    "BinarySequence",
    "ConePoint",
    "PhaseSpace",
    "metric",
    "stream_bit",
    "stream_find",
    "LookaheadExceeded",
    "UNIT_INTERVAL",
    "SYMMETRIC_INTERVAL",
    "REAL_LINE",
    "CIRCLE",
    "CANTOR",
    "SHIFT_X",
    "DOUBLE_CONE",
    "INF",
]
