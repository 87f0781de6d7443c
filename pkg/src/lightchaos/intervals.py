"""Finite unions of real intervals with exact endpoints and open/closed flags."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .exact import INF, fmt, to_scalar


def _is_inf(x) -> bool:
    return isinstance(x, float) and math.isinf(x)


@dataclass(frozen=True)
class Interval:
    lo: object
    hi: object
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        # infinite endpoints are never attained
        if _is_inf(self.lo):
            object.__setattr__(self, "lo_closed", False)
        if _is_inf(self.hi):
            object.__setattr__(self, "hi_closed", False)

    @classmethod
    def closed(cls, lo, hi):
        return cls(to_scalar(lo), to_scalar(hi), True, True)

    @classmethod
    def open(cls, lo, hi):
        return cls(to_scalar(lo), to_scalar(hi), False, False)

    @classmethod
    def point(cls, x):
        x = to_scalar(x)
        return cls(x, x, True, True)

    @property
    def empty(self) -> bool:
        if self.lo > self.hi:
            return True
        if self.lo == self.hi:
            return not (self.lo_closed and self.hi_closed)
        return False

    @property
    def is_point(self) -> bool:
        return not self.empty and self.lo == self.hi

    def __contains__(self, x) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def intersect(self, other: "Interval") -> "Interval":
        if self.lo > other.lo:
            lo, lc = self.lo, self.lo_closed
        elif self.lo < other.lo:
            lo, lc = other.lo, other.lo_closed
        else:
            lo, lc = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hc = self.hi, self.hi_closed
        elif self.hi > other.hi:
            hi, hc = other.hi, other.hi_closed
        else:
            hi, hc = self.hi, self.hi_closed and other.hi_closed
        return Interval(lo, hi, lc, hc)

    def length(self):
        return self.hi - self.lo

    def witness(self):
        """Some exact point of a nonempty interval, preferring the middle."""
        if self.empty:
            raise ValueError("empty interval has no points")
        lo_inf, hi_inf = _is_inf(self.lo), _is_inf(self.hi)
        if lo_inf and hi_inf:
            return Fraction(0)
        if lo_inf:
            return self.hi - 1
        if hi_inf:
            return self.lo + 1
        if self.lo == self.hi:
            return self.lo
        return (self.lo + self.hi) / 2

    def __str__(self):
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        if self.is_point:
            return "{" + fmt(self.lo) + "}"
        return f"{left}{fmt(self.lo)}, {fmt(self.hi)}{right}"

    def to_json(self):
        return [fmt(self.lo), fmt(self.hi), self.lo_closed, self.hi_closed]

    @classmethod
    def from_json(cls, data):
        lo, hi, lc, hc = data
        return cls(to_scalar(lo), to_scalar(hi), lc, hc)


def _inside(a: Interval, b: Interval) -> bool:
    if a.lo < b.lo or (a.lo == b.lo and a.lo_closed and not b.lo_closed):
        return False
    if a.hi > b.hi or (a.hi == b.hi and a.hi_closed and not b.hi_closed):
        return False
    return True


def _touch(a: Interval, b: Interval) -> bool:
    """True when ``a`` (left of ``b``) overlaps or abuts ``b`` without a gap."""
    if a.hi > b.lo:
        return True
    if a.hi == b.lo:
        return a.hi_closed or b.lo_closed
    return False


class IntervalUnion:
    """Sorted, pairwise non-mergeable intervals.

    Instances are immutable and compare equal iff they denote the same set.
    """

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[Interval] = ()):
        items = sorted((p for p in parts if not p.empty), key=lambda p: (p.lo, not p.lo_closed))
        merged: list[Interval] = []
        for p in items:
            if merged and _touch(merged[-1], p):
                last = merged[-1]
                if p.hi > last.hi:
                    hi, hc = p.hi, p.hi_closed
                elif p.hi < last.hi:
                    hi, hc = last.hi, last.hi_closed
                else:
                    hi, hc = last.hi, last.hi_closed or p.hi_closed
                lc = last.lo_closed or (p.lo == last.lo and p.lo_closed)
                merged[-1] = Interval(last.lo, hi, lc, hc)
            else:
                merged.append(p)
        self.parts = tuple(merged)

    @classmethod
    def of(cls, *parts: Interval) -> "IntervalUnion":
        return cls(parts)

    @classmethod
    def points(cls, xs) -> "IntervalUnion":
        return cls(Interval.point(x) for x in xs)

    @classmethod
    def real_line(cls) -> "IntervalUnion":
        return cls([Interval(-INF, INF, False, False)])

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    @property
    def empty(self) -> bool:
        return not self.parts

    def __bool__(self):
        return bool(self.parts)

    def __contains__(self, x) -> bool:
        return any(x in p for p in self.parts)

    def __eq__(self, other):
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        return self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return IntervalUnion(self.parts + other.parts)

    __or__ = union

    def intersect(self, other: "IntervalUnion") -> "IntervalUnion":
        out = []
        for a in self.parts:
            for b in other.parts:
                c = a.intersect(b)
                if not c.empty:
                    out.append(c)
        return IntervalUnion(out)

    __and__ = intersect

    def complement(self, within: "IntervalUnion | None" = None) -> "IntervalUnion":
        """Set complement, relative to ``within`` (default the real line)."""
        gaps = []
        lo, lc = -INF, False
        for p in self.parts:
            gaps.append(Interval(lo, p.lo, lc, not p.lo_closed))
            lo, lc = p.hi, not p.hi_closed
        gaps.append(Interval(lo, INF, lc, False))
        out = IntervalUnion(gaps)
        return out if within is None else out.intersect(within)

    def difference(self, other: "IntervalUnion") -> "IntervalUnion":
        return self.intersect(other.complement())

    def issubset(self, other: "IntervalUnion") -> bool:
        # parts of a union are separated by gaps, so each connected part of
        # self has to sit inside a single part of other
        return all(any(_inside(a, b) for b in other.parts) for a in self.parts)

    def isdisjoint(self, other: "IntervalUnion") -> bool:
        return self.intersect(other).empty

    def hull(self) -> "IntervalUnion":
        if not self.parts:
            return self
        a, b = self.parts[0], self.parts[-1]
        return IntervalUnion([Interval(a.lo, b.hi, a.lo_closed, b.hi_closed)])

    @property
    def inf(self):
        return self.parts[0].lo

    @property
    def sup(self):
        return self.parts[-1].hi

    def witness(self):
        if not self.parts:
            raise ValueError("empty set has no points")
        # prefer a part with interior so witnesses stay away from endpoints
        for p in self.parts:
            if not p.is_point:
                return p.witness()
        return self.parts[0].witness()

    def is_finite_points(self) -> bool:
        return all(p.is_point for p in self.parts)

    def __str__(self):
        if not self.parts:
            return "{}"
        return " U ".join(str(p) for p in self.parts)

    def __repr__(self):
        return f"IntervalUnion({self})"

    def to_json(self):
        return [p.to_json() for p in self.parts]

    @classmethod
    def from_json(cls, data):
        return cls(Interval.from_json(p) for p in data)


def closed(lo, hi) -> IntervalUnion:
    return IntervalUnion([Interval.closed(lo, hi)])


def open_(lo, hi) -> IntervalUnion:
    return IntervalUnion([Interval.open(lo, hi)])


def interval(lo, hi, lo_closed=True, hi_closed=True) -> IntervalUnion:
    return IntervalUnion([Interval(to_scalar(lo), to_scalar(hi), lo_closed, hi_closed)])
