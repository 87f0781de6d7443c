"""Continuous piecewise-linear maps on a closed interval, in exact arithmetic."""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import fmt, to_fraction
from .intervals import Interval, IntervalUnion


class DomainError(ValueError):
    """A point or set lies outside the domain of a map."""


@dataclass(frozen=True)
class PLMap:
    """Graph through ``knots`` ``[(x0, y0), ..., (xn, yn)]`` with ``x`` strictly increasing.

    ``codomain`` defaults to the domain, i.e. a self-map.  Knots are kept as
    given; use :meth:`simplified` to drop collinear interior knots.
    """

    knots: tuple
    codomain: tuple | None = None

    def __post_init__(self):
        pts = tuple((to_fraction(x), to_fraction(y)) for x, y in self.knots)
        if len(pts) < 2:
            raise ValueError("a PL map needs at least two knots")
        for (x0, _), (x1, _) in zip(pts, pts[1:]):
            if not x0 < x1:
                raise ValueError("knot abscissae must be strictly increasing")
        object.__setattr__(self, "knots", pts)
        object.__setattr__(self, "_xs", tuple(x for x, _ in pts))
        cod = self.codomain
        if cod is None:
            cod = (pts[0][0], pts[-1][0])
        cod = (to_fraction(cod[0]), to_fraction(cod[1]))
        object.__setattr__(self, "codomain", cod)
        lo, hi = cod
        for _, y in pts:
            if y < lo or y > hi:
                raise ValueError(f"knot value {fmt(y)} outside codomain [{fmt(lo)}, {fmt(hi)}]")

    @classmethod
    def from_values(cls, xs: Sequence, ys: Sequence, codomain=None) -> "PLMap":
        return cls(tuple(zip(xs, ys)), codomain)

    @property
    def domain(self) -> tuple:
        return self.knots[0][0], self.knots[-1][0]

    @property
    def xs(self):
        return list(self._xs)

    @property
    def ys(self):
        return [y for _, y in self.knots]

    def domain_set(self) -> IntervalUnion:
        a, b = self.domain
        return IntervalUnion([Interval(a, b)])

    def codomain_set(self) -> IntervalUnion:
        a, b = self.codomain
        return IntervalUnion([Interval(a, b)])

    def pieces(self):
        return list(zip(self.knots, self.knots[1:]))

    def __call__(self, x):
        if type(x) is not Fraction:
            x = to_fraction(x)
        xs = self._xs
        if x < xs[0] or x > xs[-1]:
            raise DomainError(f"{fmt(x)} outside [{fmt(xs[0])}, {fmt(xs[-1])}]")
        i = bisect_right(xs, x) - 1
        if i >= len(xs) - 1:
            return self.knots[-1][1]
        (x0, y0), (x1, y1) = self.knots[i], self.knots[i + 1]
        if x == x0:
            return y0
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def simplified(self) -> "PLMap":
        pts = [self.knots[0]]
        for cur, nxt in zip(self.knots[1:], self.knots[2:]):
            (x0, y0) = pts[-1]
            (x1, y1), (x2, y2) = cur, nxt
            if (y1 - y0) * (x2 - x1) != (y2 - y1) * (x1 - x0):
                pts.append(cur)
        pts.append(self.knots[-1])
        return PLMap(tuple(pts), self.codomain)

    def same_graph(self, other: "PLMap") -> bool:
        return self.simplified().knots == other.simplified().knots

    def is_constant(self) -> bool:
        y0 = self.knots[0][1]
        return all(y == y0 for _, y in self.knots)

    def breakpoints(self):
        """Abscissae where the slope actually changes, plus the domain ends."""
        return [x for x, _ in self.simplified().knots]

    def range_set(self) -> IntervalUnion:
        ys = self.ys
        return IntervalUnion([Interval(min(ys), max(ys))])

    def to_json(self):
        return {"knots": [[fmt(x), fmt(y)] for x, y in self.knots], "codomain": [fmt(c) for c in self.codomain]}

    @classmethod
    def from_json(cls, data):
        return cls(tuple(tuple(k) for k in data["knots"]), tuple(data["codomain"]))

    def __str__(self):
        return "PL(" + ", ".join(f"({fmt(x)},{fmt(y)})" for x, y in self.knots) + ")"


def identity_pl(lo=0, hi=1) -> PLMap:
    return PLMap(((lo, lo), (hi, hi)))


def constant_pl(c, lo=0, hi=1, codomain=None) -> PLMap:
    return PLMap(((lo, c), (hi, c)), codomain)


def pl_compose(outer: PLMap, inner: PLMap) -> PLMap:
    """``outer o inner`` as an exact PL map on inner's domain.

    New knots are the inner knots plus every preimage under inner of an outer
    knot; the result is simplified.
    """
    oa, ob = outer.domain
    for y in inner.ys:
        if y < oa or y > ob:
            raise DomainError(f"inner value {fmt(y)} outside outer domain [{fmt(oa)}, {fmt(ob)}]")
    oxs = outer.xs
    xs = []
    for (x0, y0), (x1, y1) in inner.pieces():
        xs.append(x0)
        if y0 == y1:
            continue
        lo, hi = (y0, y1) if y0 < y1 else (y1, y0)
        i = bisect_right(oxs, lo)
        crossings = []
        while i < len(oxs) and oxs[i] < hi:
            t = (oxs[i] - y0) / (y1 - y0)
            crossings.append(x0 + t * (x1 - x0))
            i += 1
        xs.extend(sorted(crossings))
    xs.append(inner.knots[-1][0])
    knots = tuple((x, outer(inner(x))) for x in xs)
    return PLMap(knots, outer.codomain).simplified()


def pl_power(f: PLMap, k: int) -> PLMap:
    if k < 1:
        raise ValueError("k must be >= 1")
    g = f.simplified()
    for _ in range(k - 1):
        g = pl_compose(f, g)
    return g


def _piece_image(x0, y0, x1, y1, part: Interval) -> Interval | None:
    seg = Interval(x0, x1).intersect(part)
    if seg.empty:
        return None
    if y0 == y1:
        return Interval(y0, y0)
    slope = (y1 - y0) / (x1 - x0)
    ya = y0 + slope * (seg.lo - x0)
    yb = y0 + slope * (seg.hi - x0)
    if slope > 0:
        return Interval(ya, yb, seg.lo_closed, seg.hi_closed)
    return Interval(yb, ya, seg.hi_closed, seg.lo_closed)


def pl_image(f: PLMap, region: IntervalUnion) -> IntervalUnion:
    """Exact forward image ``f(region)``; endpoint flags follow each monotone piece."""
    if not region.issubset(f.domain_set()):
        raise DomainError(f"region {region} not inside domain {f.domain_set()}")
    out = []
    for part in region:
        for (x0, y0), (x1, y1) in f.pieces():
            img = _piece_image(x0, y0, x1, y1, part)
            if img is not None:
                out.append(img)
    return IntervalUnion(out)


def pl_preimage_point(f: PLMap, y, region: IntervalUnion):
    """Some ``x`` in ``region`` with ``f(x) == y``, or ``None``."""
    for (x0, y0), (x1, y1) in f.pieces():
        piece = IntervalUnion([Interval(x0, x1)])
        if y0 == y1:
            if y == y0:
                hit = piece.intersect(region)
                if hit:
                    return hit.witness()
            continue
        lo, hi = min(y0, y1), max(y0, y1)
        if y < lo or y > hi:
            continue
        x = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
        if x in region:
            return x
    return None


def pl_preimage(f: PLMap, target: IntervalUnion) -> IntervalUnion:
    """Exact ``f^{-1}(target)`` within the domain."""
    out = []
    for (x0, y0), (x1, y1) in f.pieces():
        piece = Interval(x0, x1)
        if y0 == y1:
            if y0 in target:
                out.append(piece)
            continue
        for t in target:
            # solve y0 + s (x - x0) = t endpoints
            s = (y1 - y0) / (x1 - x0)
            ends = []
            for yv, closed_ in ((t.lo, t.lo_closed), (t.hi, t.hi_closed)):
                if isinstance(yv, float):
                    ends.append((yv if s > 0 else -yv, False))
                else:
                    ends.append((x0 + (yv - y0) / s, closed_))
            if s < 0:
                ends.reverse()
            (a, ac), (b, bc) = ends
            got = piece.intersect(Interval(a, b, ac, bc))
            if not got.empty:
                out.append(got)
    return IntervalUnion(out)


def pl_from_points(points: Iterable) -> PLMap:
    return PLMap(tuple(points))
