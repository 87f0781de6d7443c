"""Catalog of transition maps with exact evaluation, iteration and images."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .exact import GOLDEN, INF, Surd, fmt, mod1, to_fraction, to_scalar
from .intervals import Interval, IntervalUnion
from .plmap import DomainError, PLMap, pl_compose, pl_image, pl_power, pl_preimage_point
from .spaces import (
    CIRCLE,
    DOUBLE_CONE,
    REAL_LINE,
    SHIFT_X,
    SYMMETRIC_INTERVAL,
    BinarySequence,
    ConePoint,
    PhaseSpace,
)

MAX_DENOMINATOR_BITS = 4096


class BudgetExceeded(RuntimeError):
    """An exact computation outgrew its budget; ``partial`` holds what was done."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class CatalogMap:
    """Base class: a continuous self-map of ``space`` identified by ``tag``."""

    tag = "abstract"
    space: PhaseSpace
    isometry = False

    def __call__(self, p):
        raise NotImplementedError

    def iterate(self, k: int, p):
        for _ in range(k):
            p = self(p)
        return p

    # interval-type maps override these
    def image(self, region: IntervalUnion) -> IntervalUnion:
        raise TypeError(f"{self.tag} has no exact set image")

    def preimage_point(self, y, region: IntervalUnion):
        raise TypeError(f"{self.tag} has no exact preimage search")

    def fixed_points(self, k: int, region: IntervalUnion):
        """``(points, segments)``: exact solutions of ``f^k(x) = x`` inside region.

        ``segments`` collects whole intervals fixed by ``f^k``.
        """
        raise TypeError(f"{self.tag} has no exact periodic solver")

    def periodic_set(self):
        """Exact description of all periodic points, or ``None`` if not known in closed form."""
        return None

    @property
    def is_linear(self) -> bool:
        return self.space.is_linear

    def params(self) -> dict:
        return {}

    def to_json(self):
        return {"tag": self.tag, **self.params()}

    def __str__(self):
        extra = ", ".join(f"{k}={v}" for k, v in self.params().items())
        return f"{self.tag}({extra})" if extra else self.tag

    def __eq__(self, other):
        return type(self) is type(other) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash(repr(self.to_json()))


def _check_size(p, step):
    if isinstance(p, Fraction) and p.denominator.bit_length() > MAX_DENOMINATOR_BITS:
        raise BudgetExceeded(f"denominator overflow after {step} steps", partial=p)


class PLSystem(CatalogMap):
    tag = "pl"

    def __init__(self, pl: PLMap, name: str = "pl"):
        self.pl = pl.simplified()
        self.name = name
        self.space = PhaseSpace("interval", *pl.domain)
        lo, hi = pl.codomain
        if (lo, hi) != pl.domain:
            raise ValueError("catalog PL maps must be self-maps of their domain")

    def __call__(self, x):
        return self.pl(x)

    def iterate(self, k, p):
        for step in range(k):
            p = self.pl(p)
            _check_size(p, step + 1)
        return p

    def image(self, region):
        return pl_image(self.pl, region)

    def preimage_point(self, y, region):
        return pl_preimage_point(self.pl, y, region)

    def power(self, k: int) -> PLMap:
        return _pl_power_cached(self.pl, k)

    def fixed_points(self, k, region):
        g = self.power(k)
        points, segs = [], []
        for (x0, y0), (x1, y1) in g.pieces():
            if y0 - x0 == 0 and y1 - x1 == 0:
                segs.append(Interval(x0, x1))
                continue
            # g(x) - x is linear on the piece; find its zero
            d0, d1 = y0 - x0, y1 - x1
            if d0 == d1:
                continue
            t = d0 / (d0 - d1)
            if 0 <= t <= 1:
                points.append(x0 + t * (x1 - x0))
        seg_set = IntervalUnion(segs).intersect(region)
        pts = sorted({x for x in points if x in region and x not in seg_set})
        return pts, seg_set

    def params(self):
        if self.name != "pl":
            return {"name": self.name}
        return {"pl": self.pl.to_json()}

    def to_json(self):
        return {"tag": self.tag, "name": self.name, "pl": self.pl.to_json()}

    def __str__(self):
        return self.name if self.name != "pl" else str(self.pl)


@lru_cache(maxsize=256)
def _pl_power_cached(pl: PLMap, k: int) -> PLMap:
    if k == 1:
        return pl.simplified()
    return pl_compose(pl, _pl_power_cached(pl, k - 1))


class Negation(CatalogMap):
    """x -> -x on the real line."""

    tag = "negation"
    isometry = True

    def __init__(self):
        self.space = REAL_LINE

    def __call__(self, x):
        return -to_scalar(x)

    def iterate(self, k, p):
        return p if k % 2 == 0 else -p

    def image(self, region):
        return IntervalUnion(Interval(-p.hi, -p.lo, p.hi_closed, p.lo_closed) for p in region)

    def preimage_point(self, y, region):
        return -y if -y in region else None

    def fixed_points(self, k, region):
        if k % 2 == 0:
            return [], region
        return ([Fraction(0)] if 0 in region else []), IntervalUnion()

    def periodic_set(self):
        return IntervalUnion.real_line()


class AbsoluteValue(CatalogMap):
    """x -> |x| on the real line."""

    tag = "absolute_value"

    def __init__(self):
        self.space = REAL_LINE

    def __call__(self, x):
        return abs(to_scalar(x))

    def iterate(self, k, p):
        return p if k == 0 else abs(p)

    def image(self, region):
        pos = region.intersect(IntervalUnion([Interval(Fraction(0), INF, True, False)]))
        neg = region.intersect(IntervalUnion([Interval(-INF, Fraction(0), False, False)]))
        flipped = IntervalUnion(Interval(-p.hi, -p.lo, p.hi_closed, p.lo_closed) for p in neg)
        return pos.union(flipped)

    def preimage_point(self, y, region):
        if y < 0:
            return None
        for x in (y, -y):
            if x in region:
                return x
        return None

    def fixed_points(self, k, region):
        return [], region.intersect(self.periodic_set())

    def periodic_set(self):
        return IntervalUnion([Interval(Fraction(0), INF, True, False)])


class Contraction(CatalogMap):
    """x -> x/(|x|+1) on [-1, 1]; the k-th iterate is y/(k|y|+1)."""

    tag = "contraction_3_6"

    def __init__(self):
        self.space = SYMMETRIC_INTERVAL

    def __call__(self, x):
        x = to_fraction(x)
        if x < -1 or x > 1:
            raise DomainError(f"{fmt(x)} outside [-1, 1]")
        return x / (abs(x) + 1)

    def iterate(self, k, p):
        p = to_fraction(p)
        if p < -1 or p > 1:
            raise DomainError(f"{fmt(p)} outside [-1, 1]")
        return p / (k * abs(p) + 1)

    def image(self, region):
        if not region.issubset(self.space.region()):
            raise DomainError(f"{region} not inside [-1, 1]")
        # increasing, so endpoints and flags carry over
        return IntervalUnion(Interval(self(p.lo), self(p.hi), p.lo_closed, p.hi_closed) for p in region)

    def preimage_point(self, y, region):
        if abs(y) >= 1:
            return None
        x = y / (1 - abs(y))
        return x if x in region and -1 <= x <= 1 else None

    def fixed_points(self, k, region):
        return ([Fraction(0)] if 0 in region else []), IntervalUnion()

    def periodic_set(self):
        return IntervalUnion.points([0])


class CircleRotation(CatalogMap):
    """theta -> theta + alpha (mod 1).  ``alpha`` is a Fraction or an exact :class:`Surd`."""

    tag = "circle_rotation"
    isometry = True

    def __init__(self, alpha):
        alpha = mod1(to_scalar(alpha))
        self.alpha = alpha
        self.space = CIRCLE

    @property
    def rational(self) -> bool:
        return isinstance(self.alpha, Fraction)

    @property
    def period(self) -> int | None:
        return self.alpha.denominator if self.rational else None

    def __call__(self, theta):
        return mod1(to_scalar(theta) + self.alpha)

    def iterate(self, k, p):
        return mod1(to_scalar(p) + k * self.alpha)

    def image(self, region):
        return rotate_region(region, self.alpha)

    def preimage_point(self, y, region):
        x = mod1(y - self.alpha)
        return x if x in region else None

    def fixed_points(self, k, region):
        if self.rational and k % self.alpha.denominator == 0:
            return [], region
        return [], IntervalUnion()

    def periodic_set(self):
        # k*alpha is never an integer for irrational alpha, so P(f) is empty
        return CIRCLE.region() if self.rational else IntervalUnion()

    def params(self):
        return {"alpha": fmt(self.alpha)}


def rotate_region(region: IntervalUnion, alpha) -> IntervalUnion:
    out = []
    one = Fraction(1)
    for p in region:
        lo, hi = p.lo + alpha, p.hi + alpha
        part = Interval(lo, hi, p.lo_closed, p.hi_closed)
        low = part.intersect(Interval(Fraction(0), one, True, False))
        high = part.intersect(Interval(one, Fraction(2), True, False))
        if not low.empty:
            out.append(low)
        if not high.empty:
            out.append(Interval(high.lo - 1, high.hi - 1, high.lo_closed, high.hi_closed))
    return IntervalUnion(out)


class Shift(CatalogMap):
    """The left shift; on ``shift_subsystem`` it is restricted to X = S u O(s*)."""

    tag = "shift"

    def __init__(self, subsystem: bool = True):
        from .spaces import CANTOR

        self.subsystem = subsystem
        self.space = SHIFT_X if subsystem else CANTOR

    def __call__(self, s: BinarySequence):
        return s.shift(1)

    def iterate(self, k, p):
        return p.shift(k)

    def params(self):
        return {"subsystem": self.subsystem}


class Glissorotation(CatalogMap):
    """Double-cone map: rotate the angle by p/q and negate the altitude."""

    tag = "glissorotation"
    isometry = True

    def __init__(self, p: int, q: int):
        if q < 1 or gcd(p, q) != 1:
            raise ValueError("glissorotation needs coprime p, q with q >= 1")
        self.p, self.q = p, q
        self.alpha = Fraction(p, q)
        self.space = DOUBLE_CONE

    def __call__(self, x: ConePoint):
        return ConePoint(x.theta + self.alpha, -x.t)

    def iterate(self, k, x):
        t = x.t if k % 2 == 0 else -x.t
        return ConePoint(x.theta + k * self.alpha, t)

    def params(self):
        return {"p": self.p, "q": self.q}


# -- catalog -----------------------------------------------------------------


def tent() -> PLSystem:
    return PLSystem(PLMap(((0, 0), (Fraction(1, 2), 1), (1, 0))), "tent")


def f37() -> PLSystem:
    """Reflection of the truncated tent about y = 1/2; range [1/2, 1]."""
    h = Fraction(1, 2)
    return PLSystem(PLMap(((0, 1), (Fraction(1, 4), h), (Fraction(3, 4), h), (1, 1))), "f37")


def truncated_tent() -> PLSystem:
    h = Fraction(1, 2)
    return PLSystem(PLMap(((0, 0), (Fraction(1, 4), h), (Fraction(3, 4), h), (1, 0))), "truncated_tent")


def identity(lo=0, hi=1) -> PLSystem:
    return PLSystem(PLMap(((lo, lo), (hi, hi))), "identity")


def negation_on(c) -> PLSystem:
    """Negation restricted to the symmetric interval [-c, c]."""
    c = to_fraction(c)
    return PLSystem(PLMap(((-c, c), (c, -c))), "negation_pl")


def golden_rotation() -> CircleRotation:
    return CircleRotation(GOLDEN)


SYSTEMS = {
    "tent": tent,
    "f37": f37,
    "truncated_tent": truncated_tent,
    "identity": identity,
    "negation": Negation,
    "absolute_value": AbsoluteValue,
    "contraction": Contraction,
    "rotation_golden": golden_rotation,
    "shift": lambda: Shift(True),
    "full_shift": lambda: Shift(False),
}


def system_from_tag(tag: str) -> CatalogMap:
    """Build a catalog map from a CLI-style tag.

    Besides the names in ``SYSTEMS``: ``rotation:p/q``, ``gliss:p/q``,
    ``negation_pl:c``.
    """
    if tag in SYSTEMS:
        return SYSTEMS[tag]()
    name, _, arg = tag.partition(":")
    if name == "rotation" and arg:
        return CircleRotation(to_fraction(arg))
    if name == "gliss" and arg:
        p, _, q = arg.partition("/")
        return Glissorotation(int(p), int(q))
    if name == "negation_pl" and arg:
        return negation_on(arg)
    raise KeyError(f"unknown system tag {tag!r}")


def map_from_json(data) -> CatalogMap:
    tag = data["tag"]
    if tag == "pl":
        name = data.get("name", "pl")
        if name in SYSTEMS:
            return SYSTEMS[name]()
        return PLSystem(PLMap.from_json(data["pl"]), name)
    if tag == "negation":
        return Negation()
    if tag == "absolute_value":
        return AbsoluteValue()
    if tag == "contraction_3_6":
        return Contraction()
    if tag == "circle_rotation":
        return CircleRotation(to_scalar(data["alpha"]))
    if tag == "shift":
        return Shift(data["subsystem"])
    if tag == "glissorotation":
        return Glissorotation(data["p"], data["q"])
    raise KeyError(tag)


# -- module-level operations ---------------------------------------------------


def eval_map(f: CatalogMap, p):
    if not f.space.contains(p):
        raise DomainError(f"{p} is not a point of {f.space}")
    return f(p)


def iterate_eval(f: CatalogMap, k: int, p):
    if k < 0:
        raise ValueError("k must be >= 0")
    if not f.space.contains(p):
        raise DomainError(f"{p} is not a point of {f.space}")
    return f.iterate(k, p)


@dataclass
class Orbit:
    points: list
    cycle_start: int | None = None
    period: int | None = None

    @property
    def has_cycle(self) -> bool:
        return self.period is not None


def orbit(f: CatalogMap, p, n: int) -> Orbit:
    """``[p, f(p), ..., f^n(p)]`` with the first exact repetition recorded."""
    if n < 0:
        raise ValueError("n must be >= 0")
    pts = [p]
    seen = {p: 0}
    start = period = None
    for i in range(1, n + 1):
        p = f(p)
        pts.append(p)
        if start is None:
            if p in seen:
                start, period = seen[p], i - seen[p]
            else:
                seen[p] = i
    return Orbit(pts, start, period)


def least_period(f: CatalogMap, x, k: int) -> int:
    """Least ``d`` dividing ``k`` with ``f^d(x) == x``; assumes ``f^k(x) == x``."""
    for d in range(1, k + 1):
        if k % d == 0 and f.iterate(d, x) == x:
            return d
    raise ValueError(f"{x} is not fixed by the {k}-th iterate")
