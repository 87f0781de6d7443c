"""Subbasic open sets and finite families of them.

Every detector works over a finite family generated at some resolution.  A
family is deterministic, duplicate-free, and each member carries a witness
point found at generation time, so no member is empty.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import mpmath

from .exact import INF, fmt, to_fraction, to_scalar
from .intervals import Interval, IntervalUnion
from .spaces import BinarySequence, ConePoint, PhaseSpace, sequence_net


class ConfigurationError(ValueError):
    """A scheme was requested on a space it does not apply to."""


class Undecided(RuntimeError):
    """Membership could not be certified at the available precision."""


class SubbasicSet:
    kind = "abstract"
    exact_region = True

    def region(self) -> IntervalUnion:
        raise TypeError(f"{self.kind} is not an interval set")

    def contains(self, p) -> bool:
        return p in self.region()

    def to_json(self) -> dict:
        raise NotImplementedError


# -- interval-type sets --------------------------------------------------------


@dataclass(frozen=True)
class HalfLineLeft(SubbasicSet):
    """(-inf, a)"""

    a: object
    kind = "half_line_left"

    def region(self):
        return IntervalUnion([Interval(-INF, to_scalar(self.a), False, False)])

    def __str__(self):
        return f"(-inf, {fmt(self.a)})"

    def to_json(self):
        return {"kind": self.kind, "a": fmt(self.a)}


@dataclass(frozen=True)
class HalfLineRight(SubbasicSet):
    """(b, +inf)"""

    b: object
    kind = "half_line_right"

    def region(self):
        return IntervalUnion([Interval(to_scalar(self.b), INF, False, False)])

    def __str__(self):
        return f"({fmt(self.b)}, inf)"

    def to_json(self):
        return {"kind": self.kind, "b": fmt(self.b)}


@dataclass(frozen=True)
class EndLow(SubbasicSet):
    """[lo, a), open in [lo, hi] because it contains the left end."""

    a: object
    lo: object = Fraction(0)
    kind = "end_low"

    def __post_init__(self):
        if not to_fraction(self.lo) < to_fraction(self.a):
            raise ValueError("end_low needs lo < a")

    def region(self):
        return IntervalUnion([Interval(to_fraction(self.lo), to_fraction(self.a), True, False)])

    def __str__(self):
        return f"[{fmt(self.lo)}, {fmt(self.a)})"

    def to_json(self):
        return {"kind": self.kind, "a": fmt(self.a), "lo": fmt(self.lo)}


@dataclass(frozen=True)
class EndHigh(SubbasicSet):
    """(b, hi]"""

    b: object
    hi: object = Fraction(1)
    kind = "end_high"

    def __post_init__(self):
        if not to_fraction(self.b) < to_fraction(self.hi):
            raise ValueError("end_high needs b < hi")

    def region(self):
        return IntervalUnion([Interval(to_fraction(self.b), to_fraction(self.hi), False, True)])

    def __str__(self):
        return f"({fmt(self.b)}, {fmt(self.hi)}]"

    def to_json(self):
        return {"kind": self.kind, "b": fmt(self.b), "hi": fmt(self.hi)}


@dataclass(frozen=True)
class OpenInterval(SubbasicSet):
    """(a, b) on a line; on the circle an arc from a forward to b (may wrap)."""

    a: object
    b: object
    circular: bool = False
    kind = "open_interval"

    def region(self):
        a, b = to_scalar(self.a), to_scalar(self.b)
        if not self.circular:
            return IntervalUnion([Interval(a, b, False, False)])
        if a < b:
            return IntervalUnion([Interval(a, b, False, False)])
        return IntervalUnion(
            [Interval(Fraction(0), b, True, False), Interval(a, Fraction(1), False, False)]
        )

    def __str__(self):
        tag = "arc" if self.circular else ""
        return f"{tag}({fmt(self.a)}, {fmt(self.b)})"

    def to_json(self):
        return {"kind": self.kind, "a": fmt(self.a), "b": fmt(self.b), "circular": self.circular}


@dataclass(frozen=True)
class Region(SubbasicSet):
    """Arbitrary open IntervalUnion, for pinned sets that fit no other variant."""

    parts: IntervalUnion
    kind = "region"

    def region(self):
        return self.parts

    def __str__(self):
        return str(self.parts)

    def to_json(self):
        return {"kind": self.kind, "parts": self.parts.to_json()}


# -- sequence sets -------------------------------------------------------------


@dataclass(frozen=True)
class Cylinder(SubbasicSet):
    """Sequences whose coordinate ``k`` equals ``v``."""

    k: int
    v: int
    kind = "cylinder"
    exact_region = False

    def contains(self, p):
        return isinstance(p, BinarySequence) and p[self.k] == self.v

    def __str__(self):
        return f"C[{self.k}]={self.v}"

    def to_json(self):
        return {"kind": self.kind, "k": self.k, "v": self.v}


@dataclass(frozen=True)
class WordCylinder(SubbasicSet):
    """Basic cylinder: sequences starting with ``word``."""

    word: tuple
    kind = "word_cylinder"
    exact_region = False

    def contains(self, p):
        return isinstance(p, BinarySequence) and p.word(len(self.word)) == tuple(self.word)

    def __str__(self):
        return "C[" + "".join(map(str, self.word)) + "...]"

    def to_json(self):
        return {"kind": self.kind, "word": "".join(map(str, self.word))}


# -- half-spaces on the double cone -------------------------------------------


@dataclass(frozen=True)
class HalfSpace(SubbasicSet):
    """Open half-space ``{v in R^3 : normal . v > offset}`` traced on the double cone."""

    normal: tuple
    offset: object
    kind = "half_space"
    exact_region = False

    def __post_init__(self):
        object.__setattr__(self, "normal", tuple(to_fraction(c) for c in self.normal))
        object.__setattr__(self, "offset", to_fraction(self.offset))
        if all(c == 0 for c in self.normal):
            raise ValueError("normal must be nonzero")

    def margin_exact(self, p: ConePoint):
        v = p.embed_exact()
        if v is None:
            return None
        return sum(n * x for n, x in zip(self.normal, v)) - self.offset

    def contains(self, p, max_prec: int = 640):
        if not isinstance(p, ConePoint):
            return False
        m = self.margin_exact(p)
        if m is not None:
            return m > 0
        iv = mpmath.iv
        prec = 80
        while prec <= max_prec:
            v = p.embed_interval(prec)
            old = iv.prec
            iv.prec = prec
            try:
                acc = iv.mpf(0)
                for n, x in zip(self.normal, v):
                    acc += iv.mpf(n.numerator) / n.denominator * x
                acc -= iv.mpf(self.offset.numerator) / self.offset.denominator
            finally:
                iv.prec = old
            if acc.a > 0:
                return True
            if acc.b <= 0:
                return False
            prec *= 2
        raise Undecided(f"membership of {p} in {self} undecided at {max_prec} bits")

    def __str__(self):
        n = ",".join(fmt(c) for c in self.normal)
        return f"H[({n}).v > {fmt(self.offset)}]"

    def to_json(self):
        return {"kind": self.kind, "normal": [fmt(c) for c in self.normal], "offset": fmt(self.offset)}


# -- function-space sets -------------------------------------------------------


@dataclass(frozen=True)
class CoSet(SubbasicSet):
    """Compact-open subbasic set [K, G]: maps sending compact ``K`` into open ``G``."""

    K: IntervalUnion
    G: IntervalUnion
    kind = "co_set"
    exact_region = False

    def __post_init__(self):
        for p in self.K:
            if not (p.lo_closed and p.hi_closed):
                raise ValueError("K must be a finite union of closed intervals or points")

    @property
    def is_point_open(self) -> bool:
        return len(self.K) == 1 and self.K.parts[0].is_point

    def contains(self, g) -> bool:
        from .envelope import co_member

        return co_member(g, self)

    def __str__(self):
        return f"[{self.K}, {self.G}]"

    def to_json(self):
        return {"kind": self.kind, "K": self.K.to_json(), "G": self.G.to_json()}


def po_set(x, G: IntervalUnion) -> CoSet:
    """Point-open subbasic set [{x}, G]."""
    return CoSet(IntervalUnion.points([x]), G)


def set_from_json(d) -> SubbasicSet:
    kind = d["kind"]
    if kind == "half_line_left":
        return HalfLineLeft(to_scalar(d["a"]))
    if kind == "half_line_right":
        return HalfLineRight(to_scalar(d["b"]))
    if kind == "end_low":
        return EndLow(to_fraction(d["a"]), to_fraction(d["lo"]))
    if kind == "end_high":
        return EndHigh(to_fraction(d["b"]), to_fraction(d["hi"]))
    if kind == "open_interval":
        return OpenInterval(to_scalar(d["a"]), to_scalar(d["b"]), d["circular"])
    if kind == "region":
        return Region(IntervalUnion.from_json(d["parts"]))
    if kind == "cylinder":
        return Cylinder(d["k"], d["v"])
    if kind == "word_cylinder":
        return WordCylinder(tuple(int(c) for c in d["word"]))
    if kind == "half_space":
        return HalfSpace(tuple(d["normal"]), d["offset"])
    if kind == "co_set":
        return CoSet(IntervalUnion.from_json(d["K"]), IntervalUnion.from_json(d["G"]))
    raise KeyError(kind)


# -- operations ----------------------------------------------------------------


def contains(S: SubbasicSet, p) -> bool:
    return S.contains(p)


@dataclass
class SampleNet:
    points: list
    epsilon: object
    approximate: bool = True

    def __len__(self):
        return len(self.points)


def realize_region(S: SubbasicSet, space: PhaseSpace | None = None, depth: int = 6):
    """Exact IntervalUnion for interval sets, otherwise a finite epsilon-net."""
    if S.exact_region:
        reg = S.region()
        if space is not None and space.is_linear:
            reg = reg.intersect(space.region())
        return reg
    if isinstance(S, Cylinder):
        d = max(depth, S.k + 1)
        pts = sequence_net(d, {S.k: S.v})
        return SampleNet(pts, Fraction(1, 2**d))
    if isinstance(S, WordCylinder):
        d = max(depth, len(S.word))
        pts = sequence_net(d, dict(enumerate(S.word)))
        return SampleNet(pts, Fraction(1, 2**d))
    if isinstance(S, HalfSpace):
        pts = [p for p in cone_grid(4 * depth, 2 * depth) if S.contains(p)]
        return SampleNet(pts, Fraction(1, depth))
    raise TypeError(f"cannot realize {S.kind}")


def meets(S: SubbasicSet, region) -> bool:
    """Whether ``S`` intersects ``region``.

    ``region`` is an IntervalUnion (exact decision) or a SampleNet / list of
    points (approximate: true iff some sample lies in ``S``).
    """
    if isinstance(region, IntervalUnion):
        return not S.region().intersect(region).empty
    pts = region.points if isinstance(region, SampleNet) else region
    return any(S.contains(p) for p in pts)


def cone_grid(n_angles: int, n_alt: int) -> list:
    """Deterministic grid of cone points, vertices first."""
    pts = [ConePoint(0, 1), ConePoint(0, -1)]
    for j in range(-n_alt + 1, n_alt):
        t = Fraction(j, n_alt)
        for i in range(n_angles):
            pts.append(ConePoint(Fraction(i, n_angles), t))
    return pts


# -- schemes and families --------------------------------------------------------

SCHEMES = (
    "half_lines",
    "endpoint_intervals",
    "basic_intervals",
    "cylinders",
    "basic_cylinders",
    "half_spaces",
    "compact_open",
    "point_open",
    "point_open_on_A",
)


@dataclass(frozen=True)
class SubbaseScheme:
    """Which family to generate and at what resolution.

    ``window`` bounds the cut points used on the real line; ``pinned`` sets
    are always included first; ``limit`` caps function-space families by
    taking an evenly strided subset; ``sample`` is the point list A for
    ``point_open_on_A``.
    """

    tag: str
    resolution: int = 4
    window: object = Fraction(1)
    pinned: tuple = ()
    limit: int | None = None
    sample: tuple = ()

    def __post_init__(self):
        if self.tag not in SCHEMES:
            raise ConfigurationError(f"unknown scheme {self.tag!r}")
        if self.resolution < 1:
            raise ConfigurationError("resolution must be >= 1")


def _grid(lo, hi, r):
    return [lo + (hi - lo) * Fraction(i, r) for i in range(r + 1)]


def _line_window(space: PhaseSpace, scheme: SubbaseScheme):
    if space.kind == "real_line":
        w = to_fraction(scheme.window)
        return -w, w
    return space.lo, space.hi


def _interval_sets(space: PhaseSpace, scheme: SubbaseScheme) -> list:
    r = scheme.resolution
    tag = scheme.tag
    if tag == "half_lines":
        if space.kind != "real_line":
            raise ConfigurationError("half_lines needs the real line")
        g = _grid(*_line_window(space, scheme), r)
        return [HalfLineLeft(x) for x in g] + [HalfLineRight(x) for x in g]
    if tag == "endpoint_intervals":
        if space.kind != "interval":
            raise ConfigurationError("endpoint_intervals needs a compact interval")
        g = _grid(space.lo, space.hi, r)
        return [EndLow(g[i], space.lo) for i in range(1, r + 1)] + [EndHigh(g[i], space.hi) for i in range(r)]
    if tag == "basic_intervals":
        if space.kind == "circle":
            g = [Fraction(i, r) for i in range(r)]
            return [OpenInterval(g[i], g[(i + L) % r], True) for L in range(1, r) for i in range(r)]
        if space.kind == "real_line":
            g = _grid(*_line_window(space, scheme), r)
            return [OpenInterval(g[i], g[j]) for i in range(r) for j in range(i + 1, r + 1)]
        if space.kind == "interval":
            g = _grid(space.lo, space.hi, r)
            out = []
            for i in range(r):
                for j in range(i + 1, r + 1):
                    if i == 0 and j == r:
                        continue
                    if i == 0:
                        out.append(EndLow(g[j], space.lo))
                    elif j == r:
                        out.append(EndHigh(g[i], space.hi))
                    else:
                        out.append(OpenInterval(g[i], g[j]))
            return out
    raise ConfigurationError(f"scheme {tag} does not apply to {space}")


def primitive_normals(r: int) -> list:
    out = []
    rng = range(-r, r + 1)
    for v in itertools.product(rng, rng, rng):
        if v == (0, 0, 0):
            continue
        if gcd(gcd(abs(v[0]), abs(v[1])), abs(v[2])) != 1:
            continue
        out.append(v)
    return out


def _witness(S: SubbasicSet, space: PhaseSpace):
    """A point of ``S`` in ``space`` (a constant map for function-space sets), or None."""
    if isinstance(S, CoSet):
        hit = S.G.intersect(space.region())
        return hit.witness() if hit else None
    if S.exact_region:
        hit = S.region().intersect(space.region())
        return hit.witness() if hit else None
    if isinstance(S, Cylinder):
        return BinarySequence.constant(S.v)
    if isinstance(S, WordCylinder):
        return BinarySequence.from_word(S.word)
    if isinstance(S, HalfSpace):
        for p in EXACT_CONE_POINTS:
            if S.contains(p):
                return p
        for p in cone_grid(24, 12):
            if S.contains(p):
                return p
        return None
    return None


EXACT_CONE_POINTS = [ConePoint(0, 1), ConePoint(0, -1)] + [
    ConePoint(Fraction(i, 4), 0) for i in range(4)
]


@dataclass
class Family:
    """Ordered, duplicate-free list of nonempty subbasic sets with witnesses."""

    space: PhaseSpace
    scheme: SubbaseScheme
    members: list
    witnesses: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __getitem__(self, i):
        return self.members[i]


def generate_family(space: PhaseSpace, scheme: SubbaseScheme) -> Family:
    tag, r = scheme.tag, scheme.resolution
    if tag in ("half_lines", "endpoint_intervals", "basic_intervals"):
        raw = _interval_sets(space, scheme)
    elif tag in ("cylinders", "basic_cylinders"):
        if space.kind not in ("cantor", "shift_subsystem"):
            raise ConfigurationError(f"{tag} needs a sequence space")
        if tag == "cylinders":
            raw = [Cylinder(k, v) for k in range(r) for v in (0, 1)]
        else:
            raw = [WordCylinder(w) for L in range(1, r + 1) for w in itertools.product((0, 1), repeat=L)]
    elif tag == "half_spaces":
        if space.kind != "double_cone":
            raise ConfigurationError("half_spaces needs the double cone")
        raw = []
        for n in primitive_normals(r):
            scale = max(abs(c) for c in n)
            for s in (Fraction(-1, 2), Fraction(0), Fraction(1, 2)):
                raw.append(HalfSpace(n, s * scale))
    elif tag in ("compact_open", "point_open", "point_open_on_A"):
        raw = _function_space_sets(space, scheme)
    else:
        raise ConfigurationError(f"unknown scheme {tag}")
    members, witnesses, seen = [], [], set()
    for S in list(scheme.pinned) + raw:
        key = repr(S.to_json())
        if key in seen:
            continue
        w = _witness(S, space)
        if w is None:
            continue
        seen.add(key)
        members.append(S)
        witnesses.append(w)
    return Family(space, scheme, members, witnesses)


def _function_space_sets(space: PhaseSpace, scheme: SubbaseScheme) -> list:
    if not space.is_linear:
        raise ConfigurationError("function-space schemes need an interval-type base space")
    r = scheme.resolution
    if space.kind == "circle":
        pts = [Fraction(i, r) for i in range(r)]
        Ks = [IntervalUnion.points([x]) for x in pts]
    else:
        lo, hi = _line_window(space, scheme)
        pts = _grid(lo, hi, r)
        Ks = [IntervalUnion.points([x]) for x in pts]
        if scheme.tag == "compact_open":
            Ks += [IntervalUnion([Interval(pts[i], pts[j])]) for i in range(r) for j in range(i + 1, r + 1)]
    if scheme.tag == "point_open_on_A":
        Ks = [IntervalUnion.points([to_scalar(a)]) for a in scheme.sample]
    inner = SubbaseScheme("basic_intervals", r, scheme.window)
    Gs = [S.region().intersect(space.region()) for S in _interval_sets(space, inner)]
    out = [CoSet(K, G) for K in Ks for G in Gs]
    if scheme.limit is not None and len(out) > scheme.limit:
        step = len(out) / scheme.limit
        out = [out[int(i * step)] for i in range(scheme.limit)]
    return out
