"""The functional envelope: continuous self-maps g with F_f(g) = f o g.

Elements are constants, PL maps, or lazy compositions f^n o g.  Membership
in compact-open sets [K, G] is decided exactly from the image g(K).  The
witness constructions only need constant maps; everything over richer
families is labelled as evidence.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .detectors import find_periodic_points, pair_search, periodic_search
from .exact import fmt, to_fraction
from .intervals import Interval, IntervalUnion
from .maps import BudgetExceeded, CatalogMap, Contraction, PLSystem, least_period
from .plmap import DomainError, PLMap, pl_compose, pl_image, pl_preimage, pl_preimage_point
from .subbases import CoSet, ConfigurationError, Region
from .verdicts import (
    AbsorbingSet,
    Budget,
    PairWitness,
    PeriodicSetCharacterization,
    RangeBound,
    Verdict,
    point_json,
)

TOPOLOGIES = ("compact_open", "point_open", "point_open_on_A")


# -- elements ----------------------------------------------------------------------


class FunctionElement:
    """A continuous self-map of the base space."""

    kind = "abstract"

    def __call__(self, x):
        raise NotImplementedError

    def image(self, K: IntervalUnion) -> IntervalUnion:
        raise NotImplementedError

    def materialize(self) -> "FunctionElement":
        return self

    @property
    def is_constant(self) -> bool:
        return False


@dataclass(frozen=True)
class Constant(FunctionElement):
    value: object
    kind = "constant"

    def __call__(self, x):
        return self.value

    def image(self, K):
        return IntervalUnion.points([self.value]) if K else IntervalUnion()

    @property
    def is_constant(self) -> bool:
        return True

    def __str__(self):
        return f"const_{fmt(self.value)}"

    def to_json(self):
        return {"kind": "constant", "value": point_json(self.value)}


@dataclass(frozen=True)
class PL(FunctionElement):
    pl: PLMap
    kind = "pl"

    def __call__(self, x):
        return self.pl(x)

    def image(self, K):
        return pl_image(self.pl, K)

    def __str__(self):
        return f"pl{self.pl}"

    def to_json(self):
        return {"kind": "pl", "pl": self.pl.to_json()}


@dataclass(frozen=True)
class Composed(FunctionElement):
    """``f^power o base`` kept unevaluated."""

    base: FunctionElement
    power: int
    f: CatalogMap = field(compare=False)
    kind = "composed"

    def __call__(self, x):
        return self.f.iterate(self.power, self.base(x))

    def image(self, K):
        out = self.base.image(K)
        for _ in range(self.power):
            out = self.f.image(out)
        return out

    @property
    def is_constant(self) -> bool:
        return self.base.is_constant

    def materialize(self) -> FunctionElement:
        base = self.base.materialize()
        if isinstance(base, Constant):
            return Constant(self.f.iterate(self.power, base.value))
        if isinstance(self.f, PLSystem) and isinstance(base, PL):
            return element(pl_compose(self.f.power(self.power), base.pl) if self.power else base.pl)
        return self

    def __str__(self):
        return f"{self.f}^{self.power} o {self.base}"

    def to_json(self):
        return {"kind": "composed", "power": self.power, "base": self.base.to_json(), "f": self.f.to_json()}


def element(g) -> FunctionElement:
    """Wrap a PLMap or scalar; PL maps with a constant graph become constants."""
    if isinstance(g, FunctionElement):
        return g
    if isinstance(g, PLMap):
        g = g.simplified()
        if g.is_constant():
            return Constant(g.ys[0])
        return PL(g)
    return Constant(g)


def constant_embedding(x) -> Constant:
    return Constant(x)


@dataclass(frozen=True)
class EnvelopeSystem:
    f: CatalogMap
    topology: str = "compact_open"

    def __post_init__(self):
        if self.topology not in TOPOLOGIES:
            raise ConfigurationError(f"unknown topology {self.topology!r}")

    @property
    def space(self):
        return self.f.space

    def admits(self, S: CoSet) -> bool:
        if self.topology == "compact_open":
            return True
        return all(p.is_point for p in S.K)


def _check_domain(E: EnvelopeSystem, g: FunctionElement):
    if isinstance(g, PL) and E.space.is_linear and E.space.kind == "interval":
        if g.pl.domain != (E.space.lo, E.space.hi):
            raise DomainError(f"{g} is not defined on {E.space}")


def apply_envelope(E: EnvelopeSystem, g: FunctionElement) -> FunctionElement:
    """F_f(g) = f o g, exact for PL pairs and constants."""
    g = element(g)
    _check_domain(E, g)
    if isinstance(g, Constant):
        return Constant(E.f(g.value))
    if isinstance(g, Composed) and g.f == E.f:
        return Composed(g.base, g.power + 1, E.f).materialize()
    if isinstance(E.f, PLSystem) and isinstance(g, PL):
        return element(pl_compose(E.f.pl, g.pl))
    return Composed(g, 1, E.f)


def envelope_power(E: EnvelopeSystem, g: FunctionElement, n: int) -> FunctionElement:
    """F_f^n(g), lazily; call ``materialize`` for an explicit graph."""
    g = element(g)
    if n == 0:
        return g
    if isinstance(g, Constant):
        return Constant(E.f.iterate(n, g.value))
    if isinstance(g, Composed) and g.f == E.f:
        return Composed(g.base, g.power + n, E.f)
    return Composed(g, n, E.f)


# -- metric and membership --------------------------------------------------------------


def _breakpoints(g: FunctionElement) -> list:
    if isinstance(g, PL):
        return list(g.pl.xs)
    return []


def uniform_distance(g, h, space=None):
    """Exact sup |g - h| over a compact interval; PL differences peak at breakpoints."""
    g, h = element(g).materialize(), element(h).materialize()
    if space is not None and space.kind != "interval":
        raise TypeError(f"uniform distance needs a compact interval base, not {space}; use a sampled pseudo-distance")
    for e in (g, h):
        if isinstance(e, Composed):
            raise TypeError(f"{e} has no explicit PL graph; materialize over a PL base map first")
    if isinstance(g, Constant) and isinstance(h, Constant):
        return abs(g.value - h.value)
    doms = {e.pl.domain for e in (g, h) if isinstance(e, PL)}
    if len(doms) > 1:
        raise DomainError("elements live on different domains")
    xs = sorted(set(_breakpoints(g)) | set(_breakpoints(h)))
    return max(abs(g(x) - h(x)) for x in xs)


def co_member(g, S: CoSet) -> bool:
    """g in [K, G] iff the exact image g(K) lies inside G."""
    g = element(g)
    if not S.K:
        return True
    return g.image(S.K).issubset(S.G)


def co_members(g, sets) -> bool:
    return all(co_member(g, S) for S in sets)


# -- witnesses over the envelope ------------------------------------------------------------


@dataclass
class EnvelopePairWitness:
    """``g`` in A with ``F_f^k(g)`` in B."""

    A: CoSet
    B: CoSet
    k: int
    g: FunctionElement

    def replay(self, f) -> bool:
        E = EnvelopeSystem(f)
        return self.k >= 1 and co_member(self.g, self.A) and co_member(envelope_power(E, self.g, self.k), self.B)

    def to_json(self):
        return {"type": "envelope_pair", "A": self.A.to_json(), "B": self.B.to_json(), "k": self.k, "g": self.g.to_json()}


@dataclass
class EnvelopePeriodicWitness:
    A: CoSet
    g: FunctionElement
    period: int

    def replay(self, f) -> bool:
        E = EnvelopeSystem(f)
        if not co_member(self.g, self.A):
            return False
        same = lambda n: envelope_power(E, self.g, n).materialize() == self.g  # noqa: E731
        return same(self.period) and not any(same(d) for d in range(1, self.period))

    def to_json(self):
        return {"type": "envelope_periodic", "A": self.A.to_json(), "g": self.g.to_json(), "period": self.period}


@dataclass
class LiftedCertificate:
    """A base certificate that rules out every element of the envelope, not only constants.

    ``range``: every F_f^k(g) with k >= 1 maps into f(X), which misses G_B.
    ``no_periodic``: F_f^k(g) = g forces g(X) inside P(f), which is empty.
    """

    base: object
    reason: str

    def replay(self, f) -> bool:
        return self.base.replay(f)

    def to_json(self):
        return {"kind": "lifted", "reason": self.reason, "base": self.base.to_json()}


def _lift_pair_certificate(f, cert):
    if isinstance(cert, RangeBound):
        return LiftedCertificate(cert, "range")
    if isinstance(cert, AbsorbingSet) and f.is_linear and f.image(f.space.region()).issubset(cert.J):
        return LiftedCertificate(cert, "range")
    return None


def transitivity_witness(E: EnvelopeSystem, A: CoSet, B: CoSet, budget: Budget | None = None) -> Verdict:
    """Constant witness const_q with q in G_A and f^k(q) in G_B."""
    budget = budget or Budget()
    f = E.f
    res = pair_search(f, Region(A.G), Region(B.G), budget.k_max)
    if isinstance(res, PairWitness):
        w = EnvelopePairWitness(A, B, res.k, Constant(res.q))
        return Verdict.holds([w], scope=f"{A} -> {B}")
    if res is not None:
        lifted = _lift_pair_certificate(f, res)
        if lifted is not None:
            return Verdict.fails(lifted, scope=f"{A} -> {B}")
        return Verdict.unknown(budget, scope=f"{A} -> {B}", notes=["constants excluded by certificate; non-constant elements not covered"])
    return Verdict.unknown(budget, scope=f"{A} -> {B}")


def periodic_witness(E: EnvelopeSystem, A: CoSet, budget: Budget | None = None) -> Verdict:
    """Constant witness const_x0 with x0 a periodic point of f inside G_A."""
    budget = budget or Budget()
    f = E.f
    res = periodic_search(f, Region(A.G), budget)
    if res is not None and hasattr(res, "period"):
        w = EnvelopePeriodicWitness(A, Constant(res.point), res.period)
        return Verdict.holds([w], scope=str(A))
    if isinstance(res, PeriodicSetCharacterization) and res.mode == "empty":
        return Verdict.fails(LiftedCertificate(res, "no_periodic"), scope=str(A))
    notes = ["constants excluded by certificate; non-constant elements not covered"] if res is not None else []
    return Verdict.unknown(budget, scope=str(A), notes=notes)


def _tilt(E: EnvelopeSystem, x0, w) -> FunctionElement:
    # non-constant PL map through (x0, w) joining the diagonal at both ends
    lo, hi = E.space.lo, E.space.hi
    knots = [(lo, lo), (x0, w), (hi, hi)]
    knots = [k for i, k in enumerate(knots) if i == 0 or k[0] != knots[i - 1][0]]
    if x0 == lo:
        knots[0] = (lo, w)
    return element(PLMap(tuple(knots)))


def envelope_pair_search(E: EnvelopeSystem, A: CoSet, B: CoSet, budget: Budget | None = None) -> Verdict:
    """Point-open pair search with non-constant elements.

    Solves f^k(y) in G_B for y in G_A exactly, then takes a PL map g through
    (x0, y) and checks F_f^k(g) in B on the materialized graph.
    """
    budget = budget or Budget()
    if not (A.is_point_open and B.is_point_open and A.K == B.K):
        raise ConfigurationError("envelope_pair_search needs point-open sets at a common point")
    f = E.f
    if not isinstance(f, PLSystem):
        raise TypeError("envelope_pair_search needs a PL base map")
    x0 = A.K.parts[0].lo
    UA = A.G.intersect(f.space.region())
    for k in range(1, budget.k_max + 1):
        try:
            if len(f.power(k).knots) > budget.max_pieces:
                break
        except BudgetExceeded:
            break
        hits = pl_preimage(f.power(k), B.G).intersect(UA)
        if hits:
            g = _tilt(E, x0, hits.witness())
            w = EnvelopePairWitness(A, B, k, g)
            if not co_member(envelope_power(E, g, k).materialize(), B):
                raise AssertionError("materialized composition disagrees with the preimage solve")
            return Verdict.holds([w], scope=f"{A} -> {B}")
    return Verdict.unknown(budget, scope=f"{A} -> {B}")


def base_from_envelope(E: EnvelopeSystem, U: IntervalUnion, V: IntervalUnion, x0, witness) -> PairWitness:
    """Recover the base pair witness g(x0) from an envelope witness on [{x0},U] -> [{x0},V]."""
    if isinstance(witness, Verdict):
        witness = witness.witnesses[0]
    g, k = witness.g, witness.k
    q = g(x0)
    h_x0 = envelope_power(E, g, k)(x0)
    if E.f.iterate(k, q) != h_x0:
        raise AssertionError("f^k(g(x0)) differs from F_f^k(g)(x0)")
    if q not in U or h_x0 not in V:
        raise AssertionError(f"envelope witness does not connect {U} to {V} at {fmt(x0)}")
    return PairWitness(Region(U), Region(V), k, q)


# -- obstructions to dense orbits ---------------------------------------------------------


@dataclass
class ObstructionEvidence:
    """Open set of the envelope that the orbit of ``g`` never enters."""

    g: FunctionElement
    obstruction: tuple
    n: int
    argument: str
    detail: dict = field(default_factory=dict)
    nonempty_witness: FunctionElement | None = None

    def replay(self, f) -> bool:
        E = EnvelopeSystem(f)
        if self.nonempty_witness is not None and not co_members(self.nonempty_witness, self.obstruction):
            return False
        if self.argument == "no_constants":
            Gs = [S.G for S in self.obstruction]
            if not _no_common_point(Gs):
                return False
            h = self.g
            for _ in range(self.n + 1):
                if not h.is_constant:
                    return False
                h = apply_envelope(E, h)
            return True
        # orbit_in_forbidden_set: F^j(g)(q) = f^j(p) lies in O, and the obstruction avoids O
        p, q = self.detail["p"], self.detail["q"]
        orbit_set = set(self.detail["orbit"])
        if self.g(q) != p or f.iterate(len(orbit_set), p) != p:
            return False
        # the obstruction must avoid all of O; then membership of f^j(p) in O suffices
        if any(co_member(Constant(o), self.obstruction[0]) for o in orbit_set):
            return False
        x = p
        for _ in range(self.n + 1):
            if x not in orbit_set:
                return False
            x = f(x)
        return True

    def to_json(self):
        d = {
            "g": self.g.to_json(),
            "obstruction": [S.to_json() for S in self.obstruction],
            "n": self.n,
            "argument": self.argument,
        }
        if self.detail:
            d["detail"] = {k: ([point_json(v) for v in val] if isinstance(val, (list, tuple)) else point_json(val)) for k, val in self.detail.items()}
        if self.nonempty_witness is not None:
            d["nonempty_witness"] = self.nonempty_witness.to_json()
        return d


def _no_common_point(Gs) -> bool:
    common = Gs[0]
    for G in Gs[1:]:
        common = common.intersect(G)
    return not common


def _unit_obstruction():
    half, one = Fraction(1, 2), Fraction(1)
    A = CoSet(IntervalUnion([Interval(Fraction(0), half)]), IntervalUnion([Interval.open(Fraction(0), Fraction(1, 4))]))
    B = CoSet(IntervalUnion.points([one]), IntervalUnion([Interval.open(Fraction(2, 3), Fraction(3, 4))]))
    witness = element(PLMap(((Fraction(0), Fraction(1, 8)), (half, Fraction(1, 8)), (one, Fraction(7, 10)))))
    return (A, B), witness


def no_dense_orbit_evidence(E: EnvelopeSystem, g, budget: Budget | None = None, n: int = 256) -> ObstructionEvidence | Verdict:
    """An open set the envelope orbit of ``g`` misses, with a structural reason.

    Constants: the set fixes values in two disjoint windows, so it holds no
    constant map while the orbit of a constant is all constants.
    Non-constant PL maps: a periodic orbit O hit by g; every iterate sends the
    preimage point into O, so the orbit misses the maps avoiding O.
    """
    budget = budget or Budget()
    f = E.f
    if E.space.kind != "interval" or (E.space.lo, E.space.hi) != (0, 1):
        raise ConfigurationError("no_dense_orbit_evidence works over [0, 1]")
    g = element(g).materialize()
    if isinstance(g, Constant):
        sets, wit = _unit_obstruction()
        return ObstructionEvidence(g, sets, n, "no_constants", nonempty_witness=wit)
    if not isinstance(g, PL):
        raise TypeError(f"{g} needs a PL graph")
    rng = g.image(E.space.region())
    inner = IntervalUnion([Interval.open(rng.inf, rng.sup)])
    for k in range(1, budget.p_max + 1):
        try:
            recs = find_periodic_points(f, k, inner, budget)
        except BudgetExceeded:
            break
        if not recs:
            continue
        p = recs[0].point
        orbit_pts = []
        x = p
        for _ in range(recs[0].period):
            orbit_pts.append(x)
            x = f(x)
        q = pl_preimage_point(g.pl, p, E.space.region())
        whole = E.space.region()
        U = CoSet(whole, whole.difference(IntervalUnion.points(orbit_pts)))
        wit = next(Constant(c) for c in (Fraction(0), Fraction(1, 7), Fraction(3, 7)) if c not in orbit_pts)
        return ObstructionEvidence(
            g, (U,), n, "orbit_in_forbidden_set", detail={"p": p, "q": q, "orbit": sorted(orbit_pts)}, nonempty_witness=wit
        )
    return Verdict.unknown(budget, scope=str(g), notes=["no periodic point inside the image interior"])


# -- envelope periodicity scans ------------------------------------------------------------


@dataclass
class ScanRecord:
    g: FunctionElement
    period: int | None
    constant: bool
    image_in_periodic_set: bool | None = None

    def to_json(self):
        return {
            "g": self.g.to_json(),
            "period": self.period,
            "constant": self.constant,
            "image_in_periodic_set": self.image_in_periodic_set,
        }


def _sign_pieces(g: FunctionElement):
    """Linear sub-pieces of g on which the sign of g is constant."""
    if isinstance(g, Constant):
        yield (Fraction(0), g.value), (Fraction(1), g.value)
        return
    for (x0, y0), (x1, y1) in g.pl.pieces():
        if y0 * y1 < 0:
            xm = x0 + (x1 - x0) * y0 / (y0 - y1)
            yield (x0, y0), (xm, Fraction(0))
            yield (xm, Fraction(0)), (x1, y1)
        else:
            yield (x0, y0), (x1, y1)


def is_envelope_periodic(E: EnvelopeSystem, g, k: int) -> bool:
    """Exact test of F_f^k(g) = g."""
    g = element(g)
    f = E.f
    if isinstance(g, Constant):
        return f.iterate(k, g.value) == g.value
    if isinstance(f, PLSystem):
        return envelope_power(E, g, k).materialize() == g
    if isinstance(f, Contraction):
        # on a sign-constant piece f^k(g(x)) - g(x) has a quadratic numerator,
        # so agreement at three points means agreement on the whole piece
        for (x0, y0), (x1, y1) in _sign_pieces(g):
            for x in (x0, (x0 + x1) / 2, x1):
                if f.iterate(k, g(x)) != g(x):
                    return False
        return True
    raise TypeError(f"no exact periodicity test for {f}")


def envelope_periodic_scan(E: EnvelopeSystem, family, k_max: int) -> list:
    """Every element of ``family`` with F_f^k(g) = g for some k <= k_max."""
    pset = E.f.periodic_set()
    out = []
    for g in family:
        g = element(g)
        for k in range(1, k_max + 1):
            if is_envelope_periodic(E, g, k):
                img = g.image(E.space.region())
                inside = img.issubset(pset) if pset is not None else None
                out.append(ScanRecord(g, k, g.is_constant, inside))
                break
    return out


def envelope_family(space, count: int, knots: int = 4, grid_pitch=Fraction(1, 8), seed: int = 0) -> list:
    """Constants on the rational grid plus seeded random PL interpolants with <= knots knots."""
    lo, hi = space.lo, space.hi
    pitch = to_fraction(grid_pitch)
    steps = int((hi - lo) / pitch)
    grid = [lo + i * pitch for i in range(steps + 1)]
    out = [Constant(y) for y in grid]
    seen = set(out)
    rng = random.Random(seed)
    while len(out) < count:
        m = rng.randint(2, max(2, knots))
        xs = sorted(set([lo, hi] + rng.sample(grid[1:-1], min(m - 2, len(grid) - 2))))
        ys = [rng.choice(grid) for _ in xs]
        g = element(PLMap(tuple(zip(xs, ys))))
        if g not in seen:
            seen.add(g)
            out.append(g)
    return out


# -- onto-stability ------------------------------------------------------------------------


def onto_check(g) -> bool:
    g = g.pl if isinstance(g, (PL, PLSystem)) else g
    return pl_image(g, g.domain_set()) == g.codomain_set()


@dataclass
class OntoProbe:
    epsilon: object
    samples: int
    onto: int
    non_onto_example: PLMap | None = None

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.onto, self.samples)

    def to_json(self):
        return {
            "epsilon": fmt(self.epsilon),
            "samples": self.samples,
            "onto": self.onto,
            "fraction": fmt(self.fraction),
            "non_onto_example": self.non_onto_example.to_json() if self.non_onto_example else None,
            "evidence_only": True,
        }


def onto_ball_probe(E: EnvelopeSystem, epsilon, samples: int = 200, seed: int = 0) -> OntoProbe:
    """Random knot perturbations within uniform distance epsilon of f; reports how many stay onto."""
    f = E.f
    if not isinstance(f, PLSystem):
        raise TypeError("onto_ball_probe perturbs PL maps")
    eps = to_fraction(epsilon)
    lo, hi = f.pl.codomain
    rng = random.Random(seed)
    scale = 1 << 10
    onto, example = 0, None
    for _ in range(samples):
        knots = []
        for x, y in f.pl.knots:
            d = eps * Fraction(rng.randint(-scale, scale), scale)
            knots.append((x, min(hi, max(lo, y + d))))
        h = PLMap(tuple(knots), codomain=(lo, hi))
        if onto_check(h):
            onto += 1
        elif example is None:
            example = h
    return OntoProbe(eps, samples, onto, example)


# -- sensitivity in the envelope --------------------------------------------------------------


@dataclass
class EnvelopeSensitivity:
    g: FunctionElement
    h: FunctionElement
    y0: object
    n: int
    distance: object
    delta: object
    sets: tuple

    def replay(self, f) -> bool:
        E = EnvelopeSystem(f)
        if not (co_members(self.g, self.sets) and co_members(self.h, self.sets)):
            return False
        d = uniform_distance(envelope_power(E, self.g, self.n), envelope_power(E, self.h, self.n))
        return d == self.distance and d > self.delta

    def to_json(self):
        return {
            "g": self.g.to_json(),
            "h": self.h.to_json(),
            "y0": point_json(self.y0),
            "n": self.n,
            "distance": fmt(self.distance),
            "delta": fmt(self.delta),
            "sets": [S.to_json() for S in self.sets],
        }


def _build_h(E, g, sets, y0) -> FunctionElement:
    lo, hi = E.space.lo, E.space.hi
    K1 = sets[0].K
    for S in sets[1:]:
        if K1.intersect(S.K):
            raise ConfigurationError(f"K_1 = {K1} overlaps {S.K}; no interpolant can satisfy both")
    knots = {}
    for p in K1:
        knots[p.lo] = y0
        knots[p.hi] = y0
    for S in sets[1:]:
        for p in S.K:
            for x in [p.lo, p.hi] + [x for x in _breakpoints(g) if p.lo < x < p.hi]:
                knots[x] = g(x)
    xs = sorted(knots)
    knots.setdefault(lo, knots[xs[0]])
    knots.setdefault(hi, knots[xs[-1]])
    return element(PLMap(tuple(sorted(knots.items()))))


def envelope_sensitivity_probe(E: EnvelopeSystem, g, sets, delta, budget: Budget | None = None, pitch=Fraction(1, 64)):
    """Find h in the same basic neighbourhood as g whose envelope orbit separates by more than delta.

    ``sets`` is the list [K_1, V_1], ..., [K_m, V_m]; h sends K_1 to a point
    y0 of V_1, copies g on the other K_j and joins linearly in between.
    """
    budget = budget or Budget()
    f = E.f
    delta = to_fraction(delta)
    g = element(g).materialize()
    sets = tuple(sets)
    if not co_members(g, sets):
        raise ConfigurationError(f"{g} is not in the neighbourhood")
    if not isinstance(f, PLSystem):
        raise TypeError("envelope_sensitivity_probe needs a PL base map")
    K1, V1 = sets[0].K, sets[0].G.intersect(E.space.region())
    anchors = sorted({e for p in K1 for e in (p.lo, p.hi)})
    lo, hi = E.space.lo, E.space.hi
    steps = int((hi - lo) / pitch)
    candidates = [lo + i * pitch for i in range(steps + 1) if lo + i * pitch in V1]
    best = None
    for y0 in candidates:
        for n in range(1, budget.k_max + 1):
            # pointwise separation on K_1 bounds the uniform distance from below
            if any(abs(f.iterate(n, y0) - f.iterate(n, g(a))) > delta for a in anchors):
                if best is None or n < best[1]:
                    best = (y0, n)
                break
            if best is not None and n >= best[1]:
                break
    if best is None:
        return Verdict.unknown(budget, scope=str(g), notes=["no y0 in V_1 separates within k_max"])
    y0, n = best
    h = _build_h(E, g, sets, y0)
    if not co_members(h, sets):
        return Verdict.unknown(budget, scope=str(g), notes=["interpolant left the neighbourhood"])
    try:
        d = uniform_distance(envelope_power(E, g, n), envelope_power(E, h, n))
    except BudgetExceeded:
        return Verdict.unknown(budget, scope=str(g), notes=[f"iterate {n} too large to materialize"])
    return EnvelopeSensitivity(g, h, y0, n, d, delta, sets)
