"""Detectors for (light) transitivity, periodic density and sensitivity.

Each check runs over a finite family and answers with a :class:`Verdict`:
HOLDS only with replayable witnesses, FAILS only with a replayable
certificate, UNKNOWN otherwise.  Witness exponents are always >= 1.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact import INF, fmt
from .intervals import Interval, IntervalUnion
from .maps import (
    BudgetExceeded,
    CatalogMap,
    Contraction,
    Glissorotation,
    PLSystem,
    Shift,
    least_period,
    orbit,
)
from .plmap import PLMap
from .spaces import BinarySequence, ConePoint, stream_bit
from .subbases import (
    Cylinder,
    EndHigh,
    EndLow,
    Family,
    HalfSpace,
    OpenInterval,
    Region,
    SubbaseScheme,
    Undecided,
    WordCylinder,
    cone_grid,
    generate_family,
)
from .verdicts import (
    AbsorbingSet,
    AltitudeSeparation,
    Budget,
    PairWitness,
    PeriodicSetCharacterization,
    PeriodicWitness,
    PointwiseBound,
    RangeBound,
    SensitivityWitness,
    Verdict,
    altitudes_within,
)

log = logging.getLogger(__name__)

# collapse certificates look this many steps ahead, independent of the budget,
# so a larger budget can never turn HOLDS into FAILS
COLLAPSE_DEPTH = 4


@dataclass(frozen=True)
class PeriodicRecord:
    point: object
    period: int

    def __iter__(self):
        return iter((self.point, self.period))


# -- helpers for interval-type systems ------------------------------------------


def _region(S, f: CatalogMap) -> IntervalUnion:
    reg = S.region() if hasattr(S, "region") else S
    return reg.intersect(f.space.region())


def _range(f: CatalogMap) -> IntervalUnion:
    cache = f.__dict__.setdefault("_range_cache", {})
    if "range" not in cache:
        cache["range"] = f.image(f.space.region())
    return cache["range"]


def _fixed_points(f: CatalogMap) -> list:
    try:
        pts, segs = f.fixed_points(1, f.space.region())
    except (TypeError, BudgetExceeded):
        return []
    if segs:
        pts = pts + [p.lo for p in segs if p.lo_closed] + [p.hi for p in segs if p.hi_closed]
    return pts


def backtrack(f: CatalogMap, chain: list, y, k: int):
    """Walk ``y`` in ``chain[k]`` back to a point of ``chain[0]`` through exact preimages."""
    for j in range(k, 0, -1):
        y = f.preimage_point(y, chain[j - 1])
        if y is None:
            raise AssertionError("image chain lost a preimage; image computation is inconsistent")
    return y


def _range_certificate(f: CatalogMap, V: IntervalUnion):
    rng = _range(f)
    if not rng.isdisjoint(V):
        return None
    if f.space.is_compact:
        return RangeBound(rng, V)
    return AbsorbingSet(rng, 1, f.space.region(), V)


def _absorbing_candidates(f: CatalogMap, hull: IntervalUnion):
    yield hull
    if f.space.kind in ("interval", "real_line"):
        fixed = _fixed_points(f)
        if fixed:
            yield hull.union(IntervalUnion.points(fixed)).hull()


def witness_at(f: CatalogMap, U, V, k: int):
    """A :class:`PairWitness` at exactly exponent ``k`` if ``f^k(U)`` meets ``V``, else ``None``."""
    Ureg, Vreg = _region(U, f), _region(V, f)
    chain = [Ureg]
    for _ in range(k):
        chain.append(f.image(chain[-1]))
    hit = chain[-1].intersect(Vreg)
    if not hit:
        return None
    q = backtrack(f, chain, hit.witness(), k)
    return PairWitness(U, V, k, q)


def _linear_pair(f: CatalogMap, U, V, k_max: int):
    Ureg, Vreg = _region(U, f), _region(V, f)
    cert = _range_certificate(f, Vreg)
    if cert is not None:
        return cert
    chain = [Ureg]
    hull = IntervalUnion()
    for k in range(1, k_max + 1):
        R = f.image(chain[-1])
        chain.append(R)
        hit = R.intersect(Vreg)
        if hit:
            return PairWitness(U, V, k, backtrack(f, chain, hit.witness(), k))
        if R.issubset(hull):
            # R_k inside R_1 u ... u R_{k-1}: that union is forward invariant
            return AbsorbingSet(hull, 1, Ureg, Vreg)
        hull = hull.union(R)
        for J in _absorbing_candidates(f, hull):
            if J.isdisjoint(Vreg) and f.image(J).issubset(J):
                return AbsorbingSet(J, 1, Ureg, Vreg)
    return None


def _pattern(S) -> dict:
    if isinstance(S, Cylinder):
        return {S.k: S.v}
    if isinstance(S, WordCylinder):
        return dict(enumerate(S.word))
    raise TypeError(f"{S} is not a cylinder set")


def _stream_match(pattern: dict, limit: int = 1 << 16):
    """Least offset ``n`` with ``stream[n + i] == b`` for every ``(i, b)`` in pattern."""
    for n in range(limit):
        if all(stream_bit(n + i) == b for i, b in pattern.items()):
            return n
    return None


def _shift_pair(f: Shift, U, V, k_max: int):
    pu, pv = _pattern(U), _pattern(V)
    for m in range(1, k_max + 1):
        combined = dict(pu)
        ok = True
        for j, b in pv.items():
            if combined.get(m + j, b) != b:
                ok = False
                break
            combined[m + j] = b
        if not ok:
            continue
        n = _stream_match(combined)
        if n is not None:
            return PairWitness(U, V, m, BinarySequence.transitive_point(n))
    return None


@lru_cache(maxsize=1 << 18)
def _member(S, p) -> bool | None:
    # interval-certified membership is the slow path on the cone; orbit points
    # of grid points are grid points, so caching pays off across pairs
    try:
        return S.contains(p)
    except Undecided:
        return None


@lru_cache(maxsize=64)
def _grid_points(q: int) -> tuple:
    return tuple(cone_grid(4 * q, 4))


@lru_cache(maxsize=4096)
def _grid_members(q: int, S) -> tuple:
    return tuple(p for p in _grid_points(q) if _member(S, p))


@lru_cache(maxsize=1 << 14)
def _cone_orbit(f: Glissorotation, p) -> tuple:
    out = [p]
    for _ in range(2 * f.q):
        out.append(f(out[-1]))
    return tuple(out)


def _cone_candidates(f: Glissorotation, S, extra=()):
    yield from extra
    yield from _grid_members(f.q, S)


def _altitude_certificate(U: HalfSpace, V: HalfSpace, resolution: int = 64):
    for i in range(1, resolution):
        s0 = Fraction(i, resolution)
        if altitudes_within(U, s0, below=True) and altitudes_within(V, s0, below=False):
            return AltitudeSeparation(U, V, s0, True)
        if altitudes_within(U, s0, below=False) and altitudes_within(V, s0, below=True):
            return AltitudeSeparation(U, V, s0, False)
    return None


def _gliss_pair(f: Glissorotation, U, V, k_max: int):
    period = 2 * f.q
    for q in _cone_candidates(f, U):
        orb = _cone_orbit(f, q)
        for k in range(1, min(k_max, period) + 1):
            if _member(V, orb[k]):
                return PairWitness(U, V, k, q)
    return _altitude_certificate(U, V)


def pair_search(f: CatalogMap, U, V, k_max: int):
    """Witness, certificate, or ``None`` for the ordered pair ``(U, V)``."""
    if f.is_linear:
        return _linear_pair(f, U, V, k_max)
    if isinstance(f, Shift):
        return _shift_pair(f, U, V, k_max)
    if isinstance(f, Glissorotation):
        return _gliss_pair(f, U, V, k_max)
    raise TypeError(f"no pair search for {f}")


def _pairs_verdict(f, family, budget: Budget, scope: str) -> Verdict:
    members = list(family)
    witnesses, unknown = [], []
    for U in members:
        for V in members:
            res = pair_search(f, U, V, budget.k_max)
            if isinstance(res, PairWitness):
                witnesses.append(res)
            elif res is None:
                unknown.append(f"{U} -> {V}")
            else:
                return Verdict.fails(res, scope=scope, notes=[f"pair {U} -> {V}"])
    if unknown:
        return Verdict.unknown(budget, scope=scope, notes=[f"{len(unknown)} pair(s) unresolved", *unknown[:10]])
    return Verdict.holds(witnesses, scope=scope)


def _scope(family) -> str:
    if isinstance(family, Family):
        return f"{family.scheme.tag} r={family.scheme.resolution} ({len(family)} sets)"
    return f"{len(family)} sets"


def check_light_transitivity(system: CatalogMap, family, budget: Budget | None = None) -> Verdict:
    """For every ordered pair (U, V) of family members, some k >= 1 with f^k(U) meeting V."""
    budget = budget or Budget()
    return _pairs_verdict(system, family, budget, _scope(family))


def basic_family(system: CatalogMap, resolution: int) -> Family:
    kind = system.space.kind
    if kind in ("cantor", "shift_subsystem"):
        scheme = SubbaseScheme("basic_cylinders", resolution)
    else:
        scheme = SubbaseScheme("basic_intervals", resolution)
    return generate_family(system.space, scheme)


def check_transitivity(system: CatalogMap, resolution: int = 8, budget: Budget | None = None) -> Verdict:
    return check_light_transitivity(system, basic_family(system, resolution), budget)


# -- periodic points -----------------------------------------------------------


def find_periodic_points(f, k: int, region: IntervalUnion | None = None, budget: Budget | None = None) -> list:
    """All points of ``region`` fixed by the k-th iterate of a PL map, with least periods.

    Exhaustive: the k-th iterate is composed exactly and ``g(x) = x`` solved
    on each linear piece.  Whole fixed segments are reported by their closed
    endpoints.
    """
    budget = budget or Budget()
    if isinstance(f, PLMap):
        f = PLSystem(f)
    if k > budget.p_max:
        raise ValueError(f"k={k} exceeds p_max={budget.p_max}")
    region = f.space.region() if region is None else region
    _guard_pieces(f, k, budget)
    pts, segs = f.fixed_points(k, region)
    if segs:
        pts = sorted(set(pts) | {e for p in segs for e, c in ((p.lo, p.lo_closed), (p.hi, p.hi_closed)) if c})
    return [PeriodicRecord(x, least_period(f, x, k)) for x in pts]


def _guard_pieces(f, k, budget):
    if not isinstance(f, PLSystem):
        return
    for j in range(1, k + 1):
        if len(f.power(j).knots) > budget.max_pieces:
            raise BudgetExceeded(f"iterate {j} exceeds {budget.max_pieces} pieces")


def _periodic_candidates(f: CatalogMap, Ureg: IntervalUnion, k: int):
    pts, segs = f.fixed_points(k, Ureg)
    out = list(pts)
    if segs:
        out.append(segs.witness())
    return out


def _orbit_hull_certificate(f: CatalogMap, U, Ureg: IntervalUnion, steps: int):
    R = f.image(Ureg)
    hull = R
    for _ in range(steps):
        if not hull.isdisjoint(Ureg):
            return None
        for J in _absorbing_candidates(f, hull):
            if J.isdisjoint(Ureg) and f.image(J).issubset(J):
                pset = f.periodic_set()
                desc = f"orbit of the set stays in {J}, which misses it"
                return PeriodicSetCharacterization(U, "orbit_hull", desc, J=J, periodic_set=pset)
        R = f.image(R)
        hull = hull.union(R)
    return None


def _linear_periodic(f: CatalogMap, U, budget: Budget):
    Ureg = _region(U, f)
    if getattr(f, "alpha", None) is not None and f.periodic_set() == IntervalUnion():
        return PeriodicSetCharacterization(
            U, "empty", "irrational rotation: k*alpha is never an integer, so P(f) is empty"
        )
    cert = _orbit_hull_certificate(f, U, Ureg, min(budget.k_max, 64))
    if cert is not None:
        return cert
    for k in range(1, budget.p_max + 1):
        try:
            if isinstance(f, PLSystem):
                _guard_pieces(f, k, budget)
            cands = _periodic_candidates(f, Ureg, k)
        except BudgetExceeded:
            return None
        if cands:
            x = cands[0]
            return PeriodicWitness(U, x, least_period(f, x, k))
    return None


CONSTANTS = (BinarySequence.constant(0), BinarySequence.constant(1))


def _shift_periodic(f: Shift, U, budget):
    for c in CONSTANTS:
        if U.contains(c):
            return PeriodicWitness(U, c, 1)
    if f.subsystem:
        return PeriodicSetCharacterization(
            U,
            "finite",
            "periodic points of the shift on X are exactly the two constant sequences",
            points=list(CONSTANTS),
            argument=(
                "a periodic eventually-constant sequence equals its own tail, hence is constant; "
                "shifts of s* are never periodic because s* contains every word and so is not "
                "eventually periodic"
            ),
        )
    return None


def _gliss_periodic(f: Glissorotation, U, budget, extra=()):
    for p in _cone_candidates(f, U, extra):
        return PeriodicWitness(U, p, least_period(f, p, 2 * f.q))
    return None


def periodic_search(f: CatalogMap, U, budget: Budget, extra=()):
    if f.is_linear:
        return _linear_periodic(f, U, budget)
    if isinstance(f, Shift):
        return _shift_periodic(f, U, budget)
    if isinstance(f, Glissorotation):
        return _gliss_periodic(f, U, budget, extra)
    raise TypeError(f"no periodic search for {f}")


def check_light_periodic_density(system: CatalogMap, family, budget: Budget | None = None) -> Verdict:
    """Every family member contains an exact periodic point of period <= p_max."""
    budget = budget or Budget()
    witnesses, unknown = [], []
    wits = getattr(family, "witnesses", [None] * len(family))
    for U, w in zip(family, wits):
        res = periodic_search(system, U, budget, extra=(w,) if isinstance(w, ConePoint) else ())
        if isinstance(res, PeriodicWitness):
            witnesses.append(res)
        elif res is None:
            unknown.append(str(U))
        else:
            return Verdict.fails(res, scope=_scope(family), notes=[f"set {U}"])
    if unknown:
        return Verdict.unknown(budget, scope=_scope(family), notes=[f"{len(unknown)} set(s) unresolved", *unknown[:10]])
    return Verdict.holds(witnesses, scope=_scope(family))


def check_periodic_density(system: CatalogMap, resolution: int = 8, budget: Budget | None = None) -> Verdict:
    return check_light_periodic_density(system, basic_family(system, resolution), budget)


# -- sensitivity -----------------------------------------------------------------


def _sup_distance(reg: IntervalUnion, x):
    return max(abs(reg.sup - x), abs(x - reg.inf))


def _small_scheme(family) -> bool:
    tag = family.scheme.tag if isinstance(family, Family) else ""
    return tag == "basic_intervals"


def _contraction_certificate(f: Contraction, family, delta):
    x = Fraction(0)
    best = None
    for V in family:
        if not V.contains(x):
            continue
        reg = _region(V, f)
        m = max(abs(reg.inf), abs(reg.sup))
        bound = m / (m + 1)
        attained = any(abs(p) == m for p in (reg.inf, reg.sup) if p in reg)
        if bound < delta or (bound == delta and not attained):
            best = PointwiseBound(x, V, delta, bound, "closed_form")
            break
    if best is None and _small_scheme(family):
        eta = Fraction(delta) / 2
        V = OpenInterval(-eta, eta)
        best = PointwiseBound(
            x, V, delta, eta / (eta + 1), "closed_form", note="neighbourhood taken from the scheme outside the generated family"
        )
    return best


def _collapse_certificate(f: PLSystem, family, delta, xs):
    for x in xs:
        for V in family:
            if not V.contains(x):
                continue
            reg = _region(V, f)
            for s in range(1, COLLAPSE_DEPTH + 1):
                reg = f.image(reg)
                if reg.is_finite_points() and len(reg) == 1:
                    return PointwiseBound(x, V, delta, Fraction(0), "collapse", steps=s)
    return None


def _isometry_certificate(f: CatalogMap, family, delta, xs):
    if isinstance(f, Glissorotation):
        eps = Fraction(delta) ** 2 / 4
        V = HalfSpace((1, 0, 0), 1 - eps)
        bound = Fraction(delta) * Fraction(99, 100)
        # 2 eps + eps^2 = delta^2/2 + delta^4/16 <= (0.99 delta)^2 for delta <= 1
        if 2 * eps + eps * eps > bound**2:
            return None
        return PointwiseBound(
            ConePoint(0, 0),
            V,
            delta,
            bound,
            "isometry",
            evidence=True,
            note="base-circle point; isometry of R^3 restricted to the cone, cap from the half-space scheme",
        )
    for x in xs:
        for V in family:
            if not V.contains(x):
                continue
            reg = _region(V, f)
            if any(isinstance(e, float) for e in (reg.inf, reg.sup)):
                continue
            bound = _sup_distance(reg, x)
            if f.space.kind == "circle":
                bound = min(bound, Fraction(1, 2))
            if bound < delta:
                return PointwiseBound(x, V, delta, bound, "isometry")
    return None


def _sample_points(f: CatalogMap, family, resolution: int) -> list:
    pts = []
    if f.space.kind in ("interval", "real_line", "circle"):
        if f.space.kind == "interval":
            lo, hi = f.space.lo, f.space.hi
        elif f.space.kind == "circle":
            lo, hi = Fraction(0), Fraction(1)
        else:
            scheme = getattr(family, "scheme", None)
            w = Fraction(scheme.window) if scheme else Fraction(1)
            lo, hi = -w, w
        n = 2 * resolution
        pts = [lo + (hi - lo) * Fraction(i, n) for i in range(n + 1)]
        if f.space.kind == "circle":
            pts = pts[:-1]
        pts = _fixed_points(f) + pts
    wits = getattr(family, "witnesses", [])
    pts += [w for w in wits if w is not None]
    seen, out = set(), []
    for p in pts:
        if p not in seen and f.space.contains(p):
            seen.add(p)
            out.append(p)
    return out


def _far_set(f: CatalogMap, a, delta) -> IntervalUnion:
    """Points at distance >= delta from ``a``."""
    if f.space.kind == "circle":
        if delta > Fraction(1, 2):
            return IntervalUnion()
        lo, hi = a + delta, a + 1 - delta
        arc = IntervalUnion([Interval(lo, hi)])
        shifted = [Interval(p.lo - 1, p.hi - 1, p.lo_closed, p.hi_closed) for p in arc.intersect(
            IntervalUnion([Interval(Fraction(1), Fraction(2), True, False)])
        )]
        return arc.intersect(f.space.region()).union(IntervalUnion(shifted))
    return IntervalUnion(
        [Interval(-INF, a - delta, False, True), Interval(a + delta, INF, True, False)]
    )


def _linear_separation(f: CatalogMap, x, V, delta, k_max):
    chain = [_region(V, f)]
    a = x
    for k in range(1, k_max + 1):
        chain.append(f.image(chain[-1]))
        a = f(a)
        far = chain[-1].intersect(_far_set(f, a, delta))
        if far:
            y = backtrack(f, chain, far.witness(), k)
            return SensitivityWitness(x, V, y, k, f.space.metric(f.iterate(k, x), f.iterate(k, y)), delta)
    return None


def _shift_separation(f: Shift, x: BinarySequence, V, delta, k_max):
    pattern = _pattern(V)
    k = max(pattern) + 1 if pattern else 1
    if k > k_max:
        return None
    bits = list(x.word(k + 1))
    bits[k] ^= 1
    y = BinarySequence(tuple(bits), ("const", 0))
    d = f.space.metric(f.iterate(k, x), f.iterate(k, y))
    if d >= delta and V.contains(y):
        return SensitivityWitness(x, V, y, k, d, delta)
    return None


def _sensitivity_search(f, family, delta, budget, resolution):
    if f.is_linear:
        xs = _sample_points(f, family, resolution)
        search = _linear_separation
    elif isinstance(f, Shift):
        xs = [c for c in CONSTANTS] + [BinarySequence.transitive_point(n) for n in range(resolution)]
        search = _shift_separation
    else:
        return None, ["no exact separation search for this system"]
    witnesses, unknown = [], []
    for x in xs:
        for V in family:
            if not V.contains(x):
                continue
            w = search(f, x, V, delta, budget.k_max)
            if w is None:
                unknown.append(f"x={fmt(x) if not hasattr(x, 'to_json') else x} in {V}")
            else:
                witnesses.append(w)
    return witnesses, unknown


def check_light_sensitivity(system: CatalogMap, family, delta, budget: Budget | None = None, resolution: int | None = None) -> Verdict:
    """Sensitivity with constant ``delta`` restricted to family members as neighbourhoods.

    Points x range over a rational grid plus fixed points and family
    witnesses.  HOLDS is relative to those samples; FAILS carries a
    pointwise_bound certificate at one point.
    """
    budget = budget or Budget()
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if resolution is None:
        resolution = getattr(getattr(family, "scheme", None), "resolution", 8)
    scope = _scope(family)
    cert = None
    if isinstance(system, Contraction):
        cert = _contraction_certificate(system, family, delta)
    elif isinstance(system, PLSystem):
        xs = _fixed_points(system) + list(getattr(family, "witnesses", []))
        cert = _collapse_certificate(system, family, delta, xs)
    if cert is None and system.isometry:
        xs = _sample_points(system, family, resolution) if system.is_linear else []
        cert = _isometry_certificate(system, family, delta, xs)
    if cert is not None:
        return Verdict.fails(cert, scope=scope, evidence=cert.evidence)
    witnesses, unknown = _sensitivity_search(system, family, delta, budget, resolution)
    if witnesses is None or unknown:
        return Verdict.unknown(budget, scope=scope, notes=[f"{len(unknown)} (x, V) unresolved", *unknown[:10]])
    return Verdict.holds(witnesses, scope=scope + f", {len({id(w.x) for w in witnesses})} witnesses")


def check_sensitivity(system: CatalogMap, delta, budget: Budget | None = None, resolution: int = 8) -> Verdict:
    return check_light_sensitivity(system, basic_family(system, resolution), delta, budget, resolution)


# -- orbit coverage ----------------------------------------------------------------


@dataclass
class DensityReport:
    cells: int
    visited: list
    steps: int
    cycle_start: int | None = None
    period: int | None = None

    @property
    def coverage(self) -> Fraction:
        return Fraction(len(self.visited), self.cells)

    @property
    def gaps(self) -> list:
        seen = set(self.visited)
        return [i for i in range(self.cells) if i not in seen]

    def to_json(self):
        return {
            "cells": self.cells,
            "visited": len(self.visited),
            "coverage": fmt(self.coverage),
            "steps": self.steps,
            "cycle_start": self.cycle_start,
            "period": self.period,
        }


def orbit_density_probe(system: CatalogMap, p, n: int, eps) -> DensityReport:
    """Which eps-cells the orbit of length n visits.  Reports coverage only, never density."""
    if n < 1:
        raise ValueError("n must be >= 1")
    eps = Fraction(eps)
    space = system.space
    if space.kind == "interval":
        lo, width = space.lo, space.hi - space.lo
    elif space.kind == "circle":
        lo, width = Fraction(0), Fraction(1)
    elif space.kind == "real_line":
        # window around the starting point large enough for an orbit of p
        lo, width = -abs(p) - 1, 2 * abs(p) + 2
    else:
        raise TypeError("orbit_density_probe needs an interval-type space")
    cells = max(1, math.ceil(width / eps))
    visited = {}
    seen = {}
    x = p
    start = period = None
    steps = 0
    for i in range(n + 1):
        c = min(cells - 1, math.floor((x - lo) / eps))
        if 0 <= c:
            visited.setdefault(c, i)
        if x in seen:
            start, period = seen[x], i - seen[x]
            break
        seen[x] = i
        steps = i
        if i < n:
            x = system(x)
    return DensityReport(cells, sorted(visited), steps, start, period)
