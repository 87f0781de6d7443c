"""Three-valued verdicts with replayable witnesses and certificates."""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction

from .exact import Surd, fmt, to_fraction
from .intervals import IntervalUnion
from .spaces import BinarySequence, ConePoint


@dataclass(frozen=True)
class Budget:
    k_max: int = 64
    p_max: int = 16
    epsilon: Fraction = Fraction(1, 1024)
    samples: int = 10_000
    wall_clock: float | None = None
    max_pieces: int = 1 << 17
    knots: int = 4
    grid_pitch: Fraction = Fraction(1, 8)

    def __post_init__(self):
        object.__setattr__(self, "epsilon", to_fraction(self.epsilon))
        object.__setattr__(self, "grid_pitch", to_fraction(self.grid_pitch))
        for name in ("k_max", "p_max", "samples", "max_pieces", "knots"):
            if getattr(self, name) < 1:
                raise ValueError(f"budget field {name} must be positive")
        if self.epsilon <= 0 or self.grid_pitch <= 0:
            raise ValueError("epsilon and grid_pitch must be positive")
        if self.wall_clock is not None and self.wall_clock <= 0:
            raise ValueError("wall_clock must be positive")

    def with_(self, **kw) -> "Budget":
        return replace(self, **kw)

    def to_json(self):
        d = asdict(self)
        d["epsilon"] = fmt(self.epsilon)
        d["grid_pitch"] = fmt(self.grid_pitch)
        return d

    @classmethod
    def from_json(cls, d):
        return cls(**d)


class Status(str, enum.Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    UNKNOWN = "UNKNOWN"


def point_json(p):
    if isinstance(p, (BinarySequence, ConePoint)):
        return p.to_json()
    if hasattr(p, "to_json"):
        return p.to_json()
    if isinstance(p, float) and not math.isinf(p):
        return p
    return fmt(p)


# -- witnesses -----------------------------------------------------------------


@dataclass
class PairWitness:
    """``q`` in ``U`` with ``f^k(q)`` in ``V``."""

    U: object
    V: object
    k: int
    q: object

    def replay(self, f) -> bool:
        return self.k >= 1 and self.U.contains(self.q) and self.V.contains(f.iterate(self.k, self.q))

    def to_json(self):
        return {"type": "pair", "U": self.U.to_json(), "V": self.V.to_json(), "k": self.k, "q": point_json(self.q)}


@dataclass
class PeriodicWitness:
    U: object
    point: object
    period: int

    def replay(self, f) -> bool:
        if not self.U.contains(self.point) or f.iterate(self.period, self.point) != self.point:
            return False
        return all(f.iterate(d, self.point) != self.point for d in range(1, self.period))

    def to_json(self):
        return {"type": "periodic", "U": self.U.to_json(), "point": point_json(self.point), "period": self.period}


@dataclass
class SensitivityWitness:
    x: object
    V: object
    y: object
    k: int
    distance: object
    delta: object

    def replay(self, f) -> bool:
        if self.k < 1 or not (self.V.contains(self.x) and self.V.contains(self.y)):
            return False
        d = f.space.metric(f.iterate(self.k, self.x), f.iterate(self.k, self.y))
        return d == self.distance and d >= self.delta

    def to_json(self):
        return {
            "type": "sensitivity",
            "x": point_json(self.x),
            "V": self.V.to_json(),
            "y": point_json(self.y),
            "k": self.k,
            "distance": point_json(self.distance),
            "delta": point_json(self.delta),
        }


# -- certificates ----------------------------------------------------------------


def image_chain(f, region: IntervalUnion, k: int) -> list:
    out = [region]
    for _ in range(k):
        region = f.image(region)
        out.append(region)
    return out


@dataclass
class AbsorbingSet:
    """``f(J)`` inside ``J``, ``f^{entry}(U)`` inside ``J``, and ``J`` misses ``V``.

    Together with a direct check of the first ``entry - 1`` images this shows
    ``f^k(U)`` misses ``V`` for every ``k >= 1``.
    """

    J: IntervalUnion
    entry: int
    U: IntervalUnion
    V: IntervalUnion
    kind = "absorbing_set"

    def replay(self, f) -> bool:
        if not f.image(self.J).issubset(self.J):
            return False
        if not self.J.isdisjoint(self.V):
            return False
        chain = image_chain(f, self.U, self.entry)
        if not chain[-1].issubset(self.J):
            return False
        return all(R.isdisjoint(self.V) for R in chain[1:])

    def to_json(self):
        return {
            "kind": self.kind,
            "J": str(self.J),
            "J_parts": self.J.to_json(),
            "entry": self.entry,
            "U": self.U.to_json(),
            "V": self.V.to_json(),
        }


@dataclass
class RangeBound:
    """The whole space maps onto ``image``, which misses ``V``; so every ``f^k(U)`` does."""

    image: IntervalUnion
    V: IntervalUnion
    kind = "range_bound"

    def replay(self, f) -> bool:
        return f.image(f.space.region()) == self.image and self.image.isdisjoint(self.V)

    def to_json(self):
        return {"kind": self.kind, "image": str(self.image), "image_parts": self.image.to_json(), "V": self.V.to_json()}


@dataclass
class PeriodicSetCharacterization:
    """``U`` contains no periodic point.

    ``mode`` is one of

    * ``orbit_hull``: ``J`` is forward invariant, contains ``f(U)`` and misses
      ``U``; a periodic ``x`` in ``U`` would satisfy ``x = f^k(x)`` in ``J``.
    * ``empty``: the map has no periodic points at all (irrational rotation).
    * ``finite``: every periodic point is among ``points`` (structural
      argument in ``argument``), none of which lies in ``U``.
    """

    U: object
    mode: str
    description: str
    J: IntervalUnion | None = None
    points: list = field(default_factory=list)
    periodic_set: IntervalUnion | None = None
    argument: str = ""
    kind = "periodic_set_characterization"

    def replay(self, f) -> bool:
        if self.mode == "orbit_hull":
            U = self.U.region() if hasattr(self.U, "region") else self.U
            U = U.intersect(f.space.region())
            return (
                f.image(self.J).issubset(self.J)
                and f.image(U).issubset(self.J)
                and self.J.isdisjoint(U)
            )
        if self.mode == "empty":
            alpha = getattr(f, "alpha", None)
            # k*alpha in Z needs the irrational part to vanish
            return isinstance(alpha, Surd) and alpha.b != 0
        if self.mode == "finite":
            if any(self.U.contains(p) for p in self.points):
                return False
            return all(f(p) in self.points for p in self.points)
        return False

    def to_json(self):
        d = {"kind": self.kind, "mode": self.mode, "description": self.description, "U": _set_json(self.U)}
        if self.J is not None:
            d["J"] = str(self.J)
            d["J_parts"] = self.J.to_json()
        if self.points:
            d["points"] = [point_json(p) for p in self.points]
        if self.periodic_set is not None:
            d["periodic_set"] = str(self.periodic_set)
        if self.argument:
            d["argument"] = self.argument
        return d


def _set_json(S):
    return S.to_json() if hasattr(S, "to_json") else str(S)


@dataclass
class PointwiseBound:
    """At ``x`` every ``y`` in ``V`` stays within ``bound < delta`` of x's orbit.

    ``kind_detail``:

    * ``closed_form``: contraction; ``|f^k(x)-f^k(y)| = |y|/(k|y|+1) <= |y|/(|y|+1)``.
    * ``collapse``: ``f^{steps}(V)`` is the single point ``f^{steps}(x)``.
    * ``isometry``: ``f`` preserves distances and ``sup_{y in V} d(x,y) <= bound``.
    """

    x: object
    V: object
    delta: object
    bound: object
    kind_detail: str
    steps: int = 1
    evidence: bool = False
    note: str = ""
    kind = "pointwise_bound"

    def replay(self, f) -> bool:
        if not self.V.contains(self.x):
            return False
        if self.kind_detail == "closed_form":
            # sup over V of |y|/(|y|+1) is m/(m+1) for m = sup |y|
            reg = self.V.region().intersect(f.space.region())
            m = max(abs(reg.inf), abs(reg.sup))
            attained = any(abs(p) == m for p in (reg.inf, reg.sup) if p in reg)
            sup = m / (m + 1)
            ok = sup < self.delta or (sup == self.delta and not attained)
            return self.x == 0 and f.iterate(1, 0) == 0 and sup == self.bound and ok
        if self.kind_detail == "collapse":
            reg = self.V.region().intersect(f.space.region())
            for _ in range(self.steps):
                reg = f.image(reg)
            target = f.iterate(self.steps, self.x)
            return reg == IntervalUnion.points([target]) and self.bound == 0 and self.bound < self.delta
        if self.kind_detail == "isometry":
            return f.isometry and self.bound < self.delta and _isometry_bound_ok(self, f)
        return False

    def to_json(self):
        return {
            "kind": self.kind,
            "detail": self.kind_detail,
            "x": point_json(self.x),
            "V": self.V.to_json(),
            "delta": point_json(self.delta),
            "bound": point_json(self.bound),
            "steps": self.steps,
            "evidence": self.evidence,
            "note": self.note,
        }


def _isometry_bound_ok(cert: PointwiseBound, f) -> bool:
    V = cert.V
    if hasattr(V, "normal"):
        # cap {v_x > 1 - eps} around the base-circle point (1, 0, 0):
        # any cone point in it has |t| < eps and y^2 < 2 eps - eps^2,
        # so its distance to (1,0,0) is below sqrt(2 eps + eps^2)
        n, c = V.normal, V.offset
        if n != (1, 0, 0) or cert.x != ConePoint(0, 0):
            return False
        eps = 1 - c
        return 0 < eps and 2 * eps + eps * eps <= cert.bound**2
    reg = V.region()
    x = cert.x
    return max(abs(reg.sup - x), abs(x - reg.inf)) <= cert.bound


@dataclass
class AltitudeSeparation:
    """Double-cone certificate: the glissorotation preserves ``|t|``.

    Every point of ``U`` has ``|t|`` on one side of ``s0`` and every point of
    ``V`` on the other, so no iterate of ``U`` meets ``V``.  Checked exactly
    through the slice bound ``max_theta n.v = (1-|t|) sqrt(nx^2+ny^2) + nz t``.
    """

    U: object
    V: object
    s0: Fraction
    U_below: bool
    kind = "absorbing_set"

    def replay(self, f) -> bool:
        if not getattr(f, "isometry", False) or f.tag != "glissorotation":
            return False
        lo_set, hi_set = (self.U, self.V) if self.U_below else (self.V, self.U)
        return altitudes_within(lo_set, self.s0, below=True) and altitudes_within(hi_set, self.s0, below=False)

    def to_json(self):
        side = "below" if self.U_below else "above"
        return {
            "kind": self.kind,
            "detail": "invariant_altitude",
            "J": f"{{|t| {'<=' if self.U_below else '>='} {fmt(self.s0)}}}",
            "U": self.U.to_json(),
            "V": self.V.to_json(),
            "s0": fmt(self.s0),
            "U_side": side,
        }


def _gt_sqrt(coef: Fraction, N: int, rhs: Fraction) -> bool:
    """Exact test of ``coef * sqrt(N) > rhs`` for ``coef >= 0``."""
    if coef == 0 or N == 0:
        return 0 > rhs
    if rhs < 0:
        return True
    return coef * coef * N > rhs * rhs


def slice_meets(H, t: Fraction) -> bool:
    """Whether the altitude-``t`` circle of the cone meets half-space ``H`` (exact)."""
    nx, ny, nz = H.normal
    N = nx * nx + ny * ny  # Fraction; scale to integer radicand
    den = N.denominator
    N_int = N.numerator * den
    coef = (1 - abs(t)) / den
    rhs = H.offset - nz * t
    if coef == 0 or N_int == 0:
        return 0 > rhs
    return _gt_sqrt(coef, N_int, rhs)


def altitudes_within(H, s0: Fraction, below: bool) -> bool:
    """Every cone point of ``H`` has ``|t| < s0`` (below) or ``|t| > s0`` (above).

    The slice bound is linear in ``t`` on each nappe, so its supremum over
    the excluded altitudes is attained at the listed endpoints (as a limit
    when the endpoint itself is excluded).  Openness of ``H`` in the cone
    makes the resulting inclusion strict for ``0 < s0 < 1``.
    """
    if not 0 < s0 < 1:
        return False
    probes = (Fraction(1), s0, Fraction(-1), -s0) if below else (s0, Fraction(0), -s0)
    return not any(slice_meets(H, t) for t in probes)


@dataclass
class Verdict:
    status: Status
    witnesses: list = field(default_factory=list)
    certificate: object = None
    budget: Budget | None = None
    scope: str = ""
    notes: list = field(default_factory=list)
    evidence: bool = False

    @classmethod
    def holds(cls, witnesses, scope="", **kw):
        return cls(Status.HOLDS, list(witnesses), scope=scope, **kw)

    @classmethod
    def fails(cls, certificate, scope="", **kw):
        return cls(Status.FAILS, certificate=certificate, scope=scope, **kw)

    @classmethod
    def unknown(cls, budget, scope="", **kw):
        return cls(Status.UNKNOWN, budget=budget, scope=scope, **kw)

    @property
    def holds_(self) -> bool:
        return self.status is Status.HOLDS

    @property
    def fails_(self) -> bool:
        return self.status is Status.FAILS

    def replay(self, f) -> bool:
        if self.status is Status.HOLDS:
            return all(w.replay(f) for w in self.witnesses)
        if self.status is Status.FAILS:
            return self.certificate.replay(f)
        return True

    def to_json(self):
        d = {"status": self.status.value, "scope": self.scope}
        if self.witnesses:
            d["witnesses"] = [w.to_json() for w in self.witnesses]
        if self.certificate is not None:
            d["certificate"] = self.certificate.to_json()
        if self.budget is not None:
            d["budget"] = self.budget.to_json()
        if self.notes:
            d["notes"] = list(self.notes)
        if self.evidence:
            d["evidence"] = True
        return d
