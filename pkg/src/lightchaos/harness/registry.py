"""Named experiments binding each claim to computed, replayable verdicts."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .. import detectors as det
from .. import envelope as env
from ..intervals import Interval, IntervalUnion
from ..maps import (
    AbsoluteValue,
    Contraction,
    Glissorotation,
    Negation,
    Shift,
    f37,
    golden_rotation,
    tent,
)
from ..plmap import PLMap
from ..spaces import CIRCLE, DOUBLE_CONE, REAL_LINE, SHIFT_X, SYMMETRIC_INTERVAL, UNIT_INTERVAL
from ..subbases import (
    CoSet,
    HalfLineLeft,
    HalfLineRight,
    Region,
    SubbaseScheme,
    generate_family,
)
from ..verdicts import Status, Verdict
from .config import RunConfig

HOLDS, FAILS, UNKNOWN = "HOLDS", "FAILS", "UNKNOWN"
EVIDENCE, FLAGGED = "EVIDENCE", "FLAGGED"


@dataclass
class Check:
    """One computed verdict with the status it is expected to have.

    ``claim`` is set when the computed verdict is known to contradict a
    statement of the source; both are reported side by side.
    """

    name: str
    expected: str
    status: str
    anchor: str
    result: dict = field(default_factory=dict)
    claim: str | None = None

    @property
    def matches(self) -> bool:
        return self.expected == EVIDENCE or self.status == self.expected

    @property
    def flagged(self) -> bool:
        return self.claim is not None

    def to_json(self):
        d = {
            "name": self.name,
            "expected": self.expected,
            "status": self.status,
            "match": self.matches,
            "anchor": self.anchor,
            "result": self.result,
        }
        if self.claim is not None:
            d["claim"] = self.claim
        return d


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    system: str
    scheme: str
    expected: str
    anchor: str
    runner: Callable = field(compare=False, repr=False)
    flags: tuple = ()

    def to_json(self):
        return {
            "name": self.name,
            "system": self.system,
            "scheme": self.scheme,
            "expected": self.expected,
            "anchor": self.anchor,
        }


def verdict_check(name, verdict: Verdict, expected, anchor, system=None, claim=None) -> Check:
    status = verdict.status.value
    result = verdict.to_json()
    if system is not None and verdict.status is not Status.UNKNOWN:
        ok = verdict.replay(system)
        result["replayed"] = ok
        if not ok:
            status = "INVALID"
    return Check(name, expected, status, anchor, result, claim)


def all_of(verdicts, want: str) -> str:
    """Collapse per-item verdicts: ``want`` when all agree, the contrary as soon as one contradicts."""
    statuses = [v.status.value for v in verdicts]
    other = FAILS if want == HOLDS else HOLDS
    if other in statuses:
        return other
    if UNKNOWN in statuses or not statuses:
        return UNKNOWN
    return want


def bool_check(name, ok: bool | None, anchor, result=None, expected=HOLDS) -> Check:
    status = UNKNOWN if ok is None else (HOLDS if ok else FAILS)
    return Check(name, expected, status, anchor, result or {})


def _family(space, tag, r, **kw):
    return generate_family(space, SubbaseScheme(tag, r, **kw))


def _res(cfg: RunConfig, default: int) -> int:
    return cfg.resolution or default


# -- experiments ---------------------------------------------------------------------


def ex3_4(cfg: RunConfig) -> list:
    f = Negation()
    fam = _family(REAL_LINE, "half_lines", _res(cfg, 2))
    anchor = "Example 3.4: 'sends any half line in its opposite'"
    lt = det.check_light_transitivity(f, fam, cfg.budget)
    lp = det.check_light_periodic_density(f, fam, cfg.budget)
    checks = [
        verdict_check("light_transitivity", lt, HOLDS, anchor, f),
        verdict_check("light_periodic_density", lp, HOLDS, anchor, f),
    ]
    if cfg.budget.k_max < 2:
        checks.append(bool_check("exponent_pattern", None, anchor, {"note": "needs k_max >= 2"}))
    else:
        side = lambda S: isinstance(S, HalfLineLeft)  # noqa: E731
        found = [
            det.witness_at(f, U, V, 2 if side(U) == side(V) else 1) for U in fam for V in fam
        ]
        checks.append(
            bool_check(
                "exponent_pattern",
                all(w is not None and w.replay(f) for w in found),
                anchor + " (k=2 same side, k=1 opposite side)",
                {"pairs": len(found)},
            )
        )
    if lp.holds_:
        checks.append(bool_check("periods_at_most_2", all(w.period <= 2 for w in lp.witnesses), anchor))
    return checks


def ex3_5(cfg: RunConfig) -> list:
    f = Shift(True)
    cyl = _family(SHIFT_X, "cylinders", _res(cfg, 4))
    basic = _family(SHIFT_X, "basic_cylinders", 2)
    anchor = "Example 3.5: '0=(0,0,....) is a periodic point'"
    lt = det.check_light_transitivity(f, cyl, cfg.budget)
    checks = [
        verdict_check("light_periodic_density", det.check_light_periodic_density(f, cyl, cfg.budget), HOLDS, anchor, f),
        verdict_check(
            "periodic_density",
            det.check_light_periodic_density(f, basic, cfg.budget),
            FAILS,
            "Example 3.5: 'the periodic points of g are the constant sequences'",
            f,
        ),
        verdict_check("light_transitivity", lt, HOLDS, anchor, f),
    ]
    if lt.holds_:
        checks.append(bool_check("stream_exponents_le_4096", all(w.k <= 4096 for w in lt.witnesses), anchor))
    return checks


def closed_form_bound_holds(ys, k_max: int = 64) -> bool:
    """|y|/(k|y|+1) <= |y|/(|y|+1), checked against the exact iterate."""
    f = Contraction()
    for y in ys:
        for k in range(1, k_max + 1):
            d = abs(f.iterate(k, y) - f.iterate(k, Fraction(0)))
            if d != abs(y) / (k * abs(y) + 1) or d > abs(y) / (abs(y) + 1):
                return False
    return True


def ex3_6(cfg: RunConfig) -> list:
    f = Contraction()
    fam = _family(SYMMETRIC_INTERVAL, "basic_intervals", _res(cfg, 8))
    anchor = "Example 3.6: 'f is not lightly sensitive with'"
    checks = []
    deltas = [cfg.delta] if cfg.delta is not None else [Fraction(1, 2), Fraction(1, 4), Fraction(1, 16), Fraction(1, 1024)]
    for d in deltas:
        v = det.check_light_sensitivity(f, fam, d, cfg.budget)
        checks.append(verdict_check(f"light_sensitivity_delta_{d}", v, FAILS, anchor, f))
    rng = random.Random(cfg.seed)
    ys = [Fraction(rng.randint(-1000, 1000), 1000) for _ in range(100)]
    checks.append(bool_check("closed_form_bound", closed_form_bound_holds(ys), anchor, {"ys": len(ys), "k_max": 64}))
    checks.append(verdict_check("transitivity", det.check_transitivity(f, 8, cfg.budget), FAILS, anchor, f))
    return checks


def ex3_7(cfg: RunConfig) -> list:
    f = f37()
    r = _res(cfg, 8)
    light = _family(UNIT_INTERVAL, "endpoint_intervals", 4)
    delta = cfg.delta or Fraction(1, 5)
    claim = "Example 3.7 asserts 'f is lightly chaotic with respect to the subbase S = {[0,a[, ]b,1]}'"
    return [
        verdict_check("sensitivity", det.check_sensitivity(f, delta, cfg.budget, r), FAILS, "Example 3.7: '|f^k(x)-f^k(y)|=0'", f),
        verdict_check("transitivity", det.check_transitivity(f, r, cfg.budget), FAILS, "Example 3.7: 'f is not transitive'", f),
        verdict_check(
            "periodic_density", det.check_periodic_density(f, r, cfg.budget), FAILS, "Example 3.7: 'f^k(x)=1/2 != x'", f
        ),
        verdict_check("light_transitivity", det.check_light_transitivity(f, light, cfg.budget), FAILS, "Example 3.7", f, claim),
        verdict_check(
            "light_periodic_density", det.check_light_periodic_density(f, light, cfg.budget), FAILS, "Example 3.7", f, claim
        ),
        verdict_check("light_sensitivity", det.check_light_sensitivity(f, light, delta, cfg.budget), HOLDS, "Example 3.7", f),
    ]


def ex3_8(cfg: RunConfig) -> list:
    anchor = "Example 3.8: glissorotation of the double cone"
    fam = _family(DOUBLE_CONE, "half_spaces", _res(cfg, 1))
    checks = []
    for p, q in ((1, 3), (2, 5)):
        f = Glissorotation(p, q)
        lp = det.check_light_periodic_density(f, fam, cfg.budget)
        checks.append(verdict_check(f"light_periodic_density_{p}_{q}", lp, HOLDS, anchor, f))
        if lp.holds_:
            checks.append(
                bool_check(
                    f"periods_divide_{2 * q}",
                    len(fam) >= 50 and all((2 * q) % w.period == 0 for w in lp.witnesses),
                    anchor,
                    {"sets": len(fam)},
                )
            )
        ls = det.check_light_sensitivity(f, fam, cfg.delta or Fraction(1, 10), cfg.budget)
        checks.append(verdict_check(f"light_sensitivity_{p}_{q}", ls, FAILS, "Example 3.8: 'f is not lightly sensitive'", f))
    f = Glissorotation(1, 3)
    lt = det.check_light_transitivity(f, fam, cfg.budget)
    checks.append(
        verdict_check(
            "light_transitivity_1_3",
            lt,
            FAILS,
            anchor,
            f,
            "Example 3.8 asserts the glissorotation is lightly transitive for the half-space subbase",
        )
    )
    return checks


def abs_example(cfg: RunConfig) -> list:
    f = AbsoluteValue()
    pinned = (HalfLineLeft(Fraction(-1)), HalfLineRight(Fraction(1)))
    fam = _family(REAL_LINE, "half_lines", _res(cfg, 2), pinned=pinned)
    return [
        verdict_check(
            "light_transitivity", det.check_light_transitivity(f, fam, cfg.budget), FAILS, "'Thus f is not lightly transitive'", f
        ),
        verdict_check(
            "light_periodic_density",
            det.check_light_periodic_density(f, fam, cfg.budget),
            FAILS,
            "'R^+_0 is evidently never dense'",
            f,
        ),
    ]


def _co_family(space, r, limit):
    return _family(space, "compact_open", r, limit=limit)


def rem4_1(cfg: RunConfig) -> list:
    f = golden_rotation()
    E = env.EnvelopeSystem(f)
    fam = _co_family(CIRCLE, _res(cfg, 4), None)
    anchor = "Remark 4.1: 'f has no periodic points'"
    pws = [env.periodic_witness(E, A, cfg.budget) for A in fam]
    return [
        Check("envelope_periodic_witness_all", FAILS, all_of(pws, FAILS), anchor, {"co_sets": len(fam), "first": pws[0].to_json()}),
        verdict_check("base_transitivity", det.check_transitivity(f, 4, cfg.budget), HOLDS, "Remark 4.1: irrational rotation is transitive", f),
    ]


def thm4_2_forward(cfg: RunConfig) -> list:
    f = tent()
    E = env.EnvelopeSystem(f)
    fam = _co_family(UNIT_INTERVAL, _res(cfg, 4), 40)
    anchor = "Theorem 4.2 proof: 'g(x)=q for every x in X'"
    tws = [env.transitivity_witness(E, A, B, cfg.budget) for A in fam for B in fam]
    pws = [env.periodic_witness(E, A, cfg.budget) for A in fam]
    replay_t = all(v.replay(f) for v in tws if v.holds_)
    replay_p = all(v.replay(f) for v in pws if v.holds_)
    g = f37()
    E37 = env.EnvelopeSystem(g)
    low = [B for B in fam if B.G.sup <= Fraction(1, 2)]
    cws = [env.transitivity_witness(E37, A, B, cfg.budget) for A in fam[:5] for B in low]
    return [
        Check(
            "transitivity_witness_all",
            HOLDS,
            all_of(tws, HOLDS) if replay_t else "INVALID",
            anchor,
            {"pairs": len(tws), "k_max_used": max((v.witnesses[0].k for v in tws if v.holds_), default=None)},
        ),
        Check(
            "periodic_witness_all",
            HOLDS,
            all_of(pws, HOLDS) if replay_p else "INVALID",
            "Theorem 4.2 proof: 'f^k (x_0)=x_0'",
            {"co_sets": len(pws), "max_period": max((v.witnesses[0].period for v in pws if v.holds_), default=None)},
        ),
        Check(
            "contrapositive_f37_range_bound",
            FAILS,
            all_of(cws, FAILS) if all(v.certificate.base.to_json()["kind"] == "range_bound" for v in cws if v.fails_) else "INVALID",
            "Example 3.7: 'f is not onto'",
            {"pairs": len(cws)},
        ),
    ]


def thm4_2_converse(cfg: RunConfig) -> list:
    f = tent()
    E = env.EnvelopeSystem(f, "point_open")
    r = _res(cfg, 8)
    direct = det.check_transitivity(f, r, cfg.budget)
    anchor = "Theorem 4.2 proof: 'f^k (g(x_0))=F_{f^k}(g)(x_0)=(F_f^k(g))(x_0)=h(x_0)'"
    if not direct.holds_:
        return [verdict_check("base_transitivity", direct, HOLDS, anchor, f)]
    by_pair = {(str(w.U), str(w.V)): w for w in direct.witnesses}
    triples = []
    wits = direct.witnesses[:: max(1, len(direct.witnesses) // 12)][:12]
    for i, w in enumerate(wits):
        for x0 in (Fraction(0), Fraction(i + 1, 13)):
            triples.append((w.U, w.V, x0))
    matched, statuses = 0, []
    for U, V, x0 in triples:
        A = CoSet(IntervalUnion.points([x0]), U.region())
        B = CoSet(IntervalUnion.points([x0]), V.region())
        v = env.envelope_pair_search(E, A, B, cfg.budget)
        statuses.append(v)
        if not v.holds_:
            continue
        base = env.base_from_envelope(E, A.G, B.G, x0, v)
        ref = by_pair[(str(U), str(V))]
        if base.k == ref.k and base.replay(f) and ref.replay(f):
            matched += 1
    status = all_of(statuses, HOLDS)
    if status == HOLDS and matched != len(triples):
        status = FAILS
    return [
        verdict_check("base_transitivity", direct, HOLDS, anchor, f),
        Check("converse_witnesses_match", HOLDS, status, anchor, {"triples": len(triples), "matched": matched}),
    ]


def thm4_6_i(cfg: RunConfig) -> list:
    f = Contraction()
    E = env.EnvelopeSystem(f)
    fam = env.envelope_family(SYMMETRIC_INTERVAL, 520, max(cfg.budget.knots, 6), cfg.budget.grid_pitch, cfg.seed)
    found = env.envelope_periodic_scan(E, fam, min(cfg.budget.k_max, 16))
    G = (
        CoSet(IntervalUnion.points([Fraction(-1, 2)]), IntervalUnion([Interval.open(Fraction(-1), Fraction(-1, 4))])),
        CoSet(IntervalUnion.points([Fraction(1, 2)]), IntervalUnion([Interval.open(Fraction(1, 4), Fraction(1))])),
    )
    in_G = [r for r in found if env.co_members(r.g, G)]
    has_member = any(env.co_members(g, G) for g in fam)
    anchor = "Theorem 4.6(i) proof: 'g(X) subset P(f)'"
    return [
        bool_check(
            "only_constant_zero_periodic",
            len(fam) >= 500 and [r.g for r in found] == [env.Constant(Fraction(0))] and all(r.image_in_periodic_set for r in found),
            anchor,
            {"family": len(fam), "periodic": [r.to_json() for r in found]},
        ),
        bool_check(
            "G_has_no_periodic_element",
            not in_G and has_member,
            "Theorem 4.6(i) proof: 'does not contain constant functions'",
            {"scanned_members_of_G": sum(env.co_members(g, G) for g in fam)},
        ),
    ]


def thm4_6_ii(cfg: RunConfig) -> list:
    f = tent()
    E = env.EnvelopeSystem(f)
    rng = random.Random(cfg.seed)
    consts = [env.Constant(Fraction(i, 49)) for i in range(50)]
    pls = []
    while len(pls) < 50:
        m = rng.randint(2, 6)
        xs = sorted({Fraction(0), Fraction(1)} | {Fraction(rng.randint(1, 63), 64) for _ in range(m - 2)})
        ys = [Fraction(rng.randint(0, 64), 64) for _ in xs]
        g = env.element(PLMap(tuple(zip(xs, ys))))
        if isinstance(g, env.PL):
            pls.append(g)
    results = [env.no_dense_orbit_evidence(E, g, cfg.budget, 256) for g in consts + pls]
    ok = [isinstance(e, env.ObstructionEvidence) and e.replay(f) for e in results]
    unknown = any(isinstance(e, Verdict) for e in results)
    kinds = sorted({e.argument for e in results if isinstance(e, env.ObstructionEvidence)})
    return [
        bool_check(
            "no_dense_orbit_all",
            None if unknown else all(ok),
            "Theorem 4.6(ii) proof: 'has no dense orbit'",
            {"elements": len(results), "arguments": kinds, "replay_n": 256},
        )
    ]


def thm4_6_iv(cfg: RunConfig) -> list:
    t, g = tent(), f37()
    c = Contraction()
    Ec = env.EnvelopeSystem(c)
    fam = env.envelope_family(SYMMETRIC_INTERVAL, 120, 4, Fraction(1, 8), cfg.seed)
    found = env.envelope_periodic_scan(Ec, fam, 8)
    fpl = env.element(PLMap(tuple((x, c(x)) for x in (Fraction(-1), Fraction(0), Fraction(1)))))
    probe = env.onto_ball_probe(env.EnvelopeSystem(t), Fraction(1, 100), 200, cfg.seed)
    anchor = "Theorem 4.6(iv) proof: 'f^k(g(x))=g(x) for all x'"
    return [
        bool_check("onto_check_tent", env.onto_check(t.pl), "Definition 4.3: 'every g in U is onto'"),
        bool_check("onto_check_f37", env.onto_check(g.pl), "Definition 4.3", expected=FAILS),
        bool_check(
            "periodic_images_in_P",
            bool(found) and all(r.image_in_periodic_set for r in found),
            anchor,
            {"periodic": [r.to_json() for r in found], "distance_const0_to_interpolant": str(env.uniform_distance(env.Constant(0), fpl))},
        ),
        Check("onto_ball_probe_tent", EVIDENCE, EVIDENCE, "Definition 4.3", probe.to_json(),
              "onto-stability is the hypothesis; sampled uniform neighbourhoods of the tent map contain non-onto maps"),
    ]


def ex4_7(cfg: RunConfig) -> list:
    f = tent()
    E = env.EnvelopeSystem(f)
    delta = cfg.delta or Fraction(1, 4)
    cases = []
    for i in range(12):
        c = Fraction(2 * i + 1, 24)
        G = IntervalUnion([Interval.open(max(Fraction(0), c - Fraction(1, 8)), min(Fraction(1), c + Fraction(1, 8)))]).intersect(
            UNIT_INTERVAL.region()
        )
        cases.append((env.Constant(c), [CoSet(UNIT_INTERVAL.region(), G)]))
    rng = random.Random(cfg.seed)
    while len(cases) < 24:
        ys = [Fraction(rng.randint(0, 32), 32) for _ in range(4)]
        g = env.element(PLMap(tuple(zip([Fraction(0), Fraction(1, 3), Fraction(2, 3), Fraction(1)], ys))))
        if not isinstance(g, env.PL):
            continue
        sets = []
        for K in (IntervalUnion([Interval(Fraction(0), Fraction(1, 4))]), IntervalUnion([Interval(Fraction(3, 4), Fraction(1))])):
            img = g.image(K)
            G = IntervalUnion([Interval.open(img.inf - Fraction(1, 16), img.sup + Fraction(1, 16))]).intersect(UNIT_INTERVAL.region())
            sets.append(CoSet(K, G))
        cases.append((g, sets))
    results = [env.envelope_sensitivity_probe(E, g, sets, delta, cfg.budget) for g, sets in cases]
    unknown = any(isinstance(r, Verdict) for r in results)
    good = [
        isinstance(r, env.EnvelopeSensitivity) and r.n <= 64 and r.distance > delta and r.replay(f) for r in results
    ]
    return [
        bool_check(
            "sensitivity_probe_all",
            None if unknown else all(good),
            "Example 4.7: 'exhibits sensitive dependence to initial conditions'",
            {"elements": len(results), "max_n": max((r.n for r in results if hasattr(r, "n")), default=None)},
        )
    ]


REGISTRY = {
    s.name: s
    for s in (
        ExperimentSpec("ex3_4", "negation", "half_lines", HOLDS, "Example 3.4: 'sends any half line in its opposite'", ex3_4),
        ExperimentSpec("ex3_5", "shift", "cylinders", HOLDS, "Example 3.5: 'the periodic points of g are the constant sequences'", ex3_5),
        ExperimentSpec("ex3_6", "contraction", "basic_intervals", FAILS, "Example 3.6: 'f is not lightly sensitive with'", ex3_6),
        ExperimentSpec(
            "ex3_7",
            "f37",
            "endpoint_intervals",
            FLAGGED,
            "Example 3.7: 'f is lightly chaotic with respect to the subbase'",
            ex3_7,
            ("range of f is [1/2, 1] and P(f) = {1/2, 1}; light transitivity and light periodic density fail for [0, a) with a <= 1/2",),
        ),
        ExperimentSpec(
            "ex3_8",
            "gliss:1/3",
            "half_spaces",
            FLAGGED,
            "Example 3.8: 'f is not lightly sensitive'",
            ex3_8,
            ("|t| is invariant, so half-spaces cut at separated altitudes are never connected; light transitivity fails",),
        ),
        ExperimentSpec("abs_example", "absolute_value", "half_lines", FAILS, "'Thus f is not lightly transitive'", abs_example),
        ExperimentSpec("rem4_1", "rotation_golden", "compact_open", FAILS, "Remark 4.1: 'F_f is not lightly chaotic with respect to any subbase'", rem4_1),
        ExperimentSpec("thm4_2_forward", "tent", "compact_open", HOLDS, "Theorem 4.2: 'lightly chaotic with respect to the canonical subbase'", thm4_2_forward),
        ExperimentSpec("thm4_2_converse", "tent", "point_open", HOLDS, "Theorem 4.2 (converse): 'Therefore, f is transitive'", thm4_2_converse),
        ExperimentSpec("thm4_6_i", "contraction", "compact_open", HOLDS, "Theorem 4.6(i): 'F_f is not periodically dense'", thm4_6_i),
        ExperimentSpec("thm4_6_ii", "tent", "compact_open", HOLDS, "Theorem 4.6(ii): 'F_f is not transitive'", thm4_6_ii),
        ExperimentSpec(
            "thm4_6_iv",
            "tent",
            "compact_open",
            HOLDS,
            "Theorem 4.6(iv): 'F_f is not periodically dense'",
            thm4_6_iv,
            ("no self-map of [0, 1] is onto-stable: squeezing the graph toward the middle gives nearby non-onto maps",),
        ),
        ExperimentSpec(
            "ex4_7",
            "tent",
            "compact_open",
            HOLDS,
            "Example 4.7: 'exhibits sensitive dependence to initial conditions'",
            ex4_7,
            ("the construction copies g (not f) on K_j for j >= 2, since membership needs h(K_j) inside V_j",),
        ),
    )
}


def list_experiments() -> list:
    return [REGISTRY[k] for k in sorted(REGISTRY)]


def get_experiment(name: str) -> ExperimentSpec:
    try:
        return REGISTRY[name]
    except KeyError:
        raise KeyError(f"no experiment named {name!r}; see `list`") from None
