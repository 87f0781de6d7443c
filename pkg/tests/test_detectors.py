from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lightchaos import Budget, Status, SubbaseScheme, generate_family
from lightchaos import detectors as det
from lightchaos.maps import Contraction, Negation, PLSystem, Shift, f37, tent, truncated_tent
from lightchaos.spaces import REAL_LINE, SHIFT_X, SYMMETRIC_INTERVAL, UNIT_INTERVAL
from lightchaos.verdicts import PairWitness, PeriodicWitness

from conftest import unit_pl_maps


def fam(space, tag, r, **kw):
    return generate_family(space, SubbaseScheme(tag, r, **kw))


def brute_periodic(f, k, denominators):
    pts = {Fraction(i, d) for d in denominators for i in range(d + 1)}
    return {x for x in pts if f.iterate(k, x) == x}


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_tent_periodic_points_match_brute_force(k):
    f = tent()
    # tent^k fixes exactly the points j / (2^k - 1) and j / (2^k + 1)
    brute = brute_periodic(f, k, range(1, 2**k + 2))
    found = det.find_periodic_points(f, k)
    assert {r.point for r in found} == brute
    for r in found:
        assert f.iterate(r.period, r.point) == r.point and k % r.period == 0


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_truncated_tent_plateau_reports_closed_segments(k):
    f = truncated_tent()
    found = det.find_periodic_points(f, k)
    assert all(f.iterate(k, r.point) == r.point for r in found)
    assert Fraction(1, 2) in {r.point for r in found}


@settings(max_examples=30)
@given(unit_pl_maps(4, 3), st.integers(1, 4))
def test_periodic_points_of_random_maps(pl, k):
    f = PLSystem(pl)
    found = det.find_periodic_points(f, k)
    pts = sorted(r.point for r in found)
    for r in found:
        assert f.iterate(k, r.point) == r.point
    _, segs = f.fixed_points(k, f.space.region())
    covered = lambda x: x in pts or any(x in seg for seg in segs)  # noqa: E731
    # every sign change of f^k(x) - x on a dyadic grid brackets a reported point
    g = f.power(k)
    grid = [Fraction(i, 64) for i in range(65)]
    for a, b in zip(grid, grid[1:]):
        da, db = g(a) - a, g(b) - b
        if da == 0:
            assert covered(a)
        if da * db < 0:
            assert any(a < x < b for x in pts)


def test_negation_light_transitivity_replays():
    f = Negation()
    v = det.check_light_transitivity(f, fam(REAL_LINE, "half_lines", 2))
    assert v.holds_ and v.replay(f)
    w = v.witnesses[0]
    bad = PairWitness(w.U, w.V, w.k, w.q + 1000 if w.U.contains(w.q + 1000) is False else w.q - 1000)
    assert not bad.replay(f) or bad.q == w.q


def test_tampered_periodic_witness_fails_replay():
    f = tent()
    U = fam(UNIT_INTERVAL, "basic_intervals", 4)[0]
    v = det.check_light_periodic_density(f, [U])
    assert v.holds_
    w = v.witnesses[0]
    assert w.replay(f)
    assert not PeriodicWitness(w.U, w.point + Fraction(1, 1000), w.period).replay(f)


@pytest.mark.parametrize("system", [tent(), f37()])
def test_budget_monotonicity(system):
    family = fam(UNIT_INTERVAL, "basic_intervals", 4)
    seen = []
    for k in (1, 2, 4, 8, 16):
        v = det.check_light_transitivity(system, family, Budget(k_max=k))
        assert v.replay(system)
        seen.append(v.status)
    # once decided, a larger budget never changes the decision
    decided = [s for s in seen if s is not Status.UNKNOWN]
    assert decided and len(set(decided)) == 1
    first = seen.index(decided[0])
    assert all(s is decided[0] for s in seen[first:])


def test_f37_certificates():
    f = f37()
    v = det.check_transitivity(f, 8)
    assert v.fails_ and v.certificate.to_json()["kind"] == "range_bound" and v.replay(f)
    s = det.check_sensitivity(f, Fraction(1, 5))
    cert = s.certificate.to_json()
    assert s.fails_ and cert["x"] == "1/2" and s.replay(f)


def test_contraction_is_not_lightly_sensitive():
    f = Contraction()
    v = det.check_light_sensitivity(f, fam(SYMMETRIC_INTERVAL, "basic_intervals", 8), Fraction(1, 4))
    assert v.fails_ and v.certificate.to_json()["x"] == "0" and v.replay(f)


def test_shift_periodic_density_over_cylinders():
    f = Shift(True)
    v = det.check_light_periodic_density(f, fam(SHIFT_X, "cylinders", 4))
    assert v.holds_ and all(w.point.is_constant for w in v.witnesses)
    basic = det.check_light_periodic_density(f, fam(SHIFT_X, "basic_cylinders", 2))
    assert basic.fails_ and basic.replay(f)


def test_orbit_density_probe_runs():
    rep = det.orbit_density_probe(tent(), Fraction(1, 7), 50, Fraction(1, 8))
    assert rep is not None


def test_unknown_when_budget_too_small():
    v = det.check_light_transitivity(Shift(True), fam(SHIFT_X, "cylinders", 6), Budget(k_max=1))
    assert v.status is Status.UNKNOWN and v.replay(Shift(True))
