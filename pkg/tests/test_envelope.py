from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lightchaos import envelope as env
from lightchaos.intervals import Interval, IntervalUnion
from lightchaos.maps import Contraction, f37, golden_rotation, tent
from lightchaos.plmap import pl_compose
from lightchaos.spaces import SYMMETRIC_INTERVAL, UNIT_INTERVAL
from lightchaos.subbases import CoSet, SubbaseScheme, generate_family

from conftest import dyadic, unit_pl_maps

E = env.EnvelopeSystem(tent())


def co(Klo, Khi, Glo, Ghi):
    return CoSet(IntervalUnion.of(Interval.closed(Klo, Khi)), IntervalUnion.of(Interval.open(Glo, Ghi)))


@given(unit_pl_maps(), st.integers(1, 5), dyadic(6))
def test_envelope_power_is_composition(pl, n, x):
    g = env.element(pl)
    h = env.envelope_power(E, g, n)
    want = g(x)
    for _ in range(n):
        want = E.f(want)
    assert h(x) == want


@given(unit_pl_maps(), unit_pl_maps(), unit_pl_maps())
def test_uniform_distance_is_a_metric(a, b, c):
    ga, gb, gc = env.element(a), env.element(b), env.element(c)
    d = env.uniform_distance
    assert d(ga, ga) == 0
    assert d(ga, gb) == d(gb, ga)
    assert d(ga, gc) <= d(ga, gb) + d(gb, gc)
    grid = [Fraction(i, 64) for i in range(65)]
    assert d(ga, gb) >= max(abs(ga(x) - gb(x)) for x in grid)


def test_constant_elements():
    g = env.element(pl_compose(tent().pl, tent().pl))
    assert isinstance(g, env.PL)
    c = env.constant_embedding(Fraction(1, 3))
    assert env.apply_envelope(E, c) == env.Constant(Fraction(2, 3))


def test_witnesses_replay_and_tampering_is_caught():
    A, B = co(0, Fraction(1, 4), 0, Fraction(1, 2)), co(Fraction(1, 2), 1, Fraction(3, 4), 1)
    v = env.transitivity_witness(E, A, B)
    assert v.holds_ and v.replay(E.f)
    w = v.witnesses[0]
    assert not env.EnvelopePairWitness(w.A, w.B, w.k, env.Constant(Fraction(1, 1000))).replay(E.f)
    p = env.periodic_witness(E, A)
    assert p.holds_ and p.replay(E.f)


def test_lifted_certificates():
    R = env.EnvelopeSystem(golden_rotation())
    for A in generate_family(R.space, SubbaseScheme("compact_open", 2)):
        v = env.periodic_witness(R, A)
        assert v.fails_ and v.certificate.reason == "no_periodic" and v.replay(R.f)
    F = env.EnvelopeSystem(f37())
    v = env.transitivity_witness(F, co(0, 1, 0, 1), co(0, 1, 0, Fraction(1, 2)))
    assert v.fails_ and v.certificate.reason == "range" and v.replay(F.f)


def test_point_open_converse():
    P = env.EnvelopeSystem(tent(), "point_open")
    x0 = Fraction(1, 5)
    U = IntervalUnion.of(Interval.open(0, Fraction(1, 8)))
    V = IntervalUnion.of(Interval.open(Fraction(5, 8), Fraction(3, 4)))
    A, B = CoSet(IntervalUnion.points([x0]), U), CoSet(IntervalUnion.points([x0]), V)
    v = env.envelope_pair_search(P, A, B)
    assert v.holds_ and v.replay(P.f)
    base = env.base_from_envelope(P, U, V, x0, v)
    assert base.replay(P.f)


@pytest.mark.parametrize("g", [env.Constant(Fraction(1, 3)), env.element(pl_compose(tent().pl, tent().pl))])
def test_no_dense_orbit_evidence(g):
    ev = env.no_dense_orbit_evidence(E, g, n=64)
    assert isinstance(ev, env.ObstructionEvidence) and ev.replay(E.f)


def test_periodic_scan_contraction():
    C = env.EnvelopeSystem(Contraction())
    fam = env.envelope_family(SYMMETRIC_INTERVAL, 60, seed=3)
    found = env.envelope_periodic_scan(C, fam, 6)
    assert [r.g for r in found] == [env.Constant(Fraction(0))]


def test_onto():
    assert env.onto_check(tent().pl) and not env.onto_check(f37().pl)
    probe = env.onto_ball_probe(E, Fraction(1, 100), 20)
    assert probe.to_json()


def test_sensitivity_probe():
    g = env.Constant(Fraction(1, 2))
    sets = [CoSet(UNIT_INTERVAL.region(), IntervalUnion.of(Interval.open(Fraction(3, 8), Fraction(5, 8))))]
    r = env.envelope_sensitivity_probe(E, g, sets, Fraction(1, 4))
    assert isinstance(r, env.EnvelopeSensitivity) and r.replay(E.f) and r.distance > Fraction(1, 4)
