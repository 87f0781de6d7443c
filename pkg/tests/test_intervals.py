from fractions import Fraction

from hypothesis import given, strategies as st

from lightchaos.intervals import Interval, IntervalUnion

from conftest import dyadic, unions

PROBES = [Fraction(i, 64) for i in range(-8, 73)]


def members(u):
    return {x for x in PROBES if x in u}


@given(unions(), unions())
def test_set_operations_agree_with_membership(a, b):
    assert members(a.union(b)) == members(a) | members(b)
    assert members(a.intersect(b)) == members(a) & members(b)
    assert members(a.difference(b)) == members(a) - members(b)


@given(unions(), unions())
def test_issubset_matches_difference(a, b):
    assert a.issubset(b) == a.difference(b).empty


@given(unions())
def test_parts_are_disjoint_and_sorted(u):
    parts = list(u)
    for p, q in zip(parts, parts[1:]):
        assert p.hi <= q.lo
        assert not (p.hi == q.lo and (p.hi_closed or q.lo_closed))


@given(unions(), dyadic(6))
def test_complement_partitions(u, x):
    assert (x in u) != (x in u.complement())


@given(unions())
def test_json_round_trip(u):
    assert IntervalUnion.from_json(u.to_json()) == u


def test_open_endpoints():
    u = IntervalUnion.of(Interval.open(0, 1))
    assert 0 not in u and Fraction(1, 2) in u and 1 not in u
    assert not IntervalUnion.of(Interval.closed(0, 1)).issubset(u)
    assert IntervalUnion.of(Interval(0, 1, False, True)).issubset(IntervalUnion.of(Interval.closed(0, 1)))


def test_infinite_endpoints():
    line = IntervalUnion.real_line()
    half = IntervalUnion.of(Interval(0, float("inf"), True, False))
    assert half.issubset(line) and not line.issubset(half)
    assert -1 in half.complement()
