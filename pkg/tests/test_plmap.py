from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lightchaos.intervals import Interval, IntervalUnion
from lightchaos.plmap import DomainError, PLMap, pl_compose, pl_image, pl_power, pl_preimage

from conftest import dyadic, unit_intervals, unit_pl_maps

GRID = [Fraction(i, 128) for i in range(129)]


@given(unit_pl_maps(), unit_pl_maps(), unit_pl_maps())
def test_composition_is_associative(f, g, h):
    left = pl_compose(pl_compose(f, g), h)
    right = pl_compose(f, pl_compose(g, h))
    assert left.same_graph(right)


@given(unit_pl_maps(), unit_pl_maps(), dyadic(7))
def test_composition_is_pointwise(f, g, x):
    assert pl_compose(f, g)(x) == f(g(x))


@given(unit_pl_maps(4), st.integers(1, 4), dyadic(6))
def test_power_matches_iteration(f, k, x):
    y = x
    for _ in range(k):
        y = f(y)
    assert pl_power(f, k)(x) == y


@given(unit_pl_maps(), unit_intervals(5))
def test_image_oracle(f, part):
    region = IntervalUnion.of(part)
    img = pl_image(f, region)
    # every sampled point of the region lands in the image
    for x in GRID:
        if x in region:
            assert f(x) in img
    # image extremes are attained on the closure
    pts = [x for x in set(GRID) | set(f.xs) | {part.lo, part.hi} if part.lo <= x <= part.hi]
    vals = [f(x) for x in pts]
    assert img.inf == min(vals) and img.sup == max(vals)


@given(unit_pl_maps(), unit_intervals(5))
def test_preimage_oracle(f, part):
    target = IntervalUnion.of(part)
    pre = pl_preimage(f, target)
    for x in GRID:
        assert (x in pre) == (f(x) in target)


def test_validation():
    with pytest.raises(ValueError):
        PLMap(((0, 0), (0, 1)))
    with pytest.raises(ValueError):
        PLMap(((0, 2), (1, 0)))
    f = PLMap(((0, 0), (1, 1)))
    with pytest.raises(DomainError):
        pl_image(f, IntervalUnion.of(Interval.closed(-1, 1)))


def test_simplified_drops_collinear_knots():
    f = PLMap(((0, 0), (Fraction(1, 2), Fraction(1, 2)), (1, 1)))
    assert len(f.simplified().knots) == 2 and f.same_graph(f.simplified())
