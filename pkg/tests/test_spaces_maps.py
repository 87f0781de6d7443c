import math
from fractions import Fraction

from hypothesis import given, strategies as st

from lightchaos.exact import GOLDEN, Surd, mod1
from lightchaos.maps import CircleRotation, Contraction, Glissorotation, Shift, tent
from lightchaos.spaces import CIRCLE, DOUBLE_CONE, BinarySequence, ConePoint, metric

from conftest import dyadic

cone_points = st.builds(ConePoint, dyadic(6), dyadic(5, -1, 1))


def rotate(v, alpha):
    c, s = math.cos(2 * math.pi * alpha), math.sin(2 * math.pi * alpha)
    return (c * v[0] - s * v[1], s * v[0] + c * v[1], -v[2])


@given(cone_points, st.sampled_from([(1, 3), (2, 5), (1, 4)]))
def test_glissorotation_embedding_conjugacy(p, pq):
    f = Glissorotation(*pq)
    got, want = f(p).embed(), rotate(p.embed(), Fraction(*pq))
    assert all(abs(a - b) < 1e-9 for a, b in zip(got, want))


@given(cone_points, cone_points, st.integers(1, 12))
def test_glissorotation_is_isometry(p, q, k):
    f = Glissorotation(1, 3)
    assert abs(metric(DOUBLE_CONE, f.iterate(k, p), f.iterate(k, q)) - metric(DOUBLE_CONE, p, q)) < 1e-9


@given(cone_points)
def test_glissorotation_period_divides_2q(p):
    f = Glissorotation(2, 5)
    assert f.iterate(10, p) == p


@given(cone_points)
def test_interval_embedding_encloses_float(p):
    box = p.embed_interval()
    for iv, x in zip(box, p.embed()):
        assert float(iv.a) - 1e-12 <= x <= float(iv.b) + 1e-12


@given(dyadic(8).map(mod1), dyadic(8).map(mod1), st.integers(1, 20))
def test_golden_rotation_is_exact_isometry(a, b, k):
    f = CircleRotation(GOLDEN)
    pa, pb = f.iterate(k, a), f.iterate(k, b)
    assert metric(CIRCLE, pa, pb) == metric(CIRCLE, a, b)


def test_surd_arithmetic():
    phi = Surd(Fraction(1, 2), Fraction(1, 2), 5)
    assert phi * phi == phi + 1
    assert abs(float(GOLDEN) - (math.sqrt(5) - 1) / 2) < 1e-12
    assert 0 < mod1(GOLDEN * 7) < 1


@given(st.lists(st.integers(0, 1), min_size=1, max_size=12), st.integers(0, 1), st.integers(0, 6))
def test_shift_drops_prefix(word, tail, k):
    s = BinarySequence.from_word(word, tail)
    t = Shift(False).iterate(k, s)
    assert all(t[i] == s[i + k] for i in range(20))


@given(dyadic(8, -1, 1), st.integers(1, 30))
def test_contraction_closed_form(y, k):
    f = Contraction()
    assert f.iterate(k, y) == y / (k * abs(y) + 1)


def test_tent_values():
    f = tent()
    assert f(Fraction(1, 3)) == Fraction(2, 3) and f(Fraction(2, 3)) == Fraction(2, 3)
