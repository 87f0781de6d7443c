from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from lightchaos.plmap import PLMap

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def dyadic(bits: int = 5, lo: int = 0, hi: int = 1):
    n = 1 << bits
    return st.integers(lo * n, hi * n).map(lambda i: Fraction(i, n))


@st.composite
def unit_pl_maps(draw, max_knots: int = 5, bits: int = 5):
    """Self-maps of [0, 1] with dyadic knots."""
    n = 1 << bits
    inner = draw(st.sets(st.integers(1, n - 1), max_size=max_knots - 2))
    xs = [Fraction(0)] + [Fraction(i, n) for i in sorted(inner)] + [Fraction(1)]
    ys = [draw(dyadic(bits)) for _ in xs]
    return PLMap.from_values(xs, ys)


@st.composite
def unit_intervals(draw, bits: int = 4):
    from lightchaos.intervals import Interval

    a = draw(dyadic(bits))
    b = draw(dyadic(bits))
    lo, hi = min(a, b), max(a, b)
    lc, hc = draw(st.booleans()), draw(st.booleans())
    if lo == hi:
        lc = hc = True
    return Interval(lo, hi, lc, hc)


@st.composite
def unions(draw, bits: int = 4):
    from lightchaos.intervals import IntervalUnion

    return IntervalUnion(draw(st.lists(unit_intervals(bits), max_size=3)))


ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
