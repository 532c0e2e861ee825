from fractions import Fraction

import flint
from hypothesis import HealthCheck, settings, strategies as st

from todaprep.exact import CTX, RatFn, QSeries, VARIABLES
from todaprep.lattice import LatticeData, TrigPoly

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

NAMES = ("a1", "a2", "hbar")
_IDX = [VARIABLES.index(n) for n in NAMES]

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polys(draw, max_terms=3, max_deg=2):
    terms = draw(st.dictionaries(
        st.tuples(*[st.integers(0, max_deg)] * len(NAMES)),
        small_fractions.filter(lambda x: x != 0), max_size=max_terms))
    out = {}
    for exps, c in terms.items():
        e = [0] * len(VARIABLES)
        for i, k in zip(_IDX, exps):
            e[i] = k
        out[tuple(e)] = flint.fmpq(c.numerator, c.denominator)
    return CTX.from_dict(out)


@st.composite
def ratfns(draw):
    num = draw(polys())
    den = draw(polys().filter(lambda p: not p.is_zero()))
    return RatFn(num, den)


@st.composite
def unit_series(draw, order=4):
    """Series with free term 1 and polynomial higher coefficients."""
    rest = [RatFn(draw(polys(max_terms=2, max_deg=1))) for _ in range(order)]
    return QSeries([RatFn(1), *rest])


LINE = LatticeData([[1]])
A2_LATTICE = LatticeData([[1, Fraction(-1, 2)], [Fraction(-1, 2), 1]])


@st.composite
def trigpolys(draw, lattice=A2_LATTICE, max_terms=3, zero_constant=False):
    r = lattice.rank
    weights = st.tuples(*[st.integers(-2, 2)] * r)
    if zero_constant:
        weights = weights.filter(any)
    terms = draw(st.dictionaries(weights, small_fractions.filter(lambda x: x != 0),
                                 max_size=max_terms))
    return TrigPoly(lattice, terms)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number].line())
