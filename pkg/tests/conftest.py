import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from bayesbargain import BargainingProblem

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("quick", deadline=None, max_examples=10,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")

F = Fraction


def golden(name):
    with open(os.path.join(GOLDEN, name)) as fh:
        return fh.read()


# strategies --------------------------------------------------------------------

def fractions(lo, hi, denom=20):
    """Rationals k/denom in [lo, hi]."""
    return st.integers(int(lo * denom), int(hi * denom)).map(lambda k: F(k, denom))


@st.composite
def problems(draw, max_types=3, max_extra=2, full_support=True, linear=None):
    """Small valid problems: normalized a1, a2, a few interior alternatives."""
    n0 = draw(st.integers(1, max_types))
    n1 = draw(st.integers(1, max_types))
    extras = []
    for _ in range(draw(st.integers(0, max_extra))):
        if linear is True:
            x = draw(fractions(F(1, 20), F(19, 20)))
            extras.append((x, 1 - x))
        else:
            extras.append((draw(fractions(F(1, 20), F(19, 20))),
                           draw(fractions(F(1, 20), F(19, 20)))))
    t0 = [draw(fractions(0, F(9, 20))) for _ in range(n0)]
    t1 = [draw(fractions(0, F(9, 20))) for _ in range(n1)]
    lo = 1 if full_support else 0
    weights = [[draw(st.integers(lo, 9)) for _ in range(n1)] for _ in range(n0)]
    for a in range(n0):
        if not any(weights[a]):
            weights[a][0] = 1
    for b in range(n1):
        if not any(weights[a][b] for a in range(n0)):
            weights[0][b] = 1
    total = sum(map(sum, weights))
    prior = tuple(tuple(F(w, total) for w in row) for row in weights)
    return BargainingProblem(((1, 0), (0, 1)) + tuple(extras), (tuple(t0), tuple(t1)), prior)


@st.composite
def lotteries(draw, width):
    w = [draw(st.integers(0, 6)) for _ in range(width)]
    if not any(w):
        w[draw(st.integers(0, width - 1))] = 1
    s = sum(w)
    return tuple(F(x, s) for x in w)


@st.composite
def mechanisms(draw, problem):
    from bayesbargain import Mechanism
    cells = {t: draw(lotteries(problem.n_alternatives)) for t in problem.profiles()}
    return Mechanism.from_function(problem, cells.__getitem__)


# acceptance summary --------------------------------------------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _CRITERIA[n] = (title, rep.passed, item.user_properties)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, ok, props = _CRITERIA[n]
        note = "; ".join(f"{k}: {v}" for k, v in props)
        tr.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}"
                      + (f"  [{note}]" if note else ""))
