from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from bayesbargain import Mechanism, check_efficiency, durability, is_expost_durable, summary_line
from bayesbargain.durability import (DURABLE, NOT_DURABLE, UNKNOWN, durable_sufficient,
                                     non_durability_witness, posterior_after_outcome)
from bayesbargain.feasible import build_system
from bayesbargain.fixtures import dollar_problem, fixture
from bayesbargain.solutions import utilitarian

from conftest import problems


def test_dur_a_is_expost_durable_but_not_durable():
    p, m = fixture("FIX-DUR-A")
    assert is_expost_durable(p, m).holds
    w = non_durability_witness(p, m)
    assert w.lottery == (0, 0, 0, 1) and w.gain == F(1, 5)
    assert durability(p, m).info["verdict"] == NOT_DURABLE
    assert summary_line(p, m) == "ex-post durable: yes; durable: no (witness constant a3)"


def test_dur_a_posteriors_reveal_the_opponent():
    p, m = fixture("FIX-DUR-A")
    assert posterior_after_outcome(p, m, 0, 0, 1) == (1, 0)
    assert posterior_after_outcome(p, m, 0, 0, 2) == (0, 1)
    with pytest.raises(ZeroDivisionError):
        posterior_after_outcome(p, m, 0, 0, 3)


def test_dur_b_is_durable_but_not_expost_durable():
    p, m = fixture("FIX-DUR-B")
    ex = is_expost_durable(p, m)
    assert not ex.holds
    assert ex.witness["lottery"] == (1, 0, 0) and ex.witness["gain"] == F(1, 10)
    assert durable_sufficient(p, m) == DURABLE
    assert summary_line(p, m) == "ex-post durable: no; durable: yes"


def test_t2_verdict_is_unknown():
    p, m = fixture("FIX-T2")
    assert is_expost_durable(p, m).holds
    assert durability(p, m).info["verdict"] == UNKNOWN


def test_disagreement_is_not_durable():
    p = dollar_problem()
    c = Mechanism.pure(p, 0)
    w = non_durability_witness(p, c)
    assert w.lottery == (0, F(1, 2), F(1, 2)) and w.gain == F(1, 10)
    assert summary_line(p, utilitarian(p).mechanism) == "ex-post durable: yes; durable: yes"


def test_lottery_posterior():
    p, m = fixture("FIX-T2")
    assert posterior_after_outcome(p, m, 0, 2, 3) == (F(115, 254), F(115, 254), F(12, 127))


@given(st.data())
def test_expost_durability_matches_efficiency_on_vertices(data):
    """Dual route: witness search against the frontier predicate."""
    p = data.draw(problems(linear=True, max_types=3))
    groups = data.draw(st.sampled_from([("simplex", "ic", "ir"),
                                        ("simplex", "ic", "ir", "efficiency")]))
    fs = build_system(p, groups)
    obj = {v: data.draw(st.integers(-4, 4)) for v in fs.variables}
    m = fs.mechanism(fs.solver().maximize(fs.system.vector(obj)).point())
    assert is_expost_durable(p, m).holds == check_efficiency(p, m).holds
