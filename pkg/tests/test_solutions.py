from fractions import Fraction as F

import pytest

from bayesbargain import (BargainingProblem, CONCEPTS, Mechanism, check_efficiency, check_ic,
                          check_ir, check_ordinality, interim_profile, solve)
from bayesbargain.fixtures import (DOLLAR_TABLES, dollar_problem, egal_alpha, egal_problem,
                                   fixture, sine_problem, sine_table)
from bayesbargain.mechanism import check_egalitarian
from bayesbargain.solutions import (alpha_range, certify, class_system, constant_efficient,
                                    egal_class_cells, egalitarian_alpha, egalitarian_solve,
                                    full_extraction, generalized_nash, informed_principal,
                                    is_weighted_optimum, premium_mechanism, random_dictatorship,
                                    table10, utilitarian)

PC = ((1, 0), (0, 1))


@pytest.fixture(scope="module")
def a2():
    return dollar_problem()


def test_utilitarian(a2):
    sol = utilitarian(a2)
    assert sol.mechanism.table == DOLLAR_TABLES["utilitarian"]
    assert interim_profile(a2, sol.mechanism).flat() == (F(1, 2),) * 4
    assert certify(a2, sol)


def test_generalized_nash(a2):
    sol = generalized_nash(a2)
    assert sol.mechanism.table == DOLLAR_TABLES["nash"]
    assert sol.interim.values[0] == (F(62, 125), F(263, 500))
    assert sol.info["vertex"] and abs(sol.info["upper_bound"] - sol.value) < 1e-12
    assert check_ic(a2, sol.mechanism).holds and not check_efficiency(a2, sol.mechanism).holds
    assert certify(a2, sol)


def test_nash_under_complete_information_is_the_ordinary_solution():
    ci = BargainingProblem(PC, ((F(1, 10),), (F(2, 5),)), ((1,),))
    sol = generalized_nash(ci)
    # maximize (x - 1/10)(1 - x - 2/5): x = 7/20
    assert sol.mechanism.table == (((0, F(7, 20), F(13, 20)),),)


def test_informed_principal(a2):
    sol = informed_principal(a2, 0)
    assert sol.mechanism.table == DOLLAR_TABLES["principal"]
    assert sol.interim.flat() == (F(41, 50), F(17, 20), F(1, 10), F(2, 5))
    other = informed_principal(a2, 1)
    assert other.interim.flat() == (F(1, 10), F(2, 5), F(41, 50), F(17, 20))


def test_random_dictatorship(a2):
    sol = random_dictatorship(a2)
    assert sol.mechanism.table == DOLLAR_TABLES["random-dictatorship"]
    assert sol.interim.values[0] == (F(23, 50), F(5, 8))


def test_weight_readings_for_random_dictatorship(a2):
    m = random_dictatorship(a2).mechanism
    lam = [[F(11, 15), F(4, 15)]] * 2
    assert is_weighted_optimum(a2, m, lam, prior_weighted=False)
    assert not is_weighted_optimum(a2, m, lam)
    assert not is_weighted_optimum(a2, m, [[F(11, 15)] * 2, [F(4, 15)] * 2])
    with pytest.raises(ValueError):
        is_weighted_optimum(a2, m, [[0, 0], [0, 0]])


def test_utilitarian_is_the_uniform_weight_optimum(a2):
    assert is_weighted_optimum(a2, utilitarian(a2).mechanism, [[1, 1], [1, 1]])
    assert not is_weighted_optimum(a2, generalized_nash(a2).mechanism, [[1, 1], [1, 1]])


def test_constant_efficient(a2):
    sol = constant_efficient(a2)
    assert sol.mechanism.is_constant() and sol.interim.flat() == (F(1, 2),) * 4
    p, _ = fixture("FIX-DUR-A")
    assert constant_efficient(p).mechanism((0, 0)) == (0, 0, 0, 1)


def test_egalitarian_on_independent_prior_is_disagreement(a2):
    sol = egalitarian_solve(a2)
    assert sol.mechanism.table == ((((1, 0, 0),) * 2),) * 2
    assert sol.value == 0


def test_egalitarian_on_correlated_prior():
    p, _ = fixture("FIX-EGAL")
    sol = egalitarian_solve(p)
    assert sol.value == F(122, 385)
    assert check_egalitarian(p, sol.mechanism).holds
    assert check_ic(p, sol.mechanism).holds and check_ir(p, sol.mechanism).holds


def test_egal_fixture_alpha_and_range():
    p, m = fixture("FIX-EGAL")
    assert egal_alpha(F(1, 10), F(1, 4), F(1, 5)) == F(3, 8)
    assert egalitarian_alpha(p) == (F(3, 8), F(3, 8))
    assert alpha_range(class_system(p, egal_class_cells(p))) == (F(9, 50), F(9, 20))
    assert check_egalitarian(p, m).holds and check_ic(p, m).holds
    with pytest.raises(ValueError):
        egal_problem(eta=F(1, 2))


def test_full_extraction_is_infeasible(a2):
    assert full_extraction(a2, 0) == "infeasible" and full_extraction(a2, 1) == "infeasible"


def test_sine_fixture_is_the_constant_split():
    p, m = fixture("FIX-SINE")
    assert set(sine_table(p).values()) == {0}
    assert m.is_constant()
    assert check_ic(p, m).holds and check_efficiency(p, m).holds
    assert check_ordinality(p, m).holds
    assert interim_profile(p, m).flat() == (F(1, 2),) * 4


def test_premium_mechanism_non_constant():
    g = BargainingProblem(PC, ((0, F(1, 12), F(1, 6)),) * 2, ((F(1, 9),) * 3,) * 3)
    h = {0: 0, F(1, 12): 1, F(-1, 12): -1, F(1, 6): -1, F(-1, 6): 1}
    m = premium_mechanism(g, h)
    assert not m.is_constant()
    assert check_ic(g, m).holds and check_ir(g, m).holds and check_efficiency(g, m).holds
    assert interim_profile(g, m).flat() == (F(1, 2),) * 6
    # the premium averages out, so no type's expected lottery moves either
    assert not check_ordinality(g, m).info["responsive"]


@pytest.mark.parametrize("bad, word", [
    ({F(1, 6): 1, F(-1, 6): -1}, "periodicity"),
    ({F(1, 12): 2, F(-1, 12): -2, F(1, 6): -2, F(-1, 6): 2}, "bound"),
    ({F(-1, 12): 1}, "oddness"),
])
def test_premium_conditions_are_enforced(bad, word):
    g = BargainingProblem(PC, ((0, F(1, 12), F(1, 6)),) * 2, ((F(1, 9),) * 3,) * 3)
    h = {0: 0, F(1, 12): 1, F(-1, 12): -1, F(1, 6): -1, F(-1, 6): 1}
    with pytest.raises(ValueError, match=word):
        premium_mechanism(g, {**h, **bad})


def test_premium_preconditions():
    from bayesbargain import PreconditionError
    with pytest.raises(PreconditionError):
        premium_mechanism(dollar_problem(), {})
    with pytest.raises(ValueError, match="missing"):
        premium_mechanism(sine_problem(), {0: 0})


def test_solve_dispatch_and_table10(a2):
    for c in CONCEPTS:
        sol = solve(a2, c)
        assert sol.concept == c
        assert check_ic(a2, sol.mechanism).holds
    assert table10(random_dictatorship(a2).mechanism)[0][1] == (5, F(1, 2), F(9, 2))
    with pytest.raises(ValueError, match="unknown concept"):
        solve(a2, "kalai")
