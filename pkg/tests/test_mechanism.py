from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from bayesbargain import (Mechanism, check_efficiency, check_ic, check_ir, check_ordinality,
                          interim_profile, property_report)
from bayesbargain.feasible import build_system
from bayesbargain.fixtures import dollar_problem, fixture, t2_problem
from bayesbargain.mechanism import (check_dpm, check_egalitarian, game_value, interim_lottery,
                                    is_correlated_equilibrium, reduce_to_game)
from bayesbargain.solutions import generalized_nash, utilitarian

from conftest import mechanisms, problems


def _brute_interims(p, m):
    """U[i][ti][r]: payoff of player i with type ti reporting r, from the joint prior."""
    out = []
    for i in (0, 1):
        rows = []
        for ti in range(p.n_types(i)):
            vals = []
            for r in range(p.n_types(i)):
                num = den = F(0)
                for a in range(p.n_types(0)):
                    for b in range(p.n_types(1)):
                        if (a, b)[i] != ti:
                            continue
                        w = p.prior[a][b]
                        rep = (r, b) if i == 0 else (a, r)
                        lot = m(rep)
                        u = lot[0] * p.types[i][ti] + sum(
                            lot[k] * p.utilities[k - 1][i] for k in range(1, len(lot)))
                        num += w * u
                        den += w
                vals.append(num / den)
            rows.append(vals)
        out.append(rows)
    return out


@given(st.data())
def test_ic_matches_brute_force(data):
    p = data.draw(problems())
    m = data.draw(mechanisms(p))
    brute = _brute_interims(p, m)
    ic = all(brute[i][t][t] >= brute[i][t][r] for i in (0, 1) for t in range(p.n_types(i))
             for r in range(p.n_types(i)))
    assert check_ic(p, m).holds == ic
    prof = interim_profile(p, m)
    assert all(prof[i, t] == brute[i][t][t] for i in (0, 1) for t in range(p.n_types(i)))
    ir = all(brute[i][t][t] >= p.types[i][t] for i in (0, 1) for t in range(p.n_types(i)))
    assert check_ir(p, m).holds == ir


@given(st.data())
def test_ic_equals_correlated_equilibrium_on_efficient_vertices(data):
    """IC of an efficient mechanism is obedience in its reduced game under the prior."""
    p = data.draw(problems(linear=True, max_types=3))
    fs = build_system(p, ("simplex", "efficiency"))
    obj = {v: data.draw(st.integers(-3, 3)) for v in fs.variables}
    res = fs.solver().maximize(fs.system.vector(obj))
    m = fs.mechanism(res.point())
    game = reduce_to_game(p, m)
    assert game.constant_sum
    assert check_ic(p, m).holds == is_correlated_equilibrium(game, p.prior)


def test_reduced_game_of_nash_mechanism_is_not_a_correlated_equilibrium():
    # disagreement at (1, 1) breaks the equivalence for inefficient mechanisms
    p = dollar_problem()
    m = generalized_nash(p).mechanism
    assert check_ic(p, m).holds
    assert not is_correlated_equilibrium(reduce_to_game(p, m), p.prior)


def test_game_value_of_constant_split():
    p = dollar_problem()
    game = reduce_to_game(p, utilitarian(p).mechanism)
    assert game_value(game, 0) == F(1, 2) and game_value(game, 1) == F(1, 2)
    with pytest.raises(ValueError):
        game_value(reduce_to_game(p, generalized_nash(p).mechanism), 0)


def test_matching_pennies_value():
    from bayesbargain import BargainingProblem
    p = BargainingProblem(((1, 0), (0, 1)), ((0, F(1, 10)),) * 2, ((F(1, 4),) * 2,) * 2)
    m = Mechanism.from_function(p, lambda t: (0, 1, 0) if t[0] == t[1] else (0, 0, 1))
    assert game_value(reduce_to_game(p, m), 0) == F(1, 2)


def test_mechanism_constructors():
    p = dollar_problem()
    assert Mechanism.pure(p, 0)((1, 1)) == (1, 0, 0)
    c = Mechanism.constant(p, (0, F(1, 2), F(1, 2)))
    assert c.is_constant()
    mix = Mechanism.mix([Mechanism.pure(p, 1), Mechanism.pure(p, 2)], [F(1, 4), F(3, 4)])
    assert mix((0, 1)) == (0, F(1, 4), F(3, 4))
    with pytest.raises(ValueError):
        Mechanism.constant(p, (F(1, 2), F(1, 2)))
    short = Mechanism.constant(p, (0, F(1, 2), F(1, 3)))
    assert short.problems_with(p) == [f"cell {t} is not a probability vector"
                                      for t in p.profiles()]


def test_t2_mechanism_properties():
    eps = F(1, 100)
    p, m = fixture("FIX-T2", eps=eps)
    rep = property_report(p, m, ("ic", "ir", "eff", "ord"))
    assert rep["ic"].holds and rep["ir"].holds and rep["efficiency"].holds
    assert not rep["ordinality"].holds
    prof = interim_profile(p, m)
    assert prof.values[0] == (F(3, 4) - 2 * eps,) * 2 + (F(7, 12) + F(14, 15) * eps,)
    assert check_ordinality(p, m).info["responsive"]


def test_strong_efficiency_and_eps_mode():
    p, m = fixture("FIX-T2", eps=0)
    assert check_efficiency(p, m).holds
    assert check_efficiency(p, m, "strong").holds
    half = Mechanism.constant(p, (F(1, 20), F(19, 40), F(19, 40), 0))
    assert not check_efficiency(p, half).holds
    assert check_efficiency(p, half, "eps", F(1, 20)).holds
    assert not check_efficiency(p, half, "eps", F(1, 21)).holds


def test_egalitarian_and_dpm_on_fixture():
    p, m = fixture("FIX-EGAL")
    assert check_egalitarian(p, m).holds
    assert check_egalitarian(p, m).info["surplus"] == interim_profile(p, m)[0, 0] - F(1, 10)
    assert check_dpm(p, m).holds
    p = dollar_problem()
    # the risk-averse type gets the dollar less often
    bad = Mechanism.from_function(p, lambda t: (0, F(1, 2), F(1, 2)) if t == (0, 0) else
                                  (0, 0, 1) if t[0] == 1 else (0, 1, 0))
    assert not check_dpm(p, bad).holds


def test_interim_lottery_of_dollar_nash():
    p = dollar_problem()
    m = generalized_nash(p).mechanism
    lot = interim_lottery(p, m, 0, 1)
    assert lot[0] == F(1, 10) and sum(lot) == 1


def test_witness_lines():
    p = dollar_problem()
    bad = Mechanism.from_function(p, lambda t: (0, 1, 0) if t[0] == 1 else (0, 0, 1))
    c = check_ic(p, bad)
    assert not c.holds and c.witness["player"] == 0 and c.witness["report"] == 1
    assert c.line().startswith("ic: fails (player=0, type=0, report=1")
