from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from bayesbargain import (BargainingProblem, Mechanism, PreconditionError, build_system,
                          check_ic, check_ir, constancy_gap, efficient_gap, interim_profile,
                          interim_incentive_efficient, ordinality_gap, project_interim,
                          verify_prop5, verify_theorem2)
from bayesbargain.feasible import (BudgetExceeded, facet_assignments,
                                   merge_identical_columns, mvar, uvar)
from bayesbargain.fixtures import dollar_problem, dur_b_problem, fixture, t2_problem
from bayesbargain.numerics import LPSolver
from bayesbargain.solutions import random_dictatorship

from conftest import problems

PC = ((1, 0), (0, 1))


def test_group_sizes():
    p = t2_problem()
    fs = build_system(p, ("simplex", "ic", "ir", "interim"))
    n0, n1 = p.n_types(0), p.n_types(1)
    assert fs.count("ic") == n0 * n0 - n0 + n1 * n1 - n1
    assert fs.count("ir") == n0 + n1
    assert fs.count("interim") == n0 + n1
    assert fs.count("simplex") == 9 * (4 + 1)
    # on a kinked frontier efficiency needs a facet per profile
    with pytest.raises(PreconditionError):
        build_system(p, ("efficiency",))


def test_group_removal_is_exact():
    p = dollar_problem()
    fs = build_system(p, ("simplex", "ic", "ir", "interim"))
    ic_rows = [c for c in fs.system.constraints if c.tag == "ic"]
    back = fs.without("ic").with_rows([(dict(zip(fs.variables, c.coeffs)), c.rel, c.rhs)
                                        for c in ic_rows], "ic")
    assert set((c.coeffs, c.rel, c.rhs) for c in back.system.constraints) == \
        set((c.coeffs, c.rel, c.rhs) for c in fs.system.constraints)
    assert back.count("ic") == fs.count("ic") == 4


def test_unknown_group():
    with pytest.raises(ValueError):
        build_system(dollar_problem(), ("simplex", "budget"))


def test_projection_matches_lp_over_mechanisms():
    """Dual route: support function of the projected set against the lifted LP."""
    p = dollar_problem()
    fs = build_system(p)
    poly = project_interim(p, fs)
    lifted = fs.solver()
    small = LPSolver(poly.system)
    for d in [(1, 0, 0, 0), (0, 1, 0, 0), (-1, 0, 0, 0), (9, 1, 9, 1), (1, -2, 3, -1),
              (0, 0, -1, 1), (5, 5, -5, 2)]:
        names = [uvar(i, t) for i in (0, 1) for t in (0, 1)]
        obj = dict(zip(names, d))
        assert lifted.maximize(fs.system.vector(obj)).value == \
            small.maximize(poly.system.vector(obj)).value


def test_symmetric_projection_vertices():
    poly = project_interim(dollar_problem(), symmetric=True)
    assert poly.variables == ("u0", "u1")
    assert set(poly.vertices()) == {
        (F(1, 10), F(2, 5)), (F(2659, 5800), F(1403, 2900)), (F(499, 1000), F(499, 1000)),
        (F(1, 2), F(1, 2)), (F(62, 125), F(263, 500)), (F(467, 1025), F(653, 1025))}


@given(problems(linear=True, max_types=3))
def test_ordinality_gap_is_zero_on_linear_full_support(p):
    g = ordinality_gap(p)
    assert g.status == "optimal" and g.value == 0


def test_zero_cells_can_open_a_gap():
    # prior on the anti-diagonal: every type knows the opponent's type
    p = BargainingProblem(PC, ((0, F(1, 10), F(1, 5)),) * 2,
                          ((0, 0, F(1, 3)), (0, F(1, 3), 0), (F(1, 3), 0, 0)))
    g = ordinality_gap(p)
    assert g.value > 0
    assert check_ic(p, g.witness).holds and check_ir(p, g.witness).holds
    prof = interim_profile(p, g.witness)
    i, a, b = g.where
    assert prof[i, a] - prof[i, b] == g.value


def test_strong_efficiency_closes_the_gap_with_one_zero_cell():
    prior = ((F(1, 4), F(1, 4)), (F(1, 2), 0))
    p = BargainingProblem(PC, ((F(1, 10), F(3, 10)), (0, F(1, 5))), prior)
    assert ordinality_gap(p, strong=True).zero


def test_constancy_gap():
    p = BargainingProblem(PC + ((F(1, 5), F(1, 5)),), ((0, F(1, 5)),) * 2,
                          ((F(2, 5), F(1, 10)), (F(1, 10), F(2, 5))))
    assert constancy_gap(p).zero
    assert constancy_gap(p, payoffs=True).zero
    with pytest.raises(PreconditionError):
        constancy_gap(dollar_problem())
    # independent beliefs: efficient mechanisms need not be constant
    g = constancy_gap(dollar_problem(), check_rank=False)
    assert g.value > 0


def test_efficient_gap_on_kinked_frontier_with_two_types():
    p = BargainingProblem(PC + ((F(3, 5), F(3, 5)),), ((F(1, 10), F(3, 10)), (0, F(1, 5))),
                          ((F(1, 5), F(3, 10)), (F(3, 10), F(1, 5))))
    assert efficient_gap(p).zero
    rep = verify_theorem2(p)
    assert rep.passed and rep.details["gap"] == 0


def test_facet_budget():
    p = t2_problem()
    with pytest.raises(BudgetExceeded):
        list(facet_assignments(p, budget=100))
    assert len(list(facet_assignments(p, budget=512))) == 512


def test_three_type_nonlinear_check_reports_the_counterexample():
    rep = verify_theorem2(t2_problem(F(1, 20)))
    assert rep.passed
    assert rep.details["cardinal_gap"] == F(3, 4) - F(2, 100) - F(7, 12) - F(14, 1500)


def test_merge_identical_columns():
    p, m = fixture("FIX-T2")
    reduced, rm = merge_identical_columns(p, m, player=1)
    assert reduced.n_types(1) == 3       # s1 and s2 columns differ (a1 vs a2)
    q, mq = merge_identical_columns(p, Mechanism.constant(p, (0, 0, 0, 1)), player=1)
    assert q.n_types(1) == 2 and q.prior[2] == (F(1, 2) - 4 * F(1, 100), 4 * F(1, 100))
    assert mq.shape == (3, 2)


def test_random_dictatorship_is_interim_incentive_efficient():
    p = dollar_problem()
    assert interim_incentive_efficient(p, random_dictatorship(p).mechanism).efficient


def test_disagreement_is_dominated_with_a_certificate():
    p = dollar_problem()
    res = interim_incentive_efficient(p, Mechanism.pure(p, 0))
    assert not res.efficient and res.gain > 0
    cert = res.certificate
    assert check_ic(p, cert).holds and check_ir(p, cert).holds
    base, better = interim_profile(p, Mechanism.pure(p, 0)), interim_profile(p, cert)
    assert all(x >= y for x, y in zip(better.flat(), base.flat()))
    assert sum(better.flat()) - sum(base.flat()) == res.gain


def test_independence_check_on_independent_problem():
    rep = verify_prop5(dur_b_problem())
    assert rep.passed
    assert rep.details["efficient_gap"] == 0
    assert rep.details["max_disagreement_off_top"] == 0
    with pytest.raises(PreconditionError):
        verify_prop5(t2_problem())


@given(problems(linear=True, max_types=3), st.integers(0, 10 ** 6))
def test_compaction_preserves_optima(p, seed):
    import random
    rng = random.Random(seed)
    fs = build_system(p, ("simplex", "ic", "ir", "efficiency"))
    small = fs.compact()
    obj = {mvar(k, t): rng.randint(-3, 3) for t in p.profiles() for k in range(p.n_alternatives)}
    a = fs.solver().maximize(fs.system.vector(obj))
    b = small.solver().maximize(small.system.vector({k: v for k, v in obj.items()
                                                     if k in small.variables}))
    assert a.value == b.value
