from decimal import Decimal
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from bayesbargain.numerics import (EQ, GE, LE, LinearSystem, LPSolver, Polytope, UnboundedPolytopeError,
                                   contains_polytope, enumerate_vertices_2d, fmt,
                                   fourier_motzkin_project, is_feasible, primitive, q, rank,
                                   same_polytope, solve_lp, upper_right_hull, verify_certificate)
from bayesbargain.numerics.lp import INFEASIBLE, OPTIMAL, UNBOUNDED


def test_q_accepts_exact_inputs_and_rejects_floats():
    assert q("7/10") == F(7, 10)
    assert q("0.1") == F(1, 10)
    assert q(Decimal("2.5")) == F(5, 2)
    assert q(3) == 3
    with pytest.raises(TypeError):
        q(0.1)
    with pytest.raises(TypeError):
        q(True)


def test_fmt_and_primitive():
    assert fmt(F(3, 6)) == "1/2"
    assert fmt(4) == "4"
    assert primitive((F(1, 2), F(-3, 4)), F(1, 6)) == ((6, -9), 2)
    assert primitive((0, 0), 0) == ((0, 0), 0)


def test_rank_matches_numpy_on_integer_matrices():
    rng = np.random.default_rng(3)
    for _ in range(30):
        m = rng.integers(-2, 3, size=(rng.integers(1, 5), rng.integers(1, 5)))
        assert rank(m.tolist()) == np.linalg.matrix_rank(m)


def test_small_lp_with_duals():
    s = LinearSystem.from_rows(["x", "y"], [
        ({"x": 1}, GE, 0), ({"y": 1}, GE, 0),
        ({"x": 1, "y": 2}, LE, 4), ({"x": 3, "y": 1}, LE, 6)])
    res = solve_lp(s, {"x": 1, "y": 1})
    assert res.status == OPTIMAL
    assert res.value == F(14, 5)
    assert (res["x"], res["y"]) == (F(8, 5), F(6, 5))
    assert verify_certificate(s, {"x": 1, "y": 1}, "max", res)
    assert res.duals[2] == F(2, 5) and res.duals[3] == F(1, 5)


def test_statuses():
    bad = LinearSystem.from_rows(["x"], [({"x": 1}, GE, 2), ({"x": 1}, LE, 1)])
    assert solve_lp(bad, {"x": 1}).status == INFEASIBLE
    assert not is_feasible(bad)
    open_ = LinearSystem.from_rows(["x"], [({"x": 1}, GE, 0)])
    assert solve_lp(open_, {"x": 1}).status == UNBOUNDED
    assert solve_lp(open_, {"x": 1}, "min").value == 0


def test_free_variables_and_equalities():
    s = LinearSystem.from_rows(["x", "y"], [({"x": 1, "y": 1}, EQ, 1), ({"x": 1, "y": -1}, LE, 3),
                                           ({"x": -1, "y": 1}, LE, 5)])
    res = solve_lp(s, {"x": 1})
    assert res.value == 2 and res["y"] == -1
    assert verify_certificate(s, {"x": 1}, "max", res)
    low = solve_lp(s, {"x": 1}, "min")
    assert low.value == -2
    assert verify_certificate(s, {"x": 1}, "min", low)


def test_degenerate_cycling_example_terminates():
    # Beale's example cycles under the textbook rule without anti-cycling
    names = ["x1", "x2", "x3", "x4"]
    rows = [({n: 1}, GE, 0) for n in names] + [
        ({"x1": F(1, 4), "x2": -8, "x3": -1, "x4": 9}, LE, 0),
        ({"x1": F(1, 2), "x2": -12, "x3": F(-1, 2), "x4": 3}, LE, 0),
        ({"x3": 1}, LE, 1)]
    s = LinearSystem.from_rows(names, rows)
    obj = {"x1": F(3, 4), "x2": -20, "x3": F(1, 2), "x4": -6}
    res = solve_lp(s, obj)
    assert res.value == F(5, 4)
    assert verify_certificate(s, obj, "max", res)


def test_certificate_rejects_a_tampered_result():
    s = LinearSystem.from_rows(["x"], [({"x": 1}, GE, 0), ({"x": 1}, LE, 2)])
    res = solve_lp(s, {"x": 1})
    from dataclasses import replace
    assert not verify_certificate(s, {"x": 1}, "max", replace(res, value=F(3)))
    assert not verify_certificate(s, {"x": 1}, "max", replace(res, duals=(0, 0)))


@st.composite
def lps(draw):
    n = draw(st.integers(1, 4))
    m = draw(st.integers(1, 5))
    a = [[draw(st.integers(-4, 4)) for _ in range(n)] for _ in range(m)]
    b = [draw(st.integers(-3, 8)) for _ in range(m)]
    c = [draw(st.integers(-5, 5)) for _ in range(n)]
    box = draw(st.integers(1, 6))
    return n, a, b, c, box


@given(lps())
def test_lp_agrees_with_scipy(data):
    """Dual route: exact simplex against HiGHS in floating point."""
    n, a, b, c, box = data
    names = [f"x{j}" for j in range(n)]
    rows = [(row, LE, rhs) for row, rhs in zip(a, b)]
    rows += [({v: 1}, GE, 0) for v in names] + [({v: 1}, LE, box) for v in names]
    s = LinearSystem.from_rows(names, rows)
    res = solve_lp(s, c)
    ref = linprog([-x for x in c], A_ub=a, b_ub=b, bounds=[(0, box)] * n, method="highs")
    if ref.status == 2:
        assert res.status == INFEASIBLE
    else:
        assert res.status == OPTIMAL
        assert abs(float(res.value) + ref.fun) < 1e-7
        assert verify_certificate(s, c, "max", res)


def _square():
    return Polytope.from_rows(("x", "y"), [({"x": 1}, GE, 0), ({"y": 1}, GE, 0),
                                           ({"x": 1}, LE, 1), ({"y": 1}, LE, 1)])


def test_vertices_of_square_and_unbounded():
    assert sorted(_square().vertices()) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    half = Polytope.from_rows(("x", "y"), [({"x": 1}, GE, 0), ({"y": 1}, GE, 0)])
    with pytest.raises(UnboundedPolytopeError):
        enumerate_vertices_2d(half)


def test_upper_right_hull():
    pts = [(1, 0), (0, 1), (F(1, 2), F(1, 2)), (F(3, 5), F(3, 5)), (F(1, 5), F(1, 5))]
    assert upper_right_hull(pts) == [(0, 1), (F(3, 5), F(3, 5)), (1, 0)]


def test_same_polytope_ignores_redundant_rows():
    sq = _square()
    extra = Polytope(sq.system.add({"x": 1, "y": 1}, LE, 2))
    assert same_polytope(sq, extra)
    cut = Polytope(sq.system.add({"x": 1, "y": 1}, LE, 1))
    assert contains_polytope(sq, cut) and not contains_polytope(cut, sq)


@st.composite
def polytopes3(draw):
    """Random bounded polytopes in three variables (a box cut by a few rows)."""
    names = ("x", "y", "z")
    rows = [({v: 1}, GE, 0) for v in names] + [({v: 1}, LE, 3) for v in names]
    for _ in range(draw(st.integers(0, 4))):
        c = {v: draw(st.integers(-3, 3)) for v in names}
        rows.append((c, LE, draw(st.integers(1, 6))))
    return LinearSystem.from_rows(names, rows)


@given(polytopes3(), st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=1,
                              max_size=6))
def test_projection_matches_lp_support(system, directions):
    """Dual route: support values of the projection equal those of the lifted set."""
    proj = fourier_motzkin_project(system, ["x", "y"])
    full = LPSolver(system)
    if not full.feasible:
        assert proj.empty or not LPSolver(proj.system).feasible
        return
    small = LPSolver(proj.system)
    for dx, dy in directions:
        assert full.maximize({"x": dx, "y": dy}).value == small.maximize({"x": dx, "y": dy}).value


def test_projection_of_empty_set():
    s = LinearSystem.from_rows(["x", "y"], [({"x": 1, "y": 1}, LE, -1), ({"x": 1}, GE, 0),
                                           ({"y": 1}, GE, 0)])
    p = fourier_motzkin_project(s, ["x"])
    assert p.empty or not LPSolver(p.system).feasible
