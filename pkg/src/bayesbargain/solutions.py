"""Solution concepts: LP optima over the feasible mechanisms, the
generalized Nash solution, and a few explicit constructions.

Every LP solution is made unique by a lexicographic tie-break on the
mechanism table (variables in the order ``m[k,a,b]`` cell by cell), so
repeated runs give byte-identical output.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import minimize as sp_minimize

from .feasible import (DEFAULT, PreconditionError, build_system, exante_coeffs, interim_coeffs,
                       mvar, uvar)
from .mechanism import InterimProfile, Mechanism, check_ic, check_ir, interim_profile
from .numerics import EQ, GE, LinearSystem, LPSolver, q
from .numerics.lp import INFEASIBLE, OPTIMAL
from .problem import is_symmetric

F = Fraction


@dataclass(frozen=True)
class Solution:
    concept: str
    mechanism: Mechanism
    interim: object           # InterimProfile
    value: object = None      # objective value (exact, or float for Nash)
    info: dict = None


def _system(problem, symmetric=None, extra=()):
    if symmetric is None:
        symmetric = is_symmetric(problem)
    include = DEFAULT + (("symmetry",) if symmetric else ())
    fs = build_system(problem, include)
    if extra:
        fs = fs.with_rows(extra)
    return fs


def lexmin(system: LinearSystem, order):
    """Lexicographically smallest feasible point over the variables in ``order``.

    Each coordinate is minimized in turn and then frozen.
    """
    point = None
    for name in order:
        res = LPSolver(system).minimize({name: 1})
        if res.status != OPTIMAL:
            raise ValueError(f"lexmin: LP {res.status} at {name}")
        point = res.point()
        system = system.add({name: 1}, EQ, res.value)
    return point


def _finish(concept, fs, objective, sense="max", prefer=None, info=None):
    """Optimize ``objective``, then tie-break (optional ``prefer`` minimized
    first, then lexicographic) and package the result."""
    solver = fs.solver()
    res = solver.solve(fs.system.vector(objective), sense)
    if res.status != OPTIMAL:
        raise ValueError(f"{concept}: LP {res.status}")
    system = fs.system.add(objective, EQ, res.value)
    if prefer:
        r2 = LPSolver(system).minimize(prefer)
        system = system.add(prefer, EQ, r2.value)
    order = [v for v in fs.variables if v.startswith("m[")]
    point = lexmin(system, order)
    mech = fs.mechanism(point)
    return Solution(concept, mech, interim_profile(fs.problem, mech), res.value, info or {})


def _disagreement_mass(problem):
    return {mvar(0, t): 1 for t in problem.profiles()}


def utilitarian(problem) -> Solution:
    """Maximize the ex-ante sum of utilities; least disagreement among optima."""
    fs = _system(problem)
    return _finish("utilitarian", fs, exante_coeffs(problem), prefer=_disagreement_mass(problem))


def informed_principal(problem, principal) -> Solution:
    """Ex-ante optimum of ``principal`` (0 or 1) over IC, IR mechanisms."""
    if principal not in (0, 1):
        raise ValueError("principal must be 0 or 1")
    weights = [[0] * problem.n_types(0), [0] * problem.n_types(1)]
    weights[principal] = [1] * problem.n_types(principal)
    fs = _system(problem, symmetric=False)
    return _finish(f"principal:{principal + 1}", fs, exante_coeffs(problem, weights))


def random_dictatorship(problem) -> Solution:
    """Fair coin between the two principals' mechanisms, cell by cell."""
    a = informed_principal(problem, 0)
    b = informed_principal(problem, 1)
    mech = Mechanism.mix([a.mechanism, b.mechanism], [F(1, 2), F(1, 2)])
    return Solution("random-dictatorship", mech, interim_profile(problem, mech), None,
                    {"principals": (a, b)})


def weighted_value(problem, weights) -> Fraction:
    """Max of sum lambda_i(ti) f_i(ti) U_i(ti) over IC, IR mechanisms."""
    fs = build_system(problem, ("simplex", "ic", "ir"))
    return fs.solver().maximize(fs.system.vector(exante_coeffs(problem, weights))).value


def is_weighted_optimum(problem, mech, weights, prior_weighted=True) -> bool:
    """Does ``mech`` maximize the weighted interim welfare over IC, IR mechanisms?

    ``weights[i][ti]`` are nonnegative, not all zero.  With
    ``prior_weighted`` the objective is ``sum lambda_i(ti) f_i(ti) U_i(ti)``;
    without it the marginals are left out, ``sum lambda_i(ti) U_i(ti)``.
    """
    weights = [[q(w) for w in row] for row in weights]
    if any(w < 0 for row in weights for w in row) or not any(w for row in weights for w in row):
        raise ValueError("weights must be nonnegative and not all zero")
    marg = problem.marginal(0), problem.marginal(1)
    if not prior_weighted:
        weights = [[w / marg[i][ti] for ti, w in enumerate(row)] for i, row in enumerate(weights)]
    prof = interim_profile(problem, mech)
    own = sum(weights[i][ti] * marg[i][ti] * prof[i, ti]
              for i in (0, 1) for ti in range(problem.n_types(i)))
    return own == weighted_value(problem, weights)


# egalitarian -------------------------------------------------------------------

def egalitarian_rows(problem, surplus="c"):
    """U_i(ti) - ti equals a common surplus variable for every type."""
    return [({uvar(i, ti): 1, surplus: -1}, EQ, t)
            for i in (0, 1) for ti, t in enumerate(problem.types[i])]


def egalitarian_solve(problem) -> Solution:
    """Largest common interim surplus over IC, IR mechanisms.

    Always feasible (the disagreement mechanism has surplus 0).
    """
    fs = build_system(problem, DEFAULT)
    names = fs.variables + ("c",)
    rows = [(dict(zip(fs.variables, c.coeffs)), c.rel, c.rhs) for c in fs.system.constraints]
    system = LinearSystem.from_rows(names, rows + egalitarian_rows(problem))
    res = LPSolver(system).maximize({"c": 1})
    system = system.add({"c": 1}, EQ, res.value)
    point = lexmin(system, [v for v in fs.variables if v.startswith("m[")])
    mech = fs.mechanism(point)
    return Solution("egalitarian", mech, interim_profile(problem, mech), res.value)


def class_system(problem, cells, groups=("simplex", "ic")):
    """Mechanisms whose cells are affine in a scalar ``alpha``.

    ``cells[profile]`` is a lottery whose entries are numbers or
    ``(constant, slope)`` pairs meaning ``constant + slope * alpha``.
    """
    fs = build_system(problem, tuple(groups) + ("interim",))
    names = fs.variables + ("alpha",)
    rows = [(dict(zip(fs.variables, c.coeffs)), c.rel, c.rhs) for c in fs.system.constraints]
    for t, lot in cells.items():
        for k, x in enumerate(lot):
            const, slope = (x, 0) if not isinstance(x, tuple) else x
            rows.append(({mvar(k, t): 1, "alpha": -q(slope)}, EQ, q(const)))
    return LinearSystem.from_rows(names, rows)


def alpha_range(system):
    """Exact (min, max) of ``alpha``; ``None`` if the class is empty."""
    solver = LPSolver(system)
    lo, hi = solver.minimize({"alpha": 1}), solver.maximize({"alpha": 1})
    if lo.status == INFEASIBLE:
        return None
    return lo.value, hi.value


def egal_class_cells(problem):
    """(s,s) even split, s against t gives the s player alpha, (t,t) disagreement."""
    half = F(1, 2)
    return {(0, 0): (0, half, half), (0, 1): (0, (0, 1), (1, -1)),
            (1, 0): (0, (1, -1), (0, 1)), (1, 1): (1, 0, 0)}


def egalitarian_alpha(problem):
    """The ``alpha`` range of the class under IC and the egalitarian rows."""
    s = class_system(problem, egal_class_cells(problem))
    names = s.variables + ("c",)
    rows = [(dict(zip(s.variables, c.coeffs)), c.rel, c.rhs) for c in s.constraints]
    return alpha_range(LinearSystem.from_rows(names, rows + egalitarian_rows(problem)))


# constant efficient --------------------------------------------------------------

def _best_lottery(problem, floors):
    """Pareto-efficient lottery maximizing the smallest gain over ``floors``.

    Maximize ``z`` with ``u_i >= floor_i + z``; then maximize ``u_1 + u_2``
    at that ``z``.  The second stage lands on the Pareto frontier: any
    dominating lottery would also meet the floors and have a larger sum.
    """
    n = problem.n_alternatives
    names = [f"p{k}" for k in range(n)] + ["z"]
    u = [{f"p{k}": problem.utilities[k - 1][i] for k in range(1, n)} for i in (0, 1)]
    rows = [({f"p{k}": 1}, GE, 0) for k in range(n)]
    rows.append(({f"p{k}": 1 for k in range(n)}, EQ, 1))
    rows.append(({"p0": 1}, EQ, 0))
    for i in (0, 1):
        rows.append(({**u[i], "z": -1}, GE, floors[i]))
    system = LinearSystem.from_rows(names, rows)
    z = LPSolver(system).maximize({"z": 1}).value
    system = system.add({"z": 1}, EQ, z)
    total = {name: u[0].get(name, 0) + u[1].get(name, 0) for name in names[1:-1]}
    best = LPSolver(system).maximize(total).value
    system = system.add(total, EQ, best)
    point = lexmin(system, names[:-1])
    return tuple(point[f"p{k}"] for k in range(n)), z


def constant_efficient(problem) -> Solution:
    """Constant efficient lottery that every type weakly prefers to disagreement.

    Picks the equal-gain point of the frontier above the highest
    disagreement values (the midpoint on a symmetric problem).
    """
    floors = (problem.top(0), problem.top(1))
    lot, gain = _best_lottery(problem, floors)
    if gain < 0:
        raise PreconditionError("no efficient point above the highest disagreement values")
    mech = Mechanism.constant(problem, lot)
    return Solution("constant-efficient", mech, interim_profile(problem, mech), gain)


# premium mechanisms ----------------------------------------------------------------

def premium_mechanism(problem, h, period=F(1, 4)) -> Mechanism:
    """Pure-conflict split ``1/2 + h(t1 - t2)/2`` for player 1.

    ``h`` maps every report difference to a value.  It must be periodic
    with ``period`` where both points are tabulated, odd, and bounded by 1
    in absolute value.  Under a uniform prior on a common type set the
    premium averages out, so the mechanism is IC with flat interim utility.
    """
    h = {q(x): q(v) for x, v in h.items()}
    if problem.utilities != ((1, 0), (0, 1)):
        raise PreconditionError("premium mechanisms need the pure-conflict alternatives")
    if problem.types[0] != problem.types[1]:
        raise PreconditionError("premium mechanisms need a common type set")
    if len({x for row in problem.prior for x in row}) != 1:
        raise PreconditionError("premium mechanisms need a uniform prior")
    diffs = {a - b for a in problem.types[0] for b in problem.types[1]}
    missing = sorted(diffs - set(h))
    if missing:
        raise ValueError(f"h is missing differences {missing}")
    for x, v in h.items():
        if x + period in h and h[x + period] != v:
            raise ValueError(f"(i) periodicity fails: h({x}) != h({x + period})")
        if -x in h and h[-x] != -v:
            raise ValueError(f"(ii) oddness fails: h({-x}) != -h({x})")
        if abs(v) > 1:
            raise ValueError(f"(iii) bound fails: |h({x})| = {abs(v)} > 1")
    half = F(1, 2)

    def cell(t):
        x = problem.types[0][t[0]] - problem.types[1][t[1]]
        p1 = half + h[x] / 2
        return (0, p1, 1 - p1)
    return Mechanism.from_function(problem, cell)


# generalized Nash -----------------------------------------------------------------

def _nash_parts(problem, fs):
    """Objective weights, disagreement offsets and the interim map U = C x."""
    keys = [(i, ti) for i in (0, 1) for ti in range(problem.n_types(i))]
    weights = np.array([float(problem.marginal(i)[ti]) for i, ti in keys])
    offsets = np.array([float(problem.types[i][ti]) for i, ti in keys])
    index = {v: j for j, v in enumerate(fs.variables)}
    C = np.zeros((len(keys), len(fs.variables)))
    for r, (i, ti) in enumerate(keys):
        for name, c in interim_coeffs(problem, i, ti).items():
            C[r, index[name]] = float(c)
    return keys, weights, offsets, C


def nash_objective(problem, interim) -> float:
    """Sum of f_i(ti) log(U_i(ti) - ti); ``-inf`` if some gain is not positive."""
    total = 0.0
    for i in (0, 1):
        for ti, t in enumerate(problem.types[i]):
            gain = float(interim[i, ti]) - float(t)
            if gain <= 0:
                return -math.inf
            total += float(problem.marginal(i)[ti]) * math.log(gain)
    return total


def _interior_point(fs, problem):
    """Mechanism maximizing the smallest interim gain (exact LP)."""
    names = fs.variables + ("z",)
    rows = [(dict(zip(fs.variables, c.coeffs)), c.rel, c.rhs) for c in fs.system.constraints]
    for i in (0, 1):
        for ti, t in enumerate(problem.types[i]):
            rows.append(({uvar(i, ti): 1, "z": -1}, GE, t))
    system = LinearSystem.from_rows(names, rows)
    res = LPSolver(system).maximize({"z": 1})
    return res.value, res.point()


def _rationalize(v, den=10 ** 12):
    return Fraction(v).limit_denominator(den)


def generalized_nash(problem, tol=1e-12) -> Solution:
    """Maximize the type-weighted Nash product of interim gains.

    Solved in floating point (SLSQP over the mechanism table), then
    certified exactly: the gradient at the optimizer is rounded to a
    rational direction ``g`` and an exact LP gives the supporting bound
    ``f(u*) + max_P g.(u - u*)`` on the optimum.  If the best vertex in
    direction ``g`` is at least as good as the float optimizer it is
    returned exactly; otherwise the rational point nearest to ``u*`` is
    realized by LP.
    """
    fs = _system(problem)
    gain, start = _interior_point(fs, problem)
    if gain <= 0:
        raise PreconditionError("no mechanism gives every type a strictly positive gain")
    keys, w, d, C = _nash_parts(problem, fs)
    A = np.array([[float(a) for a in c.coeffs] for c in fs.system.constraints])
    b = np.array([float(c.rhs) for c in fs.system.constraints])
    rel = [c.rel for c in fs.system.constraints]
    eq = [r == EQ for r in rel]
    sign = np.array([1.0 if r == GE else -1.0 for r in rel])

    def f(x):
        g = C @ x - d
        if np.any(g <= 0):
            return 1e6
        return -float(w @ np.log(g))

    def grad(x):
        g = np.maximum(C @ x - d, 1e-300)
        return -(C.T @ (w / g))

    # optimize over x = x0 + N z so only inequalities remain
    x0 = np.array([float(start[v]) for v in fs.variables])
    N = null_space(A[eq]) if any(eq) else np.eye(len(x0))
    ineq = [not e for e in eq]
    G = sign[ineq][:, None] * A[ineq]
    h = G @ x0 - sign[ineq] * b[ineq]
    GN = G @ N
    cons = [{"type": "ineq", "fun": lambda z: h + GN @ z, "jac": lambda z: GN}]
    res = sp_minimize(lambda z: f(x0 + N @ z), np.zeros(N.shape[1]),
                      jac=lambda z: N.T @ grad(x0 + N @ z), constraints=cons, method="SLSQP",
                      options={"ftol": 1e-15, "maxiter": 2000})
    x = x0 + N @ res.x
    u = C @ x
    best = -f(x)
    # exact supporting-hyperplane certificate
    g = w / (u - d)
    gq = {uvar(i, ti): _rationalize(gv, 10 ** 9) for (i, ti), gv in zip(keys, g)}
    lp = fs.solver().maximize(fs.system.vector(gq))
    vertex = lp.point()
    uq = [_rationalize(v) for v in u]
    slope = sum(gq[uvar(i, ti)] * (vertex[uvar(i, ti)] - uu) for (i, ti), uu in zip(keys, uq))
    bound = best + float(slope)
    vprof = InterimProfile(tuple(tuple(vertex[uvar(i, ti)] for ti in range(problem.n_types(i)))
                                 for i in (0, 1)))
    vval = nash_objective(problem, vprof)
    if vval >= best - tol:
        target = [vertex[uvar(i, ti)] for i, ti in keys]
        value = vval
    else:
        target = uq
        value = best
    mech, exact = _realize(fs, keys, target)
    return Solution("nash", mech, interim_profile(problem, mech), value,
                    {"upper_bound": bound, "float_value": best,
                     "vertex": vval >= best - tol, "exact_target": exact,
                     "iterations": int(res.nit), "message": res.message})


def _realize(fs, keys, target):
    """Mechanism whose interim vector is L1-closest to ``target``.

    Returns ``(mechanism, exact)`` where ``exact`` tells whether the target
    itself is feasible.  Ties are broken by least disagreement, then
    lexicographically.
    """
    names = fs.variables + tuple(f"e[{j}]" for j in range(len(keys)))
    rows = [(dict(zip(fs.variables, c.coeffs)), c.rel, c.rhs) for c in fs.system.constraints]
    for j, ((i, ti), t) in enumerate(zip(keys, target)):
        rows.append(({f"e[{j}]": 1, uvar(i, ti): -1}, GE, -t))
        rows.append(({f"e[{j}]": 1, uvar(i, ti): 1}, GE, t))
    system = LinearSystem.from_rows(names, rows)
    err = {f"e[{j}]": 1 for j in range(len(keys))}
    dist = LPSolver(system).minimize(err).value
    system = system.add(err, EQ, dist)
    if dist == 0:
        for j, ((i, ti), t) in enumerate(zip(keys, target)):
            system = system.add({uvar(i, ti): 1}, EQ, t)
    prefer = _disagreement_mass(fs.problem)
    system = system.add(prefer, EQ, LPSolver(system).minimize(prefer).value)
    point = lexmin(system, [v for v in fs.variables if v.startswith("m[")])
    return fs.mechanism(point), dist == 0


# surplus extraction ------------------------------------------------------------------

def full_extraction(problem, responder):
    """LP status of: efficient, IC, IR, and every type of ``responder``
    held exactly to its disagreement value."""
    rows = [({uvar(responder, tj): 1}, EQ, t) for tj, t in enumerate(problem.types[responder])]
    fs = build_system(problem, DEFAULT + ("efficiency",)).with_rows(rows, "extraction")
    return fs.solver().maximize({}).status


CONCEPTS = ("utilitarian", "nash", "egalitarian", "principal:1", "principal:2",
            "random-dictatorship", "constant-efficient")


def solve(problem, concept) -> Solution:
    if concept == "utilitarian":
        return utilitarian(problem)
    if concept == "nash":
        return generalized_nash(problem)
    if concept == "egalitarian":
        return egalitarian_solve(problem)
    if concept in ("principal:1", "principal:2"):
        return informed_principal(problem, int(concept[-1]) - 1)
    if concept == "random-dictatorship":
        return random_dictatorship(problem)
    if concept == "constant-efficient":
        return constant_efficient(problem)
    raise ValueError(f"unknown concept {concept!r}; known: {', '.join(CONCEPTS)}")


def certify(problem, solution) -> bool:
    """IC and IR of the returned mechanism (checked from scratch)."""
    m = solution.mechanism
    return check_ic(problem, m).holds and check_ir(problem, m).holds


def table10(mech):
    """``10 * mu`` per cell, as exact rationals, rows = player 1's reports."""
    return tuple(tuple(tuple(10 * x for x in lot) for lot in row) for row in mech.table)
