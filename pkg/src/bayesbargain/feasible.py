"""The polytope of feasible mechanisms and the structural LP checks.

Mechanism variables are named ``m[k,a,b]`` (probability of alternative
``k`` at profile ``(a, b)``); interim variables ``U[i,ti]``.  Constraint
groups carry tags so they can be dropped or re-added independently:
``simplex``, ``ic``, ``ir``, ``efficiency``, ``symmetry``, ``interim``
and ``extra``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .mechanism import Mechanism, check_efficiency, check_ic, check_ordinality, interim_profile
from .numerics import (EQ, GE, LE, LinearSystem, LPSolver, Polytope, fourier_motzkin_project,
                       q)
from .numerics.lp import INFEASIBLE, OPTIMAL
from .problem import frontier, has_full_support, is_independent, profile_of, satisfies_full_rank

GROUPS = ("simplex", "ic", "ir", "efficiency", "symmetry", "interim")
DEFAULT = ("simplex", "ic", "ir", "interim")


class PreconditionError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


def mvar(k, profile):
    return f"m[{k},{profile[0]},{profile[1]}]"


def uvar(i, ti):
    return f"U[{i},{ti}]"


@dataclass(frozen=True)
class FeasibilitySystem:
    problem: object
    system: LinearSystem
    groups: frozenset
    facets: dict = field(default=None, compare=False)

    @property
    def variables(self):
        return self.system.variables

    def count(self, tag) -> int:
        return sum(1 for c in self.system.constraints if c.tag == tag)

    def without(self, *tags) -> "FeasibilitySystem":
        s = self.system
        for t in tags:
            s = s.without_tag(t)
        return FeasibilitySystem(self.problem, s, self.groups - set(tags), self.facets)

    def with_rows(self, rows, tag="extra") -> "FeasibilitySystem":
        rows = [(c, rel, rhs, tag) for c, rel, rhs in rows]
        return FeasibilitySystem(self.problem, self.system.extend(rows), self.groups | {tag},
                                 self.facets)

    def solver(self) -> LPSolver:
        return LPSolver(self.system)

    def mechanism(self, point) -> Mechanism:
        """Read the mechanism table off an LP point (dict or vector)."""
        if not isinstance(point, dict):
            point = dict(zip(self.variables, point))
        p = self.problem
        return Mechanism.from_function(
            p, lambda t: tuple(point.get(mvar(k, t), Fraction(0)) for k in range(p.n_alternatives)))

    def free_dimension(self) -> int:
        """Variables minus the rank of the equality rows."""
        from .numerics import rank
        eqs = [c.coeffs for c in self.system.constraints if c.rel == EQ]
        return self.system.dimension - (rank(eqs) if eqs else 0)

    def compact(self) -> "FeasibilitySystem":
        """Drop variables pinned to zero by single-variable equality rows.

        The feasible set is unchanged up to those coordinates; LPs get much
        smaller when efficiency rules out most alternatives.
        """
        zero = set()
        for c in self.system.constraints:
            nz = [j for j, a in enumerate(c.coeffs) if a]
            if c.rel == EQ and len(nz) == 1 and c.rhs == 0:
                zero.add(nz[0])
        if not zero:
            return self
        keep = [j for j in range(self.system.dimension) if j not in zero]
        names = tuple(self.system.variables[j] for j in keep)
        rows = []
        for c in self.system.constraints:
            coeffs = tuple(c.coeffs[j] for j in keep)
            if not any(coeffs):
                if not _trivially_true(c):
                    rows.append((coeffs, c.rel, c.rhs, c.tag))
                continue
            rows.append((coeffs, c.rel, c.rhs, c.tag))
        return FeasibilitySystem(self.problem, LinearSystem(names, tuple(rows)), self.groups,
                                 self.facets)


def _trivially_true(c):
    if c.rel == LE:
        return 0 <= c.rhs
    if c.rel == GE:
        return 0 >= c.rhs
    return c.rhs == 0


def utility_coeffs(problem, i, own, report=None, weight=1):
    """Coefficients of ``weight * f(t) * u_i`` summed over the opponent's types.

    Player ``i`` has true type ``own`` and reports ``report``.
    """
    if report is None:
        report = own
    t = problem.types[i][own]
    out = {}
    for tj in range(problem.n_types(1 - i)):
        w = problem.f(profile_of(i, own, tj)) * weight
        if not w:
            continue
        cell = profile_of(i, report, tj)
        for k in range(problem.n_alternatives):
            u = t if k == 0 else problem.utilities[k - 1][i]
            if u:
                name = mvar(k, cell)
                out[name] = out.get(name, 0) + w * u
    return out


def interim_coeffs(problem, i, ti):
    """Coefficients expressing U_i(ti) in the mechanism variables."""
    return utility_coeffs(problem, i, ti, weight=1 / problem.marginal(i)[ti])


def exante_coeffs(problem, weights=None):
    """Sum over players and types of ``weights[i][ti] * f_i(ti) * U_i(ti)``."""
    out = {}
    for i in (0, 1):
        for ti in range(problem.n_types(i)):
            w = 1 if weights is None else q(weights[i][ti])
            if not w:
                continue
            for name, c in utility_coeffs(problem, i, ti, weight=w).items():
                out[name] = out.get(name, 0) + c
    return out


def _efficient_alts(problem, fr, cell_facet):
    if cell_facet is None:
        return set(fr.efficient_alternatives()) if fr.linear else None
    return set(fr.facet_alternatives(cell_facet))


def build_system(problem, include=DEFAULT, facets=None, strong=False) -> FeasibilitySystem:
    """Linear system of mechanisms satisfying the chosen constraint groups.

    Efficiency on a linear frontier forces every off-frontier alternative
    (and disagreement) to zero at each profile with positive probability
    (every profile if ``strong``).  On a non-linear frontier a facet per
    profile must be given in ``facets``.
    """
    include = set(include)
    unknown = include - set(GROUPS)
    if unknown:
        raise ValueError(f"unknown constraint groups {sorted(unknown)}")
    p = problem
    n = p.n_alternatives
    cells = p.profiles()
    names = [mvar(k, t) for t in cells for k in range(n)]
    if "interim" in include:
        names += [uvar(i, ti) for i in (0, 1) for ti in range(p.n_types(i))]
    rows = []
    if "simplex" in include:
        for t in cells:
            for k in range(n):
                rows.append(({mvar(k, t): 1}, GE, 0, "simplex"))
            rows.append(({mvar(k, t): 1 for k in range(n)}, EQ, 1, "simplex"))
    if "ic" in include:
        for i in (0, 1):
            for ti in range(p.n_types(i)):
                for r in range(p.n_types(i)):
                    if r == ti:
                        continue
                    c = dict(utility_coeffs(p, i, ti))
                    for name, v in utility_coeffs(p, i, ti, r).items():
                        c[name] = c.get(name, 0) - v
                    rows.append((c, GE, 0, "ic"))
    if "ir" in include:
        for i in (0, 1):
            for ti, t in enumerate(p.types[i]):
                rows.append((utility_coeffs(p, i, ti), GE, p.marginal(i)[ti] * t, "ir"))
    if "interim" in include:
        for i in (0, 1):
            for ti in range(p.n_types(i)):
                c = {name: -v for name, v in interim_coeffs(p, i, ti).items()}
                c[uvar(i, ti)] = 1
                rows.append((c, EQ, 0, "interim"))
    if "efficiency" in include:
        fr = frontier(p)
        if not fr.linear and facets is None:
            raise PreconditionError("efficiency on a non-linear frontier needs a facet per profile")
        target = cells if strong else p.support()
        for t in target:
            ok = _efficient_alts(p, fr, None if facets is None else facets.get(t))
            if ok is None:
                raise PreconditionError(f"no facet given for profile {t}")
            for k in range(n):
                if k not in ok:
                    rows.append(({mvar(k, t): 1}, EQ, 0, "efficiency"))
    if "symmetry" in include:
        sigma = p.mirror()
        if p.types[0] != p.types[1] or sigma is None:
            raise PreconditionError("symmetry constraints need mirrored players")
        for (a, b) in cells:
            for k in range(n):
                other = (mvar(sigma[k], (b, a)))
                here = mvar(k, (a, b))
                if (a, b, k) < (b, a, sigma[k]):
                    rows.append(({here: 1, other: -1}, EQ, 0, "symmetry"))
    system = LinearSystem.from_rows(names, rows)
    return FeasibilitySystem(p, system, frozenset(include), facets)


# projection -----------------------------------------------------------------

def project_interim(problem, system=None, symmetric=False) -> Polytope:
    """Exact set of feasible interim utility vectors.

    With ``symmetric`` the mechanism is restricted to symmetric ones and
    the result is expressed in player 1's coordinates ``u0, u1, ...``
    (player 2's are identical).
    """
    if system is None:
        include = DEFAULT + (("symmetry",) if symmetric else ())
        system = build_system(problem, include)
    if "interim" not in system.groups:
        raise PreconditionError("projection needs the interim group")
    if symmetric:
        keep = [uvar(0, ti) for ti in range(problem.n_types(0))]
    else:
        keep = [uvar(i, ti) for i in (0, 1) for ti in range(problem.n_types(i))]
    poly = fourier_motzkin_project(system.compact().system, keep)
    if symmetric:
        rename = {uvar(0, ti): f"u{ti}" for ti in range(problem.n_types(0))}
        s = poly.system
        poly = Polytope(LinearSystem(tuple(rename[v] for v in s.variables), s.constraints),
                        poly.empty)
    return poly


# gaps --------------------------------------------------------------------------

@dataclass(frozen=True)
class GapResult:
    value: Fraction | None
    status: str = OPTIMAL            # or "infeasible"
    witness: object = None           # mechanism attaining the gap
    where: tuple = ()
    lps: int = 0

    @property
    def zero(self) -> bool:
        return self.status == OPTIMAL and self.value == 0


def _max_difference(solver, fs, exprs):
    """max over ordered pairs (a, b) of expr[a] - expr[b], with a reference shortcut.

    ``exprs`` is a list of coefficient dicts.  Returns (value, witness
    point, pair, lp count).
    """
    if len(exprs) < 2:
        return Fraction(0), None, (), 0
    lps = 0

    def diff(a, b):
        c = dict(exprs[a])
        for name, v in exprs[b].items():
            c[name] = c.get(name, 0) - v
        return c
    zero = True
    for a in range(1, len(exprs)):
        for sense in ("max", "min"):
            res = solver.solve(fs.system.vector(diff(a, 0)), sense)
            lps += 1
            if res.value != 0:
                zero = False
                break
        if not zero:
            break
    if zero:
        return Fraction(0), None, (), lps
    best, arg, pair = None, None, ()
    for a in range(len(exprs)):
        for b in range(len(exprs)):
            if a == b:
                continue
            res = solver.maximize(fs.system.vector(diff(a, b)))
            lps += 1
            if best is None or res.value > best:
                best, arg, pair = res.value, res.x, (a, b)
    return best, arg, pair, lps


def _restrict(fs, coeffs):
    """Drop coefficients of variables compacted away (they are zero)."""
    names = set(fs.variables)
    return {k: v for k, v in coeffs.items() if k in names}


def gap_in_system(fs: FeasibilitySystem) -> GapResult:
    """max_i max_{t, t'} U_i(t) - U_i(t') over the given feasibility system."""
    fs = fs.compact()
    solver = fs.solver()
    if not solver.feasible:
        return GapResult(None, INFEASIBLE)
    p = fs.problem
    best, wit, where, lps = Fraction(0), None, (), 0
    for i in (0, 1):
        exprs = [_restrict(fs, interim_coeffs(p, i, ti)) for ti in range(p.n_types(i))]
        v, x, pair, n = _max_difference(solver, fs, exprs)
        lps += n
        if v > best:
            best, wit, where = v, x, (i,) + pair
    mech = fs.mechanism(wit) if wit is not None else None
    return GapResult(best, OPTIMAL, mech, where, lps)


def ordinality_gap(problem, include=("simplex", "ic", "ir", "efficiency"), facets=None,
                   strong=False) -> GapResult:
    """Largest interim utility difference between two types of one player.

    Ranges over mechanisms in the chosen system; with efficiency on a
    linear frontier and full support this is exactly zero.
    """
    return gap_in_system(build_system(problem, include, facets, strong))


def constancy_gap(problem, check_rank=True, payoffs=False) -> GapResult:
    """Largest difference of one alternative's probability between two profiles
    over efficient feasible mechanisms.

    With ``payoffs`` the selected lotteries are compared through player 1's
    payoff instead, which ignores swaps between payoff-equivalent lotteries
    (an extra alternative on the segment against the matching mix of a1, a2).
    """
    if check_rank and not satisfies_full_rank(problem):
        raise PreconditionError("beliefs do not have full rank")
    fs = build_system(problem, ("simplex", "ic", "ir", "efficiency")).compact()
    solver = fs.solver()
    if not solver.feasible:
        return GapResult(None, INFEASIBLE)
    best, wit, where, lps = Fraction(0), None, (), 0
    cells = problem.profiles()
    if payoffs:
        exprs = [_restrict(fs, {mvar(k, t): problem.utilities[k - 1][0]
                                for k in range(1, problem.n_alternatives)}) for t in cells]
        groups = [("u1", exprs)]
    else:
        groups = [(k, [_restrict(fs, {mvar(k, t): 1}) for t in cells])
                  for k in range(problem.n_alternatives)]
    for k, exprs in groups:
        v, x, pair, n = _max_difference(solver, fs, exprs)
        lps += n
        if v > best:
            best, wit, where = v, x, (k, cells[pair[0]], cells[pair[1]])
    mech = fs.mechanism(wit) if wit is not None else None
    return GapResult(best, OPTIMAL, mech, where, lps)


# non-linear frontiers: efficiency as a choice of facet per profile -----------

def facet_assignments(problem, strong=False, budget=4096):
    """All maps profile -> facet index over the relevant profiles.

    Raises :class:`BudgetExceeded` when there would be more than ``budget``.
    """
    fr = frontier(problem)
    cells = problem.profiles() if strong else problem.support()
    nf = len(fr.facets)
    total = nf ** len(cells)
    if total > budget:
        raise BudgetExceeded(f"{total} facet assignments exceed the budget of {budget}")
    for choice in product(range(nf), repeat=len(cells)):
        yield dict(zip(cells, choice))


def efficient_gap(problem, strong=False, budget=4096) -> GapResult:
    """Ordinality gap over all efficient feasible mechanisms, any frontier."""
    fr = frontier(problem)
    if fr.linear:
        return ordinality_gap(problem, strong=strong)
    best = None
    lps = 0
    for facets in facet_assignments(problem, strong, budget):
        res = ordinality_gap(problem, facets=facets, strong=strong)
        lps += res.lps + 1
        if res.status != OPTIMAL:
            continue
        if best is None or res.value > best.value:
            best = res
    if best is None:
        return GapResult(None, INFEASIBLE, lps=lps)
    return GapResult(best.value, OPTIMAL, best.witness, best.where, lps)


# interim incentive efficiency -------------------------------------------------------

@dataclass(frozen=True)
class DominanceResult:
    efficient: bool
    gain: Fraction
    certificate: Mechanism = None

    def __bool__(self):
        return self.efficient


def interim_incentive_efficient(problem, mech) -> DominanceResult:
    """No IC, IR mechanism gives every type at least as much and some type more.

    Interim utilities enter as their expressions in the mechanism
    variables, so the LP only carries the table and one slack per type.
    """
    prof = interim_profile(problem, mech)
    fs = build_system(problem, ("simplex", "ic", "ir"))
    slack = [f"s[{i},{ti}]" for i in (0, 1) for ti in range(problem.n_types(i))]
    names = fs.system.variables + tuple(slack)
    rows = [(dict(zip(fs.system.variables, c.coeffs)), c.rel, c.rhs) for c in fs.system.constraints]
    for i in (0, 1):
        for ti in range(problem.n_types(i)):
            s = f"s[{i},{ti}]"
            rows.append(({s: 1}, GE, 0))
            c = dict(interim_coeffs(problem, i, ti))
            c[s] = -1
            rows.append((c, GE, prof[i, ti]))
    system = LinearSystem.from_rows(names, rows)
    res = LPSolver(system).maximize({s: 1 for s in slack})
    if res.value == 0:
        return DominanceResult(True, Fraction(0))
    return DominanceResult(False, res.value, fs.mechanism(res.point()))


# the two-direction check under independence --------------------------------------------

@dataclass(frozen=True)
class SweepReport:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed


def ordinal_rows(problem):
    """Equalities making each player's interim utility type-independent."""
    rows = []
    for i in (0, 1):
        base = interim_coeffs(problem, i, 0)
        for ti in range(1, problem.n_types(i)):
            c = dict(interim_coeffs(problem, i, ti))
            for name, v in base.items():
                c[name] = c.get(name, 0) - v
            rows.append((c, EQ, 0))
    return rows


def verify_prop5(problem, budget=4096) -> SweepReport:
    """Independence: efficient implies ordinal, and ordinal IC mechanisms
    only disagree where both players have their highest disagreement value."""
    if not (is_independent(problem) and has_full_support(problem)):
        raise PreconditionError("needs an independent full-support prior")
    gap = efficient_gap(problem, budget=budget)
    fs = build_system(problem, ("simplex", "ic")).with_rows(ordinal_rows(problem), "ordinal")
    solver = fs.solver()
    worst = Fraction(0)
    where = None
    for t in problem.profiles():
        if all(problem.types[i][t[i]] == problem.top(i) for i in (0, 1)):
            continue
        res = solver.maximize(fs.system.vector({mvar(0, t): 1}))
        if res.value > worst:
            worst, where = res.value, t
    return SweepReport("prop5", gap.zero and worst == 0,
                       {"efficient_gap": gap.value, "max_disagreement_off_top": worst,
                        "profile": where})


def merge_identical_columns(problem, mech, player=1):
    """Merge types of ``player`` whose ex-post payoff columns coincide for both
    players; returns the reduced (problem, mechanism) pair.

    Columns are compared through the ex-post utility pairs and disagreement
    values, so merged types are indistinguishable to the mechanism.
    """
    from .mechanism import expost_utility
    from .problem import BargainingProblem
    n_own = problem.n_types(player)
    n_opp = problem.n_types(1 - player)

    def column(tj):
        return (problem.types[player][tj],) + tuple(
            tuple(expost_utility(problem, mech, profile_of(1 - player, a, tj),
                                 profile_of(1 - player, a, tj), i) for i in (0, 1))
            for a in range(n_opp))
    classes = []
    for tj in range(n_own):
        for cls in classes:
            if column(cls[0]) == column(tj):
                cls.append(tj)
                break
        else:
            classes.append([tj])
    types = list(problem.types)
    types[player] = tuple(problem.types[player][c[0]] for c in classes)
    labels = list(problem.type_labels)
    labels[player] = tuple("+".join(problem.type_labels[player][x] for x in c) for c in classes)

    def f(a, c):
        return sum(problem.f(profile_of(1 - player, a, x)) for x in c)
    if player == 1:
        prior = tuple(tuple(f(a, c) for c in classes) for a in range(n_opp))
    else:
        prior = tuple(tuple(f(b, c) for b in range(n_opp)) for c in classes)
    reduced = BargainingProblem(problem.utilities, tuple(types), prior,
                                problem.name + " merged", tuple(labels), problem.alt_labels)

    def cell(t):
        own = t[player]
        rep = classes[own][0]
        return mech(profile_of(1 - player, t[1 - player], rep))
    return reduced, Mechanism.from_function(reduced, cell)


def verify_theorem2(problem, budget=4096) -> SweepReport:
    """Non-linear frontier: zero gap when a player has two types; with three
    types each, an efficient cardinal IC mechanism is exhibited instead."""
    fr = frontier(problem)
    if fr.linear or not has_full_support(problem):
        raise PreconditionError("needs a non-linear frontier and full support")
    if min(problem.n_types(0), problem.n_types(1)) == 2:
        gap = efficient_gap(problem, budget=budget)
        return SweepReport("theorem2", gap.zero, {"gap": gap.value, "lps": gap.lps})
    from .fixtures import t2_mechanism, t2_problem
    example = t2_problem(Fraction(1, 100))
    mech = t2_mechanism(example)
    ic = check_ic(example, mech).holds
    eff = check_efficiency(example, mech).holds
    ordinal = check_ordinality(example, mech)
    prof = ordinal.info["interim"]
    return SweepReport("theorem2", ic and eff and not ordinal.holds,
                       {"counterexample": example.name, "ic": ic, "efficient": eff,
                        "cardinal_gap": prof[0, 0] - prof[0, 2]})
