"""A minimal n-player variant, used for the three-player exception.

Only what that example needs: interim utilities, incentive compatibility,
Pareto efficiency of each selected lottery, and ordinality.  Profiles are
tuples of type indices; alternative 0 is disagreement.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .numerics import LinearSystem, LPSolver, q


@dataclass(frozen=True)
class NPlayerProblem:
    utilities: tuple   # utilities[k-1][i] for alternatives k >= 1
    types: tuple       # types[i] = tuple of disagreement values
    prior: dict        # profile tuple -> probability

    def __post_init__(self):
        object.__setattr__(self, "utilities", tuple(tuple(q(x) for x in u) for u in self.utilities))
        object.__setattr__(self, "types", tuple(tuple(q(t) for t in ts) for ts in self.types))
        object.__setattr__(self, "prior", {tuple(p): q(x) for p, x in self.prior.items()})

    @property
    def n_players(self):
        return len(self.types)

    @property
    def n_alternatives(self):
        return len(self.utilities) + 1

    def profiles(self):
        return list(product(*(range(len(ts)) for ts in self.types)))

    def f(self, profile):
        return self.prior.get(tuple(profile), Fraction(0))

    def marginal(self, i, ti):
        return sum((self.f(p) for p in self.profiles() if p[i] == ti), Fraction(0))

    def utility(self, i, k, ti):
        return self.types[i][ti] if k == 0 else self.utilities[k - 1][i]


def interim_utility(problem, mech, i, ti, report=None) -> Fraction:
    """``mech`` maps profile tuples to lotteries (tuples indexed by alternative)."""
    if report is None:
        report = ti
    m = problem.marginal(i, ti)
    total = Fraction(0)
    for p in problem.profiles():
        if p[i] != ti or not problem.f(p):
            continue
        rep = p[:i] + (report,) + p[i + 1:]
        lot = mech[rep]
        total += problem.f(p) * sum(x * problem.utility(i, k, ti) for k, x in enumerate(lot))
    return total / m


def check_ic(problem, mech):
    """``(holds, witness)``; witness is ``(player, type, report, truthful, deviation)``."""
    for i in range(problem.n_players):
        for ti in range(len(problem.types[i])):
            truthful = interim_utility(problem, mech, i, ti)
            for r in range(len(problem.types[i])):
                if r != ti:
                    dev = interim_utility(problem, mech, i, ti, r)
                    if dev > truthful:
                        return False, (i, ti, r, truthful, dev)
    return True, None


def _lottery_efficient(problem, lot, profile) -> bool:
    """No lottery over alternatives weakly improves everyone and strictly someone.

    Decided by LP: maximise the total gain subject to no player losing.
    """
    n, m = problem.n_players, problem.n_alternatives
    names = [f"p{k}" for k in range(m)]
    base = [sum(x * problem.utility(i, k, profile[i]) for k, x in enumerate(lot)) for i in range(n)]
    rows = [({f"p{k}": 1}, ">=", 0) for k in range(m)]
    rows.append(({nm: 1 for nm in names}, "=", 1))
    for i in range(n):
        rows.append(({f"p{k}": problem.utility(i, k, profile[i]) for k in range(m)}, ">=", base[i]))
    obj = {f"p{k}": sum(problem.utility(i, k, profile[i]) for i in range(n)) for k in range(m)}
    res = LPSolver(LinearSystem.from_rows(names, rows)).maximize(obj)
    return res.value == sum(base)


def check_efficiency(problem, mech):
    for p in problem.profiles():
        if problem.f(p) > 0 and not _lottery_efficient(problem, mech[p], p):
            return False, p
    return True, None


def check_ordinality(problem, mech):
    """``(ordinal, interim)`` with interim[i][ti] the truthful interim utilities."""
    interim = tuple(tuple(interim_utility(problem, mech, i, ti) for ti in range(len(ts)))
                    for i, ts in enumerate(problem.types))
    return all(len(set(row)) == 1 for row in interim), interim


def three_player_example(eps=Fraction(1, 12), high=Fraction(1, 5)):
    """Symmetric three-player problem and the majority-favouring mechanism.

    Each player has types 0 (disagreement value 0) and 1 (value ``high``).
    Unanimous reports give the uniform lottery over a1..a3; otherwise the
    two players who agree split a fair lottery over their favourites.
    """
    eps, high = q(eps), q(high)
    if not 0 < eps <= Fraction(1, 12):
        raise ValueError("eps must lie in (0, 1/12]")
    if not 0 < high < Fraction(1, 3):
        raise ValueError("the high disagreement value must lie in (0, 1/3)")
    utilities = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    types = ((0, high),) * 3
    by_count = {0: Fraction(1, 2) - 4 * eps, 1: eps, 2: 2 * eps, 3: Fraction(1, 2) - 5 * eps}
    profiles = list(product((0, 1), repeat=3))
    prior = {p: by_count[sum(p)] for p in profiles}
    problem = NPlayerProblem(utilities, types, prior)
    third = Fraction(1, 3)
    mech = {}
    for p in profiles:
        if len(set(p)) == 1:
            mech[p] = (0, third, third, third)
        else:
            majority = [i for i in range(3) if p.count(p[i]) == 2]
            lot = [Fraction(0)] * 4
            for i in majority:
                lot[i + 1] = Fraction(1, 2)
            mech[p] = tuple(lot)
    return problem, mech
