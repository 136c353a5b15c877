"""Durability: can the players be talked out of a mechanism?

Two notions.  *Ex-post*: once the mechanism's selected lottery is
announced, no constant alternative is strictly preferred by every type
still possible under the updated beliefs.  *Interim*: decided up to two
tests only, a sufficient one (interim incentive efficiency) and a
necessary one (no constant lottery is strictly preferred by every type
at the interim stage).  Anything between the two is ``unknown``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .feasible import interim_incentive_efficient
from .mechanism import Check, interim_profile
from .numerics import EQ, GE, LinearSystem, LPSolver
from .problem import profile_of

DURABLE, NOT_DURABLE, UNKNOWN = "durable", "not durable", "unknown"


def _weight(mech, t, outcome):
    """Probability that ``outcome`` is what gets announced at profile ``t``.

    An int is an alternative (announced after the draw); a tuple is a
    lottery (announced before it is drawn).
    """
    if isinstance(outcome, int):
        return mech(t)[outcome]
    return Fraction(1) if tuple(mech(t)) == tuple(outcome) else Fraction(0)


def posterior_after_outcome(problem, mech, player, type_index, outcome) -> tuple:
    """Beliefs of ``player`` of type ``type_index`` over the opponent's types
    after ``outcome`` is announced (Bayes' rule on prior times selection
    probability)."""
    cells = [profile_of(player, type_index, tj) for tj in range(problem.n_types(1 - player))]
    w = [problem.f(t) * _weight(mech, t, outcome) for t in cells]
    total = sum(w)
    if not total:
        raise ZeroDivisionError(f"outcome {outcome!r} has probability 0 for player {player} "
                                f"of type {type_index}")
    return tuple(x / total for x in w)


def improving_lottery(problem, baselines):
    """Constant lottery maximizing the smallest gain over ``baselines``.

    ``baselines`` is a list of ``(player, type_index, utility)``.  Returns
    ``(lottery, gain)``.
    """
    n = problem.n_alternatives
    names = [f"p{k}" for k in range(n)] + ["z"]
    rows = [({f"p{k}": 1}, GE, 0) for k in range(n)]
    rows.append(({f"p{k}": 1 for k in range(n)}, EQ, 1))
    for i, ti, base in baselines:
        c = {f"p{k}": problem.utility(i, k, problem.types[i][ti]) for k in range(n)}
        c["z"] = -1
        rows.append((c, GE, base))
    res = LPSolver(LinearSystem.from_rows(names, rows)).maximize({"z": 1})
    return tuple(res[f"p{k}"] for k in range(n)), res.value


def _lottery_utility(problem, lot, i, ti):
    t = problem.types[i][ti]
    return sum(x * problem.utility(i, k, t) for k, x in enumerate(lot))


def is_expost_durable(problem, mech) -> Check:
    """Every lottery the mechanism announces with positive probability
    survives: no constant lottery gives every type still possible a
    strictly higher payoff."""
    selected = []
    for t in problem.support():
        lot = tuple(mech(t))
        if lot not in selected:
            selected.append(lot)
    for lot in selected:
        cells = [t for t in problem.support() if tuple(mech(t)) == lot]
        baselines = sorted({(i, t[i]) for t in cells for i in (0, 1)})
        base = [(i, ti, _lottery_utility(problem, lot, i, ti)) for i, ti in baselines]
        better, gain = improving_lottery(problem, base)
        if gain > 0:
            return Check("ex-post durability", False,
                         {"lottery": lot, "profiles": tuple(cells), "alternative": better,
                          "gain": gain})
    return Check("ex-post durability", True, info={"lotteries": len(selected)})


def durable_sufficient(problem, mech) -> str:
    """``durable`` if no IC, IR mechanism interim-dominates ``mech``."""
    return DURABLE if interim_incentive_efficient(problem, mech) else UNKNOWN


@dataclass(frozen=True)
class Witness:
    lottery: tuple
    gain: Fraction


def non_durability_witness(problem, mech):
    """A constant lottery every type strictly prefers to ``mech``, or None.

    Beliefs do not matter for a constant alternative, so such a lottery
    is rejected by nobody and ``mech`` cannot survive the vote.
    """
    prof = interim_profile(problem, mech)
    base = [(i, ti, prof[i, ti]) for i in (0, 1) for ti in range(problem.n_types(i))
            if problem.marginal(i)[ti]]
    lot, gain = improving_lottery(problem, base)
    if gain > 0:
        return Witness(lot, gain)
    return None


def durability(problem, mech) -> Check:
    """Interim durability verdict: durable, not durable, or unknown."""
    w = non_durability_witness(problem, mech)
    if w is not None:
        return Check("durability", False, {"alternative": w.lottery, "gain": w.gain},
                     {"verdict": NOT_DURABLE})
    verdict = durable_sufficient(problem, mech)
    return Check("durability", verdict == DURABLE, None, {"verdict": verdict})


def durability_report(problem, mech) -> tuple:
    """The two checks, ex-post first."""
    return is_expost_durable(problem, mech), durability(problem, mech)


def describe_lottery(problem, lot) -> str:
    support = [k for k, x in enumerate(lot) if x]
    if len(support) == 1:
        return problem.alt_labels[support[0]] if problem.alt_labels else f"a{support[0]}"
    return " + ".join(f"{lot[k]} a{k}" for k in support)


def summary_line(problem, mech) -> str:
    ex, du = durability_report(problem, mech)
    left = "ex-post durable: " + ("yes" if ex.holds else "no")
    if du.info["verdict"] == NOT_DURABLE:
        right = f"durable: no (witness constant {describe_lottery(problem, du.witness['alternative'])})"
    elif du.info["verdict"] == DURABLE:
        right = "durable: yes"
    else:
        right = "durable: unknown"
    return f"{left}; {right}"

