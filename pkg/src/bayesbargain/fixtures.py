"""Named example problems with their companion mechanisms.

``fixture(name, **params)`` returns ``(problem, mechanism)``; the
mechanism is ``None`` where the example comes without one.  The three-
player example lives in :mod:`bayesbargain.threeplayer` and is reachable
here by name too.
"""
from __future__ import annotations

from fractions import Fraction

from .mechanism import Mechanism
from .numerics import q
from .problem import BargainingProblem

F = Fraction
PURE_CONFLICT = ((1, 0), (0, 1))


def _check(name, value, lo, hi, lo_open=True, hi_open=False):
    ok_lo = value > lo if lo_open else value >= lo
    ok_hi = value < hi if hi_open else value <= hi
    if not (ok_lo and ok_hi):
        lb = "(" if lo_open else "["
        rb = ")" if hi_open else "]"
        raise ValueError(f"{name} = {value} outside {lb}{lo}, {hi}{rb}")


def independent_prior(m0, m1):
    return tuple(tuple(q(a) * q(b) for b in m1) for a in m0)


def dollar_problem():
    """Splitting a dollar: risk-neutral type 1/10, risk-averse type 2/5 (prob 1/10)."""
    prior = independent_prior((F(9, 10), F(1, 10)), (F(9, 10), F(1, 10)))
    return BargainingProblem(PURE_CONFLICT, ((F(1, 10), F(2, 5)),) * 2, prior, "FIX-A2",
                             (("neutral", "averse"),) * 2)


# the printed solution tables of the dollar example, as probabilities
DOLLAR_TABLES = {
    "utilitarian": (((0, F(1, 2), F(1, 2)), (0, F(1, 2), F(1, 2))),
                    ((0, F(1, 2), F(1, 2)), (0, F(1, 2), F(1, 2)))),
    "nash": (((0, F(1, 2), F(1, 2)), (0, F(23, 50), F(27, 50))),
             ((0, F(27, 50), F(23, 50)), (1, 0, 0))),
    "principal": (((0, F(9, 10), F(1, 10)), (1, 0, 0)),
                  ((0, F(9, 10), F(1, 10)), (1, 0, 0))),
    "random-dictatorship": (((0, F(1, 2), F(1, 2)), (F(1, 2), F(1, 20), F(9, 20))),
                            ((F(1, 2), F(9, 20), F(1, 20)), (1, 0, 0))),
}

# the interim utility set of the dollar example (symmetric mechanisms),
# as printed: rows (coefficients on (u0, u1), relation, rhs)
DOLLAR_INTERIM_ROWS = (
    ((1, 0), ">=", F(1, 10)),
    ((0, 1), ">=", F(2, 5)),
    ((54, 1), ">=", F(252, 10)),
    ((54, 1), "<=", F(299, 10)),
    ((10, 1), "<=", F(55, 10)),
    ((4, 1), ">=", F(22, 10)),
    ((-4, 1), "<=", 2),
    ((-108, 23), "<=", F(-45, 10)),
    ((22, 1), "<=", F(141, 10)),
)


def t2_problem(eps=F(1, 100), s1=F(2, 5), s2=F(2, 5), w=F(1, 5)):
    """Three types s1, s2, w per player with almost perfectly negative correlation."""
    eps = q(eps)
    _check("eps", eps, 0, F(1, 8), lo_open=False)
    a, b = eps, F(1, 4) - 2 * eps
    prior = ((a, a, b), (a, a, b), (b, b, 4 * eps))
    return BargainingProblem(PURE_CONFLICT + ((F(7, 10), F(7, 10)),),
                             ((q(s1), q(s2), q(w)),) * 2, prior, "FIX-T2",
                             (("s1", "s2", "w"),) * 2)


def t2_mechanism(problem):
    """Differing strong reports give a1, equal strong reports a2; a strong
    report against w gives 1/6 of the strong player's favourite and 5/6 of a3;
    (w, w) gives a3."""
    def cell(p):
        a, b = p
        if a < 2 and b < 2:
            return (0, 1, 0, 0) if a != b else (0, 0, 1, 0)
        if a < 2:
            return (0, F(1, 6), 0, F(5, 6))
        if b < 2:
            return (0, 0, F(1, 6), F(5, 6))
        return (0, 0, 0, 1)
    return Mechanism.from_function(problem, cell)


def sine_problem():
    return BargainingProblem(PURE_CONFLICT, ((0, F(1, 4)),) * 2, ((F(1, 4),) * 2,) * 2, "FIX-SINE")


def exact_sin_pi(r) -> Fraction:
    """``sin(pi * r)`` for rational ``r`` where the value is rational."""
    r = q(r) % 2
    table = {F(0): 0, F(1, 2): 1, F(1): 0, F(3, 2): -1,
             F(1, 6): F(1, 2), F(5, 6): F(1, 2), F(7, 6): F(-1, 2), F(11, 6): F(-1, 2)}
    if r not in table:
        raise ValueError(f"sin(pi * {r}) is irrational")
    return F(table[r])


def sine_table(problem, freq=8, sign=1):
    """Premium table ``x -> sign * sin(freq * pi * x)`` over all report differences."""
    diffs = {a - b for a in problem.types[0] for b in problem.types[1]}
    return {x: sign * exact_sin_pi(freq * x) for x in sorted(diffs)}


def sine_fixture(freq=8):
    from .solutions import premium_mechanism
    problem = sine_problem()
    return problem, premium_mechanism(problem, sine_table(problem, freq))


def egal_problem(s=F(1, 10), t=F(1, 4), eta=F(1, 5)):
    s, t, eta = q(s), q(t), q(eta)
    _check("eta", eta, 0, F(1, 2), hi_open=True)
    if not 0 <= s < t:
        raise ValueError("need 0 <= s < t")
    same, diff = eta / 2, (1 - eta) / 2
    return BargainingProblem(PURE_CONFLICT, ((s, t),) * 2, ((same, diff), (diff, same)),
                             "FIX-EGAL", (("s", "t"),) * 2)


def egal_mechanism(problem, alpha):
    """(s, s) splits evenly, s against t gives the s player alpha, (t, t) disagrees."""
    alpha = q(alpha)

    def cell(p):
        if p == (0, 0):
            return (0, F(1, 2), F(1, 2))
        if p == (0, 1):
            return (0, alpha, 1 - alpha)
        if p == (1, 0):
            return (0, 1 - alpha, alpha)
        return (1, 0, 0)
    return Mechanism.from_function(problem, cell)


def egal_alpha(s, t, eta) -> Fraction:
    """The alpha making the class egalitarian (closed form)."""
    s, t, eta = q(s), q(t), q(eta)
    return (1 - (F(3, 2) - t) * eta - t + s) / (2 * (1 - eta))


def dur_a_problem(s=F(2, 5), w=F(1, 5)):
    """A compromise a3 worth 7/10 to both; two equally likely independent types."""
    return BargainingProblem(PURE_CONFLICT + ((F(7, 10), F(7, 10)),),
                             ((q(s), q(w)),) * 2, ((F(1, 4),) * 2,) * 2, "FIX-DUR-A",
                             (("s", "w"),) * 2)


def dur_a_mechanism(problem):
    return Mechanism.from_function(
        problem, lambda p: (0, 1, 0, 0) if p[0] == p[1] else (0, 0, 1, 0))


def dur_b_problem():
    prior = independent_prior((F(1, 10), F(9, 10)), (F(1, 10), F(9, 10)))
    return BargainingProblem(PURE_CONFLICT, ((F(2, 5), F(1, 5)),) * 2, prior, "FIX-DUR-B",
                             (("s", "w"),) * 2)


def dur_b_mechanism(problem):
    """Player 2 reporting w gets 4/5 a1 + 1/5 a2; reporting s means disagreement."""
    return Mechanism.from_function(
        problem, lambda p: (0, F(4, 5), F(1, 5)) if p[1] == 1 else (1, 0, 0))


def _a2(**kw):
    if kw:
        raise TypeError(f"FIX-A2 takes no parameters, got {sorted(kw)}")
    return dollar_problem(), None


def _t2(eps=F(1, 100), **kw):
    p = t2_problem(eps, **kw)
    return p, t2_mechanism(p)


def _egal(s=F(1, 10), t=F(1, 4), eta=F(1, 5), alpha=None):
    p = egal_problem(s, t, eta)
    if alpha is None:
        alpha = egal_alpha(s, t, eta)
    return p, egal_mechanism(p, alpha)


def _dur_a(**kw):
    p = dur_a_problem(**kw)
    return p, dur_a_mechanism(p)


def _dur_b():
    p = dur_b_problem()
    return p, dur_b_mechanism(p)


def _three(eps=F(1, 12), high=F(1, 5)):
    from .threeplayer import three_player_example
    return three_player_example(eps, high)


CATALOG = {
    "FIX-A2": _a2,
    "FIX-T2": _t2,
    "FIX-3P": _three,
    "FIX-SINE": lambda: sine_fixture(8),
    "FIX-EGAL": _egal,
    "FIX-DUR-A": _dur_a,
    "FIX-DUR-B": _dur_b,
}


def fixtures() -> dict:
    """Name -> ``(problem, mechanism)`` at default parameters."""
    return {name: make() for name, make in CATALOG.items()}


def fixture(name, **params):
    try:
        make = CATALOG[name.upper()]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(CATALOG)}") from None
    return make(**params)
