"""Direct mechanisms and the per-mechanism predicates.

A mechanism assigns each reported type profile a lottery over the
alternatives, stored as a tuple indexed by alternative (entry 0 is the
probability of disagreement).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .numerics import LinearSystem, LPSolver, q
from .problem import frontier, profile_of


@dataclass(frozen=True)
class Mechanism:
    table: tuple   # table[i1][i2] -> lottery tuple

    def __post_init__(self):
        tab = tuple(tuple(tuple(q(x) for x in lot) for lot in row) for row in self.table)
        object.__setattr__(self, "table", tab)

    def __call__(self, profile) -> tuple:
        return self.table[profile[0]][profile[1]]

    @property
    def shape(self):
        return (len(self.table), len(self.table[0]) if self.table else 0)

    @property
    def width(self) -> int:
        return len(self.table[0][0])

    def cells(self):
        for a, row in enumerate(self.table):
            for b, lot in enumerate(row):
                yield (a, b), lot

    @classmethod
    def from_function(cls, problem, fn) -> "Mechanism":
        n0, n1 = problem.n_types(0), problem.n_types(1)
        return cls(tuple(tuple(tuple(fn((a, b))) for b in range(n1)) for a in range(n0)))

    @classmethod
    def constant(cls, problem, lottery) -> "Mechanism":
        lottery = tuple(q(x) for x in lottery)
        if len(lottery) != problem.n_alternatives:
            raise ValueError("lottery length must equal the number of alternatives")
        return cls.from_function(problem, lambda _: lottery)

    @classmethod
    def pure(cls, problem, k) -> "Mechanism":
        lot = [0] * problem.n_alternatives
        lot[k] = 1
        return cls.constant(problem, lot)

    @classmethod
    def mix(cls, mechs, weights) -> "Mechanism":
        weights = [q(w) for w in weights]
        first = mechs[0]

        def cell(p):
            return tuple(sum(w * m(p)[k] for m, w in zip(mechs, weights))
                         for k in range(first.width))
        rows, cols = first.shape
        return cls(tuple(tuple(cell((a, b)) for b in range(cols)) for a in range(rows)))

    def is_constant(self) -> bool:
        first = self.table[0][0]
        return all(lot == first for _, lot in self.cells())

    def problems_with(self, problem) -> list:
        """Shape and probability-vector problems relative to ``problem``."""
        out = []
        if self.shape != (problem.n_types(0), problem.n_types(1)):
            out.append(f"table shape {self.shape} does not match types")
            return out
        for p, lot in self.cells():
            if len(lot) != problem.n_alternatives:
                out.append(f"cell {p} has {len(lot)} entries")
            elif any(x < 0 for x in lot) or sum(lot) != 1:
                out.append(f"cell {p} is not a probability vector")
        return out


# utilities ----------------------------------------------------------------

def expost_utility(problem, mech, reported, true, player) -> Fraction:
    """Utility of ``player`` with true profile ``true`` when ``reported`` is announced.

    Only the player's own true type matters (private values).
    """
    lot = mech(reported)
    t = problem.types[player][true[player]]
    total = lot[0] * t
    for k in range(1, len(lot)):
        if lot[k]:
            total += lot[k] * problem.utilities[k - 1][player]
    return total


def interim_utility(problem, mech, player, type_index, report=None) -> Fraction:
    """Expected utility of a type reporting ``report`` while the opponent is truthful."""
    if report is None:
        report = type_index
    cond = problem.conditional(player)[type_index]
    total = Fraction(0)
    for tj, w in enumerate(cond):
        if w:
            total += w * expost_utility(problem, mech, profile_of(player, report, tj),
                                        profile_of(player, type_index, tj), player)
    return total


@dataclass(frozen=True)
class InterimProfile:
    values: tuple   # values[i][ti]

    def __getitem__(self, key):
        i, ti = key
        return self.values[i][ti]

    def flat(self) -> tuple:
        return self.values[0] + self.values[1]

    def __str__(self):
        return "; ".join(", ".join(str(v) for v in row) for row in self.values)


def interim_profile(problem, mech) -> InterimProfile:
    return InterimProfile(tuple(tuple(interim_utility(problem, mech, i, ti)
                                      for ti in range(problem.n_types(i)))
                                for i in (0, 1)))


def interim_lottery(problem, mech, player, type_index) -> tuple:
    """Lottery a type faces in expectation over the opponent's truthful report."""
    cond = problem.conditional(player)[type_index]
    out = [Fraction(0)] * problem.n_alternatives
    for tj, w in enumerate(cond):
        if w:
            lot = mech(profile_of(player, type_index, tj))
            for k, x in enumerate(lot):
                out[k] += w * x
    return tuple(out)


# predicate results ----------------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    holds: bool
    witness: dict = None
    info: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds

    def line(self) -> str:
        if self.holds:
            return f"{self.name}: holds"
        w = ", ".join(f"{k}={_show(v)}" for k, v in (self.witness or {}).items())
        return f"{self.name}: fails ({w})"


def _show(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, tuple):
        return "(" + ", ".join(_show(x) for x in v) + ")"
    return str(v)


@dataclass(frozen=True)
class PropertyReport:
    checks: tuple

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.checks)

    def lines(self) -> list:
        return [c.line() for c in self.checks]


def check_ic(problem, mech) -> Check:
    """Truth-telling is a Bayesian equilibrium; ties count as holding."""
    for i in (0, 1):
        for ti in range(problem.n_types(i)):
            truthful = interim_utility(problem, mech, i, ti)
            for r in range(problem.n_types(i)):
                if r == ti:
                    continue
                dev = interim_utility(problem, mech, i, ti, r)
                if dev > truthful:
                    return Check("ic", False, {"player": i, "type": ti, "report": r,
                                               "truthful": truthful, "deviation": dev})
    return Check("ic", True)


def check_ir(problem, mech) -> Check:
    binding = []
    for i in (0, 1):
        for ti, t in enumerate(problem.types[i]):
            u = interim_utility(problem, mech, i, ti)
            if u < t:
                return Check("ir", False, {"player": i, "type": ti, "interim": u, "disagreement": t})
            if u == t:
                binding.append((i, ti))
    return Check("ir", True, info={"binding": tuple(binding)})


def check_efficiency(problem, mech, mode="efficient", eps=None) -> Check:
    """``mode`` is ``"efficient"`` (prior-relevant cells), ``"strong"`` (all
    cells) or ``"eps"`` (disagreement probability at most ``eps`` on the support).
    """
    if mode == "eps":
        eps = q(eps)
        for p in problem.support():
            if mech(p)[0] > eps:
                return Check("eps-efficiency", False, {"profile": p, "disagreement": mech(p)[0]},
                             {"eps": eps})
        return Check("eps-efficiency", True, info={"eps": eps})
    if mode not in ("efficient", "strong"):
        raise ValueError(f"unknown efficiency mode {mode!r}")
    fr = frontier(problem)
    cells = problem.profiles() if mode == "strong" else problem.support()
    name = "strong efficiency" if mode == "strong" else "efficiency"
    facets = {}
    for p in cells:
        j = fr.lottery_facet(mech(p))
        if j is None:
            return Check(name, False, {"profile": p, "lottery": mech(p)})
        facets[p] = j
    return Check(name, True, info={"facets": facets})


def check_ordinality(problem, mech) -> Check:
    """Ordinal iff each player's truthful interim utility is the same for all types.

    ``info`` also classifies the mechanism as constant and/or responsive.
    """
    prof = interim_profile(problem, mech)
    responsive = any(len({interim_lottery(problem, mech, i, ti)
                          for ti in range(problem.n_types(i))}) > 1 for i in (0, 1))
    info = {"constant": mech.is_constant(), "responsive": responsive, "interim": prof}
    for i in (0, 1):
        vals = prof.values[i]
        for ti in range(1, len(vals)):
            if vals[ti] != vals[0]:
                return Check("ordinality", False, {"player": i, "types": (0, ti),
                                                   "interim": (vals[0], vals[ti])}, info)
    return Check("ordinality", True, info=info)


def check_egalitarian(problem, mech) -> Check:
    """Every type of both players gets the same surplus over disagreement."""
    prof = interim_profile(problem, mech)
    surplus = None
    first = None
    for i in (0, 1):
        for ti, t in enumerate(problem.types[i]):
            s = prof[i, ti] - t
            if surplus is None:
                surplus, first = s, (i, ti)
            elif s != surplus:
                return Check("egalitarian", False, {"first": first, "surplus_first": surplus,
                                                    "other": (i, ti), "surplus_other": s})
    return Check("egalitarian", True, info={"surplus": surplus})


def check_dpm(problem, mech) -> Check:
    """Interim utility weakly increasing in the disagreement value."""
    prof = interim_profile(problem, mech)
    for i in (0, 1):
        order = sorted(range(problem.n_types(i)), key=lambda x: problem.types[i][x])
        for a, b in zip(order, order[1:]):
            if problem.types[i][a] < problem.types[i][b] and prof[i, a] > prof[i, b]:
                return Check("dpm", False, {"player": i, "types": (a, b),
                                            "interim": (prof[i, a], prof[i, b])})
    return Check("dpm", True)


# the complete-information game behind a mechanism ---------------------------

@dataclass(frozen=True)
class ReducedGame:
    """Strategies are type reports; payoffs are the ex-post utilities of the
    reported profile evaluated at the reported types."""

    payoffs: tuple        # payoffs[i][r0][r1]
    constant_sum: bool
    total: Fraction = None

    @property
    def shape(self):
        return (len(self.payoffs[0]), len(self.payoffs[0][0]))


def reduce_to_game(problem, mech) -> ReducedGame:
    n0, n1 = problem.n_types(0), problem.n_types(1)
    pay = tuple(tuple(tuple(expost_utility(problem, mech, (a, b), (a, b), i)
                            for b in range(n1)) for a in range(n0)) for i in (0, 1))
    sums = {pay[0][a][b] + pay[1][a][b] for a, b in problem.support()}
    const = len(sums) <= 1
    return ReducedGame(pay, const, next(iter(sums)) if const and sums else None)


def is_correlated_equilibrium(game: ReducedGame, distribution) -> bool:
    """Obedience: no player gains by replacing a recommended strategy."""
    dist = tuple(tuple(q(x) for x in row) for row in distribution)
    n0, n1 = game.shape
    for r in range(n0):
        for d in range(n0):
            if d != r and sum(dist[r][c] * (game.payoffs[0][r][c] - game.payoffs[0][d][c])
                              for c in range(n1)) < 0:
                return False
    for c in range(n1):
        for d in range(n1):
            if d != c and sum(dist[r][c] * (game.payoffs[1][r][c] - game.payoffs[1][r][d])
                              for r in range(n0)) < 0:
                return False
    return True


def game_value(game: ReducedGame, player: int) -> Fraction:
    """Minimax value of a constant-sum reduced game for ``player``."""
    if not game.constant_sum:
        raise ValueError("game is not constant-sum")
    n0, n1 = game.shape
    a = game.payoffs[0]
    names = [f"x{r}" for r in range(n0)] + ["v"]
    rows = [({f"x{r}": 1}, ">=", 0) for r in range(n0)]
    rows.append(({f"x{r}": 1 for r in range(n0)}, "=", 1))
    for c in range(n1):
        coeffs = {f"x{r}": a[r][c] for r in range(n0)}
        coeffs["v"] = -1
        rows.append((coeffs, ">=", 0))
    v0 = LPSolver(LinearSystem.from_rows(names, rows)).maximize({"v": 1}).value
    if player == 0:
        return v0
    total = game.total
    if total is None:
        total = a[0][0] + game.payoffs[1][0][0]
    return total - v0


PREDICATES = ("ic", "ir", "eff", "ord", "egal", "dpm")


def property_report(problem, mech, predicates=("ic", "ir", "eff", "ord")) -> PropertyReport:
    table = {"ic": check_ic, "ir": check_ir, "eff": check_efficiency,
             "ord": check_ordinality, "egal": check_egalitarian, "dpm": check_dpm}
    out = []
    for p in predicates:
        if p == "strong":
            out.append(check_efficiency(problem, mech, "strong"))
        elif p in table:
            out.append(table[p](problem, mech))
        else:
            raise KeyError(f"unknown predicate {p!r}")
    return PropertyReport(tuple(out))
