"""Transferable utility with budgets.

Player ``i`` holding money ``m_i`` after alternative ``a`` gets
``v_i(a) + m_i``; money is split as ``m_1 + m_2 = b_1 + b_2``.  An
allocation is the pair ``(a, m_1)``.  Alternative ``a1`` is assumed to
maximize ``v_1 + v_2``.  With finite budgets the frontier has corners in
``{u(a1, b1 + b2)} U {u(a, 0) : a in A*}`` where ``A*`` are the
alternatives efficient without transfers; the utilitarian part is the
segment from ``Q = u(a1, 0)`` to ``R = u(a1, b1 + b2)``.

:func:`embed` turns a budgeted problem into an ordinary bargaining
problem over the frontier corners (affinely rescaled per player), so the
feasible-set machinery applies unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .feasible import PreconditionError, build_system, efficient_gap, mvar, ordinality_gap
from .mechanism import Check, check_efficiency, check_ir
from .numerics import q, upper_right_hull
from .numerics.geometry import on_segment
from .problem import BargainingProblem, frontier, has_full_support, validate

F = Fraction


@dataclass(frozen=True)
class TUProblem:
    valuations: tuple      # valuations[i][k-1] = v_i(a_k) for k >= 1
    types: tuple           # types[i] = disagreement valuations v_i(a0)
    prior: tuple
    budgets: tuple = None  # (b1, b2); None means unbounded
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "valuations",
                           tuple(tuple(q(x) for x in row) for row in self.valuations))
        object.__setattr__(self, "types", tuple(tuple(q(t) for t in ts) for ts in self.types))
        object.__setattr__(self, "prior", tuple(tuple(q(x) for x in row) for row in self.prior))
        if self.budgets is not None:
            b = tuple(q(x) for x in self.budgets)
            if any(x < 0 for x in b):
                raise ValueError("budgets must be nonnegative")
            object.__setattr__(self, "budgets", b)

    @property
    def n_alternatives(self):
        """Including the disagreement outcome."""
        return len(self.valuations[0]) + 1

    def v(self, i, k):
        return self.valuations[i][k - 1]

    def with_budgets(self, budgets):
        return TUProblem(self.valuations, self.types, self.prior, budgets, self.name)

    def conditional_min(self) -> Fraction:
        """Smallest ``f(t2 | t1)`` over all profiles."""
        out = None
        for a, row in enumerate(self.prior):
            m = sum(row)
            for x in row:
                c = x / m
                out = c if out is None else min(out, c)
        return out

    def full_support(self) -> bool:
        return all(x > 0 for row in self.prior for x in row)


def tu_violations(problem) -> list:
    """Utilitarian dominance of ``a1`` over every other alternative and disagreement."""
    out = []
    s1 = problem.v(0, 1) + problem.v(1, 1)
    for k in range(2, problem.n_alternatives):
        if problem.v(0, k) + problem.v(1, k) >= s1:
            out.append(f"a{k} sum {problem.v(0, k) + problem.v(1, k)} >= a1 sum {s1}")
    worst = max(problem.types[0]) + max(problem.types[1])
    if worst >= s1:
        out.append(f"disagreement sum {worst} >= a1 sum {s1}")
    if sum(x for row in problem.prior for x in row) != 1:
        out.append("prior does not sum to 1")
    return out


def allocation_utility(problem, k, m1, player, t=None) -> Fraction:
    """Utility of allocation ``(a_k, m1)``; ``k = 0`` needs the type value ``t``."""
    b = sum(problem.budgets)
    money = q(m1) if player == 0 else b - q(m1)
    return (q(t) if k == 0 else problem.v(player, k)) + money


def lottery_utility(problem, lottery, player, t=None) -> Fraction:
    """Expected utility of ``[((k, m1), p), ...]``."""
    return sum(q(p) * allocation_utility(problem, k, m1, player, t) for (k, m1), p in lottery)


def efficient_without_transfers(problem) -> tuple:
    """Indices ``k >= 1`` whose valuation pair is on the Pareto frontier of lotteries."""
    pts = [(problem.v(0, k), problem.v(1, k)) for k in range(1, problem.n_alternatives)]
    hull = upper_right_hull(pts)
    out = []
    for k, p in enumerate(pts, start=1):
        if p in hull or any(on_segment(p, a, b) for a, b in zip(hull, hull[1:])):
            out.append(k)
    return tuple(out)


@dataclass(frozen=True)
class TUFrontier:
    corners: tuple          # decreasing in player 2's utility
    Q: tuple
    R: tuple
    labels: tuple           # allocation (k, m1) behind each corner
    others: tuple           # corners off the utilitarian segment

    @property
    def sigma(self):
        return (self.Q, self.R)


def tu_frontier(problem) -> TUFrontier:
    if problem.budgets is None:
        raise PreconditionError("frontier corners need finite budgets")
    b = sum(problem.budgets)
    Q = (problem.v(0, 1), problem.v(1, 1) + b)
    R = (problem.v(0, 1) + b, problem.v(1, 1))
    candidates = {R: (1, b)}
    for k in efficient_without_transfers(problem):
        p = (problem.v(0, k), problem.v(1, k) + b)
        candidates.setdefault(p, (k, F(0)))
    corners = tuple(upper_right_hull(list(candidates)))
    labels = tuple(candidates[c] for c in corners)
    others = tuple(c for c in corners if c not in (Q, R))
    return TUFrontier(corners, Q, R, labels, others)


def threshold_value(problem):
    """Right-hand side of the budget condition, or None when it cannot be met."""
    m = problem.conditional_min()
    if not m:
        return None
    return (problem.v(0, 1) + problem.budgets[1] - min(problem.types[0])) / m


def threshold_holds(problem) -> bool:
    """Unbounded budgets, or ``b1`` above the threshold (global minimum of
    the conditional beliefs)."""
    if problem.budgets is None:
        return True
    rhs = threshold_value(problem)
    return rhs is not None and problem.budgets[0] > rhs


# embedding -----------------------------------------------------------------------

@dataclass(frozen=True)
class Embedding:
    problem: BargainingProblem
    frontier: TUFrontier
    scale: tuple            # per player (offset, width): u' = (u - offset) / width
    allocations: tuple      # allocation behind embedded alternative k >= 1
    sigma: tuple            # embedded alternative indices of Q and R


def embed(problem) -> Embedding:
    """Bargaining problem over the frontier corners, types ``t_i + b_i``."""
    if tu_violations(problem):
        raise PreconditionError("; ".join(tu_violations(problem)))
    fr = tu_frontier(problem)
    if len(fr.corners) < 2:
        raise PreconditionError("degenerate frontier (a single corner)")
    top, right = fr.corners[0], fr.corners[-1]      # player 2's best, player 1's best
    scale = ((top[0], right[0] - top[0]), (right[1], top[1] - right[1]))

    def norm(p):
        return tuple((p[i] - scale[i][0]) / scale[i][1] for i in (0, 1))
    order = [right, top] + [c for c in fr.corners if c not in (right, top)]
    label = dict(zip(fr.corners, fr.labels))
    types = tuple(tuple(norm_type(t + problem.budgets[i], scale[i]) for t in problem.types[i])
                  for i in (0, 1))
    emb = BargainingProblem(tuple(norm(c) for c in order), types, problem.prior,
                            (problem.name or "tu") + " embedded",
                            alt_labels=("a0",) + tuple(f"({_alt(label[c])})" for c in order))
    bad = validate(emb)
    if bad:
        raise PreconditionError("embedding invalid: " + "; ".join(map(str, bad)))
    sigma = tuple(order.index(c) + 1 for c in (fr.Q, fr.R) if c in order)
    return Embedding(emb, fr, scale, tuple(label[c] for c in order), sigma)


def norm_type(x, s):
    return (x - s[0]) / s[1]


def _alt(label):
    k, m1 = label
    return f"a{k}, m1={m1}"


def non_utilitarian_mass(emb, lottery) -> bool:
    """Is the lottery's utility pair off the utilitarian segment?"""
    return any(x for k, x in enumerate(lottery) if k and k not in emb.sigma) or bool(lottery[0])


def pi_values(emb, mech) -> tuple:
    """``Pr[u(t) off the utilitarian segment | t1]`` for each type of player 1."""
    p = emb.problem
    out = []
    for a in range(p.n_types(0)):
        m = p.marginal(0)[a]
        off = sum(p.f((a, b)) for b in range(p.n_types(1)) if non_utilitarian_mass(emb, mech((a, b))))
        out.append(off / m)
    return tuple(out)


def efficiency_forces_utilitarian(problem, mech, emb=None) -> Check:
    """Under the budget threshold an efficient IR mechanism stays on the
    utilitarian segment.  ``mech`` lives on the embedded problem."""
    emb = emb or embed(problem)
    p = emb.problem
    if not has_full_support(p):
        raise PreconditionError("needs full support")
    if not check_efficiency(p, mech).holds:
        raise PreconditionError("mechanism is not efficient")
    if not check_ir(p, mech).holds:
        raise PreconditionError("mechanism is not individually rational")
    pi = pi_values(emb, mech)
    info = {"pi": pi, "threshold": threshold_holds(problem)}
    for a, x in enumerate(pi):
        if x:
            return Check("utilitarian support", False, {"type": a, "pi": x}, info)
    return Check("utilitarian support", True, info=info)


def sigma_problem(problem) -> BargainingProblem:
    """The constant-sum problem on the utilitarian segment alone."""
    emb = embed(problem)
    p = emb.problem
    q_, r_ = (p.utilities[k - 1] for k in emb.sigma)
    scale = ((q_[0], r_[0] - q_[0]), (r_[1], q_[1] - r_[1]))
    types = tuple(tuple(norm_type(t, scale[i]) for t in p.types[i]) for i in (0, 1))
    return BargainingProblem(((1, 0), (0, 1)), types, p.prior, p.name + " segment")


def sigma_gap(problem):
    """Ordinality gap of efficient IR mechanisms on the utilitarian segment."""
    return ordinality_gap(sigma_problem(problem))


def embedded_gap(problem, budget=4096):
    """Ordinality gap of efficient mechanisms on the full embedded frontier."""
    return efficient_gap(embed(problem).problem, budget=budget)


def off_segment_search(problem):
    """An efficient IC, IR mechanism with positive mass off the segment, or None.

    Tries every facet assignment that puts some support cell on a
    non-utilitarian facet and maximizes the off-segment mass there.
    """
    emb = embed(problem)
    p = emb.problem
    fr = frontier(p)
    sig = {j for j in range(len(fr.facets)) if set(emb.sigma) <= set(fr.facet_alternatives(j))}
    cells = p.support()
    for choice in product(range(len(fr.facets)), repeat=len(cells)):
        off = [t for t, j in zip(cells, choice) if j not in sig]
        if not off:
            continue
        fs = build_system(p, ("simplex", "ic", "ir", "efficiency"), dict(zip(cells, choice)))
        obj = {mvar(k, t): 1 for t in off for k in range(1, p.n_alternatives)
               if k not in emb.sigma}
        res = fs.solver().maximize(fs.system.vector(obj))
        if res.optimal and res.value > 0:
            return fs.mechanism(res.point())
    return None


def desk_instance(b1=4, b2=1):
    """Three alternatives, ``v1 = (1, 0)``, ``v2 = (1/2, 1)``, two equally
    likely independent types ``{1/5, 2/5}`` per player."""
    half = F(1, 2)
    return TUProblem(((1, 0), (half, 1)), ((F(1, 5), F(2, 5)),) * 2,
                     ((F(1, 4),) * 2,) * 2, (b1, b2), "TU-DESK")
