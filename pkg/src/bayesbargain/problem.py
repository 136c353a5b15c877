"""Two-player bargaining problems with privately known disagreement values.

Alternative 0 is the disagreement outcome.  Player ``i`` (0 or 1) of
type ``t`` gets ``t`` from it; every other alternative ``k >= 1`` gives
the fixed utility pair ``utilities[k-1]``.  Alternative 1 is player 0's
favourite and alternative 2 player 1's favourite, so the pairs for
those two are (1, 0) and (0, 1).

Types are referred to by their index in ``types[i]``.  Two types of the
same player may share a disagreement value (they then differ only in
beliefs).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .numerics import q, rank, upper_right_hull
from .numerics.geometry import on_segment


@dataclass(frozen=True)
class BargainingProblem:
    utilities: tuple
    types: tuple
    prior: tuple
    name: str = ""
    type_labels: tuple = None
    alt_labels: tuple = None

    def __post_init__(self):
        utils = tuple((q(a), q(b)) for a, b in self.utilities)
        types = tuple(tuple(q(t) for t in ts) for ts in self.types)
        if len(types) != 2:
            raise ValueError("two players expected")
        prior = tuple(tuple(q(x) for x in row) for row in self.prior)
        if len(prior) != len(types[0]) or any(len(r) != len(types[1]) for r in prior):
            raise ValueError("prior shape must be |T1| x |T2|")
        object.__setattr__(self, "utilities", utils)
        object.__setattr__(self, "types", types)
        object.__setattr__(self, "prior", prior)
        if self.type_labels is None:
            labels = tuple(tuple(str(t) for t in ts) for ts in types)
            object.__setattr__(self, "type_labels", labels)
        else:
            object.__setattr__(self, "type_labels", tuple(tuple(ls) for ls in self.type_labels))
        if self.alt_labels is None:
            object.__setattr__(self, "alt_labels",
                               tuple(f"a{k}" for k in range(len(utils) + 1)))

    # basic shape -------------------------------------------------------
    @property
    def n_alternatives(self) -> int:
        """Number of alternatives including the disagreement outcome."""
        return len(self.utilities) + 1

    def n_types(self, i) -> int:
        return len(self.types[i])

    def profiles(self):
        """All type profiles as index pairs, row-major."""
        return list(product(range(len(self.types[0])), range(len(self.types[1]))))

    def f(self, profile) -> Fraction:
        return self.prior[profile[0]][profile[1]]

    def support(self):
        return [p for p in self.profiles() if self.f(p) > 0]

    def utility(self, i, k, t=None) -> Fraction:
        """Utility of alternative ``k`` to player ``i``; ``t`` is needed for k = 0."""
        if k == 0:
            return t
        return self.utilities[k - 1][i]

    def type_value(self, i, index) -> Fraction:
        return self.types[i][index]

    def top(self, i) -> Fraction:
        return max(self.types[i])

    def bottom(self, i) -> Fraction:
        return min(self.types[i])

    # beliefs -----------------------------------------------------------
    def marginal(self, i) -> tuple:
        if i == 0:
            return tuple(sum(row) for row in self.prior)
        return tuple(sum(row[j] for row in self.prior) for j in range(len(self.types[1])))

    def conditional(self, i) -> tuple:
        """``conditional(i)[ti][tj]`` = probability of opponent type tj given own ti."""
        marg = self.marginal(i)
        rows = []
        for ti in range(len(self.types[i])):
            if marg[ti] == 0:
                raise ZeroDivisionError(f"player {i} type {ti} has zero probability")
            cells = [self.f(profile_of(i, ti, tj)) for tj in range(len(self.types[1 - i]))]
            rows.append(tuple(c / marg[ti] for c in cells))
        return tuple(rows)

    def beliefs(self) -> tuple:
        return (self.conditional(0), self.conditional(1))

    # transforms ----------------------------------------------------------
    def with_prior(self, prior, name=None) -> "BargainingProblem":
        return BargainingProblem(self.utilities, self.types, prior, name or self.name,
                                 self.type_labels, self.alt_labels)

    def with_types(self, types, name=None) -> "BargainingProblem":
        return BargainingProblem(self.utilities, types, self.prior, name or self.name,
                                 None, self.alt_labels)

    def mirror(self):
        """Involution on alternatives swapping the players' roles, or None.

        ``sigma[k]`` is the alternative whose utility pair is the mirror
        image of ``k``'s; ``sigma[0] == 0``.
        """
        n = self.n_alternatives
        sigma = [None] * n
        sigma[0] = 0
        for k in range(1, n):
            if sigma[k] is not None:
                continue
            a, b = self.utilities[k - 1]
            if a == b:
                sigma[k] = k
                continue
            match = next((l for l in range(1, n) if sigma[l] is None and l != k
                          and self.utilities[l - 1] == (b, a)), None)
            if match is None:
                return None
            sigma[k], sigma[match] = match, k
        return tuple(sigma)


def profile_of(i, own, other):
    """Profile index pair with player ``i`` at ``own`` and the opponent at ``other``."""
    return (own, other) if i == 0 else (other, own)


@dataclass(frozen=True)
class Violation:
    invariant: str
    message: str
    where: tuple = ()

    def __str__(self):
        return f"{self.invariant}: {self.message}"


def validate(problem: BargainingProblem) -> list:
    """Every violated model assumption, each naming the offending indices.

    Type values are allowed to be 0 (weakly below every non-disagreement
    alternative); the disagreement outcome must still be strictly worse
    than one's favourite alternative.
    """
    out = []
    u = problem.utilities
    if len(u) < 2:
        out.append(Violation("alternatives", "need at least a1 and a2"))
    else:
        if u[0] != (1, 0):
            out.append(Violation("normalization", f"a1 must give (1, 0), got ({u[0][0]}, {u[0][1]})", (1,)))
        if u[1] != (0, 1):
            out.append(Violation("normalization", f"a2 must give (0, 1), got ({u[1][0]}, {u[1][1]})", (2,)))
    for k in range(3, problem.n_alternatives):
        for i in (0, 1):
            v = u[k - 1][i]
            if not 0 < v < 1:
                out.append(Violation("ordinal structure",
                                     f"u{i + 1}(a{k}) = {v} not strictly between 0 and 1", (k, i)))
    for i in (0, 1):
        if not problem.types[i]:
            out.append(Violation("types", f"player {i + 1} has no types", (i,)))
        for idx, t in enumerate(problem.types[i]):
            if not 0 <= t < 1:
                out.append(Violation("ordinal structure",
                                     f"player {i + 1} type {idx} value {t} outside [0, 1)", (i, idx)))
    if all(problem.types):
        s = problem.top(0) + problem.top(1)
        if s >= 1:
            out.append(Violation("dominance",
                                 f"max t1 + max t2 = {s} >= 1, disagreement is not dominated by a lottery over a1, a2"))
    total = Fraction(0)
    for p in problem.profiles():
        x = problem.f(p)
        total += x
        if x < 0:
            out.append(Violation("prior", f"negative probability {x}", p))
    if total != 1:
        out.append(Violation("prior", f"probabilities sum to {total}, not 1"))
    for i in (0, 1):
        for idx, m in enumerate(problem.marginal(i)):
            if m <= 0:
                out.append(Violation("prior", f"player {i + 1} type {idx} has marginal {m}", (i, idx)))
    return out


def has_full_support(problem) -> bool:
    return all(problem.f(p) > 0 for p in problem.profiles())


def is_independent(problem) -> bool:
    m0, m1 = problem.marginal(0), problem.marginal(1)
    return all(problem.prior[a][b] == m0[a] * m1[b] for a, b in problem.profiles())


def satisfies_full_rank(problem) -> bool:
    """Each player's conditional belief vectors are linearly independent."""
    for i in (0, 1):
        rows = problem.conditional(i)
        if rank(rows) < len(rows):
            return False
    return True


def is_symmetric(problem) -> bool:
    if problem.types[0] != problem.types[1]:
        return False
    if problem.mirror() is None:
        return False
    n = len(problem.types[0])
    return all(problem.prior[a][b] == problem.prior[b][a] for a in range(n) for b in range(n))


@dataclass(frozen=True)
class Frontier:
    """Corners of the Pareto frontier of the alternatives' utility pairs.

    ``corners`` run from player 1's best corner (0, 1) down to (1, 0).
    ``alternatives[k]`` lists the facet indices alternative k lies on.
    """

    corners: tuple
    points: tuple = field(repr=False)

    @property
    def linear(self) -> bool:
        return all(on_segment(c, (1, 0), (0, 1)) for c in self.corners)

    @property
    def facets(self) -> tuple:
        return tuple(zip(self.corners, self.corners[1:]))

    def facets_of(self, point) -> tuple:
        """Indices of facets containing ``point`` (empty when off the frontier)."""
        return tuple(j for j, (a, b) in enumerate(self.facets) if on_segment(point, a, b))

    def on_frontier(self, point) -> bool:
        return bool(self.facets_of(point))

    def facet_alternatives(self, j) -> tuple:
        """Alternatives (k >= 1) whose utility pair lies on facet ``j``."""
        a, b = self.facets[j]
        return tuple(k for k, p in enumerate(self.points, start=1) if on_segment(p, a, b))

    def efficient_alternatives(self) -> tuple:
        return tuple(k for k, p in enumerate(self.points, start=1) if self.on_frontier(p))

    def lottery_facet(self, lottery):
        """A facet carrying the whole support of ``lottery``, or None.

        ``lottery`` is indexed by alternative with entry 0 the disagreement
        outcome, which is never efficient.
        """
        if lottery[0] != 0:
            return None
        support = [k for k in range(1, len(lottery)) if lottery[k] != 0]
        for j in range(len(self.facets)):
            on = set(self.facet_alternatives(j))
            if all(k in on for k in support):
                return j
        return None


def frontier(problem) -> Frontier:
    """Pareto frontier of the non-disagreement alternatives."""
    pts = problem.utilities
    return Frontier(tuple(upper_right_hull(pts)), tuple(pts))
