"""Seeded random problem generators for sweeps.

Every draw is an exact rational.  Probabilities are integer weights in
1..1000 renormalized, so every cell is positive unless zeroed on purpose.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .problem import BargainingProblem
from .feasible import PreconditionError
from .tu import TUProblem, threshold_value

F = Fraction


def instance_rng(seed, index) -> random.Random:
    """Independent stream per (seed, index) so any instance replays alone."""
    return random.Random(f"{seed}:{index}")


def _types(rng, n, hi=F(1, 2), den=1000):
    vals = set()
    while len(vals) < n:
        vals.add(F(rng.randint(1, den - 1), den) * hi)
    return tuple(sorted(vals))


def _normalize(weights):
    total = sum(sum(row) for row in weights)
    return tuple(tuple(F(w, total) for w in row) for row in weights)


def random_prior(rng, n0, n1, kind="generic", zero=()):
    """``kind``: generic | independent | symmetric | correlated.  ``zero`` lists
    cells forced to 0.  Correlated priors put most weight on one diagonal."""
    if kind == "independent":
        m0 = [rng.randint(1, 1000) for _ in range(n0)]
        m1 = [rng.randint(1, 1000) for _ in range(n1)]
        w = [[a * b for b in m1] for a in m0]
    elif kind == "symmetric":
        if n0 != n1:
            raise ValueError("symmetric prior needs equal type counts")
        w = [[0] * n1 for _ in range(n0)]
        for a in range(n0):
            for b in range(a, n1):
                w[a][b] = w[b][a] = rng.randint(1, 1000)
    elif kind == "correlated":
        anti = rng.random() < 0.5
        w = [[rng.randint(1, 10) for _ in range(n1)] for _ in range(n0)]
        for a in range(min(n0, n1)):
            w[a][n1 - 1 - a if anti else a] = rng.randint(500, 1000)
    elif kind == "generic":
        w = [[rng.randint(1, 1000) for _ in range(n1)] for _ in range(n0)]
    else:
        raise ValueError(f"unknown prior kind {kind!r}")
    for a, b in zero:
        w[a][b] = 0
    return _normalize(w)


def _linear_extras(rng, count, on_segment=True):
    """Extra alternatives on the segment or strictly below it."""
    out = []
    for _ in range(count):
        x = F(rng.randint(1, 99), 100)
        if on_segment and rng.random() < 0.5:
            out.append((x, 1 - x))
        else:
            y = F(rng.randint(1, 99), 100) * (1 - x)
            out.append((x, y) if y < 1 - x else (x, (1 - x) / 2))
    return out


def _nonlinear_extras(rng, count):
    """At least one alternative strictly above the segment."""
    out = []
    x = F(rng.randint(20, 80), 100)
    y = 1 - x + F(rng.randint(1, 100), 1000) * min(x, 1 - x) * 2
    y = min(y, F(99, 100))
    out.append((x, y))
    for _ in range(count - 1):
        a = F(rng.randint(1, 99), 100)
        b = F(rng.randint(1, 99), 100)
        out.append((a, b))
    return out


def _symmetric_extras(rng, count, linear):
    """Extra alternatives closed under swapping the coordinates."""
    out = []
    if not linear:
        c = F(rng.randint(51, 90), 100)
        out.append((c, c))
    while len(out) < count:
        if count - len(out) >= 2 and rng.random() < 0.5:
            x = F(rng.randint(1, 49), 100)
            y = (1 - x) if linear and rng.random() < 0.5 else F(rng.randint(1, 99), 100) * (1 - x)
            if not linear or x + y <= 1:
                out += [(x, y), (y, x)]
                continue
        c = F(rng.randint(1, 50), 100)
        out.append((c, c))
    return out


def random_problem(rng, sizes=(2, 4), alternatives=(3, 5), linear=True, kind="generic",
                   symmetric=False, zero=(), n_types=None, name="random", on_segment=True):
    """A valid problem.

    ``sizes`` bounds the type counts, ``alternatives`` the number of
    alternatives including disagreement.  ``n_types`` fixes the counts.
    ``on_segment=False`` keeps linear extras strictly below the frontier.
    """
    if n_types is None:
        n0 = rng.randint(*sizes)
        n1 = n0 if symmetric else rng.randint(*sizes)
    else:
        n0, n1 = n_types
    n_alt = rng.randint(*alternatives)
    extra = n_alt - 3
    if symmetric:
        extras = _symmetric_extras(rng, extra, linear)
    elif linear:
        extras = _linear_extras(rng, extra, on_segment)
    else:
        extras = _nonlinear_extras(rng, max(extra, 1))
    utilities = ((1, 0), (0, 1)) + tuple(extras)
    t0 = _types(rng, n0)
    t1 = t0 if symmetric else _types(rng, n1)
    if symmetric:
        kind = "symmetric" if kind != "independent" else kind
        if kind == "independent":
            m = [rng.randint(1, 1000) for _ in range(n0)]
            prior = _normalize([[a * b for b in m] for a in m])
        else:
            prior = random_prior(rng, n0, n1, "symmetric", zero)
    else:
        prior = random_prior(rng, n0, n1, kind, zero)
    return BargainingProblem(utilities, (t0, t1), prior, name)


def random_tu(rng, sizes=(2, 3), alternatives=(2, 3), name="random-tu"):
    """Budgeted TU problem with ``a1`` utilitarian and ``b1`` above the threshold.

    Draws repeat (from the same stream) until the embedding is valid.
    """
    from .tu import embed
    while True:
        n0, n1 = rng.randint(*sizes), rng.randint(*sizes)
        x1 = F(rng.randint(50, 100), 100)
        y1 = F(rng.randint(0, 40), 100)
        vals = [(x1, y1)]
        for _ in range(rng.randint(*alternatives) - 1):
            y = y1 + F(rng.randint(1, 99), 100) * x1
            x = F(rng.randint(0, 99), 100) * (x1 + y1 - y)
            vals.append((x, y))
        valuations = tuple(tuple(v[i] for v in vals) for i in (0, 1))
        cap = (x1 + y1) / 3
        types = (_types(rng, n0, cap), _types(rng, n1, cap))
        prior = random_prior(rng, n0, n1)
        b2 = F(rng.randint(0, 4), 4)
        base = TUProblem(valuations, types, prior, (0, b2), name)
        b1 = threshold_value(base) + F(rng.randint(1, 200), 100)
        out = base.with_budgets((b1, b2))
        try:
            embed(out)
        except PreconditionError:
            continue
        return out


def _utilities(rng, linear=True, alternatives=(3, 5)):
    extra = rng.randint(*alternatives) - 3
    extras = _linear_extras(rng, extra) if linear else _nonlinear_extras(rng, max(extra, 1))
    return ((1, 0), (0, 1)) + tuple(extras)


def curve_problem(rng, sizes=(2, 4), name="curve"):
    """Linear frontier, prior supported on the anti-diagonal ``(a, n-1-a)``.

    With types sorted ascending the support is a strictly decreasing curve.
    """
    n = rng.randint(*sizes)
    w = [[0] * n for _ in range(n)]
    for a in range(n):
        w[a][n - 1 - a] = rng.randint(1, 1000)
    return BargainingProblem(_utilities(rng), (_types(rng, n), _types(rng, n)), _normalize(w), name)


def _grid(rng, n):
    lo = F(rng.randint(1, 100), 1000)
    step = F(rng.randint(10, 80), 1000)
    return tuple(lo + k * step for k in range(n))


def triangle_problem(rng, name="triangle"):
    """Evenly spaced types, four or five per player; the prior is positive
    exactly on profiles whose normalized positions ``x1 + x2 <= 1``."""
    n0 = n1 = rng.randint(4, 5)
    w = [[rng.randint(1, 1000) if F(a, n0 - 1) + F(b, n1 - 1) <= 1 else 0 for b in range(n1)]
         for a in range(n0)]
    return BargainingProblem(_utilities(rng), (_grid(rng, n0), _grid(rng, n1)), _normalize(w),
                             name)


def signal_prior(n, eps):
    """Uniform on the anti-diagonal, observed through independent noisy signals.

    Each player sees their own coordinate correctly with probability
    ``1 - eps`` and any other one with probability ``eps / (n - 1)``.
    """
    eps = F(eps)

    def g(s, t):
        return 1 - eps if s == t else eps / (n - 1)
    return tuple(tuple(sum(F(1, n) * g(s0, a) * g(s1, n - 1 - a) for a in range(n))
                       for s1 in range(n)) for s0 in range(n))
