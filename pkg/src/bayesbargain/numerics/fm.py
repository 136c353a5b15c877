"""Fourier-Motzkin projection with LP-based pruning after every step."""
from __future__ import annotations

from .linear import EQ, LE, Constraint, LinearSystem, Polytope
from .lp import LPSolver, OPTIMAL, UNBOUNDED
from .rational import primitive


def _normalize(rows):
    """Scale rows to primitive integers and keep the tightest rhs per direction.

    Returns ``None`` when a constant row ``0 <= b`` with ``b < 0`` appears.
    """
    best = {}
    for coeffs, rhs in rows:
        if not any(coeffs):
            if rhs < 0:
                return None
            continue
        c, b = primitive(coeffs, rhs)
        # primitive() keeps the sign of the scale positive, so direction is preserved
        if c not in best or b < best[c]:
            best[c] = b
    return [(c, b) for c, b in best.items()]


def _prune(variables, rows):
    """Drop rows implied by the others (one LP per row)."""
    rows = sorted(rows)
    keep = list(rows)
    i = 0
    while i < len(keep):
        others = keep[:i] + keep[i + 1:]
        if not others:
            break
        system = LinearSystem(variables, tuple(Constraint(c, LE, b) for c, b in others))
        res = LPSolver(system).maximize(keep[i][0])
        if res.status == OPTIMAL and res.value <= keep[i][1]:
            del keep[i]
        else:
            i += 1
    return keep


def _split(system: LinearSystem):
    eqs, ineqs = [], []
    for c in system.constraints:
        if c.rel == EQ:
            eqs.append((list(c.coeffs), c.rhs))
        elif c.rel == LE:
            ineqs.append((list(c.coeffs), c.rhs))
        else:
            ineqs.append(([-a for a in c.coeffs], -c.rhs))
    return eqs, ineqs


def _substitute(row, j, pivot):
    """Eliminate variable ``j`` from ``row`` using equality ``pivot``."""
    coeffs, rhs = row
    a = coeffs[j]
    if not a:
        return row
    pc, pb = pivot
    f = a / pc[j]
    return [x - f * y for x, y in zip(coeffs, pc)], rhs - f * pb


def fourier_motzkin_project(source, keep) -> Polytope:
    """Exact projection of a polytope (or linear system) onto ``keep``.

    Equalities are used for substitution first; the remaining variables
    are eliminated one at a time, cheapest pair count first, and implied
    rows are pruned by LP after each elimination.  An infeasible input
    gives a polytope flagged ``empty``.

    >>> p = Polytope.from_rows(["x", "y"], [({"x": 1, "y": 1}, "<=", 1),
    ...                                     ({"x": 1}, ">=", 0), ({"y": 1}, ">=", 0)])
    >>> sorted(str(c.rhs) for c in fourier_motzkin_project(p, ["x"]).inequalities)
    ['0', '1']
    """
    system = source.system if isinstance(source, Polytope) else source
    keep = set(keep)
    unknown = keep - set(system.variables)
    if unknown:
        raise KeyError(f"unknown variables {sorted(unknown)}")
    kept_vars = tuple(v for v in system.variables if v in keep)
    empty = Polytope(LinearSystem(kept_vars), empty=True)
    if isinstance(source, Polytope) and source.empty:
        return empty
    if not LPSolver(system).feasible:
        return empty

    variables = list(system.variables)
    eqs, ineqs = _split(system)
    elim = [j for j, v in enumerate(variables) if v not in keep]

    # equality substitution
    remaining = []
    for j in elim:
        pivot = next((e for e in eqs if e[0][j]), None)
        if pivot is None:
            remaining.append(j)
            continue
        eqs = [_substitute(e, j, pivot) for e in eqs if e is not pivot]
        ineqs = [_substitute(r, j, pivot) for r in ineqs]
    # leftover equalities become inequality pairs
    for c, b in eqs:
        ineqs.append((c, b))
        ineqs.append(([-a for a in c], -b))

    rows = _normalize([(tuple(c), b) for c, b in ineqs])
    if rows is None:
        return empty
    live = list(range(len(variables)))
    remaining = set(remaining)
    while remaining:
        def cost(j):
            pos = sum(1 for c, _ in rows if c[live.index(j)] > 0)
            neg = sum(1 for c, _ in rows if c[live.index(j)] < 0)
            return (pos * neg - pos - neg, variables[j])
        j = min(remaining, key=cost)
        k = live.index(j)
        pos = [(c, b) for c, b in rows if c[k] > 0]
        neg = [(c, b) for c, b in rows if c[k] < 0]
        new = [(c, b) for c, b in rows if c[k] == 0]
        for cp, bp in pos:
            for cn, bn in neg:
                fp, fn = -cn[k], cp[k]
                new.append((tuple(fp * x + fn * y for x, y in zip(cp, cn)), fp * bp + fn * bn))
        new = [(c[:k] + c[k + 1:], b) for c, b in new]
        live = [x for x in live if x != j]
        remaining.discard(j)
        rows = _normalize(new)
        if rows is None:
            return empty
        rows = _prune(tuple(variables[x] for x in live), rows)

    # drop columns of substituted-away variables (their coefficients are zero)
    idx = [live.index(j) for j, v in enumerate(variables) if v in keep]
    rows = [(tuple(c[x] for x in idx), b) for c, b in rows]
    rows = _normalize(rows)
    if rows is None:
        return empty
    rows = _prune(kept_vars, rows)
    return Polytope(LinearSystem(kept_vars, tuple(Constraint(c, LE, b) for c, b in sorted(rows))))


def contains_polytope(outer: Polytope, inner: Polytope) -> bool:
    """True iff every point of ``inner`` lies in ``outer`` (LP per row)."""
    if inner.empty:
        return True
    if outer.variables != inner.variables:
        raise ValueError("polytopes live over different variables")
    solver = LPSolver(inner.system)
    if not solver.feasible:
        return True
    if outer.empty:
        return False
    for c in outer.inequalities:
        res = solver.maximize(c.coeffs)
        if res.status == UNBOUNDED or res.value > c.rhs:
            return False
    return True


def same_polytope(p: Polytope, q: Polytope) -> bool:
    """Set equality by double inclusion."""
    return contains_polytope(p, q) and contains_polytope(q, p)
