"""Exact two-phase simplex over the rationals.

Largest-coefficient pivoting, falling back to Bland's rule for good after a
run of degenerate pivots, so the method still terminates on degenerate
problems.
Arithmetic runs on ``gmpy2.mpq`` when available (same values, faster) and
every number handed back to callers is a ``fractions.Fraction``.

Variables are free unless the system contains a bound row ``x >= 0``
(or ``-x <= 0``); such rows are absorbed as sign restrictions and get
their dual value reconstructed afterwards, so the returned dual vector
covers every constraint of the input system.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .linear import EQ, GE, LE, LinearSystem

try:  # pragma: no cover - exercised implicitly
    import gmpy2

    def _num(f: Fraction):
        return gmpy2.mpq(f.numerator, f.denominator)

    def _frac(x) -> Fraction:
        return Fraction(int(x.numerator), int(x.denominator))

    _ZERO = gmpy2.mpq(0)
except ImportError:  # pragma: no cover
    def _num(f: Fraction):
        return f

    def _frac(x) -> Fraction:
        return Fraction(x)

    _ZERO = Fraction(0)

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    x: tuple | None = None
    duals: tuple | None = None
    ray: tuple | None = None
    variables: tuple = ()

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL

    def point(self) -> dict:
        return dict(zip(self.variables, self.x))

    def __getitem__(self, name):
        return self.x[self.variables.index(name)]


class LPSolver:
    """Phase 1 once, then any number of objectives over the same region.

    >>> s = LinearSystem.from_rows(["x"], [({"x": 1}, ">=", 0), ({"x": 1}, "<=", "3/7")])
    >>> LPSolver(s).maximize({"x": 1}).value
    Fraction(3, 7)
    """

    def __init__(self, system: LinearSystem):
        self.system = system
        n = system.dimension
        self._bound_row = [None] * n
        skip = set()
        for idx, c in enumerate(system.constraints):
            nz = [j for j, a in enumerate(c.coeffs) if a]
            if len(nz) != 1 or c.rhs != 0:
                continue
            j = nz[0]
            a = c.coeffs[j]
            if (c.rel == GE and a > 0) or (c.rel == LE and a < 0):
                if self._bound_row[j] is None:
                    self._bound_row[j] = idx
                skip.add(idx)
        # structural columns: one per nonneg variable, two per free variable
        self._cols = []          # (variable index, sign)
        for j in range(n):
            self._cols.append((j, 1))
            if self._bound_row[j] is None:
                self._cols.append((j, -1))
        nstruct = len(self._cols)

        self._rows = [i for i in range(len(system.constraints)) if i not in skip]
        m = len(self._rows)
        rels, signs, rhs = [], [], []
        for i in self._rows:
            c = system.constraints[i]
            s = -1 if c.rhs < 0 else 1
            rel = c.rel
            if s < 0 and rel != EQ:
                rel = GE if rel == LE else LE
            rels.append(rel)
            signs.append(s)
            rhs.append(_num(c.rhs * s))
        self._signs = signs
        nslack = sum(1 for r in rels if r != EQ)
        nart = sum(1 for r in rels if r != LE)
        ncols = nstruct + nslack + nart
        self._art_start = nstruct + nslack
        tab = []
        ident = []
        basis = []
        sc = nstruct
        ac = self._art_start
        for k, i in enumerate(self._rows):
            c = system.constraints[i]
            s = signs[k]
            row = [_ZERO] * ncols
            for col, (j, sg) in enumerate(self._cols):
                a = c.coeffs[j]
                if a:
                    row[col] = _num(a * s * sg)
            if rels[k] == LE:
                row[sc] = _num(Fraction(1))
                ident.append(sc)
                basis.append(sc)
                sc += 1
            else:
                if rels[k] == GE:
                    row[sc] = _num(Fraction(-1))
                    sc += 1
                row[ac] = _num(Fraction(1))
                ident.append(ac)
                basis.append(ac)
                ac += 1
            tab.append(row)
        self._ncols = ncols
        self._ident = ident

        # phase 1: maximise minus the sum of artificials
        obj = [_ZERO] * ncols
        z = _ZERO
        for k in range(m):
            if basis[k] >= self._art_start:
                for col in range(ncols):
                    if tab[k][col]:
                        obj[col] += tab[k][col]
                z -= rhs[k]
        for col in range(self._art_start, ncols):
            obj[col] -= 1
        z = _run(tab, rhs, basis, obj, z, ncols)[1]
        if z is None or z < 0:
            self.feasible = False
            return
        self.feasible = True
        # drive zero-level artificials out of the basis.  A row where that is
        # impossible is redundant; it stays (all zero outside artificial
        # columns) so the basis keeps full rank for reading off duals.
        for k in range(m):
            if basis[k] >= self._art_start:
                col = next((c for c in range(self._art_start)
                            if tab[k][c]), None)
                if col is not None:
                    _pivot(tab, rhs, None, k, col)
                    basis[k] = col
        self._tab = tab
        self._rhs = rhs
        self._basis = basis

    # ------------------------------------------------------------------
    def maximize(self, objective) -> LPResult:
        return self.solve(objective, "max")

    def minimize(self, objective) -> LPResult:
        return self.solve(objective, "min")

    def solve(self, objective, sense="max") -> LPResult:
        system = self.system
        if not self.feasible:
            return LPResult(INFEASIBLE, variables=system.variables)
        c = system.vector(objective) if isinstance(objective, Mapping) else tuple(
            Fraction(v) for v in objective)
        if len(c) != system.dimension:
            raise ValueError("objective length does not match variables")
        if sense not in ("max", "min"):
            raise ValueError("sense must be 'max' or 'min'")
        flip = -1 if sense == "min" else 1
        tab = [row[:] for row in self._tab]
        rhs = self._rhs[:]
        basis = self._basis[:]
        ncols = self._ncols
        cost = [_ZERO] * ncols
        for col, (j, sg) in enumerate(self._cols):
            if c[j]:
                cost[col] = _num(c[j] * sg * flip)
        obj = cost[:]
        z = _ZERO
        for k, b in enumerate(basis):
            cb = cost[b]
            if cb:
                row = tab[k]
                for col in range(ncols):
                    if row[col]:
                        obj[col] -= cb * row[col]
                z += cb * rhs[k]
        status, z, entering = _run(tab, rhs, basis, obj, z, self._art_start, with_ray=True)
        n = system.dimension
        if status == UNBOUNDED:
            ray = [Fraction(0)] * n
            j, sg = self._cols[entering] if entering < len(self._cols) else (None, 0)
            if j is not None:
                ray[j] += sg
            for k, b in enumerate(basis):
                a = tab[k][entering]
                if a and b < len(self._cols):
                    jj, sgb = self._cols[b]
                    ray[jj] -= sgb * _frac(a)
            return LPResult(UNBOUNDED, ray=tuple(ray), variables=system.variables)
        x = [Fraction(0)] * n
        for k, b in enumerate(basis):
            if b < len(self._cols):
                j, sg = self._cols[b]
                x[j] += sg * _frac(rhs[k])
        # duals of the normalised rows, mapped back to the input rows
        duals = [Fraction(0)] * len(system.constraints)
        for k in range(len(self._rows)):
            y = -_frac(obj[self._ident[k]])
            duals[self._rows[k]] = y * self._signs[k] * flip
        # absorbed sign restrictions take whatever is left of the objective
        resid = list(Fraction(v) for v in c)
        for i, yi in enumerate(duals):
            if yi:
                for j, a in enumerate(system.constraints[i].coeffs):
                    if a:
                        resid[j] -= yi * a
        for j, idx in enumerate(self._bound_row):
            if idx is not None and resid[j]:
                duals[idx] = resid[j] / system.constraints[idx].coeffs[j]
        value = _frac(z) * flip
        return LPResult(OPTIMAL, value, tuple(x), tuple(duals), variables=system.variables)


def _pivot(tab, rhs, obj, r, s):
    prow = tab[r]
    p = prow[s]
    if p != 1:
        inv = 1 / p
        for j in range(len(prow)):
            if prow[j]:
                prow[j] = prow[j] * inv
        rhs[r] = rhs[r] * inv
    nz = [j for j, v in enumerate(prow) if v]
    br = rhs[r]
    for i, row in enumerate(tab):
        if i == r:
            continue
        f = row[s]
        if f:
            for j in nz:
                row[j] -= f * prow[j]
            rhs[i] -= f * br
    if obj is not None:
        f = obj[s]
        if f:
            for j in nz:
                obj[j] -= f * prow[j]
            return f * br
    return 0


def _run(tab, rhs, basis, obj, z, allowed, with_ray=False, patience=50):
    """Simplex iterations.  Columns ``>= allowed`` never enter.

    The entering column has the largest reduced cost until ``patience``
    degenerate pivots in a row; from then on Bland's rule, which cannot
    cycle, finishes the run.
    """
    bland = False
    stalled = 0
    while True:
        if bland:
            s = next((j for j in range(allowed) if obj[j] > 0), None)
        else:
            s, top = None, 0
            for j in range(allowed):
                if obj[j] > top:
                    s, top = j, obj[j]
        if s is None:
            return (OPTIMAL, z, None) if with_ray else (OPTIMAL, z)
        r = None
        best = None
        for i, row in enumerate(tab):
            a = row[s]
            if a > 0:
                ratio = rhs[i] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[r]):
                    best, r = ratio, i
        if r is None:
            if with_ray:
                return UNBOUNDED, None, s
            return UNBOUNDED, None
        if not bland:
            stalled = stalled + 1 if best == 0 else 0
            bland = stalled >= patience
        z += _pivot(tab, rhs, obj, r, s)
        basis[r] = s


def solve_lp(system: LinearSystem, objective, sense: str = "max") -> LPResult:
    """Optimise a linear objective over ``system`` exactly.

    Returns an :class:`LPResult` whose ``status`` is ``"optimal"``,
    ``"infeasible"`` or ``"unbounded"``; none of these raise.
    """
    return LPSolver(system).solve(objective, sense)


def is_feasible(system: LinearSystem) -> bool:
    return LPSolver(system).feasible


def verify_certificate(system: LinearSystem, objective, sense: str, result: LPResult) -> bool:
    """Check primal feasibility, dual feasibility and equal objective values.

    This is the exact optimality proof: weak duality plus matching values.
    """
    if not result.optimal:
        return False
    c = system.vector(objective) if isinstance(objective, Mapping) else tuple(
        Fraction(v) for v in objective)
    x, y = result.x, result.duals
    if not system.satisfied_by(x):
        return False
    if sum(ci * xi for ci, xi in zip(c, x)) != result.value:
        return False
    sgn = 1 if sense == "max" else -1
    for con, yi in zip(system.constraints, y):
        if con.rel == LE and sgn * yi < 0:
            return False
        if con.rel == GE and sgn * yi > 0:
            return False
    aty = [Fraction(0)] * system.dimension
    for con, yi in zip(system.constraints, y):
        if yi:
            for j, a in enumerate(con.coeffs):
                if a:
                    aty[j] += yi * a
    if list(aty) != list(c):
        return False
    # complementary slackness
    for con, yi in zip(system.constraints, y):
        if yi and con.lhs(x) != con.rhs:
            return False
    return sum(con.rhs * yi for con, yi in zip(system.constraints, y)) == result.value
