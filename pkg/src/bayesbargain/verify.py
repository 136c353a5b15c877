"""Seeded sweeps that turn the structural results into regression checks.

Each check draws ``count`` instances from its own generator; instance
``i`` of a run with seed ``s`` depends on ``(s, i)`` alone, so any record
can be replayed by itself (its problem file is part of the evidence).
Some checks also carry fixed examples that run once per sweep.

Ex-post durability is compared with efficiency on every mechanism a
sweep produces (the ``expost`` field of a record).
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial

from . import io
from .durability import DURABLE, durability, is_expost_durable, non_durability_witness
from .feasible import (DEFAULT, PreconditionError, build_system, constancy_gap, efficient_gap,
                       interim_coeffs, mvar, ordinality_gap, uvar, verify_prop5)
from .fixtures import dur_a_mechanism, dur_a_problem
from .generators import (curve_problem, instance_rng, random_problem, random_tu, signal_prior,
                         triangle_problem)
from .mechanism import (Mechanism, check_efficiency, check_ic, check_ir, check_ordinality,
                        interim_profile)
from .numerics import EQ, LE, LinearSystem, LPSolver
from .numerics.lp import OPTIMAL
from .problem import frontier, satisfies_full_rank
from .solutions import egalitarian_rows, full_extraction
from .threeplayer import three_player_example
from .tu import efficiency_forces_utilitarian, embed, embedded_gap, off_segment_search, sigma_gap

F = Fraction


class UnknownCheck(KeyError):
    pass


def expost_agrees(problem, mech) -> bool:
    """Ex-post durability and efficiency give the same verdict."""
    return is_expost_durable(problem, mech).holds == check_efficiency(problem, mech).holds


def _record(problem, passed, **values):
    out = {"passed": bool(passed), "problem": io.emit_problem(problem)}
    out.update(values)
    return out


def _random_vertex(fs, rng):
    """Vertex of the system maximizing a random integer objective, or None."""
    obj = {v: rng.randint(-5, 5) for v in fs.variables if v.startswith("m[")}
    res = fs.solver().maximize(fs.system.vector(obj))
    return fs.mechanism(res.point()) if res.optimal else None


# the individual checks -------------------------------------------------------------
# each takes (rng, **params) and returns a record dict

def _theorem1(rng):
    p = random_problem(rng, linear=True)
    gap = ordinality_gap(p)
    return _record(p, gap.zero, gap=gap.value)


def _corollary1(rng):
    n0, n1 = rng.randint(2, 4), rng.randint(2, 4)
    cells = [(a, b) for a in range(n0) for b in range(n1)]
    zero = _thin(rng.sample(cells, rng.randint(1, max(1, len(cells) // 3))), n0, n1)
    p = random_problem(rng, linear=True, zero=tuple(sorted(zero)), n_types=(n0, n1))
    gap = ordinality_gap(p, strong=True)
    return _record(p, gap.zero, gap=gap.value, zero_cells=len(zero))


def _thin(zero, n0, n1):
    """Greedy subset of ``zero`` leaving every row and column some positive cell."""
    out = set()
    for a, b in sorted(zero):
        trial = out | {(a, b)}
        if all(any((x, c) not in trial for c in range(n1)) for x in range(n0)) and \
                all(any((c, y) not in trial for c in range(n0)) for y in range(n1)):
            out = trial
    return out


def _prop3(rng):
    while True:
        n = rng.randint(2, 4)
        p = random_problem(rng, linear=True, n_types=(n, n), on_segment=False)
        if satisfies_full_rank(p):
            break
    gap = constancy_gap(p)
    payoff_gap = constancy_gap(p, payoffs=True)
    ind = random_problem(rng, linear=True, kind="independent")
    spread, witness = _spread_witness(ind)
    ordinal = ordinality_gap(ind)
    ok = gap.zero and payoff_gap.zero and spread > 0 and ordinal.zero
    extra = {}
    if witness is not None:
        ok = ok and check_ic(ind, witness).holds and check_efficiency(ind, witness).holds \
            and check_ordinality(ind, witness).holds and expost_agrees(ind, witness)
        extra["independent_mechanism"] = io.emit_mechanism(witness)
    return _record(p, ok, gap=gap.value, independent=io.emit_problem(ind),
                   independent_spread=spread, **extra)


def _spread_witness(problem):
    """First positive ``m[k,t] - m[k,t0]`` over efficient feasible mechanisms,
    scanning payoff-relevant alternatives and profiles in order."""
    fs = build_system(problem, ("simplex", "ic", "ir", "efficiency")).compact()
    solver = fs.solver()
    cells = problem.profiles()
    for k in range(1, problem.n_alternatives):
        if mvar(k, cells[0]) not in fs.variables:
            continue
        for t in cells[1:]:
            c = {mvar(k, t): 1, mvar(k, cells[0]): -1}
            res = solver.maximize(fs.system.vector({n: v for n, v in c.items()
                                                    if n in fs.variables}))
            if res.value > 0:
                return res.value, fs.mechanism(res.point())
    return F(0), None


def _prop4(rng):
    tu = random_tu(rng, sizes=(2, 2))
    emb = embed(tu)
    s_gap, e_gap = sigma_gap(tu), embedded_gap(tu)
    off = off_segment_search(tu)
    fr = frontier(emb.problem)
    sig = [j for j in range(len(fr.facets)) if set(emb.sigma) <= set(fr.facet_alternatives(j))]
    util = build_system(emb.problem, ("simplex", "ic", "ir", "efficiency"),
                        {t: sig[0] for t in emb.problem.support()})
    mech = _random_vertex(util, rng)
    forced = efficiency_forces_utilitarian(tu, mech, emb).holds if mech is not None else None
    ok = s_gap.zero and e_gap.zero and off is None and forced is not False
    return {"passed": ok, "problem": io.emit_tu(tu), "sigma_gap": s_gap.value,
            "embedded_gap": e_gap.value, "off_segment": off is not None, "pi_zero": forced}


def _prop5(rng):
    linear = rng.random() < 0.5
    sizes = (2, 4) if linear else (2, 2)
    p = random_problem(rng, sizes=sizes, alternatives=(3, 4), linear=linear, kind="independent")
    rep = verify_prop5(p)
    return _record(p, rep.passed, linear=linear, **rep.details)


def _theorem2(rng):
    n1 = rng.randint(2, 3)
    n = (2, n1) if rng.random() < 0.5 else (n1, 2)
    p = random_problem(rng, alternatives=(3, 4), linear=False, n_types=n)
    gap = efficient_gap(p)
    return _record(p, gap.zero, gap=gap.value, lps=gap.lps)


def _prop6(rng):
    p = random_problem(rng, linear=True)
    fs = build_system(p, ("simplex", "ic", "ir", "efficiency"))
    mech = _random_vertex(fs, rng)
    verdict = durability(p, mech).info["verdict"]
    expost = is_expost_durable(p, mech).holds
    return _record(p, verdict == DURABLE and expost, verdict=verdict, expost=expost,
                   mechanism=io.emit_mechanism(mech))


def _prop7(rng):
    linear = rng.random() < 0.5
    p = random_problem(rng, sizes=(2, 3), alternatives=(3, 4), linear=linear)
    mechs = [Mechanism.pure(p, k) for k in range(p.n_alternatives)]
    mechs.append(Mechanism.constant(p, (0, F(1, 2), F(1, 2)) + (0,) * (p.n_alternatives - 3)))
    mechs.append(_random_vertex(build_system(p, ("simplex", "ic", "ir")), rng))
    if linear:
        mechs.append(_random_vertex(build_system(p, ("simplex", "ic", "ir", "efficiency")), rng))
    else:
        nf = len(frontier(p).facets)
        facets = {t: rng.randrange(nf) for t in p.support()}
        m = _random_vertex(build_system(p, ("simplex", "ic", "ir", "efficiency"), facets), rng)
        if m is not None:
            mechs.append(m)
    verdicts = []
    for m in mechs:
        verdicts.append((is_expost_durable(p, m).holds, check_efficiency(p, m).holds))
    bad = [io.emit_mechanism(m) for m, (a, b) in zip(mechs, verdicts) if a != b]
    return _record(p, not bad, linear=linear, verdicts=verdicts, disagreements=bad)


def _prop8(rng):
    p = random_problem(rng, linear=rng.random() < 0.5, kind="independent",
                       alternatives=(3, 4))
    fs = build_system(p, DEFAULT)
    names = fs.variables + ("c",)
    rows = [(dict(zip(fs.variables, c.coeffs)), c.rel, c.rhs) for c in fs.system.constraints]
    system = LinearSystem.from_rows(names, rows + egalitarian_rows(p))
    mass = {mvar(k, t): p.f(t) for t in p.profiles() for k in range(1, p.n_alternatives)}
    res = LPSolver(system).maximize(mass)
    return _record(p, res.value == 0, agreement_mass=res.value)


def curve_mechanism(problem):
    """On the support curve a lottery over a1, a2 whose weight on a1 rises
    with player 1's type; disagreement everywhere else."""
    n = problem.n_types(0)
    lo, hi = problem.top(0), 1 - problem.top(1)
    mid, w = (lo + hi) / 2, (hi - lo) / 4
    zeros = (0,) * (problem.n_alternatives - 3)

    def cell(t):
        if not problem.f(t):
            return (1, 0, 0) + zeros
        alpha = mid + w * (F(2 * t[0], n - 1) - 1)
        return (0, alpha, 1 - alpha) + zeros
    return Mechanism.from_function(problem, cell)


def _cardinal_record(p, mech, **extra):
    ic, ir = check_ic(p, mech), check_ir(p, mech)
    eff, ordinal = check_efficiency(p, mech), check_ordinality(p, mech)
    agree = expost_agrees(p, mech)
    ok = ic.holds and ir.holds and eff.holds and not ordinal.holds and agree
    return ok, dict(ic=ic.holds, ir=ir.holds, efficient=eff.holds, cardinal=not ordinal.holds,
                    expost=agree, mechanism=io.emit_mechanism(mech), **extra)


def _remark1_curve(rng):
    p = curve_problem(rng)
    gap = ordinality_gap(p)
    ok, values = _cardinal_record(p, curve_mechanism(p), gap=gap.value)
    return _record(p, ok and gap.value > 0, **values)


def triangle_mechanism(problem, star, alpha, alpha1, alpha2):
    """Lower-triangle construction with threshold type indices ``star``.

    Both players at or below their threshold get ``alpha``; a high player 1
    gets ``alpha1``, a high player 2 gets ``alpha2`` (weights on a1);
    profiles off the support get disagreement.
    """
    zeros = (0,) * (problem.n_alternatives - 3)

    def cell(t):
        hi0, hi1 = t[0] > star[0], t[1] > star[1]
        if not problem.f(t) or (hi0 and hi1):
            return (1, 0, 0) + zeros
        x = alpha1 if hi0 else alpha2 if hi1 else alpha
        return (0, x, 1 - x) + zeros
    return Mechanism.from_function(problem, cell)


def triangle_search(problem, steps=12):
    """First thresholds (off the support, below the top types) and spread
    ``delta`` (halving) with ``alpha1 = alpha + delta``, ``alpha2 = alpha - delta``
    that pass a brute-force IC scan.  Returns ``(mechanism, params)``."""
    lo, hi = problem.top(0), 1 - problem.top(1)
    alpha = (lo + hi) / 2
    for s0 in range(problem.n_types(0) - 2, 0, -1):
        for s1 in range(problem.n_types(1) - 2, 0, -1):
            if problem.f((s0, s1)):
                continue
            delta = (hi - lo) / 2
            for _ in range(steps):
                delta /= 2
                mech = triangle_mechanism(problem, (s0, s1), alpha, alpha + delta, alpha - delta)
                if check_ic(problem, mech).holds:
                    return mech, {"star": (s0, s1), "alpha": alpha, "delta": delta}
    return None, None


def _remark1_triangle(rng):
    p = triangle_problem(rng)
    mech, params = triangle_search(p)
    if mech is None:
        return _record(p, False, reason="no IC parameters found")
    ok, values = _cardinal_record(p, mech, **params)
    return _record(p, ok, **values)


def _remark2(rng):
    n = rng.randint(2, 4)
    base = random_problem(rng, linear=True, n_types=(n, n))
    eps = rng.choice((F(1, 10), F(1, 20), F(1, 100)))
    noisy = base.with_prior(signal_prior(n, eps), f"signals eps={eps}")
    exact = base.with_prior(signal_prior(n, 0), "signals eps=0")
    g_noisy, g_exact = ordinality_gap(noisy), ordinality_gap(exact)
    ok, values = _cardinal_record(exact, curve_mechanism(exact))
    return _record(noisy, ok and g_noisy.zero and g_exact.value > 0, eps=eps,
                   noisy_gap=g_noisy.value, noiseless_gap=g_exact.value, **values)


def _remark3(rng, index=0):
    if index == 0:
        eps, high = F(1, 12), F(1, 5)
    else:
        eps, high = F(rng.randint(1, 100), 1200), F(rng.randint(1, 99), 300)
    p, mech = three_player_example(eps, high)
    from .threeplayer import check_efficiency as eff3, check_ic as ic3, check_ordinality as ord3
    ic, eff, (ordinal, interim) = ic3(p, mech)[0], eff3(p, mech)[0], ord3(p, mech)
    return {"passed": ic and eff and not ordinal, "eps": eps, "high": high, "ic": ic,
            "efficient": eff, "cardinal": not ordinal, "interim": interim}


def _remark4(rng):
    p = random_problem(rng, linear=True, kind="independent")
    out = {}
    ok = True
    fr = frontier(p)
    on = set(fr.efficient_alternatives())
    for eps in (F(1, 20), F(1, 10)):
        fs = build_system(p, ("simplex", "ic", "ir"))
        rows = []
        for t in p.support():
            rows.append(({mvar(0, t): 1}, LE, eps))
            rows += [({mvar(k, t): 1}, EQ, 0) for k in range(1, p.n_alternatives) if k not in on]
        fs = fs.with_rows(rows, "eps")
        solver = fs.solver()
        worst = None
        for i in (0, 1):
            for a in range(p.n_types(i)):
                for b in range(p.n_types(i)):
                    if a == b:
                        continue
                    c = dict(interim_coeffs(p, i, a))
                    for name, v in interim_coeffs(p, i, b).items():
                        c[name] = c.get(name, 0) - v
                    res = solver.maximize(fs.system.vector(c))
                    slack = res.value - eps * abs(p.types[i][a] - p.types[i][b])
                    worst = slack if worst is None else max(worst, slack)
        out[str(eps)] = worst
        ok = ok and worst <= 0
    return _record(p, ok, worst_slack=out)


def _surplus(rng):
    kind = rng.choice(("generic", "correlated"))
    n0, n1 = rng.randint(2, 4), rng.randint(2, 4)
    p = random_problem(rng, linear=rng.random() < 0.7, n_types=(n0, n1), kind=kind,
                       alternatives=(3, 4))
    if not frontier(p).linear:
        p = random_problem(rng, linear=True, n_types=(n0, n1), kind=kind)
    status = tuple(full_extraction(p, r) for r in (0, 1))
    return _record(p, all(s != OPTIMAL for s in status), kind=kind, status=status)


def _corollary2(rng):
    p = random_problem(rng, linear=True, symmetric=True)
    fs = build_system(p, ("simplex", "ic", "ir", "efficiency", "symmetry", "interim"))
    solver = fs.solver()
    bounds = {}
    ok = solver.feasible
    for i in (0, 1):
        for ti in range(p.n_types(i)):
            v = fs.system.vector({uvar(i, ti): 1})
            lo, hi = solver.minimize(v).value, solver.maximize(v).value
            bounds[f"U[{i},{ti}]"] = (lo, hi)
            ok = ok and lo == hi == F(1, 2)
    mech = _random_vertex(fs, rng)
    prof = interim_profile(p, mech).flat() if mech is not None else None
    ok = ok and prof is not None and all(x == F(1, 2) for x in prof) and expost_agrees(p, mech)
    return _record(p, ok, bounds=bounds, vertex_interim=prof)


# fixed examples run once per sweep --------------------------------------------------

def _dur_a_fixed():
    p = dur_a_problem()
    mech = dur_a_mechanism(p)
    w = non_durability_witness(p, mech)
    ex = is_expost_durable(p, mech).holds
    ok = ex and w is not None and w.lottery == (0, 0, 0, 1) and w.gain == F(1, 5)
    return {"passed": ok, "fixture": "FIX-DUR-A", "expost": ex,
            "witness": None if w is None else w.lottery, "gain": None if w is None else w.gain}


@dataclass(frozen=True)
class CheckSpec:
    run: object
    count: int
    about: str
    fixed: tuple = ()
    takes_index: bool = False


CATALOG = {
    "theorem1": CheckSpec(_theorem1, 200, "linear frontier, full support: efficient IC IR "
                          "mechanisms are ordinal (gap 0)"),
    "corollary1": CheckSpec(_corollary1, 50, "zero prior cells: strongly efficient mechanisms "
                            "are ordinal"),
    "prop3": CheckSpec(_prop3, 100, "full rank: efficient mechanisms are constant; independent "
                       "priors admit non-constant ordinal ones"),
    "prop4": CheckSpec(_prop4, 30, "budgets above the threshold: efficiency stays on the "
                       "utilitarian segment and gaps vanish"),
    "prop5": CheckSpec(_prop5, 50, "independent priors: efficient implies ordinal, ordinal "
                       "mechanisms disagree only at the top profile"),
    "theorem2": CheckSpec(_theorem2, 50, "non-linear frontier, a player with two types: "
                          "efficient mechanisms are ordinal"),
    "prop6": CheckSpec(_prop6, 50, "linear frontier: efficient mechanisms are durable",
                       (_dur_a_fixed,)),
    "prop7": CheckSpec(_prop7, 50, "ex-post durable exactly when efficient"),
    "prop8": CheckSpec(_prop8, 50, "independent full support: egalitarian IC IR mechanisms "
                       "always disagree"),
    "remark1-curve": CheckSpec(_remark1_curve, 20, "prior on a decreasing curve: a cardinal "
                               "efficient IC IR mechanism"),
    "remark1-triangle": CheckSpec(_remark1_triangle, 20, "prior on a lower triangle: a cardinal "
                                  "efficient IC IR mechanism"),
    "remark2": CheckSpec(_remark2, 20, "noisy signals of a curve prior restore ordinality"),
    "remark3": CheckSpec(_remark3, 10, "three players: an efficient cardinal IC mechanism",
                         takes_index=True),
    "remark4": CheckSpec(_remark4, 100, "independent priors, disagreement at most eps: "
                         "interim utilities are eps-Lipschitz in the type"),
    "surplus": CheckSpec(_surplus, 50, "no efficient IC IR mechanism holds a responder to "
                         "their disagreement value"),
    "corollary2": CheckSpec(_corollary2, 20, "symmetric linear problems: symmetric efficient "
                            "mechanisms give everyone 1/2"),
}


def run_instance(name, seed, index):
    """Record for one instance, with its seed and index attached."""
    spec = _spec(name)
    rng = instance_rng(f"{name}:{seed}", index)
    try:
        rec = spec.run(rng, index) if spec.takes_index else spec.run(rng)
    except PreconditionError as e:
        rec = {"passed": False, "error": str(e)}
    rec = dict(rec)
    rec["seed"], rec["index"] = seed, index
    return rec


def _spec(name):
    try:
        return CATALOG[name]
    except KeyError:
        raise UnknownCheck(f"unknown check {name!r}; known: {', '.join(CATALOG)}") from None


@dataclass
class SweepResult:
    name: str
    seed: int
    count: int
    records: list
    fixed: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def n_passed(self) -> int:
        return sum(r["passed"] for r in self.records)

    @property
    def passed(self) -> bool:
        return self.n_passed == self.count and all(f["passed"] for f in self.fixed)

    def failures(self) -> list:
        return [r for r in self.records if not r["passed"]]

    def lines(self) -> list:
        head = (f"{self.name} seed={self.seed}: {self.n_passed}/{self.count} instances pass"
                f" ({self.seconds:.1f} s)")
        out = [head]
        for f in self.fixed:
            out.append(f"  fixed {f.get('fixture', '?')}: {'pass' if f['passed'] else 'FAIL'}")
        for r in self.failures():
            why = r.get("error") or r.get("reason") or ", ".join(f"{k}={v}" for k, v in r.items()
                                              if k not in ("problem", "passed", "seed", "index")
                                              and not isinstance(v, (str, dict, list)))
            out.append(f"  FAIL index={r['index']} {why}")
        out.append("verdict: " + ("pass" if self.passed else "fail"))
        return out

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"

    def to_json(self) -> dict:
        return io.to_json({"check": self.name, "seed": self.seed, "count": self.count,
                           "passed": self.passed, "seconds": round(self.seconds, 3),
                           "fixed": self.fixed, "records": self.records})


def run_check(name, seed=0, count=None, jobs=1) -> SweepResult:
    """Run ``count`` instances (the check's default when None) of check ``name``.

    ``jobs > 1`` spreads instances over worker processes; records are
    always returned in index order.
    """
    spec = _spec(name)
    count = spec.count if count is None else int(count)
    start = time.perf_counter()
    work = partial(run_instance, name, seed)
    if jobs and jobs > 1 and count > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(work, range(count)))
    else:
        records = [work(i) for i in range(count)]
    fixed = [fn() for fn in spec.fixed]
    return SweepResult(name, seed, count, records, fixed, time.perf_counter() - start)
