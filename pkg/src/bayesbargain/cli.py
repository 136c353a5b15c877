"""Command line: ``bayesbargain <command> ...``.

Problem arguments are file paths or fixture names such as ``FIX-A2``.
Outputs are ``bmech/1`` documents where one exists (human notes go in
``#`` comments, so the output parses back).  Exit codes: 0 everything
holds, 2 a predicate fails (the witness is printed), 3 bad input; errors
print one line ``error: <kind>: <reason>`` on stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import io
from .durability import durability_report, summary_line
from .feasible import PreconditionError, project_interim
from .fixtures import CATALOG, fixture
from .mechanism import PREDICATES, Mechanism, PropertyReport, property_report
from .numerics import fmt
from .problem import BargainingProblem, frontier, validate
from .solutions import CONCEPTS, solve, table10
from .tu import TUProblem, threshold_holds, tu_frontier, tu_violations
from .verify import CATALOG as CHECKS
from .verify import UnknownCheck, run_check

OK, FAILED, BAD_INPUT = 0, 2, 3


class InputError(Exception):
    pass


def _load(arg, kinds=("problem",)):
    """A parsed document, or the fixture named ``arg`` (problem, mechanism)."""
    if arg.upper() in CATALOG:
        try:
            return fixture(arg)
        except TypeError as e:
            raise InputError(str(e)) from None
    if not os.path.exists(arg):
        raise InputError(f"no such file or fixture: {arg}")
    text = io.read_text(arg)
    kind = io.kind_of(text)
    if kind not in kinds:
        raise InputError(f"{arg}: expected {' or '.join(kinds)}, got {kind}")
    return io.parse(text), None


def _problem(arg, kinds=("problem",)):
    obj, _ = _load(arg, kinds)
    if not isinstance(obj, (BargainingProblem, TUProblem)):
        raise InputError(f"{arg}: not a two-player problem")
    return obj


def _mechanism(arg, problem):
    obj, mech = _load(arg, ("mechanism",))
    if isinstance(obj, Mechanism):
        mech = obj
    if mech is None:
        raise InputError(f"{arg}: fixture has no mechanism")
    bad = mech.problems_with(problem)
    if bad:
        raise InputError(f"{arg}: {bad[0]}")
    return mech


def cmd_validate(args, out):
    p = _problem(args.problem, ("problem", "tu"))
    bad = tu_violations(p) if isinstance(p, TUProblem) else validate(p)
    for v in bad:
        print(f"violation: {v}", file=out)
    if not bad:
        print("valid", file=out)
    return FAILED if bad else OK


def cmd_frontier(args, out):
    p = _problem(args.problem, ("problem", "tu"))
    if isinstance(p, TUProblem):
        fr = tu_frontier(p)
        for c, (k, m1) in zip(fr.corners, fr.labels):
            print(f"corner {fmt(c[0])} {fmt(c[1])}  a{k} m1={fmt(m1)}", file=out)
        print(f"utilitarian {fmt(fr.Q[0])} {fmt(fr.Q[1])} -- {fmt(fr.R[0])} {fmt(fr.R[1])}", file=out)
        print(f"threshold {'holds' if threshold_holds(p) else 'fails'}", file=out)
        return OK
    fr = frontier(p)
    for c in fr.corners:
        print(f"corner {fmt(c[0])} {fmt(c[1])}", file=out)
    print(f"linear {'yes' if fr.linear else 'no'}", file=out)
    return OK


def cmd_check(args, out):
    p = _problem(args.problem)
    mech = _mechanism(args.mechanism, p)
    preds = [x.strip() for x in args.predicates.split(",") if x.strip()]
    unknown = [x for x in preds if x not in PREDICATES + ("strong", "durability")]
    if unknown:
        raise InputError(f"unknown predicate {unknown[0]!r}")
    checks = list(property_report(p, mech, [x for x in preds if x != "durability"]).checks)
    if "durability" in preds:
        checks += list(durability_report(p, mech))
    report = PropertyReport(tuple(checks))
    if "durability" in preds:
        print("# " + summary_line(p, mech), file=out)
    out.write(io.emit_report(report, p.name or None))
    return OK if report.all_hold else FAILED


def cmd_project(args, out):
    p = _problem(args.problem)
    poly = project_interim(p, symmetric=args.symmetric)
    out.write(io.emit_polytope(poly, poly.vertices()))
    return OK


def cmd_solve(args, out):
    p = _problem(args.problem)
    sol = solve(p, args.concept)
    print(f"# concept: {sol.concept}", file=out)
    print(f"# interim: {sol.interim}", file=out)
    if isinstance(sol.value, float):
        print(f"# value: {sol.value:.12g} (floating point)", file=out)
    elif sol.value is not None:
        print(f"# value: {fmt(sol.value)}", file=out)
    print("# 10 mu (rows: player 1 report, cells: a0 a1 ...):", file=out)
    for row in table10(sol.mechanism):
        print("#   " + "  ".join("(" + ", ".join(fmt(x) for x in cell) + ")" for cell in row),
              file=out)
    out.write(io.emit_mechanism(sol.mechanism, p.name and f"{p.name} {sol.concept}"))
    return OK


def cmd_verify(args, out):
    res = run_check(args.check, args.seed, args.count, args.jobs)
    out.write(res.text())
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        base = os.path.join(args.out, f"{args.check}-seed{args.seed}")
        with open(base + ".txt", "w") as fh:
            fh.write(res.text())
        with open(base + ".json", "w") as fh:
            json.dump(res.to_json(), fh, indent=1, sort_keys=True)
    return OK if res.passed else FAILED


def cmd_fixtures(args, out):
    if not args.emit:
        for name in CATALOG:
            print(name, file=out)
        return OK
    name = args.emit.upper()
    if name not in CATALOG:
        raise InputError(f"unknown fixture {args.emit!r}")
    problem, mech = fixture(name)
    if not isinstance(problem, BargainingProblem):
        raise InputError(f"{name} has no bmech/1 form (it has three players)")
    os.makedirs(args.dir, exist_ok=True)
    written = []
    path = os.path.join(args.dir, f"{name}.problem")
    with open(path, "w") as fh:
        fh.write(io.emit_problem(problem))
    written.append(path)
    if mech is not None:
        path = os.path.join(args.dir, f"{name}.mechanism")
        with open(path, "w") as fh:
            fh.write(io.emit_mechanism(mech, name))
        written.append(path)
    for w in written:
        print(f"wrote {w}", file=out)
    return OK


def build_parser():
    ap = argparse.ArgumentParser(prog="bayesbargain", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="list violated assumptions")
    s.add_argument("problem")
    s.set_defaults(run=cmd_validate)

    s = sub.add_parser("frontier", help="Pareto frontier corners and linearity")
    s.add_argument("problem")
    s.set_defaults(run=cmd_frontier)

    s = sub.add_parser("check", help="property report for a mechanism")
    s.add_argument("problem")
    s.add_argument("mechanism", help="mechanism file, or a fixture name for its own mechanism")
    s.add_argument("--predicates", default="ic,ir,eff,ord",
                   help="comma list of ic,ir,eff,strong,ord,egal,dpm,durability")
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("project", help="exact set of feasible interim utilities")
    s.add_argument("problem")
    s.add_argument("--symmetric", action="store_true", help="symmetric mechanisms only")
    s.set_defaults(run=cmd_project)

    s = sub.add_parser("solve", help="mechanism chosen by a solution concept")
    s.add_argument("problem")
    s.add_argument("--concept", required=True, choices=CONCEPTS)
    s.set_defaults(run=cmd_solve)

    s = sub.add_parser("verify", help="seeded sweep of a structural check")
    s.add_argument("--check", required=True, help=", ".join(CHECKS))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=None)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", help="directory for the text and JSON evidence files")
    s.set_defaults(run=cmd_verify)

    s = sub.add_parser("fixtures", help="list fixtures or write one to files")
    s.add_argument("--emit", metavar="NAME")
    s.add_argument("--dir", default=".")
    s.set_defaults(run=cmd_fixtures)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return OK if e.code == 0 else BAD_INPUT
    try:
        return args.run(args, out)
    except (InputError, io.FormatError, UnknownCheck) as e:
        msg = e.args[0] if e.args else str(e)
        print(f"error: input: {msg}", file=sys.stderr)
    except PreconditionError as e:
        print(f"error: precondition: {e}", file=sys.stderr)
    except (ValueError, KeyError) as e:
        print(f"error: input: {e.args[0] if e.args else e}", file=sys.stderr)
    return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
