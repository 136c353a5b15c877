"""Line-oriented text format ``bmech/1`` for problems, mechanisms,
budgeted problems, polytopes and property reports.

Every file starts with ``bmech/1 <kind>``; sections open with a
bracketed header.  Numbers are exact rationals written ``p/q``.  Lines
starting with ``#`` and blank lines are ignored.  Reports carry a
``[machine]`` section holding one JSON document with tagged values, so
witnesses round-trip exactly.

Problem example::

    bmech/1 problem
    name FIX-A2
    [alternatives]
    a1 1 0
    a2 0 1
    [types 1]
    neutral 1/10
    averse 2/5
    [types 2]
    neutral 1/10
    averse 2/5
    [prior]
    81/100 9/100
    9/100 1/100
"""
from __future__ import annotations

import json
from fractions import Fraction

from .mechanism import Check, InterimProfile, Mechanism, PropertyReport
from .numerics import LinearSystem, Polytope, fmt, q
from .problem import BargainingProblem
from .tu import TUProblem

VERSION = "bmech/1"


class FormatError(ValueError):
    """Malformed input; the message names the line."""


def _num(tok, line_no):
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"line {line_no}: not a rational: {tok!r}") from None


def _label(s):
    s = str(s)
    if not s or any(c.isspace() for c in s):
        raise ValueError(f"labels may not be empty or contain whitespace: {s!r}")
    return s


# reading ----------------------------------------------------------------------------

def _sections(text):
    """``(kind, header fields, {section: [(line_no, tokens)]})``."""
    lines = text.splitlines()
    body = [(n, ln.strip()) for n, ln in enumerate(lines, 1)
            if ln.strip() and not ln.strip().startswith("#")]
    if not body:
        raise FormatError("empty input")
    n, first = body[0]
    parts = first.split()
    if len(parts) != 2 or parts[0] != VERSION:
        raise FormatError(f"line {n}: expected '{VERSION} <kind>', got {first!r}")
    kind = parts[1]
    header, sections, current = {}, {}, None
    for n, ln in body[1:]:
        if ln.startswith("[") and ln.endswith("]"):
            current = ln[1:-1].strip()
            if current in sections:
                raise FormatError(f"line {n}: duplicate section [{current}]")
            sections[current] = []
        elif current is None:
            key, _, rest = ln.partition(" ")
            header[key] = rest.strip()
        else:
            sections[current].append((n, ln))
    return kind, header, sections


def _need(sections, name):
    if name not in sections:
        raise FormatError(f"missing section [{name}]")
    return sections[name]


def _labelled_rows(rows, width):
    labels, values = [], []
    for n, ln in rows:
        toks = ln.split()
        if len(toks) != width + 1:
            raise FormatError(f"line {n}: expected a label and {width} numbers")
        labels.append(toks[0])
        values.append(tuple(_num(t, n) for t in toks[1:]))
    return labels, values


def _matrix(rows):
    out = []
    for n, ln in rows:
        out.append(tuple(_num(t, n) for t in ln.split()))
    return tuple(out)


def _types(sections):
    labels, values = [], []
    for i in (1, 2):
        lab, vals = _labelled_rows(_need(sections, f"types {i}"), 1)
        labels.append(tuple(lab))
        values.append(tuple(v[0] for v in vals))
    return tuple(labels), tuple(values)


def parse_problem(text) -> BargainingProblem:
    kind, header, sections = _sections(text)
    if kind != "problem":
        raise FormatError(f"expected a problem file, got kind {kind!r}")
    alt_labels, utils = _labelled_rows(_need(sections, "alternatives"), 2)
    type_labels, types = _types(sections)
    prior = _matrix(_need(sections, "prior"))
    try:
        return BargainingProblem(tuple(utils), types, prior, header.get("name", ""),
                                 type_labels, ("a0",) + tuple(alt_labels))
    except ValueError as e:
        raise FormatError(str(e)) from None


def parse_tu(text) -> TUProblem:
    kind, header, sections = _sections(text)
    if kind != "tu":
        raise FormatError(f"expected a tu file, got kind {kind!r}")
    _, vals = _labelled_rows(_need(sections, "valuations"), 2)
    _, types = _types(sections)
    prior = _matrix(_need(sections, "prior"))
    budgets = None
    rows = _need(sections, "budgets")
    if len(rows) != 1:
        raise FormatError("[budgets] takes one line")
    n, ln = rows[0]
    if ln != "unbounded":
        toks = ln.split()
        if len(toks) != 2:
            raise FormatError(f"line {n}: expected 'b1 b2' or 'unbounded'")
        budgets = tuple(_num(t, n) for t in toks)
    valuations = (tuple(v[0] for v in vals), tuple(v[1] for v in vals))
    return TUProblem(valuations, types, prior, budgets, header.get("name", ""))


def parse_mechanism(text) -> Mechanism:
    kind, _, sections = _sections(text)
    if kind != "mechanism":
        raise FormatError(f"expected a mechanism file, got kind {kind!r}")
    cells = {}
    for n, ln in _need(sections, "table"):
        left, bar, right = ln.partition("|")
        if not bar:
            raise FormatError(f"line {n}: expected 'i j | p0 p1 ...'")
        idx = left.split()
        if len(idx) != 2 or not all(x.isdigit() for x in idx):
            raise FormatError(f"line {n}: bad profile {left.strip()!r}")
        cells[(int(idx[0]), int(idx[1]))] = tuple(_num(t, n) for t in right.split())
    if not cells:
        raise FormatError("empty [table]")
    n0 = 1 + max(a for a, _ in cells)
    n1 = 1 + max(b for _, b in cells)
    try:
        return Mechanism(tuple(tuple(cells[(a, b)] for b in range(n1)) for a in range(n0)))
    except KeyError as e:
        raise FormatError(f"missing table cell {e.args[0]}") from None


def parse_polytope(text) -> Polytope:
    kind, header, sections = _sections(text)
    if kind != "polytope":
        raise FormatError(f"expected a polytope file, got kind {kind!r}")
    names = [tok for _, ln in _need(sections, "variables") for tok in ln.split()]
    rows = []
    for n, ln in _need(sections, "rows"):
        toks = ln.split()
        if len(toks) != len(names) + 2 or toks[-2] != "<=":
            raise FormatError(f"line {n}: expected {len(names)} coefficients, '<=', rhs")
        rows.append((tuple(_num(t, n) for t in toks[:-2]), "<=", _num(toks[-1], n)))
    empty = header.get("empty", "no") == "yes"
    return Polytope(LinearSystem.from_rows(names, rows), empty)


def parse_report(text) -> PropertyReport:
    kind, _, sections = _sections(text)
    if kind != "report":
        raise FormatError(f"expected a report file, got kind {kind!r}")
    doc = from_json(json.loads(" ".join(ln for _, ln in _need(sections, "machine"))))
    return PropertyReport(tuple(Check(c["name"], c["holds"], c["witness"], c["info"])
                                for c in doc["checks"]))


PARSERS = {"problem": parse_problem, "tu": parse_tu, "mechanism": parse_mechanism,
           "polytope": parse_polytope, "report": parse_report}


def parse(text):
    kind, _, _ = _sections(text)
    if kind not in PARSERS:
        raise FormatError(f"unknown kind {kind!r}")
    return PARSERS[kind](text)


def kind_of(text) -> str:
    return _sections(text)[0]


# writing ----------------------------------------------------------------------------

def _row(values):
    return " ".join(fmt(q(v)) for v in values)


def _emit_types(out, labels, types):
    for i in (0, 1):
        out.append(f"[types {i + 1}]")
        for lab, t in zip(labels[i], types[i]):
            out.append(f"{_label(lab)} {fmt(t)}")


def emit_problem(problem) -> str:
    out = [f"{VERSION} problem"]
    if problem.name:
        out.append(f"name {problem.name}")
    out.append("[alternatives]")
    for lab, u in zip(problem.alt_labels[1:], problem.utilities):
        out.append(f"{_label(lab)} {_row(u)}")
    _emit_types(out, problem.type_labels, problem.types)
    out.append("[prior]")
    out += [_row(r) for r in problem.prior]
    return "\n".join(out) + "\n"


def emit_tu(problem) -> str:
    out = [f"{VERSION} tu"]
    if problem.name:
        out.append(f"name {problem.name}")
    out.append("[valuations]")
    for k in range(1, problem.n_alternatives):
        out.append(f"a{k} {_row((problem.v(0, k), problem.v(1, k)))}")
    labels = tuple(tuple(f"t{j}" for j in range(len(ts))) for ts in problem.types)
    _emit_types(out, labels, problem.types)
    out.append("[prior]")
    out += [_row(r) for r in problem.prior]
    out.append("[budgets]")
    out.append("unbounded" if problem.budgets is None else _row(problem.budgets))
    return "\n".join(out) + "\n"


def emit_mechanism(mech, name=None) -> str:
    out = [f"{VERSION} mechanism"]
    if name:
        out.append(f"name {name}")
    out.append("[table]")
    for (a, b), lot in mech.cells():
        out.append(f"{a} {b} | {_row(lot)}")
    return "\n".join(out) + "\n"


def emit_polytope(poly, vertices=None) -> str:
    """Rows as ``c1 ... cn <= rhs``; optional ``[vertices]`` for readers (ignored on parse)."""
    out = [f"{VERSION} polytope"]
    if poly.empty:
        out.append("empty yes")
    out.append("[variables]")
    out.append(" ".join(poly.variables))
    out.append("[rows]")
    for c in poly.inequalities:
        out.append(f"{_row(c.coeffs)} <= {fmt(c.rhs)}")
    if vertices is not None:
        out.append("[vertices]")
        out += ["# " + _row(v) for v in vertices]
    return "\n".join(out) + "\n"


def emit_report(report, title=None) -> str:
    out = [f"{VERSION} report"]
    if title:
        out.append(f"name {title}")
    out.append("[text]")
    out += ["# " + line for line in report.lines()]
    out.append("[machine]")
    doc = {"checks": [{"name": c.name, "holds": c.holds, "witness": c.witness,
                       "info": c.info} for c in report.checks]}
    out.append(json.dumps(to_json(doc), sort_keys=True))
    return "\n".join(out) + "\n"


def emit(obj, **kw) -> str:
    if isinstance(obj, BargainingProblem):
        return emit_problem(obj)
    if isinstance(obj, TUProblem):
        return emit_tu(obj)
    if isinstance(obj, Mechanism):
        return emit_mechanism(obj, **kw)
    if isinstance(obj, Polytope):
        return emit_polytope(obj, **kw)
    if isinstance(obj, PropertyReport):
        return emit_report(obj, **kw)
    raise TypeError(f"cannot emit {type(obj).__name__}")


# tagged JSON ------------------------------------------------------------------------

def to_json(x):
    """JSON-safe form keeping Fractions, tuples and non-string dict keys."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return {"$q": fmt(x)}
    if isinstance(x, float):
        return x
    if isinstance(x, tuple):
        return {"$t": [to_json(v) for v in x]}
    if isinstance(x, list):
        return [to_json(v) for v in x]
    if isinstance(x, dict):
        if all(isinstance(k, str) for k in x):
            return {k: to_json(v) for k, v in x.items()}
        return {"$d": [[to_json(k), to_json(v)] for k, v in x.items()]}
    if isinstance(x, InterimProfile):
        return {"$u": to_json(x.values)}
    if isinstance(x, Mechanism):
        return {"$m": to_json(x.table)}
    return str(x)


def from_json(x):
    if isinstance(x, list):
        return [from_json(v) for v in x]
    if isinstance(x, dict):
        if set(x) == {"$q"}:
            return Fraction(x["$q"])
        if set(x) == {"$t"}:
            return tuple(from_json(v) for v in x["$t"])
        if set(x) == {"$u"}:
            return InterimProfile(from_json(x["$u"]))
        if set(x) == {"$m"}:
            return Mechanism(from_json(x["$m"]))
        if set(x) == {"$d"}:
            return {_hashable(from_json(k)): from_json(v) for k, v in x["$d"]}
        return {k: from_json(v) for k, v in x.items()}
    return x


def _hashable(k):
    return tuple(_hashable(v) for v in k) if isinstance(k, (list, tuple)) else k


def read_text(path) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()
