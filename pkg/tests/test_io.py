import json
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from bayesbargain import io
from bayesbargain.feasible import project_interim
from bayesbargain.fixtures import dollar_problem, fixture, fixtures
from bayesbargain.mechanism import property_report
from bayesbargain.solutions import generalized_nash
from bayesbargain.tu import desk_instance

from conftest import golden, mechanisms, problems


@pytest.mark.parametrize("name, make", [
    ("fix-a2.problem", lambda: io.emit(dollar_problem())),
    ("fix-t2.problem", lambda: io.emit(fixture("FIX-T2")[0])),
    ("fix-t2.mechanism", lambda: io.emit(fixture("FIX-T2")[1], name="FIX-T2")),
    ("fix-a2-nash.mechanism", lambda: io.emit(generalized_nash(dollar_problem()).mechanism,
                                              name="FIX-A2 nash")),
    ("tu-desk.tu", lambda: io.emit(desk_instance())),
])
def test_golden_documents(name, make):
    assert make() == golden(name)


def test_golden_polytope_and_report():
    poly = project_interim(dollar_problem(), symmetric=True)
    assert io.emit(poly, vertices=poly.vertices()) == golden("fix-a2-symmetric.polytope")
    assert io.parse(golden("fix-a2-symmetric.polytope")) == poly
    p, m = fixture("FIX-T2")
    rep = property_report(p, m, ("ic", "ir", "eff", "ord", "egal", "dpm"))
    assert io.emit(rep) == golden("fix-t2.report")
    assert io.parse(golden("fix-t2.report")) == rep


def test_fixture_round_trips():
    for name, (p, m) in fixtures().items():
        if name == "FIX-3P":
            continue
        assert io.parse(io.emit(p)) == p
        if m is not None:
            assert io.parse(io.emit(m)) == m
    d = desk_instance()
    assert io.parse(io.emit(d)) == d
    assert io.parse(io.emit(d.with_budgets(None))) == d.with_budgets(None)


@given(st.data())
def test_random_round_trip(data):
    p = data.draw(problems())
    m = data.draw(mechanisms(p))
    assert io.parse_problem(io.emit_problem(p)) == p
    assert io.parse_mechanism(io.emit_mechanism(m)) == m
    assert io.kind_of(io.emit_mechanism(m)) == "mechanism"


def test_comments_and_blank_lines_are_ignored():
    text = "# a comment\n\n" + golden("fix-a2.problem").replace("[prior]", "[prior]\n# note\n")
    assert io.parse(text) == dollar_problem()


@pytest.mark.parametrize("text, msg", [
    ("", "empty input"),
    ("bmech/2 problem\n", "expected 'bmech/1 <kind>'"),
    ("bmech/1 widget\n", "unknown kind"),
    ("bmech/1 problem\n[alternatives]\na1 1 0\n", "missing section"),
    ("bmech/1 mechanism\n[table]\n0 0 | 1/0 1\n", "not a rational"),
    ("bmech/1 mechanism\n[table]\n0 0 1 0\n", "expected 'i j | p0 p1 ...'"),
    ("bmech/1 mechanism\n[table]\n0 0 | 1 0\n1 1 | 1 0\n", "missing table cell"),
])
def test_format_errors(text, msg):
    with pytest.raises(io.FormatError, match=msg):
        io.parse(text)


def test_mechanism_kind_mismatch():
    with pytest.raises(io.FormatError, match="expected a problem file"):
        io.parse_problem(golden("fix-t2.mechanism"))


def test_tagged_json_round_trip():
    value = {"q": F(3, 7), "t": (1, (F(1, 2), None)), "d": {(0, 1): [True, "x"]}}
    enc = io.to_json(value)
    assert io.from_json(json.loads(json.dumps(enc))) == value
