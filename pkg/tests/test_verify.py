import json

import pytest

from bayesbargain import CHECKS, io, ordinality_gap, run_check
from bayesbargain.generators import instance_rng, random_prior, random_problem, random_tu
from bayesbargain.problem import has_full_support, validate
from bayesbargain.verify import UnknownCheck, run_instance


def test_instance_streams_are_independent_of_order():
    a = [instance_rng(7, i).random() for i in range(5)]
    b = [instance_rng(7, i).random() for i in reversed(range(5))]
    assert a == b[::-1]
    assert instance_rng(7, 0).random() != instance_rng(8, 0).random()


@pytest.mark.parametrize("kind", ["generic", "independent", "symmetric", "correlated"])
def test_generated_priors(kind):
    rng = instance_rng("priors", 1)
    for _ in range(20):
        p = random_problem(rng, kind=kind, symmetric=kind == "symmetric")
        assert validate(p) == [] and has_full_support(p)
    with pytest.raises(ValueError):
        random_prior(rng, 2, 2, "weird")


def test_generated_tu_instances_pass_the_threshold():
    from bayesbargain.tu import threshold_holds, tu_violations
    rng = instance_rng("tu", 0)
    for _ in range(10):
        t = random_tu(rng)
        assert tu_violations(t) == [] and threshold_holds(t)


@pytest.mark.parametrize("name", sorted(CHECKS))
def test_every_check_runs_small(name):
    res = run_check(name, seed=3, count=2)
    assert res.count == 2 and len(res.records) == 2
    assert res.passed, res.text()
    assert res.lines()[-1] == "verdict: pass"
    json.dumps(res.to_json())


def test_sweeps_are_deterministic_and_replayable():
    a = run_check("theorem1", seed=11, count=4)
    b = run_check("theorem1", seed=11, count=4)
    assert [r["problem"] for r in a.records] == [r["problem"] for r in b.records]
    rec = a.records[2]
    assert run_instance("theorem1", 11, 2)["problem"] == rec["problem"]
    replay = ordinality_gap(io.parse(rec["problem"]))
    assert replay.value == rec["gap"]


def test_parallel_run_matches_serial():
    serial = run_check("corollary1", seed=5, count=4)
    parallel = run_check("corollary1", seed=5, count=4, jobs=2)
    strip = lambda rs: [{k: v for k, v in r.items()} for r in rs]
    assert strip(serial.records) == strip(parallel.records)


def test_failures_are_reported():
    res = run_check("remark3", seed=0, count=1)
    res.records[0]["passed"] = False
    res.records[0]["reason"] = "forced"
    text = res.text()
    assert "FAIL index=0 forced" in text and text.endswith("verdict: fail\n")
    assert not res.passed


def test_unknown_check():
    with pytest.raises(UnknownCheck):
        run_check("theorem9")


def test_durability_sweep_runs_its_fixed_example():
    res = run_check("prop6", seed=0, count=1)
    assert res.fixed[0]["witness"] == (0, 0, 0, 1) and res.fixed[0]["passed"]
    assert "  fixed FIX-DUR-A: pass" in res.lines()
