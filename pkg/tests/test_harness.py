import json

import pytest

from modaltopo import topo
from modaltopo.errors import BudgetExceeded
from modaltopo.formula import named_axiom, parse, scheme_C
from modaltopo.harness import (FAIL, PASS, SUITES, VACUOUS, SearchSpec, census, countermodel_search,
                               replay_witness, run_property_suite, to_csv)
from modaltopo.harness import suites
from modaltopo.kripke import (FrameConstraints, cluster_frame, enumerate_frames, reflexive_point,
                              valid_in_frame)
from modaltopo.topo import indiscrete


def test_search_examples():
    c1 = FrameConstraints(transitive=True, circumference_at_most=1)
    res = countermodel_search(SearchSpec(named_axiom("Loeb"), 1, c1))
    assert res.found and res.structure == reflexive_point()
    res = countermodel_search(SearchSpec(scheme_C(1), 4, c1))
    assert not res.found and res.message == "no countermodel up to 4 points"
    res = countermodel_search(SearchSpec(scheme_C(1), 2, FrameConstraints(transitive=True)))
    assert res.found and res.structure == cluster_frame(2)
    assert json.loads(json.dumps(res.to_json()))["found"] is True


def test_search_space_modes():
    res = countermodel_search(SearchSpec(named_axiom("4"), 3, mode="space-d"))
    assert res.found and res.structure == indiscrete(2)
    res = countermodel_search(SearchSpec(named_axiom("4"), 4, mode="space-c"))
    assert not res.found
    res = countermodel_search(SearchSpec(named_axiom("D"), 4, mode="space-d",
                                         space_filter={"is_crowded": True}))
    assert not res.found and res.examined > 0


def test_search_caps():
    with pytest.raises(BudgetExceeded):
        countermodel_search(SearchSpec(named_axiom("4"), 7, mode="space-d"))
    with pytest.raises(BudgetExceeded):
        countermodel_search(SearchSpec(named_axiom("4"), 7))
    with pytest.raises(ValueError):
        SearchSpec(named_axiom("4"), 2, mode="space")


def test_search_agrees_with_validity():
    formulas = [parse(t) for t in ("[]p -> p", "<>T", "[]([]p -> p) -> []p", "<>[]p -> []<>p",
                                   "[]p -> [][]p")]
    formulas += [named_axiom("Grz"), scheme_C(2)]
    c = FrameConstraints(transitive=True, iso_dedup=True)
    frames = list(enumerate_frames(4, c))
    for phi in formulas:
        for n in (1, 2, 3, 4):
            res = countermodel_search(SearchSpec(phi, n, c))
            bad = [f for f in frames if f.n <= n and not valid_in_frame(f, phi)]
            assert res.found == bool(bad)
            if bad:
                assert res.structure == bad[0]
                assert res.examined == frames.index(bad[0]) + 1


def test_census_examples():
    rows = census(1)
    assert len(rows) == 1 and rows[0]["scattered"] and rows[0]["TD"] and rows[0]["d:Loeb"]
    rows = census(2)
    two = [r for r in rows if r["points"] == 2]
    assert len(two) == 4 and len({r["class"] for r in two}) == 3
    for r in census(3):
        assert r["TD"] == r["d:4"]
    text = to_csv(rows)
    assert text.splitlines()[0].startswith("points,opens,class,TD")
    with pytest.raises(BudgetExceeded):
        census(5)


def test_suite_examples():
    [r] = run_property_suite("circumference-scheme", 4)
    assert r.verdict == PASS and r.instances >= 1000
    [r] = run_property_suite("crowded-td-identities", 5)
    assert r.verdict == VACUOUS and r.coverage == 0 and r.notes
    [r] = run_property_suite("open-irresolvability-scheme", 4)
    assert r.verdict == PASS
    with pytest.raises(KeyError):
        run_property_suite("nope")


def test_every_suite_runs_small():
    slow = {"gluing-d-morphism", "circumference-scheme", "gluing-preserves-hi"}
    for sid in SUITES:
        if sid in slow:
            continue
        for r in run_property_suite(sid, 3, seed=1):
            assert r.verdict in (PASS, VACUOUS), r.line()
            assert r.seed == 1
            json.dumps(r.to_json())


def test_fail_witness_replays(monkeypatch):
    # break the T_D predicate on purpose and check the failure is reported
    # with a countermodel that re-verifies
    monkeypatch.setattr(suites.topo, "is_TD_by_closure", lambda X: True)
    monkeypatch.setattr(suites.topo, "is_TD_by_derived", lambda X: True)
    [r] = run_property_suite("esakia-td", 3)
    assert r.verdict == FAIL
    assert replay_witness(r) is True
    assert json.loads(json.dumps(r.to_json()))["witness"]["countermodel"]


def test_fail_witness_replays_frame(monkeypatch):
    monkeypatch.setattr(suites, "circumference", lambda frame: 0)
    [r] = run_property_suite("circumference-scheme", 2)
    assert r.verdict == FAIL and replay_witness(r) is True


def test_replay_rejects_bogus_witness():
    r = suites.Report("x", "x", verdict=FAIL, witness={
        "space": topo.discrete(1).to_json(), "formula": "p | ~p", "semantics": "d",
        "countermodel": {"valuation": {"p": []}, "point": 0}})
    assert replay_witness(r) is False
    assert replay_witness(suites.Report("y", "y")) is None
