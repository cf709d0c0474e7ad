import dataclasses
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from ccra.errors import (
    ArcNotFound,
    BudgetExceeded,
    DuplicateArcRedirect,
    InvalidInstance,
    InvalidRedirection,
    RedirectionError,
    WouldCreateCycle,
    WouldCreateParallelArc,
)
from ccra.model import (
    INF,
    Arc,
    Redirection,
    apply_redirections,
    build_instance,
    instance_from_dict,
    instance_to_dict,
    validate_instance,
)
from ccra.toolkit import GenConfig, gen_random


def codes(raw):
    with pytest.raises(InvalidInstance) as info:
        validate_instance(raw)
    return set(info.value.codes)


def test_running_example_is_valid(running_example):
    assert running_example.stats.n == 6
    assert running_example.stats.t == 3
    assert [running_example.voters[v] for v in running_example.active] == ["v3", "v4", "v6"]
    assert running_example.stats.max_out_degree == 2
    assert running_example.stats.longest_path == 2


def test_minimal_instance():
    inst = validate_instance({"candidates": ["cstar"], "preferred": "cstar", "voters": [{"id": "a", "ballot": ["cstar"]}]})
    assert (inst.n, inst.stats.t) == (1, 1)


def test_two_cycle_rejected():
    raw = {
        "candidates": ["c"],
        "preferred": "c",
        "voters": [{"id": "a", "delegates": [{"to": "b"}]}, {"id": "b", "delegates": [{"to": "a"}]}],
    }
    assert "CycleDetected" in codes(raw)


@pytest.mark.parametrize(
    "voters, code",
    [
        ([{"id": "a", "ballot": ["c"], "delegates": [{"to": "b"}]}, {"id": "b", "ballot": ["c"]}], "BallotOnPassiveVoter"),
        ([{"id": "a"}], "MissingBallotOnActiveVoter"),
        ([{"id": "a", "ballot": []}], "EmptyBallot"),
        ([{"id": "a", "ballot": ["zzz"]}], "UnknownId"),
        ([{"id": "a", "delegates": [{"to": "nobody"}]}], "UnknownId"),
        ([{"id": "a", "ballot": ["c"]}, {"id": "a", "ballot": ["c"]}], "DuplicateId"),
        ([{"id": "a", "delegates": [{"to": "b", "cost": -1}]}, {"id": "b", "ballot": ["c"]}], "InvalidCost"),
    ],
)
def test_structural_violations(voters, code):
    assert code in codes({"candidates": ["c"], "preferred": "c", "voters": voters})


def test_parallel_arc_rejected():
    inst = build_instance(["c"], {"b": ["c"]}, [("a", "b")], preferred="c")
    doubled = dataclasses.replace(inst, arcs=inst.arcs + (Arc(1, 0, 2),))
    assert "ParallelArc" in codes(doubled)


def test_all_violations_are_collected():
    raw = {"candidates": ["c"], "preferred": "x", "voters": [{"id": "a", "ballot": ["q"]}], "budget": -1}
    assert {"UnknownId"} <= codes(raw)


def test_json_round_trip_and_cost_defaults():
    raw = {
        "candidates": ["c1", "cstar"],
        "preferred": "cstar",
        "budget": 3,
        "rule": "approval",
        "voters": [{"id": "v1", "ballot": ["c1"]}, {"id": "v2", "delegates": [{"to": "v1"}, {"to": "v3", "cost": "inf"}]},
                   {"id": "v3", "ballot": ["cstar"]}],
    }
    inst = instance_from_dict(raw)
    assert inst.cost(1, 0) == 1 and inst.cost(1, 2) == INF
    again = instance_from_dict(instance_to_dict(inst))
    assert again == inst
    assert instance_to_dict(inst)["voters"][1]["delegates"][1]["cost"] == "inf"


def test_running_example_redirection_yields_panel_b(running_example):
    v = running_example.voter_index
    after = apply_redirections(running_example, [Redirection(v["v5"], v["v3"], v["v6"])])
    assert after.out_neighbors[v["v5"]] == (v["v6"],)
    assert after.cost(v["v5"], v["v6"]) == 1
    assert len(after.arcs) == len(running_example.arcs)


def test_empty_redirection_is_identity(running_example):
    assert apply_redirections(running_example, []) is running_example


def test_forced_cycle():
    inst = build_instance(["c"], {"c_": ["c"]}, [("a", "b"), ("b", "c_")], preferred="c", voters=["a", "b", "c_"])
    with pytest.raises(WouldCreateCycle):
        apply_redirections(inst, [Redirection(1, 2, 0)])


def test_redirection_errors(running_example):
    v = running_example.voter_index
    with pytest.raises(ArcNotFound):
        apply_redirections(running_example, [Redirection(v["v5"], v["v4"], v["v6"])])
    with pytest.raises(DuplicateArcRedirect):
        apply_redirections(running_example, [Redirection(v["v5"], v["v3"], v["v6"]), Redirection(v["v5"], v["v3"], v["v4"])])
    with pytest.raises(WouldCreateParallelArc):
        apply_redirections(running_example, [Redirection(v["v1"], v["v2"], v["v6"])])
    with pytest.raises(WouldCreateCycle):
        apply_redirections(running_example, [Redirection(v["v5"], v["v3"], v["v5"])])
    with pytest.raises(InvalidRedirection):
        apply_redirections(running_example, [Redirection(v["v5"], v["v3"], v["v3"])])
    with pytest.raises(BudgetExceeded):
        apply_redirections(
            running_example,
            [Redirection(v["v5"], v["v3"], v["v6"]), Redirection(v["v2"], v["v3"], v["v6"])],
            enforce_budget=True,
        )


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(2, 7), out=st.integers(1, 3), data=st.data())
def test_redirection_preserves_structure(seed, n, out, data):
    inst = gen_random(GenConfig(n=n, m=3, max_out_degree=out, max_ballot_size=2, max_cost=3, seed=seed))
    arcs = sorted(inst.arcs)
    if not arcs:
        return
    picked = data.draw(st.lists(st.sampled_from(arcs), unique=True, max_size=3))
    reds = [Redirection(a.source, a.target, data.draw(st.integers(0, n - 1))) for a in picked]
    try:
        after = apply_redirections(inst, reds)
    except RedirectionError:
        return
    assert len(after.arcs) == len(inst.arcs)
    assert [len(o) for o in after.out_neighbors] == [len(o) for o in inst.out_neighbors]
    assert Counter(a.cost for a in after.arcs) == Counter(a.cost for a in inst.arcs)
    assert after.stats.t == inst.stats.t
    assert validate_instance(after) is after
