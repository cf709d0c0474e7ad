import csv
import io
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ccra.errors import InvalidConfig
from ccra.model import instance_to_dict, validate_instance
from ccra.solvers import solve_brute_force, solve_single_single
from ccra.toolkit import BENCH_COLUMNS, GenConfig, bench, gen_random


def test_one_voter():
    inst = gen_random(GenConfig(n=1, m=2, seed=123))
    assert inst.n == 1 and inst.stats.t == 1 and not inst.arcs


def test_seed_determinism():
    cfg = GenConfig(n=9, m=4, max_out_degree=3, max_ballot_size=2, max_cost=5, budget=Fraction(1, 2), seed=2**63 - 1)
    a = json.dumps(instance_to_dict(gen_random(cfg)))
    b = json.dumps(instance_to_dict(gen_random(cfg)))
    assert a == b


def test_seed_42_single_single():
    inst = gen_random(GenConfig(n=8, m=3, max_out_degree=1, max_ballot_size=1, seed=42))
    assert inst.stats.max_out_degree <= 1 and inst.stats.max_ballot_size == 1
    solve_single_single(inst)


def test_candidate_zero_is_preferred():
    inst = gen_random(GenConfig(n=5, m=3, seed=1))
    assert inst.preferred == 0 and inst.candidates[0] == "cstar"


def test_special_and_max_active():
    inst = gen_random(GenConfig(n=9, m=3, max_ballot_size=2, seed=4, special=True, max_active=2))
    assert inst.stats.t <= 2
    assert inst.ballots[0] == frozenset({0})
    assert all(0 not in b for v, b in inst.ballots.items() if v != 0)


@pytest.mark.parametrize(
    "kwargs",
    [dict(n=0, m=2), dict(n=2, m=1), dict(n=2, m=2, max_out_degree=0), dict(n=2, m=2, budget=-1), dict(n=2, m=2, rule="x")],
)
def test_invalid_config(kwargs):
    with pytest.raises(InvalidConfig):
        gen_random(GenConfig(**kwargs))


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**64 - 1), n=st.integers(1, 12), out=st.integers(1, 4), ballot=st.integers(1, 4))
def test_generated_instances_validate(seed, n, out, ballot):
    inst = gen_random(GenConfig(n=n, m=4, max_out_degree=out, max_ballot_size=ballot, max_cost=4, seed=seed))
    assert validate_instance(inst) is inst
    assert all(a.source > a.target for a in inst.arcs)


def parse(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_bench_single_single_rows():
    suite = [(gen_random(GenConfig(n=6, m=3, max_cost=3, budget=2, seed=s)), "tree_dp", None) for s in range(10)]
    rows = parse(bench(suite, oracle=True))
    assert len(rows) == 10
    assert all(r["agrees"] == "True" for r in rows)
    for row, (inst, _, _) in zip(rows, suite):
        assert row["feasible"] == str(solve_brute_force(inst) is not None)


def test_bench_empty_suite():
    assert bench([]).strip() == ",".join(BENCH_COLUMNS)


def test_bench_records_guard_errors():
    big = gen_random(GenConfig(n=14, m=3, max_out_degree=4, budget=14, seed=9))
    rows = parse(bench([(big, "brute", None)]))
    assert rows[0]["error"] == "InstanceTooLarge" and rows[0]["feasible"] == ""
