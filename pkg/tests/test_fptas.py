import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ccra.errors import InvalidEpsilon, NotSingleDelegation, NotSpecialSetting
from ccra.model import build_instance
from ccra.solvers import exponent_range, solve_fptas, solve_xp_active
from ccra.toolkit import GenConfig, gen_random

from conftest import cost_of


@pytest.fixture
def special():
    return build_instance(
        ["c*", "c1", "c2"], {"a1": ["c1", "c2"], "a2": ["c*"]}, [("p", "a1", 1)], preferred="c*", budget=1, voters=["a1", "a2", "p"]
    )


def test_example(special):
    assert solve_xp_active(special).total_cost == 1
    assert solve_fptas(special, Fraction(1, 2)).total_cost == 1


def test_already_winning():
    inst = build_instance(["c*", "c1"], {"a": ["c*"], "b": ["c1"]}, [("p", "a")], preferred="c*")
    stats = {}
    assert solve_fptas(inst, 0.5, stats=stats).total_cost == 0
    assert stats["guesses"] == 0


def test_preconditions(running_example):
    shared = build_instance(["c*", "c1"], {"a": ["c*", "c1"], "b": ["c1"]}, preferred="c*")
    with pytest.raises(NotSpecialSetting):
        solve_fptas(shared, 0.5)
    absent = build_instance(["c*", "c1"], {"b": ["c1"]}, preferred="c*")
    with pytest.raises(NotSpecialSetting):
        solve_fptas(absent, 0.5)
    with pytest.raises(NotSingleDelegation):
        solve_fptas(running_example, 0.5)


@pytest.mark.parametrize("eps", [0, -1, 1.5, "x", None])
def test_bad_epsilon(special, eps):
    with pytest.raises(InvalidEpsilon):
        solve_fptas(special, eps)


def test_epsilon_one_is_allowed(special):
    assert solve_fptas(special, 1).total_cost == 1


@pytest.mark.parametrize("eps, w, n", [(Fraction(1, 10), 1, 5), (Fraction(1, 2), 3, 10), (Fraction(1), 7, 2)])
def test_exponent_range_covers_interval(eps, w, n):
    q = 1 + eps / 3
    r = exponent_range(eps, w, n)
    assert q ** r.start <= Fraction(eps * w, 2 * n)
    assert q ** (r.stop - 1) >= n * w
    # within a couple of steps of the analytic bounds
    assert r.stop - r.start <= math.log(2 * n * n / eps) / math.log(q) + 4


def test_infeasible_is_decided_exactly():
    # the rival tree is bigger than anything movable: its root is active
    inst = build_instance(["c*", "c1"], {"a": ["c*"], "b": ["c1"], "b2": ["c1"]}, [("p", "b")], preferred="c*", budget=10)
    stats = {}
    assert solve_fptas(inst, 0.5, stats=stats) is None
    assert stats["infeasible"] is True


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(2, 9), eps=st.sampled_from([Fraction(1, 10), Fraction(1, 2), Fraction(1)]))
def test_guarantee_against_exact(seed, n, eps):
    inst = gen_random(
        GenConfig(n=n, m=3, max_ballot_size=2, max_cost=5, budget=10**6, seed=seed, special=True, max_active=3)
    )
    opt, approx = solve_xp_active(inst), solve_fptas(inst, eps)
    assert (opt is None) == (approx is None)
    if opt is not None:
        assert opt.total_cost <= approx.total_cost <= (1 + eps) * opt.total_cost


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(2, 9), budget=st.integers(0, 6))
def test_returned_solutions_fit_the_budget(seed, n, budget):
    inst = gen_random(GenConfig(n=n, m=3, max_ballot_size=2, max_cost=3, budget=budget, seed=seed, special=True))
    stats = {}
    sol = solve_fptas(inst, Fraction(1, 2), stats=stats)
    if sol is not None:
        assert sol.total_cost <= budget
    elif cost_of(solve_xp_active(inst)) is not None:
        assert stats.get("budget_ambiguous")
