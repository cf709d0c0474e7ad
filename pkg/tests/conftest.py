import itertools
import json
from pathlib import Path

import pytest

from ccra.errors import RedirectionError
from ccra.model import INF, Redirection, apply_redirections, build_instance, instance_from_dict
from ccra.tally import evaluate, is_unique_winner

DATA = Path(__file__).parent / "data"


def load(name):
    return instance_from_dict(json.loads((DATA / name).read_text()))


@pytest.fixture
def running_example():
    return load("running_example.json")


@pytest.fixture
def abp():
    """a approves c*, b approves c1, p delegates to b at cost 1."""
    return build_instance(
        ["c*", "c1"], {"a": ["c*"], "b": ["c1"]}, [("p", "b", 1)], preferred="c*", budget=1, voters=["a", "b", "p"]
    )


def naive_optimum(instance):
    """Minimum winning cost by trying every target for every arc (or keeping
    it); independent of the solvers' search and pruning."""
    arcs = [a for a in sorted(instance.arcs) if a.cost != INF]
    options = [[None] + [x for x in range(instance.n) if x not in (a.source, a.target)] for a in arcs]
    best = None
    for choice in itertools.product(*options):
        reds = [Redirection(a.source, a.target, x) for a, x in zip(arcs, choice) if x is not None]
        cost = sum(a.cost for a, x in zip(arcs, choice) if x is not None)
        if cost > instance.budget or (best is not None and cost >= best):
            continue
        try:
            after = apply_redirections(instance, reds)
        except RedirectionError:
            continue
        if is_unique_winner(evaluate(after), instance.preferred):
            best = cost
    return best


def cost_of(solution):
    return None if solution is None else solution.total_cost


def exhaustive_tree_costs(instance, root):
    """best[j] = cheapest arc subset of root's in-tree cutting off >= j counted
    voters, found by trying every subset."""
    parent = {a.source: a.target for a in instance.arcs}
    members = [v for v in range(instance.n) if _root(parent, v) == root]
    arcs = [(v, parent[v]) for v in members if v != root and instance.cost(v, parent[v]) != INF]
    counted = [v for v in members if v not in instance.virtual]
    size = len([v for v in counted if v != root])
    best = [INF] * (size + 1)
    for mask in range(1 << len(arcs)):
        cut = {arcs[i][0] for i in range(len(arcs)) if mask >> i & 1}
        cost = sum(instance.cost(*arcs[i]) for i in range(len(arcs)) if mask >> i & 1)
        votes = sum(1 for v in counted if _passes(parent, v, cut, root))
        for j in range(votes + 1):
            best[j] = min(best[j], cost)
    return best


def _root(parent, v):
    while v in parent:
        v = parent[v]
    return v


def _passes(parent, v, cut, root):
    while v != root:
        if v in cut:
            return True
        v = parent[v]
    return False
