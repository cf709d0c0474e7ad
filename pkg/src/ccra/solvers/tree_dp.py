"""Knapsack-style dynamic programs over delegation trees.

``tree_min_cost_arrays`` computes, for one in-tree, the cheapest set of arcs
whose redirection pulls at least ``j`` votes out of the tree, for every ``j``.
``solve_single_single`` combines those arrays across trees to solve the
single-delegation, single-approval case exactly in polynomial time.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import NotActiveRoot, NotSingleApproval
from ..model import INF, Instance, Redirection
from ..preprocess import add_virtual_actives
from .common import Forest, RootTargets, Solution, make_solution, require_single_delegation

ArcKey = tuple[int, int]


@dataclass(frozen=True)
class VoteArrays:
    """``costs[j]`` is the minimum cost of arcs of the tree rooted at ``root``
    whose redirection yields at least ``j`` votes; ``witnesses[j]`` lists
    those arcs as ``(source, target)`` pairs."""

    root: int
    costs: tuple
    witnesses: tuple[tuple[ArcKey, ...], ...]

    def __len__(self) -> int:
        return len(self.costs)

    def __getitem__(self, j: int):
        return self.costs[j]


def _merge(a, wa, b, wb):
    """Min-plus convolution of two 'at least j votes' arrays."""
    size = len(a) + len(b) - 1
    out = [INF] * size
    wit: list[tuple] = [()] * size
    for x, ca in enumerate(a):
        if ca == INF:
            continue
        for y, cb in enumerate(b):
            c = ca + cb
            if c < out[x + y]:
                out[x + y] = c
                wit[x + y] = wa[x] + wb[y]
    return out, wit


def tree_min_cost_arrays(
    instance: Instance,
    root: int,
    *,
    cost_cap=None,
    forest: Forest | None = None,
) -> VoteArrays:
    """Bottom-up DP over the in-tree of ``root``.

    Arcs costlier than ``cost_cap`` are treated as unredirectable. Virtual
    voters carry no vote, so array lengths follow vote weights, not node
    counts.
    """
    require_single_delegation(instance)
    if root not in instance.ballots:
        raise NotActiveRoot(f"voter {instance.voters[root]!r} is not an active voter")
    forest = forest or Forest(instance)
    arrays: dict[int, tuple[list, list]] = {}
    result = None
    for v in forest.postorder(root):
        b, wb = [0], [()]
        for child in forest.children[v]:
            ca, wa = arrays.pop(child)
            b, wb = _merge(b, wb, ca, wa)
        if v == root:
            result = (b, wb)
            break
        p = forest.parent[v]
        cost = instance.cost(v, p)
        if cost_cap is not None and cost > cost_cap:
            cost = INF
        total = forest.subtree_weight[v]
        av, wav = [], []
        for j in range(total + 1):
            cj = b[j] if j < len(b) else INF
            if cj <= cost:
                av.append(cj)
                wav.append(wb[j] if j < len(b) else ())
            else:
                av.append(cost)
                wav.append(((v, p),))
        arrays[v] = (av, wav)
    costs, wits = result
    return VoteArrays(root, tuple(costs), tuple(tuple(sorted(w)) for w in wits))


def max_votes_under_budget(arrays: VoteArrays, budget) -> tuple[int, object, tuple[ArcKey, ...]]:
    """Largest ``j`` with ``arrays[j] <= budget``, its cost and witness arcs."""
    best = 0
    for j, c in enumerate(arrays.costs):
        if c <= budget:
            best = j
    return best, arrays.costs[best], arrays.witnesses[best]


def solve_single_single(instance: Instance, *, stats: dict | None = None) -> Solution | None:
    """Exact solver when every voter delegates to at most one voter and
    every ballot approves exactly one candidate.

    Votes are only ever moved from rival trees into the preferred candidate's
    tree. The table ``table[k][x]`` holds the cheapest way to move at least
    ``k`` votes out of the rival trees processed so far while leaving each of
    them with at most ``x`` votes.
    """
    require_single_delegation(instance)
    if any(len(b) != 1 for b in instance.ballots.values()):
        raise NotSingleApproval("every ballot must approve exactly one candidate")
    pre = add_virtual_actives(instance)
    forest = Forest(pre)
    star_roots = [r for r in forest.roots if pre.ballots[r] == frozenset({pre.preferred})]
    if not star_roots:
        return None
    star = star_roots[0]
    rivals = [r for r in forest.roots if r != star]
    arrays = [tree_min_cost_arrays(pre, r, forest=forest) for r in rivals]
    sizes = [forest.tree_weight(r) for r in rivals]
    star_votes = forest.tree_weight(star)

    big_k = sum(sizes)
    big_x = max(sizes, default=0)
    table = [[0 if k == 0 else INF for _ in range(big_x + 1)] for k in range(big_k + 1)]
    choices: list[list[list[int]]] = []
    for arr, size in zip(arrays, sizes):
        nxt = [[INF] * (big_x + 1) for _ in range(big_k + 1)]
        pick = [[-1] * (big_x + 1) for _ in range(big_k + 1)]
        for k in range(big_k + 1):
            for x in range(big_x + 1):
                best, arg = INF, -1
                for j in range(max(0, size - x), len(arr)):
                    c = arr.costs[j] + table[max(0, k - j)][x]
                    if c < best:
                        best, arg = c, j
                nxt[k][x] = best
                pick[k][x] = arg
        table = nxt
        choices.append(pick)

    best, best_kx = INF, None
    for k in range(big_k + 1):
        for x in range(big_x + 1):
            if star_votes + k >= x + 1 and table[k][x] < best:
                best, best_kx = table[k][x], (k, x)
    if stats is not None:
        stats["trees"] = len(forest.roots)
        stats["cells"] = (big_k + 1) * (big_x + 1) * len(rivals)
    if best_kx is None or best > instance.budget:
        return None

    k, x = best_kx
    arcs: list[ArcKey] = []
    for i in reversed(range(len(rivals))):
        j = choices[i][k][x]
        arcs.extend(arrays[i].witnesses[j])
        k = max(0, k - j)
    to_target = RootTargets(instance, pre)
    return make_solution(instance, [Redirection(s, t, to_target(star, t)) for s, t in arcs])
