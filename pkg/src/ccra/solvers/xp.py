"""Exact solver for single-delegation instances with arbitrary ballots,
exponential only in the number of active voters.

Each in-tree gets a table over *exact* vote-flow vectors: how many of the
tree's votes end up under each active voter after the redirections inside
the tree. Exact counts (rather than "at least") are required because with
several targets a surplus vote can lift a rival above the preferred
candidate. Nested redirections are modelled: a voter whose ancestor arc was
redirected may itself be sent elsewhere, including back to its own tree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from ..errors import GuessSpaceTooLarge
from ..model import INF, Instance, Redirection
from ..preprocess import add_virtual_actives
from ..tally import is_unique_winner, ScoreBoard
from .common import Forest, RootTargets, Solution, make_solution, require_single_delegation

DEFAULT_MAX_GUESSES = 10**8

Entry = tuple[object, tuple[tuple[int, int], ...]]  # (cost, ((voter, label), ...))


def _convolve(a: Mapping, b: Mapping, budget) -> dict:
    out: dict = {}
    for va, (ca, wa) in a.items():
        for vb, (cb, wb) in b.items():
            c = ca + cb
            if c > budget:
                continue
            v = tuple(x + y for x, y in zip(va, vb))
            cur = out.get(v)
            if cur is None or c < cur[0]:
                out[v] = (c, wa + wb)
    return out


@dataclass(frozen=True)
class MultiTargetTable:
    """Cheapest redirections inside one tree, per exact vote-flow vector.

    ``labels`` lists the active voters (roots) of the instance; a vector
    ``vec`` gives, for every label, the number of this tree's votes that end
    under that root; ``own`` is the label of this tree's root.
    """

    root: int
    labels: tuple[int, ...]
    own: int
    entries: Mapping[tuple[int, ...], Entry]

    def outflow(self, vec: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(x for i, x in enumerate(vec) if i != self.own)

    def exact(self, demands) -> object:
        """Minimum cost of bundles moving exactly the given (multiset of)
        vote counts to pairwise distinct other roots."""
        want = sorted((d for d in demands if d), reverse=True)
        best = INF
        for vec, (cost, _) in self.entries.items():
            got = sorted((d for d in self.outflow(vec) if d), reverse=True)
            if got == want and cost < best:
                best = cost
        return best

    def at_least(self, demands) -> object:
        """Minimum cost of disjoint bundles, bundle ``j`` moving at least
        ``demands[j]`` votes to its own target."""
        want = sorted(demands, reverse=True)
        best = INF
        for vec, (cost, _) in self.entries.items():
            got = sorted(self.outflow(vec), reverse=True)
            if len(want) > len(got):
                continue
            if all(g >= w for g, w in zip(got, want)) and cost < best:
                best = cost
        return best


def multi_target_table(
    instance: Instance,
    root: int,
    *,
    labels: tuple[int, ...] | None = None,
    forest: Forest | None = None,
    budget=INF,
) -> MultiTargetTable:
    forest = forest or Forest(instance)
    labels = tuple(labels if labels is not None else forest.roots)
    size = len(labels)
    own = labels.index(root)
    weights = instance.weights
    zero = (0,) * size
    unit = [tuple(1 if i == lab else 0 for i in range(size)) for lab in range(size)]
    below: dict[int, list[dict]] = {}
    result: dict = {}
    for v in forest.postorder(root):
        # grouped[lab]: v ends under label lab (either inherited or chosen)
        grouped = []
        for lab in range(size):
            table = {zero: (0, ())}
            for child in forest.children[v]:
                table = _convolve(table, below[child][lab], budget)
            if weights[v]:
                table = {tuple(x + y for x, y in zip(vec, unit[lab])): e for vec, e in table.items()}
            grouped.append(table)
        for child in forest.children[v]:
            del below[child]
        if v == root:
            result = grouped[own]
            break
        cost = instance.cost(v, forest.parent[v])
        per_inherited = []
        for lab in range(size):
            table = dict(grouped[lab])
            if cost != INF:
                for lab2 in range(size):
                    if lab2 == lab:
                        continue
                    for vec, (c, w) in grouped[lab2].items():
                        c2 = c + cost
                        if c2 > budget:
                            continue
                        cur = table.get(vec)
                        if cur is None or c2 < cur[0]:
                            table[vec] = (c2, w + ((v, lab2),))
            per_inherited.append(table)
        below[v] = per_inherited
    return MultiTargetTable(root, labels, own, result)


def solve_xp_active(
    instance: Instance,
    *,
    max_guesses: int = DEFAULT_MAX_GUESSES,
    stats: dict | None = None,
) -> Solution | None:
    """Enumerate, over all trees, one flow vector per tree (the guessed vote
    counts moved between every pair of active voters), keep the cheapest
    combination under which the preferred candidate wins outright."""
    require_single_delegation(instance)
    pre = add_virtual_actives(instance)
    forest = Forest(pre)
    labels = forest.roots
    budget = instance.budget
    tables = [multi_target_table(pre, r, labels=labels, forest=forest, budget=budget) for r in labels]
    options = [sorted(((c, vec, w) for vec, (c, w) in t.entries.items()), key=lambda e: (e[0], e[1])) for t in tables]
    space = math.prod(len(o) for o in options)
    if stats is not None:
        stats["active_voters"] = len(labels)
        stats["guess_space"] = space
    if space > max_guesses:
        raise GuessSpaceTooLarge(f"{space} vote-flow combinations exceed the limit {max_guesses}")

    m, preferred = pre.m, pre.preferred
    label_cands = [sorted(pre.ballots[r]) for r in labels]
    size = len(labels)
    best_cost, best_pick = INF, None
    leaves = 0
    pick: list[int] = []

    def search(i: int, counts: list[int], cost) -> None:
        nonlocal best_cost, best_pick, leaves
        if i == len(options):
            leaves += 1
            scores = [0] * m
            for lab in range(size):
                if counts[lab]:
                    for c in label_cands[lab]:
                        scores[c] += counts[lab]
            if is_unique_winner(ScoreBoard(tuple(scores), 0), preferred):
                best_cost, best_pick = cost, list(pick)
            return
        for idx, (c, vec, _) in enumerate(options[i]):
            total = cost + c
            if total >= best_cost or total > budget:
                break  # options are sorted by cost
            pick.append(idx)
            search(i + 1, [a + b for a, b in zip(counts, vec)], total)
            pick.pop()

    search(0, [0] * size, 0)
    if stats is not None:
        stats["guesses"] = leaves
    if best_pick is None:
        return None
    to_target = RootTargets(instance, pre)
    redirections = []
    for opts, idx in zip(options, best_pick):
        for v, lab in opts[idx][2]:
            parent = forest.parent[v]
            redirections.append(Redirection(v, parent, to_target(labels[lab], parent)))
    return make_solution(instance, redirections)
