"""Exhaustive search over redirection sets: the ground-truth oracle.

Runs in ``2^{O(n^2 log n)}`` in general (``2^{O(n log n)}`` with a single
delegation per voter), so it is guarded by an explicit step budget.
"""

from __future__ import annotations

from itertools import groupby
from typing import Iterable

from ..errors import InstanceTooLarge
from ..model import INF, Instance, Redirection
from ..unravel import resolve
from .common import Solution, make_solution

DEFAULT_MAX_STEPS = 10**8


def _count_assignments(arcs, targets, budget) -> int:
    """Number of (subset, target assignment) pairs within budget."""
    counts = {0: 1}
    for a, tg in zip(arcs, targets):
        if not tg:
            continue
        nxt = dict(counts)
        for c, k in counts.items():
            c2 = c + a.cost
            if c2 <= budget:
                nxt[c2] = nxt.get(c2, 0) + k * len(tg)
        counts = nxt
    return sum(counts.values())


def _reaches(out: list[list[int]], start: int, goal: int) -> bool:
    if start == goal:
        return True
    stack, seen = [start], {start}
    while stack:
        for w in out[stack.pop()]:
            if w == goal:
                return True
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return False


def solve_brute_force(
    instance: Instance,
    *,
    target_whitelist: Iterable[int] | None = None,
    count_limit: int | None = None,
    max_steps: int = DEFAULT_MAX_STEPS,
    stats: dict | None = None,
) -> Solution | None:
    """Minimum-cost redirection set making the preferred candidate the unique
    winner, or ``None``.

    Ties between minimum-cost sets go to the lexicographically smallest sorted
    list of ``(source, old_target, new_target)`` triples. ``target_whitelist``
    restricts new targets; ``count_limit`` caps the number of redirections.
    """
    n, budget = instance.n, instance.budget
    arcs = [a for a in sorted(instance.arcs) if a.cost != INF and a.cost <= budget]
    allowed = sorted(set(target_whitelist)) if target_whitelist is not None else range(n)
    targets = [[x for x in allowed if x != a.source and x != a.target] for a in arcs]

    estimate = _count_assignments(arcs, targets, budget)
    if stats is not None:
        stats["estimate"] = estimate
    if estimate > max_steps:
        raise InstanceTooLarge(f"brute force would enumerate about {estimate} redirection sets (limit {max_steps})")

    ballots = [instance.ballots.get(v) for v in range(n)]
    counted = [v for v in range(n) if v not in instance.virtual]
    preferred, rule, m = instance.preferred, instance.rule, instance.m

    def wins(out) -> bool:
        resolved = resolve(out, ballots, rule)
        scores = [0] * m
        for v in counted:
            for c in resolved[v]:
                scores[c] += 1
        mine = scores[preferred]
        return all(s < mine for c, s in enumerate(scores) if c != preferred)

    # arc subsets within budget, then grouped by cost
    limit = len(arcs) if count_limit is None else count_limit
    subsets: list[tuple[int, tuple[int, ...]]] = []
    stack = [(0, 0, ())]
    while stack:
        i, cost, chosen = stack.pop()
        if i == len(arcs):
            subsets.append((cost, chosen))
            continue
        stack.append((i + 1, cost, chosen))
        c2 = cost + arcs[i].cost
        if c2 <= budget and len(chosen) < limit and targets[i]:
            stack.append((i + 1, c2, chosen + (i,)))
    subsets.sort(key=lambda s: s[0])

    leaves = 0
    base_out = [list(o) for o in instance.out_neighbors]
    best_key = None
    for cost, group in groupby(subsets, key=lambda s: s[0]):
        for _, chosen in group:
            out = [list(o) for o in base_out]
            for i in chosen:
                out[arcs[i].source].remove(arcs[i].target)
            picks: list[int] = []

            def assign(j: int) -> None:
                nonlocal leaves, best_key
                if j == len(chosen):
                    leaves += 1
                    if wins(out):
                        key = tuple(sorted((arcs[i].source, arcs[i].target, x) for i, x in zip(chosen, picks)))
                        if best_key is None or key < best_key:
                            best_key = key
                    return
                a = arcs[chosen[j]]
                for x in targets[chosen[j]]:
                    if x in out[a.source] or _reaches(out, x, a.source):
                        continue
                    out[a.source].append(x)
                    picks.append(x)
                    assign(j + 1)
                    picks.pop()
                    out[a.source].pop()

            assign(0)
        if best_key is not None:
            break

    if stats is not None:
        stats["subsets"] = len(subsets)
        stats["leaves"] = leaves
    if best_key is None:
        return None
    return make_solution(instance, [Redirection(s, o, t) for s, o, t in best_key])
