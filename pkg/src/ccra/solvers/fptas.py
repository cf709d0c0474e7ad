"""Approximation scheme for the setting where the preferred candidate is
approved alone by exactly one active voter and by no other active voter.

Guess the most expensive redirected arc ``w``, then guess per rival tree a
budget on a geometric grid with ratio ``1 + eps/3``; every tree moves as many
votes as its budget allows into the preferred candidate's voter.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

from ..errors import InvalidEpsilon, NotSpecialSetting
from ..model import INF, Instance, Redirection
from ..preprocess import add_virtual_actives
from .common import Forest, RootTargets, Solution, make_solution, require_single_delegation
from .tree_dp import max_votes_under_budget, tree_min_cost_arrays


def _as_epsilon(epsilon) -> Fraction:
    try:
        eps = Fraction(str(epsilon)) if isinstance(epsilon, float) else Fraction(epsilon)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidEpsilon(f"epsilon {epsilon!r} is not a rational number") from exc
    if not 0 < eps <= 1:
        raise InvalidEpsilon(f"epsilon must lie in (0, 1], got {eps}")
    return eps


def _floor_power(q: Fraction, p: int) -> int:
    return math.floor(q**p)


def exponent_range(epsilon, w: int, n: int) -> range:
    """Exponents ``p`` whose powers ``(1+eps/3)^p`` cover ``[eps*w/(2n), n*w]``."""
    eps = _as_epsilon(epsilon)
    q = 1 + eps / 3
    lo = math.floor(math.log(eps * w / (2 * n)) / math.log(q))
    hi = math.ceil(math.log(n * w) / math.log(q)) + 1
    while q**lo > Fraction(eps * w, 2 * n):
        lo -= 1
    while q**hi < n * w:
        hi += 1
    return range(lo, hi + 1)


def special_root(pre: Instance, forest: Forest) -> int:
    star = frozenset({pre.preferred})
    owners = [r for r in forest.roots if pre.preferred in pre.ballots[r]]
    if len(owners) != 1 or pre.ballots[owners[0]] != star:
        raise NotSpecialSetting("the preferred candidate must be approved alone by one class of active voters and by no other")
    return owners[0]


def _wins(pre: Instance, forest: Forest, star: int, moved: dict[int, int]) -> bool:
    scores = [0] * pre.m
    for r in forest.roots:
        votes = forest.tree_weight(r) - moved.get(r, 0)
        if r == star:
            votes += sum(moved.values())
        for c in pre.ballots[r]:
            scores[c] += votes
    mine = scores[pre.preferred]
    return all(s < mine for c, s in enumerate(scores) if c != pre.preferred)


def solve_fptas(instance: Instance, epsilon, *, stats: dict | None = None) -> Solution | None:
    """A solution of cost at most ``(1+epsilon)`` times the optimum, or
    ``None`` when no solution exists within the budget.

    Infeasibility at any budget is decided exactly. When a solution exists
    but the approximate one exceeds the budget, ``None`` is returned and
    ``stats["budget_ambiguous"]`` is set.
    """
    eps = _as_epsilon(epsilon)
    require_single_delegation(instance)
    pre = add_virtual_actives(instance)
    forest = Forest(pre)
    star = special_root(pre, forest)
    rivals = [r for r in forest.roots if r != star]
    n = pre.n
    if stats is None:
        stats = {}
    stats.update(epsilon=str(eps), w_guesses=0, guesses=0, evaluated=0)

    to_target = RootTargets(instance, pre)

    def build(witnesses) -> Solution:
        return make_solution(
            instance, [Redirection(s, t, to_target(star, t)) for wit in witnesses for s, t in wit]
        )

    if _wins(pre, forest, star, {}):
        return build([])

    full = {r: tree_min_cost_arrays(pre, r, forest=forest) for r in rivals}
    best_moves = {r: max_votes_under_budget(full[r], INF)[0] for r in rivals}
    if not _wins(pre, forest, star, best_moves):
        stats["infeasible"] = True
        return None

    costs = sorted({a.cost for a in pre.arcs if a.cost != INF})
    q = 1 + eps / 3
    best_cost, best_wits = INF, None
    ranges = []
    for w in costs:
        stats["w_guesses"] += 1
        arrays = {r: tree_min_cost_arrays(pre, r, cost_cap=w, forest=forest) for r in rivals}
        if w == 0:
            budgets = [0]
        else:
            exps = exponent_range(eps, w, n)
            ranges.append(len(exps))
            budgets = sorted({_floor_power(q, p) for p in exps})
            stats["guesses"] += len(exps) ** len(rivals)
        # distinct per-tree outcomes over the guessed budgets
        outcomes = []
        for r in rivals:
            seen = {}
            for b in budgets:
                j, c, wit = max_votes_under_budget(arrays[r], b)
                seen.setdefault((j, c), wit)
            outcomes.append(sorted((c, j, wit) for (j, c), wit in seen.items()))
        for pick in product(*outcomes):
            stats["evaluated"] += 1
            cost = sum(c for c, _, _ in pick)
            if cost >= best_cost:
                continue
            moved = {r: j for r, (_, j, _) in zip(rivals, pick)}
            if _wins(pre, forest, star, moved):
                best_cost, best_wits = cost, [wit for _, _, wit in pick]
    stats["exponent_range"] = max(ranges, default=1)

    if best_wits is None:
        # unreachable: the largest guess for the largest w moves every movable vote
        stats["infeasible"] = True
        return None
    if best_cost > instance.budget:
        stats["approx_cost"] = best_cost
        stats["budget_ambiguous"] = True
        return None
    return build(best_wits)
