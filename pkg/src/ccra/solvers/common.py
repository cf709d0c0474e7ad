"""Shared pieces for the solvers: the Solution type, final verification and
the in-forest view of single-delegation instances."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from ..errors import NotSingleDelegation, VerificationFailed
from ..model import Instance, Redirection, apply_redirections
from ..tally import evaluate, is_unique_winner


@dataclass(frozen=True)
class Solution:
    redirections: tuple[Redirection, ...]
    total_cost: int
    resulting_scores: tuple[int, ...]

    @property
    def n_redirections(self) -> int:
        return len(self.redirections)

    def redirection_dicts(self, instance: Instance) -> list[dict]:
        return [
            {
                "from": instance.voters[r.source],
                "old_to": instance.voters[r.old_target],
                "new_to": instance.voters[r.new_target],
                "cost": instance.cost(r.source, r.old_target),
            }
            for r in self.redirections
        ]


@dataclass
class SolveReport:
    algo: str
    feasible: bool = False
    wall_time: float = 0.0
    stats: dict = field(default_factory=dict)


def make_solution(instance: Instance, redirections: Iterable[Redirection]) -> Solution:
    """Apply, re-unravel and re-tally; refuse anything that is not a genuine
    within-budget win for the preferred candidate."""
    redirections = tuple(sorted(redirections))
    try:
        after = apply_redirections(instance, redirections, enforce_budget=True)
    except Exception as exc:  # a solver bug, surfaced loudly
        raise VerificationFailed(f"solver produced an inapplicable redirection set: {exc}") from exc
    board = evaluate(after)
    if not is_unique_winner(board, instance.preferred):
        raise VerificationFailed("solver produced a redirection set that does not make the preferred candidate win")
    return Solution(redirections, instance.redirection_cost(redirections), board.scores)


def require_single_delegation(instance: Instance) -> None:
    if instance.stats.max_out_degree > 1:
        raise NotSingleDelegation(
            f"every voter must delegate to at most one voter (max out-degree is {instance.stats.max_out_degree})"
        )


class Forest:
    """Single-delegation instance seen as in-trees hanging off active voters."""

    def __init__(self, instance: Instance):
        require_single_delegation(instance)
        self.instance = instance
        n = instance.n
        self.parent: list[int | None] = [None] * n
        self.children: list[list[int]] = [[] for _ in range(n)]
        for a in sorted(instance.arcs):
            self.parent[a.source] = a.target
            self.children[a.target].append(a.source)
        self.root_of = [0] * n
        for v in instance.topological_order:
            p = self.parent[v]
            self.root_of[v] = v if p is None else self.root_of[p]
        self.roots: tuple[int, ...] = instance.active
        weights = instance.weights
        self.members: dict[int, list[int]] = {r: [] for r in self.roots}
        self.subtree_weight = [0] * n
        for v in reversed(instance.topological_order):
            self.members[self.root_of[v]].append(v)
        # reversed topological order lists delegators before delegatees
        for v in reversed(instance.topological_order):
            self.subtree_weight[v] += weights[v]
            p = self.parent[v]
            if p is not None:
                self.subtree_weight[p] += self.subtree_weight[v]

    def postorder(self, root: int) -> list[int]:
        order: list[int] = []
        stack = [(root, False)]
        while stack:
            v, done = stack.pop()
            if done:
                order.append(v)
                continue
            stack.append((v, True))
            for c in reversed(self.children[v]):
                stack.append((c, False))
        return order

    def tree_weight(self, root: int) -> int:
        return self.subtree_weight[root]

    def parent_cost(self, v: int):
        p = self.parent[v]
        return None if p is None else self.instance.cost(v, p)


class RootTargets:
    """Map roots of a preprocessed instance back to redirect targets in the
    original instance."""

    def __init__(self, original: Instance, preprocessed: Instance):
        self.original = original
        self.preprocessed = preprocessed
        by_ballot: dict[frozenset[int], int] = {}
        for v in original.active:
            by_ballot.setdefault(original.ballots[v], v)
        self.by_ballot = by_ballot

    def __call__(self, root: int, old_target: int) -> int:
        if root < self.original.n:
            return root
        ballot = self.preprocessed.ballots[root]
        target = self.by_ballot[ballot]
        if target == old_target:
            # unreachable for solver-produced labels; kept as a guard
            others = [v for v in self.original.active if self.original.ballots[v] == ballot and v != old_target]
            target = others[0]
        return target
