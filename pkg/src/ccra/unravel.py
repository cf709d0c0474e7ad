"""Transitive resolution of delegations into ballots.

The three unraveling functions take the *list* of ballots of a voter's
delegates (a multiset: equal ballots are counted once per delegate) and
return a single ballot.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Hashable, Sequence

from .errors import CycleDetected, EmptyInput
from .model import Instance

Ballot = frozenset


def _check(ballots: Sequence[frozenset]) -> None:
    if not ballots:
        raise EmptyInput("unraveling function needs at least one ballot")
    for b in ballots:
        if not b:
            raise EmptyInput("unraveling function received an empty ballot")


def rule_union(ballots: Sequence[frozenset]) -> frozenset:
    _check(ballots)
    return frozenset().union(*ballots)


def _most_approved(ballots) -> frozenset:
    counts = Counter(c for b in ballots for c in b)
    top = max(counts.values())
    return frozenset(c for c, k in counts.items() if k == top)


def rule_approval(ballots: Sequence[frozenset]) -> frozenset:
    """Candidates approved by the largest number of input ballots."""
    _check(ballots)
    return _most_approved(ballots)


def rule_greedy_mrc(ballots: Sequence[frozenset]) -> frozenset:
    """Repeatedly add every currently most-approved candidate and drop the
    ballots they cover, until no ballot is left."""
    _check(ballots)
    chosen: set[Hashable] = set()
    remaining = list(ballots)
    while remaining:
        best = _most_approved(remaining)
        chosen |= best
        remaining = [b for b in remaining if not (b & best)]
    return frozenset(chosen)


RULE_FUNCTIONS: dict[str, Callable[[Sequence[frozenset]], frozenset]] = {
    "union": rule_union,
    "approval": rule_approval,
    "greedy_mrc": rule_greedy_mrc,
}


@dataclass(frozen=True)
class UnraveledProfile:
    resolved: tuple[frozenset[int], ...]

    def __getitem__(self, voter: int) -> frozenset[int]:
        return self.resolved[voter]

    def __len__(self) -> int:
        return len(self.resolved)

    def to_dict(self, instance: Instance) -> dict:
        return {
            "resolved": {
                instance.voters[v]: [instance.candidates[c] for c in sorted(b)]
                for v, b in enumerate(self.resolved)
            }
        }


def resolve(
    out_neighbors: Sequence[Sequence[int]],
    ballots: Sequence[frozenset | None],
    rule: str,
) -> list[frozenset]:
    """Resolve every voter of a delegation graph given as adjacency lists.

    ``ballots[v]`` is the declared ballot of active voters (``None`` for
    passive ones). Delegates are fed to the rule in increasing index order.
    """
    fn = RULE_FUNCTIONS[rule]
    n = len(out_neighbors)
    resolved: list[frozenset | None] = [None] * n
    state = [0] * n  # 0 new, 1 on stack, 2 done
    for start in range(n):
        if state[start]:
            continue
        stack = [start]
        while stack:
            v = stack[-1]
            if state[v] == 0:
                state[v] = 1
                for w in out_neighbors[v]:
                    if state[w] == 1:
                        raise CycleDetected(f"delegation cycle through voter index {w}")
                    if state[w] == 0:
                        stack.append(w)
                continue
            stack.pop()
            if state[v] == 2:
                continue
            outs = out_neighbors[v]
            if not outs:
                resolved[v] = ballots[v]
            elif len(outs) == 1:
                # every rule returns its only input unchanged
                resolved[v] = resolved[outs[0]]
            else:
                resolved[v] = fn([resolved[w] for w in sorted(outs)])
            state[v] = 2
    return resolved  # type: ignore[return-value]


def unravel(instance: Instance) -> UnraveledProfile:
    ballots = [instance.ballots.get(v) for v in range(instance.n)]
    return UnraveledProfile(tuple(resolve(instance.out_neighbors, ballots, instance.rule)))
