"""Approval scoring of an unraveled profile."""

from __future__ import annotations

from dataclasses import dataclass

from .model import Instance
from .unravel import UnraveledProfile, unravel


@dataclass(frozen=True)
class ScoreBoard:
    scores: tuple[int, ...]
    counted_voters: int

    def __getitem__(self, candidate: int) -> int:
        return self.scores[candidate]

    def to_dict(self, instance: Instance) -> dict[str, int]:
        return {instance.candidates[c]: s for c, s in enumerate(self.scores)}


def approval_scores(profile: UnraveledProfile, instance: Instance) -> ScoreBoard:
    """score(c) = number of non-virtual voters whose resolved ballot contains c."""
    if len(profile) != instance.n or instance.n == 0:
        raise ValueError(f"profile covers {len(profile)} voters, instance has {instance.n}")
    scores = [0] * instance.m
    counted = 0
    for v, ballot in enumerate(profile.resolved):
        if v in instance.virtual:
            continue
        if ballot is None:
            raise ValueError(f"voter {instance.voters[v]!r} has no resolved ballot")
        counted += 1
        for c in ballot:
            scores[c] += 1
    return ScoreBoard(tuple(scores), counted)


def is_unique_winner(board: ScoreBoard, candidate: int, *, allow_ties: bool = False) -> bool:
    """True iff ``candidate`` scores strictly more than every other candidate.

    ``allow_ties`` switches to the co-winner reading (score equal to the
    maximum); solvers never use it.
    """
    mine = board.scores[candidate]
    others = [s for c, s in enumerate(board.scores) if c != candidate]
    if not others:
        return True
    if allow_ties:
        return mine >= max(others)
    return mine > max(others)


def unique_winner(board: ScoreBoard) -> int | None:
    if not board.scores:
        return None
    top = max(board.scores)
    leaders = [c for c, s in enumerate(board.scores) if s == top]
    return leaders[0] if len(leaders) == 1 else None


def evaluate(instance: Instance) -> ScoreBoard:
    return approval_scores(unravel(instance), instance)
