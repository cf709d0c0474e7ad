"""Core data model: instances, arcs, redirections and their validation.

Voters and candidates are referred to by dense integer indices everywhere
inside the package; display names live on the :class:`Instance` and are only
used at the JSON boundary.
"""

from __future__ import annotations

import dataclasses
import graphlib
import math
import numbers
import types
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .errors import (
    ArcNotFound,
    BudgetExceeded,
    DuplicateArcRedirect,
    InvalidInstance,
    InvalidRedirection,
    Violation,
    WouldCreateCycle,
    WouldCreateParallelArc,
)

INF = math.inf
RULES = ("union", "approval", "greedy_mrc")


def is_finite_cost(cost) -> bool:
    return cost != INF


@dataclass(frozen=True, order=True)
class Arc:
    source: int
    target: int
    cost: int | float = 1


@dataclass(frozen=True, order=True)
class Redirection:
    """Replace the arc ``(source, old_target)`` by ``(source, new_target)``."""

    source: int
    old_target: int
    new_target: int

    @property
    def arc(self) -> tuple[int, int]:
        return (self.source, self.old_target)


@dataclass(frozen=True)
class InstanceStats:
    n: int
    m: int
    t: int
    max_out_degree: int
    max_in_degree: int
    longest_path: int
    max_ballot_size: int

    @property
    def delegations(self) -> int:
        return self.max_out_degree

    @property
    def approvals(self) -> int:
        return self.max_ballot_size

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["delegations"] = self.delegations
        return d


@dataclass(frozen=True, eq=True)
class Instance:
    """A CCRA instance.

    ``ballots`` maps each active voter to its approval set. ``virtual`` holds
    the voters that take part in unraveling but whose own vote is not counted
    (introduced by preprocessing).
    """

    candidates: tuple[str, ...]
    voters: tuple[str, ...]
    arcs: tuple[Arc, ...]
    ballots: Mapping[int, frozenset[int]]
    preferred: int
    budget: int = 0
    rule: str = "union"
    virtual: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "candidates", tuple(self.candidates))
        object.__setattr__(self, "voters", tuple(self.voters))
        object.__setattr__(self, "arcs", tuple(self.arcs))
        object.__setattr__(
            self,
            "ballots",
            types.MappingProxyType({v: frozenset(b) for v, b in sorted(self.ballots.items())}),
        )
        object.__setattr__(self, "virtual", frozenset(self.virtual))

    __hash__ = None

    @property
    def n(self) -> int:
        return len(self.voters)

    @property
    def m(self) -> int:
        return len(self.candidates)

    @cached_property
    def voter_index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.voters)}

    @cached_property
    def candidate_index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.candidates)}

    @cached_property
    def arc_map(self) -> dict[tuple[int, int], Arc]:
        return {(a.source, a.target): a for a in self.arcs}

    @cached_property
    def out_neighbors(self) -> tuple[tuple[int, ...], ...]:
        out = [[] for _ in range(self.n)]
        for a in self.arcs:
            out[a.source].append(a.target)
        return tuple(tuple(sorted(o)) for o in out)

    @cached_property
    def in_neighbors(self) -> tuple[tuple[int, ...], ...]:
        inn = [[] for _ in range(self.n)]
        for a in self.arcs:
            inn[a.target].append(a.source)
        return tuple(tuple(sorted(i)) for i in inn)

    @cached_property
    def active(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n) if not self.out_neighbors[v])

    @cached_property
    def weights(self) -> tuple[int, ...]:
        """1 for voters whose vote counts, 0 for virtual voters."""
        return tuple(0 if v in self.virtual else 1 for v in range(self.n))

    @cached_property
    def topological_order(self) -> tuple[int, ...]:
        """Delegatees before delegators; raises ``graphlib.CycleError`` on cycles."""
        ts = graphlib.TopologicalSorter({v: self.out_neighbors[v] for v in range(self.n)})
        return tuple(ts.static_order())

    @cached_property
    def stats(self) -> InstanceStats:
        longest = [0] * self.n
        for v in self.topological_order:
            outs = self.out_neighbors[v]
            if outs:
                longest[v] = 1 + max(longest[w] for w in outs)
        return InstanceStats(
            n=self.n,
            m=self.m,
            t=len(self.active),
            max_out_degree=max((len(o) for o in self.out_neighbors), default=0),
            max_in_degree=max((len(i) for i in self.in_neighbors), default=0),
            longest_path=max(longest, default=0),
            max_ballot_size=max((len(b) for b in self.ballots.values()), default=0),
        )

    def cost(self, source: int, target: int):
        return self.arc_map[(source, target)].cost

    def redirection_cost(self, redirections: Iterable[Redirection]):
        return sum(self.arc_map[r.arc].cost for r in redirections)

    def to_dict(self) -> dict:
        return instance_to_dict(self)


# -- construction helpers ------------------------------------------------------

def build_instance(
    candidates: Iterable[str],
    ballots: Mapping[str, Iterable[str]],
    arcs: Iterable[tuple] = (),
    *,
    preferred: str,
    budget: int = 0,
    rule: str = "union",
    voters: Iterable[str] | None = None,
    virtual: Iterable[str] = (),
) -> Instance:
    """Build and validate an instance from display names.

    ``arcs`` holds ``(source, target)`` or ``(source, target, cost)`` tuples.
    Voter order defaults to first appearance in ``ballots`` then ``arcs``.
    """
    arcs = [tuple(a) for a in arcs]
    if voters is None:
        order: dict[str, None] = {}
        for name in ballots:
            order.setdefault(name)
        for a in arcs:
            order.setdefault(a[0])
            order.setdefault(a[1])
        voters = list(order)
    entries = []
    outs: dict[str, list] = {}
    for a in arcs:
        cost = a[2] if len(a) > 2 else 1
        outs.setdefault(a[0], []).append({"to": a[1], "cost": cost})
    virtual = set(virtual)
    for name in voters:
        entry: dict = {"id": name}
        if name in ballots:
            entry["ballot"] = list(ballots[name])
        if name in outs:
            entry["delegates"] = outs[name]
        if name in virtual:
            entry["virtual"] = True
        entries.append(entry)
    raw = {
        "candidates": list(candidates),
        "preferred": preferred,
        "budget": budget,
        "rule": rule,
        "voters": entries,
    }
    return validate_instance(raw)


def _parse_cost(value, violations, where):
    if value is None:
        return 1
    if isinstance(value, str) and value.lower() in ("inf", "infinity"):
        return INF
    if value == INF:
        return INF
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 0:
        violations.append(Violation("InvalidCost", f"{where}: cost must be a nonnegative integer or 'inf', got {value!r}"))
        return 1
    return int(value)


def instance_from_dict(raw: Mapping) -> Instance:
    """Parse and validate the canonical JSON form; all violations are
    collected and raised together."""
    violations: list[Violation] = []
    candidates = [str(c) for c in raw.get("candidates", [])]
    cand_index: dict[str, int] = {}
    for i, c in enumerate(candidates):
        if c in cand_index:
            violations.append(Violation("DuplicateId", f"candidate {c!r} listed twice"))
        cand_index.setdefault(c, i)
    voter_entries = list(raw.get("voters", []))
    voters = [str(e.get("id")) for e in voter_entries]
    voter_index: dict[str, int] = {}
    for i, v in enumerate(voters):
        if v in voter_index:
            violations.append(Violation("DuplicateId", f"voter {v!r} listed twice"))
        voter_index.setdefault(v, i)

    arcs: list[Arc] = []
    ballots: dict[int, frozenset[int]] = {}
    virtual: set[int] = set()
    for i, entry in enumerate(voter_entries):
        name = voters[i]
        has_ballot = "ballot" in entry and entry["ballot"] is not None
        delegates = entry.get("delegates") or []
        if has_ballot and delegates:
            violations.append(Violation("BallotOnPassiveVoter", f"voter {name!r} has both a ballot and delegates"))
        if has_ballot:
            approved = set()
            for c in entry["ballot"]:
                if str(c) not in cand_index:
                    violations.append(Violation("UnknownId", f"voter {name!r} approves unknown candidate {c!r}"))
                else:
                    approved.add(cand_index[str(c)])
            ballots[i] = frozenset(approved)
        for d in delegates:
            to = str(d.get("to"))
            if to not in voter_index:
                violations.append(Violation("UnknownId", f"voter {name!r} delegates to unknown voter {to!r}"))
                continue
            cost = _parse_cost(d.get("cost"), violations, f"arc {name}->{to}")
            arcs.append(Arc(i, voter_index[to], cost))
        if entry.get("virtual"):
            virtual.add(i)

    preferred_name = raw.get("preferred")
    if preferred_name is None or str(preferred_name) not in cand_index:
        violations.append(Violation("UnknownId", f"preferred candidate {preferred_name!r} is not a candidate"))
        preferred = 0
    else:
        preferred = cand_index[str(preferred_name)]
    budget = raw.get("budget", 0)
    if isinstance(budget, bool) or not isinstance(budget, numbers.Integral):
        violations.append(Violation("InvalidBudget", f"budget must be a nonnegative integer, got {budget!r}"))
        budget = 0
    rule = raw.get("rule", "union")
    if violations:
        raise InvalidInstance(violations)
    inst = Instance(
        candidates=tuple(candidates),
        voters=tuple(voters),
        arcs=tuple(arcs),
        ballots=ballots,
        preferred=preferred,
        budget=int(budget),
        rule=str(rule),
        virtual=frozenset(virtual),
    )
    violations = _structural_violations(inst)
    if violations:
        raise InvalidInstance(violations)
    inst.stats
    return inst


def _format_cost(cost):
    return "inf" if cost == INF else cost


def instance_to_dict(instance: Instance) -> dict:
    entries = []
    for v, name in enumerate(instance.voters):
        entry: dict = {"id": name}
        if v in instance.ballots:
            entry["ballot"] = [instance.candidates[c] for c in sorted(instance.ballots[v])]
        else:
            entry["delegates"] = [
                {"to": instance.voters[a.target], "cost": _format_cost(a.cost)}
                for a in sorted(instance.arcs)
                if a.source == v
            ]
        if v in instance.virtual:
            entry["virtual"] = True
        entries.append(entry)
    return {
        "candidates": list(instance.candidates),
        "preferred": instance.candidates[instance.preferred],
        "budget": instance.budget,
        "rule": instance.rule,
        "voters": entries,
    }


# -- validation ------------------------------------------------------------------

def _structural_violations(inst: Instance) -> list[Violation]:
    out: list[Violation] = []
    n, m = inst.n, inst.m
    if n == 0:
        out.append(Violation("EmptyElection", "instance has no voters"))
    if m == 0:
        out.append(Violation("EmptyElection", "instance has no candidates"))
    if len(set(inst.voters)) != n:
        out.append(Violation("DuplicateId", "voter names are not unique"))
    if len(set(inst.candidates)) != m:
        out.append(Violation("DuplicateId", "candidate names are not unique"))
    if not 0 <= inst.preferred < max(m, 1):
        out.append(Violation("UnknownId", f"preferred candidate index {inst.preferred} out of range"))
    if isinstance(inst.budget, bool) or not isinstance(inst.budget, numbers.Integral) or inst.budget < 0:
        out.append(Violation("InvalidBudget", f"budget must be a nonnegative integer, got {inst.budget!r}"))
    if inst.rule not in RULES:
        out.append(Violation("UnknownRule", f"rule must be one of {RULES}, got {inst.rule!r}"))

    seen: set[tuple[int, int]] = set()
    has_out = [False] * n
    arcs_ok = True
    for a in inst.arcs:
        if not (0 <= a.source < n and 0 <= a.target < n):
            out.append(Violation("UnknownId", f"arc {a.source}->{a.target} references an unknown voter"))
            arcs_ok = False
            continue
        has_out[a.source] = True
        if a.source == a.target:
            out.append(Violation("CycleDetected", f"voter {inst.voters[a.source]!r} delegates to itself"))
            arcs_ok = False
        if (a.source, a.target) in seen:
            out.append(Violation("ParallelArc", f"arc {inst.voters[a.source]}->{inst.voters[a.target]} appears twice"))
            arcs_ok = False
        seen.add((a.source, a.target))
        if a.cost != INF and (
            isinstance(a.cost, bool) or not isinstance(a.cost, numbers.Integral) or a.cost < 0
        ):
            out.append(Violation("InvalidCost", f"arc {a.source}->{a.target} has invalid cost {a.cost!r}"))

    for v, ballot in inst.ballots.items():
        if not 0 <= v < n:
            out.append(Violation("UnknownId", f"ballot for unknown voter index {v}"))
            continue
        if has_out[v]:
            out.append(Violation("BallotOnPassiveVoter", f"passive voter {inst.voters[v]!r} has a ballot"))
        if not ballot:
            out.append(Violation("EmptyBallot", f"active voter {inst.voters[v]!r} approves nobody"))
        if any(not 0 <= c < m for c in ballot):
            out.append(Violation("UnknownId", f"voter {inst.voters[v]!r} approves an unknown candidate"))
    for v in range(n):
        if not has_out[v] and v not in inst.ballots:
            out.append(Violation("MissingBallotOnActiveVoter", f"active voter {inst.voters[v]!r} has no ballot"))
    for v in inst.virtual:
        if not 0 <= v < n or has_out[v]:
            out.append(Violation("InvalidVirtual", f"virtual voter index {v} is not an active voter"))

    if arcs_ok:
        try:
            inst.topological_order
        except graphlib.CycleError as exc:
            cycle = [inst.voters[v] for v in exc.args[1]]
            out.append(Violation("CycleDetected", f"delegation cycle {' -> '.join(cycle)}"))
    return out


def validate_instance(raw: Instance | Mapping) -> Instance:
    """Return a validated :class:`Instance` (with stats computed) or raise
    :class:`InvalidInstance` listing every violation."""
    if not isinstance(raw, Instance):
        return instance_from_dict(raw)
    inst = raw
    violations = _structural_violations(inst)
    if violations:
        raise InvalidInstance(violations)
    inst.stats
    return inst


# -- redirection -----------------------------------------------------------------

def _reaches(out: list[list[int]], start: int, goal: int) -> bool:
    stack, seen = [start], {start}
    while stack:
        v = stack.pop()
        if v == goal:
            return True
        for w in out[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return False


def apply_redirections(
    instance: Instance,
    redirections: Iterable[Redirection],
    *,
    enforce_budget: bool = False,
) -> Instance:
    """Return a new instance in which every redirected arc points to its new
    target and keeps its original cost."""
    redirections = list(redirections)
    new_target: dict[tuple[int, int], int] = {}
    for r in redirections:
        if r.arc not in instance.arc_map:
            raise ArcNotFound(f"no arc {r.source}->{r.old_target}")
        if r.arc in new_target:
            raise DuplicateArcRedirect(f"arc {r.source}->{r.old_target} redirected twice")
        if not 0 <= r.new_target < instance.n:
            raise InvalidRedirection(f"unknown target voter index {r.new_target}")
        if r.new_target == r.source:
            raise WouldCreateCycle(f"voter {instance.voters[r.source]!r} cannot delegate to itself")
        if r.new_target == r.old_target:
            raise InvalidRedirection("new target equals the old target")
        new_target[r.arc] = r.new_target
    if not redirections:
        return instance

    total = instance.redirection_cost(redirections)
    if enforce_budget and total > instance.budget:
        raise BudgetExceeded(f"redirection cost {total} exceeds budget {instance.budget}")

    arcs = [Arc(a.source, new_target.get((a.source, a.target), a.target), a.cost) for a in instance.arcs]
    out: list[list[int]] = [[] for _ in range(instance.n)]
    for a in arcs:
        if a.target in out[a.source]:
            raise WouldCreateParallelArc(
                f"voter {instance.voters[a.source]!r} would delegate to {instance.voters[a.target]!r} twice"
            )
        out[a.source].append(a.target)
    for r in redirections:
        if _reaches(out, r.new_target, r.source):
            raise WouldCreateCycle(
                f"redirecting {instance.voters[r.source]}->{instance.voters[r.new_target]} closes a cycle"
            )
    return validate_instance(dataclasses.replace(instance, arcs=tuple(arcs)))
