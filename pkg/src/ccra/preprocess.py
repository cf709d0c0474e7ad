"""Collapse active voters with equal approval sets behind virtual voters."""

from __future__ import annotations

import dataclasses

from .model import INF, Arc, Instance, validate_instance


def _virtual_name(instance: Instance, ballot: frozenset[int], taken: set[str]) -> str:
    base = "virtual{" + ",".join(instance.candidates[c] for c in sorted(ballot)) + "}"
    name, k = base, 2
    while name in taken:
        name = f"{base}#{k}"
        k += 1
    return name


def add_virtual_actives(instance: Instance) -> Instance:
    """Give every distinct approval set among active voters one zero-vote
    virtual voter, and make each real active voter delegate to its class
    representative through an arc of infinite cost.

    Already-virtual voters are reused as representatives, so applying the
    transformation twice changes nothing.
    """
    if all(v in instance.virtual for v in instance.active):
        return instance
    voters = list(instance.voters)
    taken = set(voters)
    ballots = dict(instance.ballots)
    virtual = set(instance.virtual)
    arcs = list(instance.arcs)

    representative: dict[frozenset[int], int] = {}
    for v in instance.active:
        if v in instance.virtual:
            representative.setdefault(instance.ballots[v], v)
    for v in instance.active:
        if v in instance.virtual:
            continue
        ballot = instance.ballots[v]
        if ballot not in representative:
            name = _virtual_name(instance, ballot, taken)
            taken.add(name)
            voters.append(name)
            rep = len(voters) - 1
            ballots[rep] = ballot
            virtual.add(rep)
            representative[ballot] = rep
        del ballots[v]
        arcs.append(Arc(v, representative[ballot], INF))

    return validate_instance(
        dataclasses.replace(
            instance,
            voters=tuple(voters),
            arcs=tuple(arcs),
            ballots=ballots,
            virtual=frozenset(virtual),
        )
    )


def is_preprocessed(instance: Instance) -> bool:
    actives = instance.active
    return all(v in instance.virtual for v in actives) and len({instance.ballots[v] for v in actives}) == len(actives)
