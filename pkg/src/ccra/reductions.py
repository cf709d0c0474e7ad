"""Hardness gadgets: CCRA instances built from Vertex Cover on cubic graphs
and from Hitting Set, with the forward map from covers to redirections.

Voter names follow a fixed scheme so certificates are stable:

``v:{u}``, ``v':{u}``, ``vh:{u}``, ``vt:{u}``
    vertex (element) gadget; ``vh``/``vt`` only in the b-variants
``e:{f}``, ``e':{f}``
    edge (set) gadget; ``e'`` only where the edge voter is split in two
``d:{f}:{i}``
    dummy voters topping every edge candidate up to score ``k``
``v*``
    the special voter approving ``c*``
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import BudgetTooSmall, EmptySet, NotACover, NotCubic
from .model import Instance, Redirection, build_instance
from .tally import evaluate

VC_VARIANTS = ("multi_a", "multi_b", "single_a", "single_b")
HS_VARIANTS = {"multi": "multi_a", "single": "single_a"}
BASE = {"multi_a": 5, "single_a": 5, "multi_b": 8, "single_b": 6}
SPECIAL = "v*"
PREFERRED = "c*"


@dataclass(frozen=True)
class CubicGraph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        pos = {v: i for i, v in enumerate(self.vertices)}
        edges = []
        for e in self.edges:
            a, b = (str(x) for x in e)
            if a not in pos or b not in pos:
                raise NotCubic(f"edge {a}-{b} uses an unknown vertex")
            edges.append((a, b) if pos[a] <= pos[b] else (b, a))
        object.__setattr__(self, "edges", tuple(edges))
        if len(pos) != len(self.vertices):
            raise NotCubic("duplicate vertex")
        if any(a == b for a, b in edges) or len(set(edges)) != len(edges):
            raise NotCubic("the graph must be simple")
        degree = Counter(x for e in edges for x in e)
        bad = [v for v in self.vertices if degree[v] != 3]
        if bad:
            raise NotCubic(f"vertices without degree three: {', '.join(bad)}")

    def incident(self, v: str) -> list[tuple[str, str]]:
        return [e for e in self.edges if v in e]

    @classmethod
    def from_dict(cls, raw: Mapping) -> "CubicGraph":
        return cls(tuple(raw["vertices"]), tuple(tuple(e) for e in raw["edges"]))


@dataclass(frozen=True)
class SetSystem:
    universe: tuple[str, ...]
    sets: tuple[frozenset[str], ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "universe", tuple(str(u) for u in self.universe))
        sets = tuple(frozenset(str(x) for x in s) for s in self.sets)
        object.__setattr__(self, "sets", sets)
        if any(not s for s in sets):
            raise EmptySet("the family contains the empty set")
        unknown = set().union(*sets) - set(self.universe) if sets else set()
        if unknown:
            raise EmptySet(f"sets use elements outside the universe: {', '.join(sorted(unknown))}")

    @classmethod
    def from_dict(cls, raw: Mapping) -> "SetSystem":
        return cls(tuple(raw["universe"]), tuple(tuple(s) for s in raw["sets"]), int(raw["k"]))


def k4() -> CubicGraph:
    vs = ("1", "2", "3", "4")
    return CubicGraph(vs, tuple((a, b) for i, a in enumerate(vs) for b in vs[i + 1 :]))


def petersen() -> CubicGraph:
    outer = [(str(i), str((i + 1) % 5)) for i in range(5)]
    spokes = [(str(i), str(i + 5)) for i in range(5)]
    inner = [(str(5 + i), str(5 + (i + 2) % 5)) for i in range(5)]
    return CubicGraph(tuple(str(i) for i in range(10)), tuple(outer + spokes + inner))


def is_cover(source: CubicGraph | SetSystem, cover: Iterable[str]) -> bool:
    chosen = {str(x) for x in cover}
    if isinstance(source, CubicGraph):
        return chosen <= set(source.vertices) and all(a in chosen or b in chosen for a, b in source.edges)
    return chosen <= set(source.universe) and all(s & chosen for s in source.sets)


@dataclass(frozen=True)
class ReductionCertificate:
    """Generated instance plus the bookkeeping needed to map covers forward."""

    source: CubicGraph | SetSystem
    variant: str
    k: int
    instance: Instance
    vertex_arcs: Mapping[str, tuple[str, str]]  # element -> (u, u') arc
    edge_voters: Mapping[str, str]  # set label -> voter approving c_f
    dummies: Mapping[str, tuple[str, ...]]
    base: Mapping[str, int] = field(default_factory=dict)

    def voter(self, name: str) -> int:
        return self.instance.voter_index[name]

    def ids(self) -> dict:
        return {
            "variant": self.variant,
            "k": self.k,
            "special": SPECIAL,
            "vertex_arcs": {u: list(a) for u, a in self.vertex_arcs.items()},
            "edge_voters": dict(self.edge_voters),
            "dummies": {f: list(d) for f, d in self.dummies.items()},
        }


def _set_labels(sets: list[tuple[str, ...]]) -> list[str]:
    labels, seen = [], Counter()
    for members in sets:
        base = "-".join(members)
        seen[base] += 1
        labels.append(base if seen[base] == 1 else f"{base}#{seen[base]}")
    return labels


def _gadget(elements, sets, k, variant, dummy_counts):
    """Candidates, ballots and arcs of the construction for ``variant``."""
    expensive = k + 1
    labels = _set_labels(sets)
    candidates = [PREFERRED] + [f"c:{f}" for f in labels]
    ballots: dict[str, list[str]] = {SPECIAL: [PREFERRED]}
    arcs: list[tuple[str, str, int]] = []
    voters = [SPECIAL]
    edge_voters, dummies = {}, {}
    split = variant in ("multi_b", "single_b")

    for u in elements:
        mine = [f for f, members in zip(labels, sets) if u in members]
        voters += [f"v:{u}", f"v':{u}"]
        arcs.append((f"v:{u}", f"v':{u}", 1))
        if variant.startswith("single"):
            ballots[f"v':{u}"] = [f"c:{f}" for f in mine]
        elif variant == "multi_a":
            arcs += [(f"v':{u}", f"e:{f}", 2) for f in mine]
        else:
            voters += [f"vh:{u}", f"vt:{u}"]
            arcs += [(f"v':{u}", f"vh:{u}", expensive), (f"v':{u}", f"vt:{u}", expensive)]
            arcs += [(f"vh:{u}", f"e:{f}", expensive) for f in mine[:2]]
            arcs += [(f"vt:{u}", f"e:{f}", expensive) for f in mine[2:]]

    for f in labels:
        top = f"e':{f}" if split else f"e:{f}"
        voters.append(f"e:{f}")
        if split:
            voters.append(top)
            arcs.append((f"e:{f}", top, expensive))
        ballots[top] = [f"c:{f}"]
        edge_voters[f] = top
        names = tuple(f"d:{f}:{i}" for i in range(1, dummy_counts.get(f, 0) + 1))
        dummies[f] = names
        voters += names
        if variant in ("multi_a", "single_a"):
            cost = 2 if variant == "multi_a" else 1
            arcs += [(d, f"e:{f}", cost) for d in names]
        elif names:
            # a chain keeps in-degrees small
            end = top if variant == "multi_b" else f"e:{f}"
            chain = list(names) + [end]
            arcs += [(a, b, expensive) for a, b in zip(chain, chain[1:])]
    return labels, candidates, voters, ballots, arcs, edge_voters, dummies


def _reduce(source, elements, sets, k: int, variant: str) -> tuple[Instance, ReductionCertificate]:
    elements = [u for u in elements if any(u in s for s in sets)]
    labels, candidates, voters, ballots, arcs, _, _ = _gadget(elements, sets, k, variant, {})
    bare = build_instance(candidates, ballots, arcs, preferred=PREFERRED, budget=k, voters=voters)
    scores = evaluate(bare).scores
    base = {f: scores[bare.candidate_index[f"c:{f}"]] for f in labels}
    short = {f: b for f, b in base.items() if b > k}
    if short:
        raise BudgetTooSmall(f"k={k} is below the gadget base score {max(short.values())} for variant {variant}")
    counts = {f: k - b for f, b in base.items()}
    labels, candidates, voters, ballots, arcs, edge_voters, dummies = _gadget(elements, sets, k, variant, counts)
    instance = build_instance(candidates, ballots, arcs, preferred=PREFERRED, budget=k, voters=voters)
    cert = ReductionCertificate(
        source=source,
        variant=variant,
        k=k,
        instance=instance,
        vertex_arcs={u: (f"v:{u}", f"v':{u}") for u in elements},
        edge_voters=edge_voters,
        dummies=dummies,
        base=base,
    )
    return instance, cert


def reduce_vertex_cover(g: CubicGraph, k: int, variant: str) -> tuple[Instance, ReductionCertificate]:
    """Gadget instance with budget ``k`` in which every edge candidate starts
    at score exactly ``k`` and ``c*`` at score 1."""
    variant = variant.replace("-", "_")
    if variant not in VC_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if not isinstance(g, CubicGraph):
        g = CubicGraph(g.vertices, g.edges)
    return _reduce(g, list(g.vertices), list(g.edges), k, variant)


def reduce_hitting_set(s: SetSystem, variant: str) -> tuple[Instance, ReductionCertificate]:
    """Same construction with one candidate per set; elements occurring in
    no set get no gadget."""
    if variant not in HS_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    order = {u: i for i, u in enumerate(s.universe)}
    sets = [tuple(sorted(f, key=order.__getitem__)) for f in s.sets]
    return _reduce(s, list(s.universe), sets, s.k, HS_VARIANTS[variant])


def forward_certificate(cert: ReductionCertificate, cover: Iterable[str]) -> tuple[Redirection, ...]:
    """Redirect the ``(u, u')`` arc of every cover element to ``v*``.

    Covers smaller than ``k`` are padded, as if the cover had exactly ``k``
    elements: first with further vertex arcs, then with dummy arcs, as long as
    the budget allows.
    """
    cover = [str(x) for x in cover]
    if not is_cover(cert.source, cover):
        raise NotACover("the given set does not cover every edge/set")
    if len(set(cover)) > cert.k:
        raise NotACover(f"the cover has {len(set(cover))} elements, more than k={cert.k}")
    inst = cert.instance
    star = cert.voter(SPECIAL)
    chosen: list[tuple[int, int]] = []
    seen = set()
    order = list(dict.fromkeys(cover)) + [u for u in cert.vertex_arcs if u not in cover]
    candidates = [cert.vertex_arcs[u] for u in order if u in cert.vertex_arcs]
    candidates += [
        (d, nxt)
        for f, names in cert.dummies.items()
        for d, nxt in zip(names, list(names[1:]) + [None])
    ]
    spent = 0
    for src, dst in candidates:
        if len(chosen) >= cert.k:
            break
        s = cert.voter(src)
        t = inst.out_neighbors[s][0] if dst is None else cert.voter(dst)
        if s in seen:
            continue
        cost = inst.cost(s, t)
        forced = len(chosen) < len(set(cover))
        if spent + cost > cert.k:
            if forced:
                raise NotACover("the cover does not fit the budget")
            continue
        chosen.append((s, t))
        seen.add(s)
        spent += cost
    return tuple(sorted(Redirection(s, t, star) for s, t in chosen))
