"""Seeded random instances and a small CSV benchmark harness."""

from __future__ import annotations

import csv
import io
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import CCRAError, InvalidConfig
from .model import INF, RULES, Instance, build_instance
from .solvers import solve, solve_brute_force

BENCH_COLUMNS = ("id", "n", "m", "t", "algo", "feasible", "cost", "redirections", "wall_time", "guesses", "error")
ORACLE_COLUMNS = ("oracle_feasible", "oracle_cost", "agrees")


@dataclass(frozen=True)
class GenConfig:
    """Parameters for ``gen_random``.

    ``budget`` is either a fixed integer or a ``Fraction`` of the total arc
    cost. ``max_active`` forces voters beyond the first ``max_active`` to
    delegate. ``special`` gives voter 0 the ballot ``{c*}`` and keeps ``c*``
    off every other ballot.
    """

    n: int
    m: int
    max_out_degree: int = 1
    max_ballot_size: int = 1
    max_cost: int = 1
    budget: int | Fraction = 0
    seed: int = 0
    rule: str = "union"
    max_active: int | None = None
    special: bool = False

    def validate(self) -> None:
        problems = []
        if self.n < 1:
            problems.append("n must be at least 1")
        if self.m < 2:
            problems.append("m must be at least 2")
        if self.max_out_degree < 1:
            problems.append("max_out_degree must be at least 1")
        if self.max_ballot_size < 1:
            problems.append("max_ballot_size must be at least 1")
        if self.max_cost < 1:
            problems.append("max_cost must be at least 1")
        if self.budget < 0:
            problems.append("budget must be nonnegative")
        if self.rule not in RULES:
            problems.append(f"rule must be one of {', '.join(RULES)}")
        if self.max_active is not None and self.max_active < 1:
            problems.append("max_active must be at least 1")
        if problems:
            raise InvalidConfig("; ".join(problems))


def gen_random(cfg: GenConfig) -> Instance:
    """Random acyclic instance; arcs only run from higher to lower voter
    index, so the graph is a DAG by construction. Voter 0 is always active
    and candidate 0 is ``cstar``."""
    cfg.validate()
    rng = random.Random(cfg.seed)
    candidates = ["cstar"] + [f"c{i}" for i in range(1, cfg.m)]
    voters = [f"v{i}" for i in range(cfg.n)]
    arcs = []
    for i in range(1, cfg.n):
        low = 1 if cfg.max_active is not None and i >= cfg.max_active else 0
        degree = rng.randint(low, min(cfg.max_out_degree, i))
        for j in sorted(rng.sample(range(i), degree)):
            arcs.append((voters[i], voters[j], rng.randint(1, cfg.max_cost)))
    delegating = {a[0] for a in arcs}
    ballots = {}
    for i, v in enumerate(voters):
        if v in delegating:
            continue
        if cfg.special and i == 0:
            ballots[v] = ["cstar"]
            continue
        pool = range(1, cfg.m) if cfg.special else range(cfg.m)
        size = rng.randint(1, min(cfg.max_ballot_size, len(pool)))
        ballots[v] = [candidates[c] for c in sorted(rng.sample(pool, size))]
    if isinstance(cfg.budget, Fraction):
        budget = int(cfg.budget * sum(a[2] for a in arcs))
    else:
        budget = cfg.budget
    return build_instance(candidates, ballots, arcs, preferred="cstar", budget=budget, rule=cfg.rule, voters=voters)


def _guesses(stats: dict):
    for key in ("guesses", "leaves", "cells"):
        if key in stats:
            return stats[key]
    return ""


def bench_rows(suite: Iterable[tuple], *, oracle: bool = False) -> list[dict]:
    """One row per ``(instance, algo, epsilon)`` entry, in input order.
    Solver errors are recorded in the ``error`` column by code."""
    rows = []
    for idx, (instance, algo, epsilon) in enumerate(suite):
        s = instance.stats
        row = dict.fromkeys(BENCH_COLUMNS, "")
        row.update(id=idx, n=s.n, m=s.m, t=s.t, algo=algo)
        start = time.perf_counter()
        try:
            solution, report = solve(instance, algo, epsilon=epsilon)
        except CCRAError as exc:
            row.update(wall_time=f"{time.perf_counter() - start:.6f}", error=exc.code)
        else:
            row.update(
                algo=report.algo,
                feasible=solution is not None,
                cost="" if solution is None else _plain(solution.total_cost),
                redirections="" if solution is None else solution.n_redirections,
                wall_time=f"{report.wall_time:.6f}",
                guesses=_guesses(report.stats),
            )
        if oracle:
            try:
                ref = solve_brute_force(instance)
            except CCRAError as exc:
                row.update(oracle_feasible="", oracle_cost="", agrees="", error=row["error"] or exc.code)
            else:
                row["oracle_feasible"] = ref is not None
                row["oracle_cost"] = "" if ref is None else _plain(ref.total_cost)
                row["agrees"] = "" if row["error"] else (row["feasible"] == row["oracle_feasible"])
        rows.append(row)
    return rows


def _plain(cost):
    return "inf" if cost == INF else int(cost)


def bench(suite: Iterable[tuple], *, oracle: bool = False) -> str:
    """CSV report (RFC 4180 quoting) of running every suite entry."""
    columns = BENCH_COLUMNS + (ORACLE_COLUMNS if oracle else ())
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=columns, lineterminator="\r\n")
    writer.writeheader()
    writer.writerows(bench_rows(suite, oracle=oracle))
    return out.getvalue()
