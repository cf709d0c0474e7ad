"""One entry point choosing a solver from the instance's structure."""

from __future__ import annotations

import time
from typing import Iterable

from ..errors import InvalidConfig, NotSpecialSetting
from ..model import Instance
from ..preprocess import add_virtual_actives
from .brute import solve_brute_force
from .common import Forest, Solution, SolveReport
from .fptas import special_root, solve_fptas
from .tree_dp import solve_single_single
from .xp import solve_xp_active

ALGORITHMS = ("auto", "brute", "tree_dp", "xp", "fptas")
XP_MAX_ACTIVE = 4


def is_special_setting(instance: Instance) -> bool:
    if instance.stats.max_out_degree > 1:
        return False
    pre = add_virtual_actives(instance)
    try:
        special_root(pre, Forest(pre))
    except NotSpecialSetting:
        return False
    return True


def choose_algorithm(instance: Instance) -> str:
    """Exact solver matching the instance class; never the approximation."""
    stats = instance.stats
    if stats.max_out_degree <= 1:
        if stats.max_ballot_size <= 1:
            return "tree_dp"
        if add_virtual_actives(instance).stats.t <= XP_MAX_ACTIVE:
            return "xp"
    return "brute"


def solve(
    instance: Instance,
    algo: str = "auto",
    *,
    epsilon=None,
    targets: Iterable[int] | None = None,
    preprocess: bool = False,
) -> tuple[Solution | None, SolveReport]:
    """Run the requested (or automatically chosen) solver.

    ``targets`` restricts redirect targets and is honoured only by the brute
    force solver. ``preprocess`` adds virtual active voters before solving; the
    returned redirections then refer to the preprocessed instance.
    """
    algo = algo.replace("-", "_")
    if algo not in ALGORITHMS:
        raise InvalidConfig(f"unknown algorithm {algo!r}; expected one of {', '.join(ALGORITHMS)}")
    if preprocess:
        instance = add_virtual_actives(instance)
    chosen = choose_algorithm(instance) if algo == "auto" else algo
    if chosen == "fptas" and epsilon is None:
        raise InvalidConfig("the approximation scheme needs an epsilon")
    if targets is not None and chosen != "brute":
        raise InvalidConfig("target restrictions are only supported by the brute force solver")
    report = SolveReport(chosen)
    report.stats["fptas_available"] = is_special_setting(instance)
    start = time.perf_counter()
    if chosen == "brute":
        solution = solve_brute_force(instance, target_whitelist=targets, stats=report.stats)
    elif chosen == "tree_dp":
        solution = solve_single_single(instance, stats=report.stats)
    elif chosen == "xp":
        solution = solve_xp_active(instance, stats=report.stats)
    else:
        solution = solve_fptas(instance, epsilon, stats=report.stats)
    report.wall_time = time.perf_counter() - start
    report.feasible = solution is not None
    return solution, report
