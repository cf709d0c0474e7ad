"""Constructive control by redirecting delegation arcs in liquid democracy."""

from .errors import CCRAError
from .model import (
    INF,
    RULES,
    Arc,
    Instance,
    Redirection,
    apply_redirections,
    build_instance,
    instance_from_dict,
    instance_to_dict,
    validate_instance,
)
from .preprocess import add_virtual_actives
from .solvers import (
    Solution,
    solve,
    solve_brute_force,
    solve_fptas,
    solve_single_single,
    solve_xp_active,
)
from .tally import evaluate, is_unique_winner, unique_winner
from .unravel import unravel

__version__ = "0.1.0"

__all__ = [
    "CCRAError",
    "INF",
    "RULES",
    "Arc",
    "Instance",
    "Redirection",
    "Solution",
    "add_virtual_actives",
    "apply_redirections",
    "build_instance",
    "evaluate",
    "instance_from_dict",
    "instance_to_dict",
    "is_unique_winner",
    "solve",
    "solve_brute_force",
    "solve_fptas",
    "solve_single_single",
    "solve_xp_active",
    "unique_winner",
    "unravel",
    "validate_instance",
]
