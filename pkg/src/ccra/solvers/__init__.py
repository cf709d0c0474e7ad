"""Exact and approximate solvers for constructive control by redirecting arcs."""

from .brute import solve_brute_force
from .common import Forest, Solution, SolveReport, make_solution
from .dispatch import ALGORITHMS, choose_algorithm, is_special_setting, solve
from .fptas import exponent_range, solve_fptas
from .tree_dp import VoteArrays, max_votes_under_budget, solve_single_single, tree_min_cost_arrays
from .xp import MultiTargetTable, multi_target_table, solve_xp_active

__all__ = [
    "ALGORITHMS",
    "Forest",
    "MultiTargetTable",
    "Solution",
    "SolveReport",
    "VoteArrays",
    "choose_algorithm",
    "exponent_range",
    "is_special_setting",
    "make_solution",
    "max_votes_under_budget",
    "multi_target_table",
    "solve",
    "solve_brute_force",
    "solve_fptas",
    "solve_single_single",
    "solve_xp_active",
    "tree_min_cost_arrays",
]
