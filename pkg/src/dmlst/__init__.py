"""Exact branch-and-reduce solver for maximum-leaf out-branchings."""

from .digraph import DiGraph
from .solver import SolverConfig, solve, solve_naive_bn, solve_rooted

__all__ = ["DiGraph", "SolverConfig", "solve", "solve_rooted", "solve_naive_bn"]
