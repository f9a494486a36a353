"""Exact simplex, branch-and-bound and the optional float path."""
from .bnb import DEFAULT_NODE_LIMIT, solve, solve_mip
from .lp import INFEASIBLE, OPTIMAL, UNBOUNDED, SolveResult, count_simultaneity, solve_lp
from .simplex import CertificateError, solve_standard

__all__ = [
    "solve_lp", "solve_mip", "solve", "count_simultaneity", "SolveResult", "solve_standard", "CertificateError",
    "OPTIMAL", "INFEASIBLE", "UNBOUNDED", "DEFAULT_NODE_LIMIT",
]
