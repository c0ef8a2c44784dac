"""Solver for 3x^2 + 2p^(2b) = y^n, the sum of three squares in arithmetic progression."""

from __future__ import annotations

from .lehmer import LehmerSeed, Solution, fn_eval, verify_solution
from .solver import CaseReport, SolverConfig, solve_prime

__all__ = [
    "CaseReport",
    "LehmerSeed",
    "Solution",
    "SolverConfig",
    "fn_eval",
    "solve_prime",
    "verify_solution",
]
__version__ = "0.1.0"
