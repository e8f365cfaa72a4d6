"""Exact-rational inequality systems, simplex LP and Fourier-Motzkin elimination"""
from .system import DEFAULT_BITS, InequalitySystem, LinearInequality, parse_inequality, quantize
from .simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, LPResult, is_feasible, lp_max, solve
from .fourier_motzkin import contains, fm_eliminate, polytope_equal, prune_redundant, violated_constraints

__all__ = [
    'DEFAULT_BITS',
    'InequalitySystem',
    'LinearInequality',
    'parse_inequality',
    'quantize',
    'INFEASIBLE',
    'OPTIMAL',
    'UNBOUNDED',
    'LPResult',
    'is_feasible',
    'lp_max',
    'solve',
    'contains',
    'fm_eliminate',
    'polytope_equal',
    'prune_redundant',
    'violated_constraints',
]
