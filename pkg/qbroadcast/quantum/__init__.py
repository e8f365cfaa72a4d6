"""Quantum information primitives: pinching, divergences, mutual informations"""
from .pinching import (
    SCENARIO_LEVELS,
    CountReport,
    NestedPinchingFamily,
    PinchingLevel,
    PinchingMap,
    build_nested,
    check_count_bounds,
    count_bounds,
    distinct_eigenvalue_count,
    pinch,
    pinching_from_operator,
    product_spectrum_count,
    verify_pinching_inequality,
)
from .divergence import (
    RenyiOrder,
    dmax,
    petz_renyi,
    relative_entropy,
    renyi_q,
    sandwiched_renyi,
    smooth_dmax_classical,
    support_contained,
)
from .information import (
    MinimizationResult,
    MutualInfoRequest,
    imax_conditional_classical,
    mutual_information,
    renyi_mi_down,
    renyi_mi_up,
    shannon_entropy,
    shannon_mi,
    von_neumann_entropy,
)

__all__ = [
    'SCENARIO_LEVELS',
    'CountReport',
    'NestedPinchingFamily',
    'PinchingLevel',
    'PinchingMap',
    'build_nested',
    'check_count_bounds',
    'count_bounds',
    'distinct_eigenvalue_count',
    'pinch',
    'pinching_from_operator',
    'product_spectrum_count',
    'verify_pinching_inequality',
    'RenyiOrder',
    'dmax',
    'petz_renyi',
    'relative_entropy',
    'renyi_q',
    'sandwiched_renyi',
    'smooth_dmax_classical',
    'support_contained',
    'MinimizationResult',
    'MutualInfoRequest',
    'imax_conditional_classical',
    'mutual_information',
    'renyi_mi_down',
    'renyi_mi_up',
    'shannon_entropy',
    'shannon_mi',
    'von_neumann_entropy',
]
