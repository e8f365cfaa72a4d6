"""Dense Hermitian linear algebra and random instance generators"""
from .hermitian import (
    DEFAULT_CLUSTER_TOL,
    Eigenspace,
    SpectralDecomposition,
    as_hermitian,
    check_density,
    check_dim,
    cluster_eigenvalues,
    commutator_norm,
    distinct_eigenvalues,
    fidelity,
    kron,
    log2_on_support,
    matrix_power,
    min_eigenvalue,
    operator_norm,
    partial_trace,
    positive_part_projector,
    purified_distance,
    spectral,
    support_projector,
    trace_norm,
)

__all__ = [
    'DEFAULT_CLUSTER_TOL',
    'Eigenspace',
    'SpectralDecomposition',
    'as_hermitian',
    'check_density',
    'check_dim',
    'cluster_eigenvalues',
    'commutator_norm',
    'distinct_eigenvalues',
    'fidelity',
    'kron',
    'log2_on_support',
    'matrix_power',
    'min_eigenvalue',
    'operator_norm',
    'partial_trace',
    'positive_part_projector',
    'purified_distance',
    'spectral',
    'support_projector',
    'trace_norm',
]
