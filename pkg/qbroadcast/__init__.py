"""
qbroadcast - Rate regions, operator certificates and one-shot codes for
three-receiver quantum broadcast channels.

Core components:
- BroadcastChannel / AuxiliaryDistribution: Channel x -> rho_x and the auxiliary pmf
- NestedPinchingFamily: Memoized nested pinching maps and eigenvalue counts
- run_suite: Seeded numerical certificates of the operator inequalities
- evaluate_region / reproduce_final_region: Exact rate regions and Fourier-Motzkin checks
- CodeSimulator: Random codebooks, pinched square-root decoders and Monte-Carlo errors
- ArtifactStore: JSON, CSV and Parquet artifacts with run metadata
- Config: Configuration management

Example:
    >>> import numpy as np
    >>> from qbroadcast import degraded_channel, markov_chain_distribution, evaluate_region
    >>> rng = np.random.default_rng(7)
    >>> channel = degraded_channel(rng)
    >>> dist = markov_chain_distribution(rng).build()
    >>> region = evaluate_region('multilevel_final', channel, dist)
    >>> print(region.system.to_text())
"""

__version__ = '0.1.0'

from .config import Config, create_example_config, setup_logging
from .errors import (
    DimensionError,
    InfeasibleSystemError,
    MarkovConstraintError,
    QBroadcastError,
    UnboundedSystemError,
    ValidationError,
)
from .states import AuxiliaryDistribution, BroadcastChannel, CqState, channel_to_cqstate
from .quantum import NestedPinchingFamily
from .certify import run_suite, sweep
from .regions import (
    degraded_channel,
    evaluate_region,
    markov_chain_distribution,
    pareto_search,
    reproduce_final_region,
)
from .codesim import CodeSimulator, monte_carlo
from .storage import ArtifactStore

__all__ = [
    'Config',
    'create_example_config',
    'setup_logging',
    'DimensionError',
    'InfeasibleSystemError',
    'MarkovConstraintError',
    'QBroadcastError',
    'UnboundedSystemError',
    'ValidationError',
    'AuxiliaryDistribution',
    'BroadcastChannel',
    'CqState',
    'channel_to_cqstate',
    'NestedPinchingFamily',
    'run_suite',
    'sweep',
    'degraded_channel',
    'evaluate_region',
    'markov_chain_distribution',
    'pareto_search',
    'reproduce_final_region',
    'CodeSimulator',
    'monte_carlo',
    'ArtifactStore',
]
