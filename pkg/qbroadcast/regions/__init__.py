"""Rate-region catalog, evaluation, Fourier-Motzkin reproduction and frontier search"""
from .catalog import (
    CATALOG,
    CONVERSE_BANNER,
    FAMILIES,
    AtomExpr,
    MarkovChain,
    RegionSpec,
    Template,
    get_spec,
)
from .distributions import (
    FactoredDistribution,
    classical_channel,
    constant_channel,
    copy_register,
    degraded_channel,
    double_markov_distribution,
    identical_output_channel,
    markov_chain_distribution,
    marton_distribution,
    random_channel,
    rename_registers,
    superposition_distribution,
)
from .evaluate import (
    AtomTable,
    CheckResult,
    RegionInstance,
    ReproductionReport,
    build_system,
    check_downward_closed,
    check_markov,
    data_processing_margin,
    evaluate_region,
    markov_deviation,
    project_preliminary,
    reproduce_final_region,
    slice_vertices,
    special_case_checks,
)
from .search import FrontierPoint, nondominated, pareto_search

__all__ = [
    'CATALOG',
    'CONVERSE_BANNER',
    'FAMILIES',
    'AtomExpr',
    'MarkovChain',
    'RegionSpec',
    'Template',
    'get_spec',
    'FactoredDistribution',
    'classical_channel',
    'constant_channel',
    'copy_register',
    'degraded_channel',
    'double_markov_distribution',
    'identical_output_channel',
    'markov_chain_distribution',
    'marton_distribution',
    'random_channel',
    'rename_registers',
    'superposition_distribution',
    'AtomTable',
    'CheckResult',
    'RegionInstance',
    'ReproductionReport',
    'build_system',
    'check_downward_closed',
    'check_markov',
    'data_processing_margin',
    'evaluate_region',
    'markov_deviation',
    'project_preliminary',
    'reproduce_final_region',
    'slice_vertices',
    'special_case_checks',
    'FrontierPoint',
    'nondominated',
    'pareto_search',
]
