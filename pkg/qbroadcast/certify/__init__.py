"""Numerical certificates for operator inequalities and seeded sweeps"""
from .lemmas import (
    CERTIFICATE_TOL,
    certify_hayashi_nagaoka,
    certify_hypothesis_testing,
    certify_nested_pinching_proposition,
    certify_petz_to_sandwich,
    certify_pinching_inequality,
    certify_union_bound,
    instance_digest,
    make_certificate,
)
from .sweeps import LEMMA_GENERATORS, SUITES, SweepSummary, regenerate, run_suite, sweep

__all__ = [
    'CERTIFICATE_TOL',
    'certify_hayashi_nagaoka',
    'certify_hypothesis_testing',
    'certify_nested_pinching_proposition',
    'certify_petz_to_sandwich',
    'certify_pinching_inequality',
    'certify_union_bound',
    'instance_digest',
    'make_certificate',
    'LEMMA_GENERATORS',
    'SUITES',
    'SweepSummary',
    'regenerate',
    'run_suite',
    'sweep',
]
