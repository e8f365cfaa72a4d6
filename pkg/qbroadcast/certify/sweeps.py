"""
Seeded property sweeps over random instances of every certified lemma.

Each instance is generated from its own integer seed, derived from the
master seed with ``numpy.random.SeedSequence``, so any certificate can be
regenerated from (lemma_id, instance_seed) and compared by digest.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from ..linalg.random import random_commuting_projectors, random_density, random_pmf, random_unitary
from ..schema.models import Certificate
from ..states.cq_state import ClassicalRegister, CqState
from .lemmas import (
    CERTIFICATE_TOL,
    certify_hayashi_nagaoka,
    certify_hypothesis_testing,
    certify_nested_pinching_proposition,
    certify_petz_to_sandwich,
    certify_pinching_inequality,
    certify_union_bound,
)

logger = logging.getLogger(__name__)

ALPHA_GRID = tuple(round(0.1 * k, 1) for k in range(1, 10))
M_EXPONENTS = tuple(range(-4, 9))


def _effect(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Random 0 <= S <= I, sometimes with eigenvalues exactly 0 or 1."""
    w = rng.random(dim)
    if rng.random() < 0.3:
        w[rng.random(dim) < 0.4] = 0.0
    if rng.random() < 0.3:
        w[rng.random(dim) < 0.3] = 1.0
    u = random_unitary(rng, dim)
    return (u * w) @ u.conj().T


def _degenerate_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Density matrix whose spectrum has repeated eigenvalues."""
    levels = rng.random(max(1, dim // 2)) + 0.05
    w = levels[rng.integers(0, len(levels), dim)]
    u = random_unitary(rng, dim)
    rho = (u * (w / w.sum())) @ u.conj().T
    return (rho + rho.conj().T) / 2


def _reference_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    return _degenerate_density(rng, dim) if rng.random() < 0.3 else random_density(rng, dim)


def hayashi_nagaoka_instance(rng: np.random.Generator, tolerance: float) -> List[Certificate]:
    dim = int(rng.integers(2, 9))
    s_op = _effect(rng, dim)
    if rng.random() < 0.2:
        t_op = np.zeros((dim, dim), dtype=complex)
    else:
        t_op = rng.uniform(0, 2) * random_density(rng, dim, rank=int(rng.integers(1, dim + 1)))
    return [certify_hayashi_nagaoka(s_op, t_op, tolerance=tolerance)]


def pinching_instance(rng: np.random.Generator, tolerance: float) -> List[Certificate]:
    dim = int(rng.integers(2, 7))
    return [certify_pinching_inequality(random_density(rng, dim), _reference_state(rng, dim), tolerance=tolerance)]


def hypothesis_testing_instance(rng: np.random.Generator, tolerance: float) -> List[Certificate]:
    dim = int(rng.integers(2, 7))
    m = 2.0 ** int(rng.choice(M_EXPONENTS))
    alpha = float(rng.choice(ALPHA_GRID))
    return [certify_hypothesis_testing(random_density(rng, dim), _reference_state(rng, dim), m, alpha, tolerance=tolerance)]


def petz_to_sandwich_instance(rng: np.random.Generator, tolerance: float) -> List[Certificate]:
    dim = int(rng.integers(2, 7))
    alpha = float(rng.choice(ALPHA_GRID))
    return [certify_petz_to_sandwich(random_density(rng, dim), _reference_state(rng, dim), alpha, tolerance=tolerance)]


def union_bound_instance(rng: np.random.Generator, tolerance: float) -> List[Certificate]:
    dim = int(rng.integers(2, 7))
    ops = random_commuting_projectors(rng, dim, 3)
    return [certify_union_bound(ops, random_density(rng, dim), tolerance=tolerance)]


def nested_pinching_instance(rng: np.random.Generator, tolerance: float) -> List[Certificate]:
    sizes = (2, 2, 2)
    registers = [ClassicalRegister(n, s) for n, s in zip(('U', 'V', 'X'), sizes)]
    pmf = random_pmf(rng, sizes)
    cond = np.stack([random_density(rng, 2) for _ in range(int(np.prod(sizes)))]).reshape(sizes + (2, 2))
    state = CqState(registers, pmf, cond)
    alpha = float(rng.choice(ALPHA_GRID))
    return certify_nested_pinching_proposition(state, alpha, tolerance=tolerance)


LEMMA_GENERATORS: Dict[str, Callable[[np.random.Generator, float], List[Certificate]]] = {
    'hayashi_nagaoka': hayashi_nagaoka_instance,
    'hypothesis_testing': hypothesis_testing_instance,
    'petz_to_sandwich': petz_to_sandwich_instance,
    'union_bound': union_bound_instance,
    'pinching_inequality': pinching_instance,
    'nested_pinching': nested_pinching_instance,
}

SUITES = {
    'lemmas': ('hayashi_nagaoka', 'hypothesis_testing', 'petz_to_sandwich', 'union_bound'),
    'pinching': ('pinching_inequality', 'nested_pinching'),
}
SUITES['all'] = SUITES['lemmas'] + SUITES['pinching']


@dataclass
class SweepSummary:
    """Outcome of one lemma sweep"""
    lemma_id: str
    instances: int
    certificates: List[Certificate] = field(default_factory=list)
    stats: Dict[str, int] = field(default_factory=lambda: {'passed': 0, 'failed': 0, 'errors': 0})

    @property
    def min_margin(self) -> float:
        return min((c.margin for c in self.certificates), default=float('nan'))

    @property
    def passed(self) -> bool:
        return self.stats['failed'] == 0 and self.stats['errors'] == 0

    def to_dict(self) -> dict:
        return {
            'lemma_id': self.lemma_id,
            'instances': self.instances,
            'certificates': len(self.certificates),
            'min_margin': self.min_margin,
            'passed': self.passed,
            **self.stats,
        }


def instance_seeds(master_seed: int, trials: int) -> List[int]:
    children = np.random.SeedSequence(master_seed).spawn(trials)
    return [int(c.generate_state(1, dtype=np.uint32)[0]) for c in children]


def regenerate(lemma_id: str, instance_seed: int, tolerance: float = CERTIFICATE_TOL) -> List[Certificate]:
    """Rebuild the certificates of one sweep instance from its seed."""
    certificates = LEMMA_GENERATORS[lemma_id](np.random.default_rng(instance_seed), tolerance)
    for c in certificates:
        c.instance_seed = instance_seed
    return certificates


def sweep(
    lemma_id: str,
    trials: int,
    master_seed: int = 0,
    tolerance: float = CERTIFICATE_TOL,
    workers: int = 4
) -> SweepSummary:
    """
    Certify one lemma on ``trials`` random instances.

    Args:
        lemma_id: Key of LEMMA_GENERATORS
        trials: Number of instances
        master_seed: Seed from which instance seeds are derived
        tolerance: Pass threshold on margins
        workers: Thread pool size

    Returns:
        SweepSummary with all certificates and pass/fail/error counts
    """
    if lemma_id not in LEMMA_GENERATORS:
        raise KeyError(f"unknown lemma '{lemma_id}', expected one of {sorted(LEMMA_GENERATORS)}")
    seeds = instance_seeds(master_seed, trials)
    summary = SweepSummary(lemma_id=lemma_id, instances=trials)

    def run(seed: int) -> Optional[List[Certificate]]:
        try:
            return regenerate(lemma_id, seed, tolerance)
        except Exception as e:
            logger.error(f"{lemma_id} instance seed={seed} failed: {e}", exc_info=True)
            return None

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = list(pool.map(run, seeds))

    for certificates in results:
        if certificates is None:
            summary.stats['errors'] += 1
            continue
        for c in certificates:
            summary.certificates.append(c)
            summary.stats['passed' if c.passed else 'failed'] += 1

    if summary.passed:
        logger.info(
            f"✓ {lemma_id}: {len(summary.certificates):,} certificates, min margin {summary.min_margin:.3e}"
        )
    else:
        logger.warning(
            f"{lemma_id}: {summary.stats['failed']:,} failed, {summary.stats['errors']:,} errors "
            f"(min margin {summary.min_margin:.3e})"
        )
    return summary


def run_suite(
    suite: str,
    trials: int,
    master_seed: int = 0,
    tolerance: float = CERTIFICATE_TOL,
    workers: int = 4
) -> List[SweepSummary]:
    """Run every lemma of a named suite; lemma k uses master seed + k."""
    if suite not in SUITES:
        raise KeyError(f"unknown suite '{suite}', expected one of {sorted(SUITES)}")
    return [
        sweep(lemma_id, trials, master_seed + k, tolerance, workers)
        for k, lemma_id in enumerate(SUITES[suite])
    ]
