"""
Random search for frontier points of a final region.

Each candidate distribution is evaluated, the region's corner points are
read off by exact LP along a set of weight vectors, and the best candidates
per weight are refined by small perturbations inside their Markov family.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config import SearchConfig
from ..errors import QBroadcastError, ValidationError
from ..polyhedra import lp_max
from ..states.cq_state import BroadcastChannel
from .catalog import RegionSpec, get_spec
from .distributions import (
    FactoredDistribution,
    double_markov_distribution,
    markov_chain_distribution,
    marton_distribution,
    superposition_distribution,
)
from .evaluate import evaluate_region

logger = logging.getLogger(__name__)


@dataclass
class FrontierPoint:
    """Corner of one evaluated region together with the distribution achieving it"""
    rates: Tuple[Fraction, ...]
    weights: Tuple[int, ...]
    witness: FactoredDistribution

    @property
    def as_floats(self) -> Tuple[float, ...]:
        return tuple(float(r) for r in self.rates)

    def dominates(self, other: 'FrontierPoint') -> bool:
        return all(a >= b for a, b in zip(self.rates, other.rates)) and self.rates != other.rates

    def to_dict(self, rate_vars: Sequence[str]) -> dict:
        return {
            'rates': {v: float(r) for v, r in zip(rate_vars, self.rates)},
            'exact': {v: str(r) for v, r in zip(rate_vars, self.rates)},
            'weights': list(self.weights),
            'kind': self.witness.kind,
        }


def sampler_for(spec: RegionSpec, channel: BroadcastChannel, aux_sizes: Dict[str, int]):
    """Distribution sampler matching the region's registers and Markov constraints."""
    d_x = channel.input_size

    def size(name: str) -> int:
        return int(aux_sizes.get(name, 2))

    if spec.scenario == 'marton':
        return lambda rng: marton_distribution(rng, (size('U0'), size('U1'), size('U2')), d_x)
    if spec.scenario == 'multilevel':
        return lambda rng: markov_chain_distribution(rng, size('U'), size('V'), d_x)
    if spec.scenario == 'superposition':
        return lambda rng: superposition_distribution(rng, size('U'), d_x)
    if spec.scenario in ('general_two', 'three_degraded'):
        return lambda rng: double_markov_distribution(rng, size('U'), size('W2'), size('W3'), d_x)
    raise ValidationError(f"no distribution sampler for scenario '{spec.scenario}'")


def weight_vectors(n_rates: int, levels: int = 3) -> List[Tuple[int, ...]]:
    """Nonzero integer weight vectors with entries in [0, levels)."""
    grid = np.indices((levels,) * n_rates).reshape(n_rates, -1).T
    out = [tuple(int(v) for v in row) for row in grid if any(row)]
    # drop scalar multiples of an earlier vector
    seen, unique = set(), []
    for w in out:
        g = int(np.gcd.reduce(w))
        key = tuple(v // g for v in w)
        if key not in seen:
            seen.add(key)
            unique.append(w)
    return unique


def _corners(spec: RegionSpec, channel: BroadcastChannel, candidate: FactoredDistribution, weights):
    """Corner point and objective value per weight vector (None when evaluation fails)."""
    try:
        instance = evaluate_region(spec, channel, candidate.build())
    except QBroadcastError as e:
        logger.debug(f"candidate rejected: {e}")
        return None
    out = []
    for w in weights:
        result = lp_max(instance.system, dict(zip(spec.rate_vars, w)))
        if not result.optimal:
            out.append(None)
            continue
        out.append((result.value, tuple(result.point[v] for v in spec.rate_vars)))
    return out


def nondominated(points: Sequence[FrontierPoint]) -> List[FrontierPoint]:
    unique: Dict[Tuple[Fraction, ...], FrontierPoint] = {}
    for p in points:
        unique.setdefault(p.rates, p)
    pool = list(unique.values())
    return [p for p in pool if not any(q.dominates(p) for q in pool)]


def pareto_search(
    spec,
    channel: BroadcastChannel,
    config: Optional[SearchConfig] = None,
    seed: int = 0,
    workers: int = 1
) -> List[FrontierPoint]:
    """
    Sample distributions, refine the best ones, and return nondominated corners.

    Args:
        spec: Final region spec or theorem id
        channel: Broadcast channel
        config: Sample count, refinement steps, perturbation size, alphabet sizes
        seed: Master seed; candidate i uses child i of SeedSequence(seed)
        workers: Threads evaluating candidates

    Returns:
        Nondominated frontier points, each with its witnessing distribution
    """
    if isinstance(spec, str):
        spec = get_spec(spec)
    if spec.is_preliminary:
        raise ValidationError(f"{spec.theorem_id} is a preliminary system; search a final region")
    config = config or SearchConfig()
    sample = sampler_for(spec, channel, config.aux_sizes)
    weights = weight_vectors(len(spec.rate_vars))
    children = np.random.SeedSequence(seed).spawn(config.samples + 1)
    candidates = [sample(np.random.default_rng(s)) for s in children[:-1]]

    def score(c):
        return _corners(spec, channel, c, weights)

    with ThreadPoolExecutor(max_workers=max(workers, 1)) as pool:
        scored = list(pool.map(score, candidates))

    best: List[Optional[Tuple[Fraction, Tuple[Fraction, ...], FactoredDistribution]]] = [None] * len(weights)
    points: List[FrontierPoint] = []
    for candidate, corners in zip(candidates, scored):
        if corners is None:
            continue
        for k, corner in enumerate(corners):
            if corner is None:
                continue
            value, rates = corner
            points.append(FrontierPoint(rates, weights[k], candidate))
            if best[k] is None or value > best[k][0]:
                best[k] = (value, rates, candidate)

    rng = np.random.default_rng(children[-1])
    for k, w in enumerate(weights):
        if best[k] is None:
            continue
        value, rates, current = best[k]
        for _ in range(config.refine_steps):
            trial = current.perturb(rng, config.step_size)
            corners = _corners(spec, channel, trial, [w])
            if not corners or corners[0] is None:
                continue
            if corners[0][0] > value:
                value, rates = corners[0]
                current = trial
                points.append(FrontierPoint(rates, w, trial))
        best[k] = (value, rates, current)

    frontier = nondominated(points)
    logger.info(f"✓ {spec.theorem_id}: {len(candidates):,} candidates, {len(frontier):,} frontier points")
    return frontier
