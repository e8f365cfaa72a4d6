"""
Exact error evaluation and Monte-Carlo runs over independently seeded codebooks.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..config import OptimizerConfig, SimulationConfig
from ..linalg.hermitian import DEFAULT_CLUSTER_TOL
from ..states.cq_state import AuxiliaryDistribution, BroadcastChannel
from .bounds import ReceiverBound, analytic_bound
from .codebook import Codebook, CodebookSpec, generate_codebook
from .povm import DecoderPOVM, ReceiverContext, build_receiver_povm

logger = logging.getLogger(__name__)

CHAIN_TOL = 1e-9


@dataclass
class ReceiverOutcome:
    """Exact error and Hayashi-Nagaoka chain of one receiver on one codebook"""
    receiver: str
    error: float
    hn_first: float
    hn_second: float
    residual_min_eig: float
    cross_terms_nonnegative: Optional[bool] = None
    cross_term_min: Optional[float] = None
    raw_first: Optional[float] = None

    @property
    def hn_bound(self) -> float:
        return self.hn_first + self.hn_second

    @property
    def chain_holds(self) -> bool:
        return self.error <= self.hn_bound + CHAIN_TOL


def _trace(op: np.ndarray, rho: np.ndarray) -> float:
    return float(np.real(np.trace(op @ rho)))


def average_error_exact(
    codebook: Codebook,
    channel: BroadcastChannel,
    povms: Dict[str, DecoderPOVM],
    contexts: Optional[Dict[str, ReceiverContext]] = None,
    raw_product: bool = False
) -> Dict[str, ReceiverOutcome]:
    """
    Uniform-message average of tr[(I - Lambda_correct) rho] per receiver.

    The correct element is the one of the sent message's decoded
    components, so wrong non-unique indices are not errors. Alongside the
    error the Hayashi-Nagaoka terms 2 tr[(I - A_sent) rho] and
    4 tr[(A_total - A_sent) rho] are averaged.

    Args:
        codebook: Codebook with encoder selection done
        channel: Broadcast channel
        povms: Decoder per receiver
        contexts: Receiver contexts; enables the per-test cross-term
            observation for receivers with several tests
        raw_product: Also record 2 tr[(I - Re G_sent) rho], the trace form
            of the raw ordered product

    Returns:
        Receiver name -> ReceiverOutcome
    """
    scenario = codebook.scenario
    messages = list(codebook.messages())
    n = len(messages)
    outcomes = {}
    for receiver, povm in povms.items():
        plan = scenario.plan(receiver)
        outputs = channel.receiver_outputs(receiver)
        comps = plan.hypothesis_components
        n_decoded = len(plan.decoded)
        d = outputs.shape[-1]
        eye = np.eye(d)
        context = (contexts or {}).get(receiver)
        track_cross = context is not None and len(plan.tests) > 1
        error = first = second = raw = 0.0
        cross_min = math.inf
        for message in messages:
            full = codebook.complete(message)
            rho = outputs[codebook.channel_input(full)]
            sent = tuple(full[c] for c in comps)
            lam = povm.operators.get(sent[:n_decoded])
            error += 1.0 - (_trace(lam, rho) if lam is not None else 0.0)
            a_sent = povm.hypotheses[sent]
            first += 2.0 * (1.0 - _trace(a_sent, rho))
            second += 4.0 * (_trace(povm.total, rho) - _trace(a_sent, rho))
            if raw_product:
                raw += 2.0 * (1.0 - _trace(povm.gates[sent], rho))
            if track_cross:
                t = codebook.symbols(plan.registers, full)
                theta = {test.name: codebook.spec.realized_rate(test.threshold) for test in plan.tests}
                union = sum(_trace(eye - context.projector(test, t, theta[test.name]), rho) for test in plan.tests)
                cross_min = min(cross_min, union - _trace(eye - a_sent, rho))
        outcomes[receiver] = ReceiverOutcome(
            receiver=receiver,
            error=error / n,
            hn_first=first / n,
            hn_second=second / n,
            residual_min_eig=povm.residual_min_eig,
            cross_terms_nonnegative=(cross_min >= -CHAIN_TOL) if track_cross else None,
            cross_term_min=cross_min if track_cross else None,
            raw_first=raw / n if raw_product else None,
        )
    return outcomes


class CodeSimulator:
    """
    One channel, distribution and scenario; receiver contexts (states,
    pinching families, projector caches) are shared across trials.
    """

    def __init__(
        self,
        scenario: str,
        rates: Dict[str, float],
        channel: BroadcastChannel,
        distribution: AuxiliaryDistribution,
        config: Optional[SimulationConfig] = None,
        receivers: Optional[Sequence[str]] = None,
        cluster_tol: float = DEFAULT_CLUSTER_TOL
    ):
        self.config = config or SimulationConfig()
        self.channel = channel
        self.distribution = distribution
        self.rates = dict(rates)
        self.template = CodebookSpec(scenario, self.rates, distribution, 0, self.config.encoder_threshold)
        plans = self.template.plan.receivers
        if receivers:
            plans = [p for p in plans if p.receiver in receivers]
        self.contexts = {p.receiver: ReceiverContext(p, channel, distribution, cluster_tol) for p in plans}

    def spec(self, seed: int) -> CodebookSpec:
        return CodebookSpec(
            self.template.scenario, self.rates, self.distribution, seed, self.config.encoder_threshold
        )

    def codebook(self, seed: int) -> Codebook:
        return generate_codebook(self.spec(seed))

    def povms(self, codebook: Codebook) -> Dict[str, DecoderPOVM]:
        return {r: build_receiver_povm(codebook, ctx) for r, ctx in self.contexts.items()}

    def run_trial(self, seed: int, codebook: Optional[Codebook] = None) -> 'TrialResult':
        book = codebook or self.codebook(seed)
        povms = self.povms(book)
        outcomes = average_error_exact(book, self.channel, povms, self.contexts, self.config.raw_product)
        return TrialResult(seed=seed, encoder_failure=book.failure_fraction, receivers=outcomes)

    def bounds(self, alpha: float, optimizer: Optional[OptimizerConfig] = None, seed: int = 0) -> Dict[str, ReceiverBound]:
        return {r: analytic_bound(self.template, ctx, alpha, optimizer, seed) for r, ctx in self.contexts.items()}


@dataclass
class TrialResult:
    seed: int
    encoder_failure: float
    receivers: Dict[str, ReceiverOutcome]
    index: int = 0  # position in trial_seeds order


@dataclass
class ReceiverStatistics:
    receiver: str
    mean: float
    stderr: float
    hn_mean: float
    min_residual: float
    chain_violations: int
    cross_term_violations: int
    encoder_failure: float = 0.0

    @property
    def total_error(self) -> float:
        """Mean decoding error plus the encoder-failure frequency."""
        return self.mean + self.encoder_failure

    def within_bound(self, petz: float) -> bool:
        """mean <= min(1, petz) + 3 stderr + encoder failure."""
        return self.mean <= min(1.0, petz) + 3.0 * self.stderr + self.encoder_failure + CHAIN_TOL

    def to_dict(self) -> dict:
        data = dict(vars(self))
        data['total_error'] = self.total_error
        return data


@dataclass
class MonteCarloResult:
    """Aggregates over trials; ``trials`` is ordered by trial index"""
    scenario: str
    master_seed: int
    trials: List[TrialResult]
    receivers: Dict[str, ReceiverStatistics] = field(default_factory=dict)
    encoder_failure: float = 0.0
    realized_rates: Dict[str, float] = field(default_factory=dict)

    def rows(self) -> List[dict]:
        """One row per (trial, receiver), matching the trial table schema."""
        out = []
        for trial in self.trials:
            for r, o in trial.receivers.items():
                out.append({
                    'trial': trial.index,
                    'seed': trial.seed,
                    'receiver': r,
                    'error': o.error,
                    'hn_bound': o.hn_bound,
                    'residual_min_eig': o.residual_min_eig,
                    'encoder_failure': trial.encoder_failure,
                })
        return out

    def to_dict(self) -> dict:
        return {
            'scenario': self.scenario,
            'master_seed': self.master_seed,
            'trials': len(self.trials),
            'encoder_failure': self.encoder_failure,
            'realized_rates': self.realized_rates,
            'receivers': {r: s.to_dict() for r, s in self.receivers.items()},
        }


def trial_seeds(master_seed: int, trials: int) -> List[int]:
    """Per-trial seeds from SeedSequence(master_seed).spawn."""
    children = np.random.SeedSequence(master_seed).spawn(trials)
    return [int(c.generate_state(1)[0]) for c in children]


def summarize(trials: Sequence[TrialResult]) -> Dict[str, ReceiverStatistics]:
    stats = {}
    receivers = trials[0].receivers.keys() if trials else []
    failure = float(np.mean([t.encoder_failure for t in trials])) if trials else 0.0
    for r in receivers:
        errors = np.array([t.receivers[r].error for t in trials])
        n = len(errors)
        stderr = float(errors.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        stats[r] = ReceiverStatistics(
            receiver=r,
            mean=float(errors.mean()),
            stderr=stderr,
            hn_mean=float(np.mean([t.receivers[r].hn_bound for t in trials])),
            min_residual=float(min(t.receivers[r].residual_min_eig for t in trials)),
            chain_violations=sum(not t.receivers[r].chain_holds for t in trials),
            cross_term_violations=sum(t.receivers[r].cross_terms_nonnegative is False for t in trials),
            encoder_failure=failure,
        )
    return stats


def monte_carlo(
    simulator: CodeSimulator,
    trials: int,
    master_seed: int = 0,
    workers: int = 1
) -> MonteCarloResult:
    """
    Run independently seeded codebook trials and aggregate per receiver.

    Trial i uses the i-th child of SeedSequence(master_seed), so results do
    not depend on ``workers``.

    Args:
        simulator: Prepared simulator
        trials: Number of codebooks (>= 1)
        master_seed: Master seed
        workers: Thread pool size

    Returns:
        MonteCarloResult with per-receiver mean, standard error and the
        encoder-failure fraction
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    seeds = trial_seeds(master_seed, trials)
    results: List[Optional[TrialResult]] = [None] * trials
    stats = {'completed': 0, 'failed': 0}

    with ThreadPoolExecutor(max_workers=max(workers, 1)) as pool:
        futures = {pool.submit(simulator.run_trial, s): i for i, s in enumerate(seeds)}
        for future in as_completed(futures):
            i = futures[future]
            try:
                results[i] = future.result()
                results[i].index = i
                stats['completed'] += 1
            except Exception as e:
                stats['failed'] += 1
                logger.error(f"Trial {i} (seed {seeds[i]}) failed: {e}", exc_info=True)

    done = [r for r in results if r is not None]
    result = MonteCarloResult(
        scenario=simulator.template.scenario,
        master_seed=master_seed,
        trials=done,
        receivers=summarize(done),
        encoder_failure=float(np.mean([t.encoder_failure for t in done])) if done else 0.0,
        realized_rates=simulator.template.realized_rates(),
    )
    logger.info(
        f"✓ {result.scenario}: {stats['completed']:,} trials "
        f"({stats['failed']:,} failed), encoder failure {result.encoder_failure:.3f}"
    )
    for r, s in result.receivers.items():
        logger.info(f"  {r}: mean error {s.mean:.4f} ± {s.stderr:.4f}")
    return result
