"""
Closed-form one-shot error bounds of the decoders.

Every threshold test contributes 2^(alpha * threshold + 2) times a trace
functional at order 1 - alpha:

* Petz form: sum_t p(t) Q_{1-alpha}(P_t(rho_t) || reference_t), the
  pinched state against the level's reference.
* Sandwiched form: nu^alpha 2^(-alpha I~_{1-alpha}), with the up-arrow
  quantity for product references and the down-arrow quantity conditioned
  on the level's key registers otherwise.

A bound of 1 or more is vacuous and reported as such.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from ..config import OptimizerConfig
from ..quantum.divergence import renyi_q
from ..quantum.information import MutualInfoRequest, renyi_mi_down, renyi_mi_up
from .codebook import CodebookSpec
from .povm import ReceiverContext

logger = logging.getLogger(__name__)


@dataclass
class TestBound:
    test: str
    level: str
    threshold: float
    count: int
    petz: float
    sandwiched: float
    information: float
    conditioning: List[str] = field(default_factory=list)


@dataclass
class ReceiverBound:
    """Both bound forms of one receiver at one alpha"""
    receiver: str
    alpha: float
    terms: List[TestBound] = field(default_factory=list)

    @property
    def petz(self) -> float:
        return sum(t.petz for t in self.terms)

    @property
    def sandwiched(self) -> float:
        return sum(t.sandwiched for t in self.terms)

    @property
    def petz_vacuous(self) -> bool:
        return self.petz >= 1.0

    @property
    def sandwiched_vacuous(self) -> bool:
        return self.sandwiched >= 1.0

    def to_dict(self) -> dict:
        return {
            'receiver': self.receiver,
            'alpha': self.alpha,
            'petz': self.petz,
            'sandwiched': self.sandwiched,
            'petz_vacuous': self.petz_vacuous,
            'sandwiched_vacuous': self.sandwiched_vacuous,
            'terms': [vars(t) for t in self.terms],
        }


def _petz_functional(context: ReceiverContext, level: str, order: float) -> float:
    """sum_t p(t) Q_order(P_key(t)(rho_t) || reference_key(t))."""
    total = 0.0
    for t, p, rho in context.state.items():
        key = context.level_key(level, t)
        pinched = context.family.apply(level, key, rho)
        total += p * renyi_q(pinched, context.family.reference(level, key), order, 'petz')
    return total


def analytic_bound(
    spec: CodebookSpec,
    context: ReceiverContext,
    alpha: float,
    optimizer: Optional[OptimizerConfig] = None,
    seed: int = 0
) -> ReceiverBound:
    """
    Petz-pinched and sandwiched error bounds of one receiver.

    Args:
        spec: Codebook spec (thresholds use its realized log2 sizes)
        context: Receiver context for the same channel and distribution
        alpha: Exponent parameter in (0, 1); the divergences use order 1 - alpha
        optimizer: Settings for the down-arrow minimizations
        seed: Seed for the minimizer restarts

    Returns:
        ReceiverBound with one term per threshold test
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    order = 1.0 - alpha
    plan = context.plan
    family = context.family
    result = ReceiverBound(plan.receiver, alpha)
    for test in plan.tests:
        theta = spec.realized_rate(test.threshold)
        prefactor = 2.0 ** (alpha * theta + 2)
        key_regs = list(family.key_registers(test.level))
        count = family.max_count(test.level)
        petz = prefactor * _petz_functional(context, test.level, order)

        left = [r for r in plan.registers if r not in key_regs]
        if not key_regs:
            info = renyi_mi_up(MutualInfoRequest(context.state, tuple(plan.registers), order=order))
        elif left:
            req = MutualInfoRequest(context.state, tuple(left), conditioning=tuple(key_regs), order=order)
            info = renyi_mi_down(req, optimizer, seed).value
        else:
            info = 0.0
        sandwiched = (count ** alpha) * prefactor * 2.0 ** (-alpha * info)
        result.terms.append(TestBound(
            test=test.name,
            level=test.level,
            threshold=theta,
            count=count,
            petz=petz,
            sandwiched=sandwiched,
            information=info,
            conditioning=key_regs,
        ))
    if result.petz_vacuous:
        logger.warning(f"{plan.receiver}: Petz-form bound {result.petz:.3f} at alpha={alpha} is vacuous")
    return result
