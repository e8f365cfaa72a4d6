"""
Square-root-measurement decoders built from nested pinched threshold tests.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from ..errors import ValidationError
from ..linalg.hermitian import DEFAULT_CLUSTER_TOL, matrix_power, min_eigenvalue, positive_part_projector
from ..quantum.pinching import NestedPinchingFamily
from ..states.cq_state import BroadcastChannel, CqState, channel_to_cqstate
from .codebook import Codebook
from .scenarios import ReceiverPlan, ThresholdTest

logger = logging.getLogger(__name__)


class ReceiverContext:
    """
    Per-receiver data shared by every codebook drawn for one instance:
    the receiver's cq-state over its registers, the memoized pinching
    family, and a cache of threshold projectors keyed by symbol tuple.
    """

    def __init__(
        self,
        plan: ReceiverPlan,
        channel: BroadcastChannel,
        distribution,
        cluster_tol: float = DEFAULT_CLUSTER_TOL
    ):
        self.plan = plan
        self.outputs = channel.receiver_outputs(plan.receiver)
        full = channel_to_cqstate(channel, distribution, plan.receiver)
        self.state: CqState = full.marginal(list(plan.registers))
        self.family = NestedPinchingFamily(self.state, plan.levels, cluster_tol)
        self._x_axis = plan.registers.index('X') if 'X' in plan.registers else None
        self._projectors: Dict[Tuple, np.ndarray] = {}
        for test in plan.tests:
            if test.level not in self.family.levels:
                raise ValidationError(f"{plan.receiver}: test {test.name} uses unknown level '{test.level}'")

    @property
    def dim(self) -> int:
        return self.state.quantum_dim

    def conditional(self, t: Tuple[int, ...]) -> np.ndarray:
        """rho_t of the receiver; off the support of p the output at x is used when X is a register."""
        if self.state.pmf[t] > 0 or self._x_axis is None:
            return self.state.conditionals[t]
        return self.outputs[t[self._x_axis]]

    def level_key(self, level: str, t: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(t[self.plan.registers.index(r)] for r in self.family.key_registers(level))

    def projector(self, test: ThresholdTest, t: Tuple[int, ...], threshold: float) -> np.ndarray:
        """{P(rho_t) >= 2^threshold * reference}."""
        cache_key = (test.name, t, threshold)
        cached = self._projectors.get(cache_key)
        if cached is not None:
            return cached
        key = self.level_key(test.level, t)
        pinched = self.family.apply(test.level, key, self.conditional(t))
        reference = self.family.reference(test.level, key)
        proj = positive_part_projector(pinched, (2.0 ** threshold) * reference)
        self._projectors[cache_key] = proj
        return proj


@dataclass
class DecoderPOVM:
    """
    Square-root measurement of one receiver.

    ``operators`` maps decoded tuples to POVM elements; ``hypotheses`` keeps
    the per-hypothesis positive operator A_h = G_h G_h^dagger and ``gates``
    the ordered products G_h.
    """
    receiver: str
    operators: Dict[Tuple[int, ...], np.ndarray]
    residual: np.ndarray
    hypotheses: Dict[Tuple[int, ...], np.ndarray] = field(default_factory=dict)
    gates: Dict[Tuple[int, ...], np.ndarray] = field(default_factory=dict)
    total: np.ndarray = None
    pseudo_inverse: bool = False

    @property
    def residual_min_eig(self) -> float:
        return min_eigenvalue(self.residual)

    def completeness_defect(self) -> float:
        """Largest eigenvalue of sum(operators) - I (<= 0 up to rounding)."""
        s = sum(self.operators.values())
        return float(np.max(np.linalg.eigvalsh(s - np.eye(s.shape[0]))))


def thresholds(codebook: Codebook, plan: ReceiverPlan) -> Dict[str, float]:
    return {test.name: codebook.spec.realized_rate(test.threshold) for test in plan.tests}


def hypotheses(codebook: Codebook, plan: ReceiverPlan):
    comps = plan.hypothesis_components
    sizes = [codebook.spec.sizes[c] for c in comps]
    for idx in itertools.product(*(range(s) for s in sizes)):
        yield idx, dict(zip(comps, idx))


def build_receiver_povm(
    codebook: Codebook,
    context: ReceiverContext,
) -> DecoderPOVM:
    """
    Square-root measurement over the receiver's decoded tuples.

    Each hypothesis h gets G_h, the ordered product of its threshold
    projectors, and A_h = G_h G_h^dagger; the element of a decoded tuple
    sums A_h over its non-unique completions and is normalized by the
    inverse square root of the total on its support.

    Args:
        codebook: Sampled codebook of the receiver's scenario
        context: Receiver context built for the same channel and distribution

    Returns:
        DecoderPOVM
    """
    plan = context.plan
    theta = thresholds(codebook, plan)
    d = context.dim
    n_decoded = len(plan.decoded)
    groups: Dict[Tuple[int, ...], np.ndarray] = {}
    hyp_ops: Dict[Tuple[int, ...], np.ndarray] = {}
    gates: Dict[Tuple[int, ...], np.ndarray] = {}
    for idx, assignment in hypotheses(codebook, plan):
        t = codebook.symbols(plan.registers, assignment)
        gate = np.eye(d, dtype=complex)
        for test in plan.tests:
            gate = gate @ context.projector(test, t, theta[test.name])
        a = gate @ gate.conj().T
        gates[idx] = gate
        hyp_ops[idx] = a
        decoded = idx[:n_decoded]
        groups[decoded] = groups.get(decoded, np.zeros((d, d), dtype=complex)) + a

    total = sum(hyp_ops.values())
    inv_sqrt, info = matrix_power(total, -0.5, return_info=True)
    operators = {k: inv_sqrt @ g @ inv_sqrt for k, g in groups.items()}
    residual = np.eye(d) - sum(operators.values())
    residual = (residual + residual.conj().T) / 2
    povm = DecoderPOVM(
        receiver=plan.receiver,
        operators=operators,
        residual=residual,
        hypotheses=hyp_ops,
        gates=gates,
        total=total,
        pseudo_inverse=info['pseudo_inverse'],
    )
    logger.debug(
        f"{plan.receiver}: {len(hyp_ops):,} hypotheses, {len(operators):,} elements, "
        f"residual min eig {povm.residual_min_eig:.2e}"
    )
    return povm
