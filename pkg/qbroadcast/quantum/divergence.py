"""
Quantum relative entropy, Petz and sandwiched Renyi divergences,
max-relative entropy and the classical smooth max-relative entropy.

All logarithms are base 2. Support violations return ``math.inf``.
Divergences of cq-states are computed block by block over the classical
tuples, so classical registers never enlarge the dense matrices.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.optimize import brentq

from ..errors import DimensionError, ValidationError
from ..linalg.hermitian import (
    as_hermitian,
    log2_on_support,
    matrix_power,
    support_projector,
)
from ..states.cq_state import CqState

logger = logging.getLogger(__name__)

LIMIT_WINDOW = 1e-4
LIMIT_STEP = 1e-3
SUPPORT_TOL = 1e-9

Operand = Union[np.ndarray, CqState]


@dataclass(frozen=True)
class RenyiOrder:
    """Renyi order alpha in (0, 1) or (1, inf)"""
    alpha: float

    def __post_init__(self):
        if not (self.alpha > 0) or self.alpha == 1 or math.isinf(self.alpha):
            raise ValidationError(f"Renyi order must lie in (0,1) U (1,inf), got {self.alpha}", 'alpha')

    @property
    def sandwiched_additive(self) -> bool:
        """True in the regime (1/2, 1) U (1, inf) where the sandwiched quantity is well behaved."""
        return self.alpha > 0.5


def _blocks(rho: Operand, sigma: Operand):
    """Yield (p, q, rho_t, sigma_t) over the classical tuples (one block for matrices)."""
    if isinstance(rho, CqState) != isinstance(sigma, CqState):
        raise ValidationError("both arguments must be matrices or both cq-states")
    if isinstance(rho, CqState):
        if rho.sizes != sigma.sizes or rho.quantum_dim != sigma.quantum_dim:
            raise DimensionError(f"cq-state shapes differ: {rho} vs {sigma}")
        for idx in np.ndindex(*rho.sizes):
            p = float(rho.pmf[idx])
            q = float(sigma.pmf[idx])
            if p > 0 or q > 0:
                yield p, q, rho.conditionals[idx], sigma.conditionals[idx]
    else:
        rho = as_hermitian(rho, tol=1e-9, name='rho')
        sigma = as_hermitian(sigma, tol=1e-9, name='sigma')
        if rho.shape != sigma.shape:
            raise DimensionError(f"shape mismatch {rho.shape} vs {sigma.shape}")
        yield 1.0, 1.0, rho, sigma


def support_contained(rho: np.ndarray, sigma: np.ndarray, tol: float = SUPPORT_TOL) -> bool:
    """True when supp(rho) lies in supp(sigma) (mass of rho outside below tol)."""
    outside = np.eye(sigma.shape[0]) - support_projector(sigma)
    return float(np.real(np.trace(outside @ rho))) <= tol


def _petz_q(rho: np.ndarray, sigma: np.ndarray, alpha: float) -> float:
    if alpha > 1 and not support_contained(rho, sigma):
        return math.inf
    value = np.real(np.trace(matrix_power(rho, alpha) @ matrix_power(sigma, 1 - alpha)))
    return max(float(value), 0.0)


def _sandwiched_q(rho: np.ndarray, sigma: np.ndarray, alpha: float) -> float:
    if alpha > 1 and not support_contained(rho, sigma):
        return math.inf
    s = matrix_power(sigma, (1 - alpha) / (2 * alpha))
    value = np.real(np.trace(matrix_power(s @ rho @ s, alpha, tol=0.0)))
    return max(float(value), 0.0)


def _renyi_q(rho: Operand, sigma: Operand, alpha: float, kernel: Callable) -> float:
    """sum_t p^alpha q^(1-alpha) Q(rho_t, sigma_t)."""
    total = 0.0
    for p, q, r, s in _blocks(rho, sigma):
        if p == 0:
            continue
        if q == 0:
            if alpha > 1:
                return math.inf
            continue
        block = kernel(r, s, alpha)
        if math.isinf(block):
            return math.inf
        total += p ** alpha * q ** (1 - alpha) * block
    return total


def renyi_q(rho: Operand, sigma: Operand, alpha: float, kind: str = 'petz') -> float:
    """
    Trace functional Q_alpha (Petz) or Q~_alpha (sandwiched).

    Args:
        rho: Density matrix or cq-state
        sigma: Density matrix or cq-state of the same shape
        alpha: Renyi order
        kind: 'petz' or 'sandwiched'

    Returns:
        Q value (may be inf for alpha > 1 with a support violation)
    """
    RenyiOrder(alpha)
    kernel = {'petz': _petz_q, 'sandwiched': _sandwiched_q}.get(kind)
    if kernel is None:
        raise ValidationError(f"unknown divergence kind '{kind}'")
    return _renyi_q(rho, sigma, alpha, kernel)


def _relative_entropy_block(rho: np.ndarray, sigma: np.ndarray) -> float:
    if not support_contained(rho, sigma):
        return math.inf
    value = np.real(np.trace(rho @ (log2_on_support(rho) - log2_on_support(sigma))))
    return float(value)


def relative_entropy(rho: Operand, sigma: Operand) -> float:
    """
    Quantum relative entropy D(rho || sigma) in bits.

    Returns:
        tr rho (log rho - log sigma), or inf when supp(rho) is not in supp(sigma)
    """
    total = 0.0
    for p, q, r, s in _blocks(rho, sigma):
        if p == 0:
            continue
        if q == 0:
            return math.inf
        block = _relative_entropy_block(r, s)
        if math.isinf(block):
            return math.inf
        total += p * (math.log2(p) - math.log2(q)) + p * block
    return total


def _renyi_from_q(q_value: float, alpha: float) -> float:
    if math.isinf(q_value):
        return math.inf
    if q_value <= 0:
        return math.inf
    return math.log2(q_value) / (alpha - 1)


def _with_limit(rho: Operand, sigma: Operand, alpha: float, kind: str) -> float:
    if abs(alpha - 1) < LIMIT_WINDOW:
        base = relative_entropy(rho, sigma)
        if math.isinf(base):
            return math.inf
        upper = _renyi_from_q(renyi_q(rho, sigma, 1 + LIMIT_STEP, kind), 1 + LIMIT_STEP)
        lower = _renyi_from_q(renyi_q(rho, sigma, 1 - LIMIT_STEP, kind), 1 - LIMIT_STEP)
        if math.isinf(upper) or math.isinf(lower):
            return base
        return base + (alpha - 1) * (upper - lower) / (2 * LIMIT_STEP)
    return _renyi_from_q(renyi_q(rho, sigma, alpha, kind), alpha)


def petz_renyi(rho: Operand, sigma: Operand, alpha: float) -> float:
    """
    Petz Renyi divergence D_alpha = log tr(rho^alpha sigma^(1-alpha)) / (alpha - 1).

    Within 1e-4 of alpha = 1 the relative entropy plus a central-difference
    first-order correction is returned.
    """
    return _with_limit(rho, sigma, alpha, 'petz')


def sandwiched_renyi(rho: Operand, sigma: Operand, alpha: float) -> float:
    """
    Sandwiched Renyi divergence
    log tr((sigma^((1-a)/2a) rho sigma^((1-a)/2a))^a) / (a - 1).
    """
    return _with_limit(rho, sigma, alpha, 'sandwiched')


def _dmax_block(rho: np.ndarray, sigma: np.ndarray) -> float:
    if not support_contained(rho, sigma):
        return math.inf
    s = matrix_power(sigma, -0.5)
    top = float(np.linalg.eigvalsh(as_hermitian(s @ rho @ s, tol=1e-9))[-1])
    if top <= 0:
        return -math.inf
    return math.log2(top)


def dmax(rho: Operand, sigma: Operand) -> float:
    """
    Max-relative entropy log min{lambda : rho <= lambda sigma}.

    Returns:
        log of the top eigenvalue of sigma^-1/2 rho sigma^-1/2 on supp(sigma),
        inf when supp(rho) is not in supp(sigma)
    """
    best = -math.inf
    for p, q, r, s in _blocks(rho, sigma):
        if p == 0:
            continue
        if q == 0:
            return math.inf
        best = max(best, math.log2(p / q) + _dmax_block(r, s))
    return best


def _clip_fidelity(p: np.ndarray, q: np.ndarray, lam: float) -> float:
    """
    Largest fidelity sum sqrt(pt * p) over normalized pt <= lam * q.

    The optimum is pt_i = min(lam q_i, c p_i) with c fixing the total mass;
    leftover mass goes where p vanishes and does not change the fidelity.
    """
    caps = lam * q
    on = p > 0
    if caps[on].sum() <= 1.0:
        return float(np.sum(np.sqrt(caps[on] * p[on])))
    c_hi = float(np.max(caps[on] / p[on]))
    c = brentq(lambda c: np.minimum(caps[on], c * p[on]).sum() - 1.0, 0.0, c_hi, xtol=1e-15)
    clipped = np.minimum(caps[on], c * p[on])
    return float(np.sum(np.sqrt(clipped * p[on])))


def smooth_dmax_classical(p_joint, q_product, epsilon: float) -> float:
    """
    Smooth max-relative entropy between classical distributions.

    Minimizes log lambda over normalized p~ <= lambda q with purified
    distance P(p~, p) <= epsilon. For fixed lambda the best p~ clips the
    largest likelihood ratios (p~_i = min(lambda q_i, c p_i)), and the
    achievable fidelity grows with lambda, so the optimum is found by a
    one-dimensional root search.

    Args:
        p_joint: Classical pmf (any shape)
        q_product: Classical pmf of the same shape
        epsilon: Smoothing radius in [0, 1)

    Returns:
        Smooth max-relative entropy in bits (0 when p = q)

    Raises:
        ValidationError: If epsilon is outside [0, 1) or shapes differ
    """
    if not 0 <= epsilon < 1:
        raise ValidationError(f"epsilon must lie in [0, 1), got {epsilon}", 'epsilon')
    p = np.asarray(p_joint, dtype=float).ravel()
    q = np.asarray(q_product, dtype=float).ravel()
    if p.shape != q.shape:
        raise ValidationError(f"pmf shapes differ: {p.shape} vs {q.shape}")

    on = p > 0
    if np.any(q[on] == 0):
        exact = math.inf
    else:
        exact = float(np.log2(np.max(p[on] / q[on])))
    if epsilon == 0:
        return max(exact, 0.0) if not math.isinf(exact) else exact

    target = math.sqrt(1 - epsilon ** 2)
    if _clip_fidelity(p, q, 1.0) >= target:
        return 0.0
    if math.isinf(exact):
        reachable = math.sqrt(float(p[q > 0].sum()))
        if reachable < target:
            return math.inf
        lam_hi = 2.0
        while _clip_fidelity(p, q, lam_hi) < target:
            lam_hi *= 2
    else:
        lam_hi = 2.0 ** exact
    lam = brentq(lambda lam: _clip_fidelity(p, q, lam) - target, 1.0, lam_hi, xtol=1e-14, rtol=1e-14)
    return float(math.log2(lam))

