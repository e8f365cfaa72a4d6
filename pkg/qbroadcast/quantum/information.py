"""
Mutual-information functionals of cq-states.

Shannon (von Neumann) mutual information with optional conditioning and a
quantum or classical right side, the up-arrow Renyi mutual informations
(divergence against the product of marginals), the down-arrow sandwiched
mutual information (minimized over the quantum marginal, per conditioning
block), and the classical smooth conditional max-mutual information.
"""
import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import minimize

from ..config import OptimizerConfig
from ..errors import ConvergenceWarning, ValidationError
from .divergence import RenyiOrder, petz_renyi, sandwiched_renyi, smooth_dmax_classical
from ..states.cq_state import CqState

logger = logging.getLogger(__name__)

QUANTUM = 'B'


@dataclass(frozen=True)
class MutualInfoRequest:
    """
    I(left; right | conditioning) on a cq-state.

    ``right`` is 'B' for the quantum system or a tuple of register names.
    ``order`` is None for the Shannon quantity.
    """
    state: CqState
    left: Tuple[str, ...]
    right: Union[str, Tuple[str, ...]] = QUANTUM
    conditioning: Tuple[str, ...] = ()
    order: Optional[float] = None

    def __post_init__(self):
        right = () if self.right == QUANTUM else tuple(self.right)
        groups = [tuple(self.left), right, tuple(self.conditioning)]
        flat = [n for g in groups for n in g]
        if len(set(flat)) != len(flat):
            raise ValidationError(f"register sets overlap: left={self.left} right={self.right} given={self.conditioning}")
        if not self.left:
            raise ValidationError("left register set is empty")
        for name in flat:
            self.state.axis(name)
        if self.order is not None:
            RenyiOrder(self.order)

    @property
    def quantum_right(self) -> bool:
        return self.right == QUANTUM


def von_neumann_entropy(rho: np.ndarray) -> float:
    w = np.linalg.eigvalsh(np.asarray(rho, dtype=complex))
    w = w[w > 1e-15]
    return float(-np.sum(w * np.log2(w)))


def shannon_entropy(pmf) -> float:
    p = np.asarray(pmf, dtype=float).ravel()
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def _conditional_entropy_b(state: CqState, given: Sequence[str]) -> float:
    """S(B | given) = sum_c p(c) S(rho_c)."""
    if not given:
        return von_neumann_entropy(state.average())
    marg = state.marginal(list(given))
    return sum(p * von_neumann_entropy(rho) for _, p, rho in marg.items())


def _pmf_entropy(state: CqState, names: Sequence[str]) -> float:
    if not names:
        return 0.0
    return shannon_entropy(state.marginal(list(names), keep_quantum=False).pmf)


def shannon_mi(req: MutualInfoRequest) -> float:
    """
    Shannon mutual information I(L;R|C) in bits.

    Quantum right side: S(B|C) - S(B|LC). Classical right side:
    H(LC) + H(RC) - H(LRC) - H(C).
    """
    left, given = list(req.left), list(req.conditioning)
    if req.quantum_right:
        value = _conditional_entropy_b(req.state, given) - _conditional_entropy_b(req.state, given + left)
    else:
        right = list(req.right)
        value = (
            _pmf_entropy(req.state, left + given)
            + _pmf_entropy(req.state, right + given)
            - _pmf_entropy(req.state, left + right + given)
            - _pmf_entropy(req.state, given)
        )
    return float(value)


def mutual_information(
    state: CqState,
    left: Sequence[str],
    right: Union[str, Sequence[str]] = QUANTUM,
    given: Sequence[str] = ()
) -> float:
    right = right if right == QUANTUM else tuple(right)
    return shannon_mi(MutualInfoRequest(state, tuple(left), right, tuple(given)))


def renyi_mi_up(req: MutualInfoRequest, kind: str = 'sandwiched') -> float:
    """
    Up-arrow Renyi mutual information D_alpha(rho^{LB} || rho^L (x) rho^B).

    Args:
        req: Request with quantum right side, no conditioning, and an order
        kind: 'sandwiched' (I~ up) or 'petz' (I up)

    Returns:
        Value in bits (inf propagated from support violations)
    """
    if req.order is None or not req.quantum_right or req.conditioning:
        raise ValidationError("up-arrow Renyi mutual information needs an order, quantum right side, no conditioning")
    joint = req.state.marginal(list(req.left))
    product = joint.markov_break(())
    fn = sandwiched_renyi if kind == 'sandwiched' else petz_renyi
    return fn(joint, product, req.order)


@dataclass
class MinimizationResult:
    """Down-arrow mutual information with its optimizer and convergence data"""
    value: float
    sigmas: Dict[Tuple[int, ...], np.ndarray] = field(default_factory=dict)
    converged: bool = True
    grad_norm: float = 0.0
    objective_delta: float = 0.0
    restarts: int = 0

    def __float__(self) -> float:
        return float(self.value)


def _params_to_sigma(x: np.ndarray, d: int) -> np.ndarray:
    tril = np.tril_indices(d)
    strict = np.tril_indices(d, -1)
    n_tril = len(tril[0])
    lower = np.zeros((d, d), dtype=complex)
    lower[tril] = x[:n_tril]
    lower[strict] += 1j * x[n_tril:]
    sigma = lower @ lower.conj().T
    return sigma / np.real(np.trace(sigma))


def _sigma_to_params(sigma: np.ndarray) -> np.ndarray:
    d = sigma.shape[0]
    lower = np.linalg.cholesky(sigma + 1e-12 * np.eye(d))
    tril = np.tril_indices(d)
    strict = np.tril_indices(d, -1)
    return np.concatenate([lower[tril].real, lower[strict].imag])


def _sandwiched_block_q(rhos: np.ndarray, weights: np.ndarray, sigma: np.ndarray, alpha: float) -> float:
    w, v = np.linalg.eigh(sigma)
    w = np.clip(w, 1e-300, None)
    s = (v * w ** ((1 - alpha) / (2 * alpha))) @ v.conj().T
    total = 0.0
    for weight, rho in zip(weights, rhos):
        lam = np.linalg.eigvalsh(s @ rho @ s)
        lam = lam[lam > 0]
        total += weight * float(np.sum(lam ** alpha))
    return total


@dataclass
class _Block:
    key: Tuple[int, ...]
    mass: float
    weights: np.ndarray
    rhos: np.ndarray

    @property
    def average(self) -> np.ndarray:
        return np.tensordot(self.weights, self.rhos, axes=(0, 0))


def _blocks(state: CqState, left: Sequence[str], given: Sequence[str]) -> List[_Block]:
    marg = state.marginal(list(given) + list(left))
    n_given = len(given)
    c_sizes = marg.sizes[:n_given]
    d = marg.quantum_dim
    blocks = []
    for key in np.ndindex(*c_sizes):
        pmf = marg.pmf[key].ravel()
        mass = float(pmf.sum())
        if mass <= 0:
            continue
        rhos = marg.conditionals[key].reshape(-1, d, d)
        keep = pmf > 0
        blocks.append(_Block(tuple(key), mass, pmf[keep] / mass, rhos[keep]))
    return blocks


def _optimize_block(
    block: _Block,
    alpha: float,
    config: OptimizerConfig,
    seed: int,
    workers: int
) -> Tuple[float, np.ndarray, bool, float, float]:
    """Best (Q value, sigma, converged, grad norm, restart spread) for one block."""
    d = block.rhos.shape[-1]
    sign = -1.0 if alpha < 1 else 1.0

    def objective(x):
        return sign * _sandwiched_block_q(block.rhos, block.weights, _params_to_sigma(x, d), alpha)

    start = _sigma_to_params(block.average)
    children = np.random.SeedSequence(seed).spawn(max(config.restarts - 1, 0))
    starts = [start] + [np.random.default_rng(c).standard_normal(d * d) for c in children]

    def run(x0):
        return minimize(
            objective,
            x0,
            method='L-BFGS-B',
            options={'maxiter': config.max_iter, 'ftol': config.ftol, 'gtol': config.gtol}
        )

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = list(pool.map(run, starts))

    start_value = objective(start)
    ordered = sorted(results, key=lambda r: r.fun)
    best = ordered[0]
    if start_value < best.fun:
        return sign * start_value, block.average, True, 0.0, 0.0
    spread = float(ordered[1].fun - best.fun) if len(ordered) > 1 else 0.0
    grad_norm = float(np.linalg.norm(best.jac)) if best.jac is not None else float('nan')
    return sign * float(best.fun), _params_to_sigma(best.x, d), bool(best.success), grad_norm, spread


def renyi_mi_down(
    req: MutualInfoRequest,
    config: Optional[OptimizerConfig] = None,
    seed: int = 0,
    workers: int = 1
) -> MinimizationResult:
    """
    Down-arrow sandwiched Renyi mutual information.

    Unconditional: min_sigma D~_alpha(rho^{LB} || rho^L (x) sigma^B).
    Conditional on C: min over sigma^{L-C-B} with sigma^{LC} = rho^{LC};
    the blocks c are independent, so each sigma_c is optimized separately
    and the trace functionals recombine with weights p(c).

    Args:
        req: Request with quantum right side and an order
        config: Optimizer settings (restarts, iteration cap, tolerances)
        seed: Master seed for restart initializations
        workers: Threads used for the restarts of one block

    Returns:
        MinimizationResult (``converged`` False when any block stopped early)
    """
    if req.order is None or not req.quantum_right:
        raise ValidationError("down-arrow Renyi mutual information needs an order and quantum right side")
    config = config or OptimizerConfig()
    alpha = req.order
    blocks = _blocks(req.state, req.left, req.conditioning)
    seeds = np.random.SeedSequence(seed).generate_state(len(blocks))

    total_q = 0.0
    result = MinimizationResult(value=0.0, restarts=config.restarts)
    for block, block_seed in zip(blocks, seeds):
        q_value, sigma, ok, grad_norm, spread = _optimize_block(block, alpha, config, int(block_seed), workers)
        total_q += block.mass * q_value
        result.sigmas[block.key] = sigma
        result.converged = result.converged and ok
        result.grad_norm = max(result.grad_norm, grad_norm)
        result.objective_delta = max(result.objective_delta, spread)

    result.value = math.inf if total_q <= 0 else math.log2(total_q) / (alpha - 1)
    if not result.converged:
        logger.warning(f"I~down({','.join(req.left)};B|{','.join(req.conditioning)}) did not converge at alpha={alpha}")
        warnings.warn(f"down-arrow minimization did not converge (alpha={alpha})", ConvergenceWarning)
    return result


def imax_conditional_classical(
    state: CqState,
    left: Sequence[str],
    right: Sequence[str],
    given: Sequence[str],
    epsilon: float
) -> float:
    """
    Smooth conditional max-mutual information D_max^eps(p(l,c,r) || p(l|c) p(r|c) p(c)).

    Args:
        state: All-classical state (d_B = 1)
        left: Left registers (e.g. U)
        right: Right registers (e.g. X)
        given: Conditioning registers (e.g. V)
        epsilon: Smoothing radius in [0, 1)

    Returns:
        Value in bits

    Raises:
        ValidationError: If the state carries a quantum system
    """
    if state.quantum_dim != 1:
        raise ValidationError("imax_conditional_classical needs an all-classical state (d_B = 1)")
    names = list(left) + list(given) + list(right)
    p = state.marginal(names, keep_quantum=False).pmf
    n_left, n_given = len(left), len(given)
    # q(l, c, r) = p(l, c) p(c, r) / p(c)
    p_lc = p.sum(axis=tuple(range(n_left + n_given, p.ndim)), keepdims=True)
    p_cr = p.sum(axis=tuple(range(n_left)), keepdims=True)
    p_c = p.sum(axis=tuple(i for i in range(p.ndim) if not n_left <= i < n_left + n_given), keepdims=True)
    q = np.where(p_c > 0, p_lc * p_cr / np.where(p_c > 0, p_c, 1.0), 0.0)
    return smooth_dmax_classical(p, q, epsilon)
