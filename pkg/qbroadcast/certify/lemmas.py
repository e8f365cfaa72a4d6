"""
Numerical certificates for the operator inequalities behind the coding
theorems: the Hayashi-Nagaoka inequality, the pinching inequality, the
pinched hypothesis-testing bound, the Petz-to-sandwiched conversion, the
traced operator union bound and the nested pinching inequalities.

Every certifier returns a ``Certificate`` whose ``margin`` is rhs - lhs
(or a minimum eigenvalue for operator inequalities, reported with lhs 0).
"""
import hashlib
import logging
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from ..errors import DimensionError, ValidationError
from ..linalg.hermitian import (
    DEFAULT_CLUSTER_TOL,
    as_hermitian,
    check_density,
    commutator_norm,
    matrix_power,
    min_eigenvalue,
    positive_part_projector,
)
from ..quantum.divergence import renyi_q
from ..quantum.pinching import build_nested, pinching_from_operator, verify_pinching_inequality
from ..schema.models import Certificate
from ..states.cq_state import CqState

logger = logging.getLogger(__name__)

CERTIFICATE_TOL = 1e-9
PRECONDITION_TOL = 1e-10


def instance_digest(lemma_id: str, tolerance: float, arrays: Iterable) -> str:
    """sha256 over the lemma id, the tolerance and the instance arrays."""
    h = hashlib.sha256()
    h.update(lemma_id.encode())
    h.update(repr(float(tolerance)).encode())
    for a in arrays:
        a = np.ascontiguousarray(np.asarray(a, dtype=complex))
        h.update(repr(a.shape).encode())
        h.update(a.tobytes())
    return h.hexdigest()


def make_certificate(
    lemma_id: str,
    lhs: float,
    rhs: float,
    arrays: Sequence,
    tolerance: float = CERTIFICATE_TOL,
    margin: Optional[float] = None,
    details: Optional[Dict] = None,
    instance_seed: Optional[int] = None
) -> Certificate:
    margin = float(rhs - lhs) if margin is None else float(margin)
    return Certificate(
        lemma_id=lemma_id,
        instance_digest=instance_digest(lemma_id, tolerance, arrays),
        lhs=float(lhs),
        rhs=float(rhs),
        margin=margin,
        passed=bool(margin >= -tolerance),
        tolerance=tolerance,
        instance_seed=instance_seed,
        details=details or {},
    )


def _hermitian_product(a: np.ndarray) -> np.ndarray:
    return (a + a.conj().T) / 2


def _check_effect(op, name: str, upper: bool = True) -> np.ndarray:
    """Validate 0 <= op (<= I when ``upper``) within PRECONDITION_TOL."""
    op = as_hermitian(op, tol=1e-10, name=name)
    w = np.linalg.eigvalsh(op)
    if w[0] < -PRECONDITION_TOL:
        raise ValidationError(f"not positive semidefinite (min eigenvalue {w[0]:.3e})", name)
    if upper and w[-1] > 1 + PRECONDITION_TOL:
        raise ValidationError(f"exceeds the identity (max eigenvalue {w[-1]:.6f})", name)
    return op


def _check_alpha(alpha: float) -> None:
    if not 0 < alpha < 1:
        raise ValidationError(f"alpha must lie in (0, 1), got {alpha}", 'alpha')


def certify_hayashi_nagaoka(s_op, t_op, tolerance: float = CERTIFICATE_TOL) -> Certificate:
    """
    Certify I - (S+T)^-1/2 S (S+T)^-1/2 <= 2(I - S) + 4T.

    The inverse square root is taken on supp(S+T). On the kernel both S and
    T vanish, so the left side contributes I and the right side 2I there and
    the inequality holds on the whole space.

    Args:
        s_op: Operator with 0 <= S <= I
        t_op: Operator with T >= 0
        tolerance: Pass threshold on the margin

    Returns:
        Certificate with margin = min eigenvalue of rhs - lhs

    Raises:
        ValidationError: If S or T violates its precondition
    """
    s_op = _check_effect(s_op, 'S')
    t_op = _check_effect(t_op, 'T', upper=False)
    if s_op.shape != t_op.shape:
        raise DimensionError(f"shape mismatch {s_op.shape} vs {t_op.shape}")
    identity = np.eye(s_op.shape[0])
    inv_sqrt, info = matrix_power(s_op + t_op, -0.5, tol=PRECONDITION_TOL, return_info=True)
    lhs_op = identity - _hermitian_product(inv_sqrt @ s_op @ inv_sqrt)
    rhs_op = 2 * (identity - s_op) + 4 * t_op
    margin = min_eigenvalue(_hermitian_product(rhs_op - lhs_op))
    return make_certificate(
        'hayashi_nagaoka', 0.0, margin, [s_op, t_op], tolerance,
        details={'rank_deficient': info['pseudo_inverse']}
    )


def certify_pinching_inequality(
    rho,
    sigma,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    tolerance: float = CERTIFICATE_TOL
) -> Certificate:
    """Certify rho <= nu E_sigma(rho) via the minimum eigenvalue of the difference."""
    rho = check_density(rho, name='rho')
    sigma = as_hermitian(sigma, tol=1e-10, name='sigma')
    margin = verify_pinching_inequality(rho, sigma, cluster_tol)
    nu = pinching_from_operator(sigma, cluster_tol).size
    return make_certificate('pinching_inequality', 0.0, margin, [rho, sigma], tolerance, details={'nu': nu})


def _petz_q_complement(rho: np.ndarray, sigma: np.ndarray, alpha: float) -> float:
    """tr rho^(1-alpha) sigma^alpha, i.e. 2^(-alpha D_(1-alpha)(rho||sigma))."""
    return renyi_q(rho, sigma, 1 - alpha, kind='petz')


def _sandwiched_q_complement(rho: np.ndarray, sigma: np.ndarray, alpha: float) -> float:
    """2^(-alpha D~_(1-alpha)(rho||sigma))."""
    return renyi_q(rho, sigma, 1 - alpha, kind='sandwiched')


def certify_hypothesis_testing(
    rho,
    sigma,
    m: float,
    alpha: float,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    tolerance: float = CERTIFICATE_TOL
) -> Certificate:
    """
    Certify tr(I - Pi) rho + M tr(Pi sigma) <= M^alpha 2^(-alpha D_(1-alpha)(E_sigma(rho)||sigma)).

    Pi is the projector {E_sigma(rho) >= M sigma}.

    Args:
        rho: Density matrix
        sigma: Density matrix
        m: Threshold M > 0
        alpha: Order in (0, 1)

    Returns:
        Certificate (details carry the rank of Pi)
    """
    rho = check_density(rho, name='rho')
    sigma = check_density(sigma, name='sigma')
    _check_alpha(alpha)
    if not m > 0:
        raise ValidationError(f"M must be positive, got {m}", 'M')
    pinched = pinching_from_operator(sigma, cluster_tol)(rho)
    pinched = _hermitian_product(pinched)
    projector = positive_part_projector(pinched, m * sigma)
    identity = np.eye(rho.shape[0])
    lhs = float(np.real(np.trace((identity - projector) @ rho)) + m * np.real(np.trace(projector @ sigma)))
    rhs = m ** alpha * _petz_q_complement(pinched, sigma, alpha)
    rank = int(round(float(np.real(np.trace(projector)))))
    return make_certificate(
        'hypothesis_testing', lhs, rhs, [rho, sigma, np.array([m, alpha])], tolerance,
        details={'projector_rank': rank, 'M': m, 'alpha': alpha}
    )


def certify_petz_to_sandwich(
    rho,
    sigma,
    alpha: float,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    tolerance: float = CERTIFICATE_TOL
) -> Certificate:
    """
    Certify 2^(-alpha D_(1-alpha)(E_sigma(rho)||sigma)) <= nu^alpha 2^(-alpha D~_(1-alpha)(rho||sigma)).

    nu is the number of distinct eigenvalues of sigma.
    """
    rho = check_density(rho, name='rho')
    sigma = check_density(sigma, name='sigma')
    _check_alpha(alpha)
    pinching = pinching_from_operator(sigma, cluster_tol)
    pinched = _hermitian_product(pinching(rho))
    lhs = _petz_q_complement(pinched, sigma, alpha)
    rhs = pinching.size ** alpha * _sandwiched_q_complement(rho, sigma, alpha)
    return make_certificate(
        'petz_to_sandwich', lhs, rhs, [rho, sigma, np.array([alpha])], tolerance,
        details={'nu': pinching.size, 'alpha': alpha}
    )


def certify_union_bound(ops: Sequence, rho, tolerance: float = CERTIFICATE_TOL) -> Certificate:
    """
    Certify the traced union bound tr(I - T_0 T_1 ... T_k) rho <= sum_i tr(I - T_i) rho.

    For non-commuting operators the ordered product is not Hermitian; the
    real part of its trace against rho is used and the instance is flagged.

    Args:
        ops: Operators with 0 <= T_i <= I
        rho: Density matrix

    Returns:
        Certificate (details record whether the family commutes)
    """
    if not ops:
        raise ValidationError("union bound needs at least one operator", 'ops')
    ops = [_check_effect(t, f"T[{i}]") for i, t in enumerate(ops)]
    rho = check_density(rho, name='rho')
    identity = np.eye(rho.shape[0])
    product = identity
    for t in ops:
        if t.shape != rho.shape:
            raise DimensionError(f"operator shape {t.shape} does not match state {rho.shape}")
        product = product @ t
    lhs = float(np.real(np.trace((identity - product) @ rho)))
    rhs = float(sum(np.real(np.trace((identity - t) @ rho)) for t in ops))
    commuting = all(
        commutator_norm(a, b) <= 1e-10 for i, a in enumerate(ops) for b in ops[i + 1:]
    )
    if not commuting:
        logger.debug("union bound instance with non-commuting operators; traced form only")
    return make_certificate(
        'union_bound', lhs, rhs, list(ops) + [rho], tolerance,
        details={'commuting': commuting, 'operators': len(ops)}
    )


def certify_nested_pinching_proposition(
    state: CqState,
    alpha: float,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    tolerance: float = CERTIFICATE_TOL
) -> List[Certificate]:
    """
    Certify both nested pinching inequalities on a cq-state over (U, V, X).

    With E, E1|u, E2|u,v, E3|u,v,x the nested family of the state:

        2^(-alpha D_(1-alpha)(E2(rho^{UVXB}) || E1(rho^{UX-V-B})))
            <= nu2^alpha 2^(-alpha D~_(1-alpha)(rho^{UVXB} || E1(rho^{UX-V-B})))
        2^(-alpha D_(1-alpha)(E3(rho^{UVXB}) || E2(rho^{UV-X-B})))
            <= nu3^alpha 2^(-alpha D~_(1-alpha)(rho^{UVXB} || E2(rho^{UV-X-B})))

    Both sides are block diagonal in (u, v, x) with equal weights, so each
    trace functional is the p-weighted sum of its blocks.

    Args:
        state: cq-state with registers U, V, X
        alpha: Order in (0, 1)

    Returns:
        Two certificates ('nested_pinching_2', 'nested_pinching_3')
    """
    _check_alpha(alpha)
    family = build_nested(state, 'multilevel', cluster_tol)
    au, av, ax = state.axes(['U', 'V', 'X'])

    sums = {2: [0.0, 0.0], 3: [0.0, 0.0]}
    for idx, p, rho in state.items():
        u, v, x = idx[au], idx[av], idx[ax]
        for level, name, key in ((2, 'E2', (u, v)), (3, 'E3', (u, v, x))):
            sigma = _hermitian_product(family.reference(name, key))
            pinched = _hermitian_product(family.apply(name, key, rho))
            sums[level][0] += p * _petz_q_complement(pinched, sigma, alpha)
            sums[level][1] += p * _sandwiched_q_complement(rho, sigma, alpha)

    nu2 = family.max_count('E2')
    nu3 = family.max_count('E3')
    arrays = [state.pmf, state.conditionals, np.array([alpha])]
    return [
        make_certificate(
            'nested_pinching_2', sums[2][0], nu2 ** alpha * sums[2][1], arrays, tolerance,
            details={'nu2': nu2, 'alpha': alpha}
        ),
        make_certificate(
            'nested_pinching_3', sums[3][0], nu3 ** alpha * sums[3][1], arrays, tolerance,
            details={'nu3': nu3, 'alpha': alpha}
        ),
    ]
