"""
Dense Hermitian linear algebra at small dimension.

Operators are plain complex ``numpy`` arrays; the validators below establish
Hermiticity and density-matrix invariants at module boundaries. Spectral
decompositions cluster nearly equal eigenvalues with an explicit relative
tolerance, which is what makes pinching structure and eigenvalue counts
reproducible.
"""
import logging
from dataclasses import dataclass
from functools import reduce
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from ..errors import DimensionError, ValidationError

logger = logging.getLogger(__name__)

DEFAULT_CLUSTER_TOL = 1e-9
HERMITIAN_TOL = 1e-12
DENSITY_TOL = 1e-10


def as_hermitian(op, tol: float = HERMITIAN_TOL, name: str = 'operator') -> np.ndarray:
    """
    Validate a square Hermitian matrix and return its symmetrized copy.

    Args:
        op: Array-like square matrix
        tol: Absolute tolerance on |A - A^dagger| entries
        name: Label used in error messages

    Returns:
        Complex ndarray (A + A^dagger) / 2

    Raises:
        ValidationError: If not square or not Hermitian
    """
    a = np.asarray(op, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}", name)
    deviation = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if deviation > tol * max(1.0, np.max(np.abs(a)) if a.size else 1.0):
        raise ValidationError(f"matrix is not Hermitian (deviation {deviation:.3e})", name)
    return (a + a.conj().T) / 2


def check_density(
    rho,
    tol: float = DENSITY_TOL,
    name: str = 'state',
    hermitian_tol: float = HERMITIAN_TOL
) -> np.ndarray:
    """
    Validate a density matrix: Hermitian, PSD and unit trace.

    Args:
        rho: Array-like matrix
        tol: Tolerance on negative eigenvalues and on the trace
        name: Label used in error messages
        hermitian_tol: Tolerance passed to ``as_hermitian``

    Returns:
        Symmetrized complex ndarray

    Raises:
        ValidationError: If any invariant fails
    """
    a = as_hermitian(rho, hermitian_tol, name=name)
    trace = np.real(np.trace(a))
    if abs(trace - 1.0) > tol:
        raise ValidationError(f"trace is {trace:.12f}, expected 1", name)
    min_eig = np.linalg.eigvalsh(a)[0]
    if min_eig < -tol:
        raise ValidationError(f"not positive semidefinite (min eigenvalue {min_eig:.3e})", name)
    return a


def check_dim(dim: int, cap: int, what: str = 'operator') -> None:
    """Raise DimensionError when a dense dimension exceeds the configured cap."""
    if dim > cap:
        raise DimensionError(f"{what} dimension {dim} exceeds dim cap {cap}")


def cluster_eigenvalues(values: Sequence[float], tol: float = DEFAULT_CLUSTER_TOL) -> List[np.ndarray]:
    """
    Group sorted eigenvalues into clusters of (relatively) equal values.

    Two neighbours a, b join the same cluster when
    |a - b| <= tol * max(1, |a|, |b|) (single linkage over the sorted list).

    Args:
        values: Eigenvalues in ascending order
        tol: Relative clustering tolerance

    Returns:
        List of index arrays, one per cluster, in ascending eigenvalue order
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return []
    groups = []
    start = 0
    for i in range(1, values.size):
        a, b = values[i - 1], values[i]
        if abs(b - a) > tol * max(1.0, abs(a), abs(b)):
            groups.append(np.arange(start, i))
            start = i
    groups.append(np.arange(start, values.size))
    return groups


@dataclass(frozen=True)
class Eigenspace:
    """One eigenspace of a Hermitian operator"""
    eigenvalue: float
    projector: np.ndarray
    multiplicity: int


@dataclass(frozen=True)
class SpectralDecomposition:
    """
    Clustered spectral decomposition H = sum_i h_i P_i.

    Eigenspaces are ordered by ascending eigenvalue.
    """
    eigenspaces: Tuple[Eigenspace, ...]
    cluster_tol: float
    dim: int

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([e.eigenvalue for e in self.eigenspaces])

    @property
    def projectors(self) -> List[np.ndarray]:
        return [e.projector for e in self.eigenspaces]

    def __len__(self) -> int:
        return len(self.eigenspaces)

    def reconstruct(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for e in self.eigenspaces:
            out += e.eigenvalue * e.projector
        return out


def spectral(h, cluster_tol: float = DEFAULT_CLUSTER_TOL) -> SpectralDecomposition:
    """
    Spectral decomposition with eigenvalue clustering.

    Args:
        h: Hermitian matrix
        cluster_tol: Relative tolerance for merging eigenvalues (> 0)

    Returns:
        SpectralDecomposition with orthogonal, complete projectors

    Raises:
        ValidationError: If h is not Hermitian or cluster_tol <= 0

    Example:
        >>> dec = spectral(np.eye(2))
        >>> len(dec), dec.eigenspaces[0].multiplicity
        (1, 2)
    """
    if cluster_tol <= 0:
        raise ValidationError(f"cluster_tol must be positive, got {cluster_tol}")
    a = as_hermitian(h)
    w, v = np.linalg.eigh(a)
    spaces = []
    for idx in cluster_eigenvalues(w, cluster_tol):
        vecs = v[:, idx]
        spaces.append(Eigenspace(
            eigenvalue=float(np.mean(w[idx])),
            projector=vecs @ vecs.conj().T,
            multiplicity=int(idx.size)
        ))
    return SpectralDecomposition(eigenspaces=tuple(spaces), cluster_tol=cluster_tol, dim=a.shape[0])


def distinct_eigenvalues(h, cluster_tol: float = DEFAULT_CLUSTER_TOL) -> np.ndarray:
    """Cluster representatives of the spectrum of a Hermitian matrix."""
    w = np.linalg.eigvalsh(as_hermitian(h))
    return np.array([np.mean(w[idx]) for idx in cluster_eigenvalues(w, cluster_tol)])


def _support_mask(w: np.ndarray, tol: float) -> np.ndarray:
    return w > tol


def matrix_power(
    rho,
    t: float,
    tol: float = DEFAULT_CLUSTER_TOL,
    return_info: bool = False
) -> Union[np.ndarray, Tuple[np.ndarray, Dict[str, bool]]]:
    """
    Power of a PSD matrix taken on its support.

    Eigenvalues at or below ``tol`` count as zero and map to zero, so
    ``matrix_power(rho, 0)`` is the support projector and negative powers
    are pseudo-inverse powers.

    Args:
        rho: PSD Hermitian matrix
        t: Real exponent
        tol: Support threshold (same rule as eigenvalue clustering against zero)
        return_info: Also return metadata {'pseudo_inverse': bool}

    Returns:
        rho^t (and the metadata dict when requested)
    """
    a = as_hermitian(rho)
    w, v = np.linalg.eigh(a)
    mask = _support_mask(w, tol)
    powered = np.zeros_like(w)
    powered[mask] = w[mask] ** t
    out = (v * powered) @ v.conj().T
    if return_info:
        return out, {'pseudo_inverse': bool(t < 0 and not mask.all())}
    return out


def support_projector(rho, tol: float = DEFAULT_CLUSTER_TOL) -> np.ndarray:
    return matrix_power(rho, 0.0, tol=tol)


def log2_on_support(rho, tol: float = DEFAULT_CLUSTER_TOL) -> np.ndarray:
    """Base-2 logarithm on the support (zero on the kernel)."""
    a = as_hermitian(rho)
    w, v = np.linalg.eigh(a)
    mask = _support_mask(w, tol)
    logs = np.zeros_like(w)
    logs[mask] = np.log2(w[mask])
    return (v * logs) @ v.conj().T


def positive_part_projector(t_op, o_op) -> np.ndarray:
    """
    Projector {T >= O} onto the nonnegative eigenspaces of T - O.

    Args:
        t_op: Hermitian matrix T
        o_op: Hermitian matrix O of the same dimension

    Returns:
        Orthogonal projector commuting with T - O

    Raises:
        DimensionError: On shape mismatch
    """
    t_op = as_hermitian(t_op, name='T')
    o_op = as_hermitian(o_op, name='O')
    if t_op.shape != o_op.shape:
        raise DimensionError(f"shape mismatch {t_op.shape} vs {o_op.shape}")
    diff = t_op - o_op
    w, v = np.linalg.eigh(diff)
    scale = max(1.0, float(np.max(np.abs(w))) if w.size else 1.0)
    keep = w >= -1e-12 * scale
    vecs = v[:, keep]
    return vecs @ vecs.conj().T


def trace_norm(omega) -> float:
    return float(np.sum(np.linalg.svd(np.asarray(omega, dtype=complex), compute_uv=False)))


def operator_norm(omega) -> float:
    return float(np.linalg.norm(np.asarray(omega, dtype=complex), ord=2))


def commutator_norm(a, b) -> float:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return operator_norm(a @ b - b @ a)


def min_eigenvalue(h) -> float:
    return float(np.linalg.eigvalsh(as_hermitian(h, tol=1e-9))[0])


def fidelity(rho, sigma) -> float:
    """
    Fidelity F = || sqrt(rho) sqrt(sigma) ||_1, clipped to [0, 1].

    Args:
        rho: Density matrix
        sigma: Density matrix

    Returns:
        Fidelity in [0, 1]
    """
    rho = check_density(rho, name='rho')
    sigma = check_density(sigma, name='sigma')
    value = trace_norm(matrix_power(rho, 0.5, tol=0.0) @ matrix_power(sigma, 0.5, tol=0.0))
    return float(min(1.0, max(0.0, value)))


def purified_distance(rho, sigma) -> float:
    """Purified distance sqrt(1 - F^2)."""
    f = fidelity(rho, sigma)
    return float(np.sqrt(max(0.0, 1.0 - f * f)))


def kron(*ops) -> np.ndarray:
    """Kronecker product of one or more matrices, in argument order."""
    if not ops:
        raise ValidationError("kron needs at least one operator")
    return reduce(np.kron, [np.asarray(o, dtype=complex) for o in ops])


def partial_trace(op, subsystem_dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """
    Trace out every subsystem not listed in ``keep``.

    Kept subsystems stay in their original order.

    Args:
        op: Square matrix on the tensor product of the subsystems
        subsystem_dims: Dimensions of the subsystems
        keep: Indices of subsystems to keep

    Returns:
        Reduced matrix

    Raises:
        DimensionError: If the dims do not factor the matrix dimension
    """
    a = np.asarray(op, dtype=complex)
    dims = [int(d) for d in subsystem_dims]
    total = int(np.prod(dims)) if dims else 1
    if a.shape != (total, total):
        raise DimensionError(f"dims {dims} do not factor operator of shape {a.shape}")
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionError(f"keep indices {keep} out of range for {len(dims)} subsystems")

    tensor = a.reshape(dims + dims)
    current = len(dims)
    for k in sorted(set(range(len(dims))) - set(keep), reverse=True):
        tensor = np.trace(tensor, axis1=k, axis2=k + current)
        current -= 1
    kept_dim = int(np.prod([dims[k] for k in keep])) if keep else 1
    return tensor.reshape(kept_dim, kept_dim)

