"""
Seeded random instance generators: states, Hermitian matrices, projectors,
probability vectors and post-processing channels.
"""
from typing import List, Optional

import numpy as np
import scipy.stats


def ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_density(rng: np.random.Generator, dim: int, rank: Optional[int] = None) -> np.ndarray:
    """
    Random density matrix G G^dagger / tr, G a dim x rank Ginibre matrix.

    Args:
        rng: Numpy generator
        dim: Hilbert space dimension
        rank: Rank of the state (default: full rank)

    Returns:
        Density matrix
    """
    g = ginibre(rng, dim, rank or dim)
    rho = g @ g.conj().T
    rho = rho / np.real(np.trace(rho))
    return (rho + rho.conj().T) / 2


def random_pure(rng: np.random.Generator, dim: int) -> np.ndarray:
    return random_density(rng, dim, rank=1)


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = ginibre(rng, dim, dim)
    return (g + g.conj().T) / 2


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    return scipy.stats.unitary_group.rvs(dim, random_state=rng)


def random_projector(rng: np.random.Generator, dim: int, rank: int) -> np.ndarray:
    u = random_unitary(rng, dim)
    vecs = u[:, :rank]
    return vecs @ vecs.conj().T


def random_commuting_projectors(rng: np.random.Generator, dim: int, count: int) -> List[np.ndarray]:
    """Projectors diagonal in one shared random basis (random subsets of basis vectors)."""
    u = random_unitary(rng, dim)
    out = []
    for _ in range(count):
        mask = rng.random(dim) < 0.7
        vecs = u[:, mask]
        out.append(vecs @ vecs.conj().T)
    return out


def random_pmf(rng: np.random.Generator, size, concentration: float = 1.0) -> np.ndarray:
    """Dirichlet-distributed pmf with the given shape."""
    shape = (size,) if np.isscalar(size) else tuple(size)
    flat = rng.dirichlet(np.full(int(np.prod(shape)), concentration))
    return flat.reshape(shape)


def random_conditional(rng: np.random.Generator, given: int, size: int, concentration: float = 1.0) -> np.ndarray:
    """Row-stochastic matrix p(y|x) of shape (given, size)."""
    return rng.dirichlet(np.full(size, concentration), size=given)


def depolarize(rho: np.ndarray, p: float) -> np.ndarray:
    """Depolarizing channel rho -> (1 - p) rho + p I/d."""
    d = rho.shape[0]
    return (1 - p) * rho + p * np.eye(d) / d


def amplitude_damp(rho: np.ndarray, gamma: float) -> np.ndarray:
    """Qubit amplitude damping with decay probability gamma."""
    k0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex)
    k1 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex)
    return k0 @ rho @ k0.conj().T + k1 @ rho @ k1.conj().T
