"""
Pinching maps, nested pinching families and distinct-eigenvalue counts.

A pinching map E_sigma(X) = sum_i P_i X P_i is built from the clustered
eigenprojectors of a reference operator sigma. Nested families condition
each level on more classical registers: a level's reference operator is
its parent level applied to the conditional state given extra registers.
"""
import logging
import threading
from dataclasses import dataclass, field
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import DimensionError, ValidationError
from ..linalg.hermitian import (
    DEFAULT_CLUSTER_TOL,
    cluster_eigenvalues,
    distinct_eigenvalues,
    min_eigenvalue,
    spectral,
)
from ..states.cq_state import CqState

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PinchingMap:
    """Complete family of orthogonal projectors defining E(X) = sum P X P"""
    projectors: Tuple[np.ndarray, ...]
    source_description: str = ''

    @property
    def dim(self) -> int:
        return int(self.projectors[0].shape[0])

    @property
    def size(self) -> int:
        """Number of projectors (distinct eigenvalues of the source)."""
        return len(self.projectors)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return pinch(self, x)


def pinching_from_operator(
    sigma: np.ndarray,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    description: str = ''
) -> PinchingMap:
    """Pinching map onto the eigenspaces of ``sigma``."""
    dec = spectral(sigma, cluster_tol)
    return PinchingMap(projectors=tuple(dec.projectors), source_description=description)


def pinch(pinching: PinchingMap, x: np.ndarray) -> np.ndarray:
    """
    Apply a pinching map.

    Args:
        pinching: PinchingMap
        x: Square matrix of matching dimension

    Returns:
        sum_i P_i x P_i

    Raises:
        DimensionError: On dimension mismatch
    """
    x = np.asarray(x, dtype=complex)
    if x.shape != (pinching.dim, pinching.dim):
        raise DimensionError(f"cannot pinch {x.shape} with a {pinching.dim}-dimensional map")
    out = np.zeros_like(x)
    for p in pinching.projectors:
        out += p @ x @ p
    return out


def distinct_eigenvalue_count(op: np.ndarray, cluster_tol: float = DEFAULT_CLUSTER_TOL) -> int:
    return int(len(distinct_eigenvalues(op, cluster_tol)))


def product_spectrum_count(
    spectra: Sequence[Sequence[float]],
    cluster_tol: float = DEFAULT_CLUSTER_TOL
) -> int:
    """
    Distinct eigenvalues of a tensor product from the factors' spectra.

    Never builds the product matrix: eigenvalues of A (x) B are the
    pairwise products of the factors' eigenvalues.
    """
    products = reduce(lambda a, b: np.multiply.outer(a, b).ravel(), [np.asarray(s, dtype=float) for s in spectra])
    return len(cluster_eigenvalues(np.sort(products), cluster_tol))


def verify_pinching_inequality(
    rho: np.ndarray,
    sigma: np.ndarray,
    cluster_tol: float = DEFAULT_CLUSTER_TOL
) -> float:
    """
    Margin of the pinching inequality rho <= nu E_sigma(rho).

    Returns:
        min eigenvalue of nu * E_sigma(rho) - rho (>= 0 certifies the inequality)
    """
    pinching = pinching_from_operator(sigma, cluster_tol)
    return min_eigenvalue(pinching.size * pinch(pinching, rho) - rho)


@dataclass(frozen=True)
class PinchingLevel:
    """
    One level of a nested family.

    The map for key values k is built from parent(k restricted)(rho_given),
    where rho_given is the conditional state given the ``given`` registers.
    A level without parent is built from the quantum marginal rho^B.
    """
    name: str
    parent: Optional[str] = None
    given: Tuple[str, ...] = ()


SCENARIO_LEVELS = {
    'multilevel': (
        PinchingLevel('E'),
        PinchingLevel('E1', 'E', ('U',)),
        PinchingLevel('E2', 'E1', ('V',)),
        PinchingLevel('E3', 'E2', ('X',)),
    ),
    'marton': (
        PinchingLevel('E'),
        PinchingLevel('E1', 'E', ('U0',)),
    ),
    'general_two': (
        PinchingLevel('E'),
        PinchingLevel('E1', 'E', ('U',)),
        PinchingLevel('E2', 'E1', ('V2',)),
        PinchingLevel('E3', 'E1', ('V3',)),
        PinchingLevel('E4', 'E1', ('V2', 'V3')),
    ),
}
SCENARIO_LEVELS['three_degraded'] = SCENARIO_LEVELS['general_two']


class NestedPinchingFamily:
    """
    Lazily materialized, memoized nested pinching maps over a cq-state.

    Maps are keyed by level name and the values of the level's key
    registers (its ancestors' ``given`` registers followed by its own).
    """

    def __init__(
        self,
        state: CqState,
        levels: Sequence[PinchingLevel],
        cluster_tol: float = DEFAULT_CLUSTER_TOL
    ):
        """
        Args:
            state: cq-state whose conditionals define the references
            levels: Level definitions (parents listed before children)
            cluster_tol: Eigenvalue clustering tolerance
        """
        self.state = state
        self.cluster_tol = cluster_tol
        self.levels: Dict[str, PinchingLevel] = {}
        for level in levels:
            if level.parent is not None and level.parent not in self.levels:
                raise ValidationError(f"level '{level.name}' references unknown parent '{level.parent}'")
            for reg in level.given:
                state.axis(reg)
            self.levels[level.name] = level
        self._maps: Dict[Tuple[str, Tuple[int, ...]], PinchingMap] = {}
        self._conditionals: Dict[Tuple[str, ...], np.ndarray] = {}
        self._lock = threading.Lock()

    def key_registers(self, name: str) -> Tuple[str, ...]:
        level = self.levels[name]
        if level.parent is None:
            return level.given
        return self.key_registers(level.parent) + level.given

    def conditional_states(self, given: Sequence[str]) -> np.ndarray:
        """Conditionals rho_c given registers ``given`` (array over their values)."""
        given = tuple(given)
        with self._lock:
            cached = self._conditionals.get(given)
        if cached is None:
            if given:
                cached = self.state.marginal(given).conditionals
            else:
                cached = self.state.average()
            with self._lock:
                self._conditionals[given] = cached
        return cached

    def reference(self, name: str, key: Tuple[int, ...] = ()) -> np.ndarray:
        """Operator whose eigenspaces define the level's map at ``key``."""
        level = self.levels[name]
        key = tuple(int(k) for k in key)
        if level.parent is None:
            return self.conditional_states(level.given)[key] if level.given else self.conditional_states(())
        parent_len = len(self.key_registers(level.parent))
        parent_key, own = key[:parent_len], key[parent_len:]
        rho = self.conditional_states(level.given)[own]
        return self.map(level.parent, parent_key)(rho)

    def map(self, name: str, key: Tuple[int, ...] = ()) -> PinchingMap:
        key = tuple(int(k) for k in key)
        if name not in self.levels:
            raise ValidationError(f"unknown pinching level '{name}'")
        expected = len(self.key_registers(name))
        if len(key) != expected:
            raise ValidationError(f"level '{name}' expects {expected} key values, got {len(key)}")
        with self._lock:
            cached = self._maps.get((name, key))
        if cached is not None:
            return cached
        pinching = pinching_from_operator(
            self.reference(name, key),
            self.cluster_tol,
            description=f"{name}{list(key)}"
        )
        with self._lock:
            self._maps[(name, key)] = pinching
        return pinching

    def apply(self, name: str, key: Tuple[int, ...], x: np.ndarray) -> np.ndarray:
        return self.map(name, key)(x)

    def count(self, name: str, key: Tuple[int, ...] = ()) -> int:
        return self.map(name, key).size

    def keys(self, name: str) -> List[Tuple[int, ...]]:
        sizes = [self.state.register(r).alphabet_size for r in self.key_registers(name)]
        return [tuple(k) for k in np.ndindex(*sizes)]

    def max_count(self, name: str) -> int:
        """Largest number of projectors over all keys of a level."""
        return max(self.count(name, k) for k in self.keys(name))


def build_nested(
    state: CqState,
    scenario: str,
    cluster_tol: float = DEFAULT_CLUSTER_TOL
) -> NestedPinchingFamily:
    """
    Nested pinching family for one of the coding scenarios.

    Args:
        state: cq-state carrying the scenario's registers
        scenario: 'marton', 'multilevel', 'general_two' or 'three_degraded'
        cluster_tol: Eigenvalue clustering tolerance

    Returns:
        NestedPinchingFamily

    Raises:
        ValidationError: Unknown scenario or missing register
    """
    if scenario not in SCENARIO_LEVELS:
        raise ValidationError(f"unknown scenario '{scenario}', expected one of {sorted(SCENARIO_LEVELS)}")
    return NestedPinchingFamily(state, SCENARIO_LEVELS[scenario], cluster_tol)


@dataclass
class CountReport:
    """Distinct-eigenvalue counts at tensor power n against polynomial bounds"""
    n: int
    cluster_tol: float
    nu: int
    nu_bound: float
    nu1: Optional[int] = None
    nu1_bound: Optional[float] = None
    nu2: Optional[int] = None
    nu2_bound: Optional[float] = None
    sequences: int = 0
    exhaustive: bool = True
    details: List[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        checks = [(self.nu, self.nu_bound), (self.nu1, self.nu1_bound), (self.nu2, self.nu2_bound)]
        return all(count <= bound for count, bound in checks if count is not None)

    def to_dict(self) -> dict:
        return {
            'n': self.n,
            'cluster_tol': self.cluster_tol,
            'nu': self.nu,
            'nu_bound': self.nu_bound,
            'nu1': self.nu1,
            'nu1_bound': self.nu1_bound,
            'nu2': self.nu2,
            'nu2_bound': self.nu2_bound,
            'sequences': self.sequences,
            'exhaustive': self.exhaustive,
            'passed': self.passed,
        }


def count_bounds(n: int, d_b: int, d_u: int = 1, d_v: int = 1, d_x: int = 1) -> Dict[str, float]:
    """Polynomial bounds on nu, nu1, nu2, nu3 at tensor power n."""
    base = d_u * (d_b + 2) * (d_b - 1) / 2
    return {
        'nu': float((n + 1) ** (d_b - 1)),
        'nu1': float((n + 1) ** base),
        'nu2': float((n + 1) ** (d_v * base)),
        'nu3': float((n + 1) ** (d_x * d_v * base)),
    }


def _sequences(rng: np.random.Generator, size: int, n: int, limit: int) -> Tuple[List[Tuple[int, ...]], bool]:
    if size ** n <= limit:
        return [tuple(s) for s in np.ndindex(*([size] * n))], True
    return [tuple(rng.integers(0, size, n)) for _ in range(limit)], False


def check_count_bounds(
    state: CqState,
    n: int,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    outer: str = 'U',
    inner: Optional[str] = None,
    max_sequences: int = 64,
    dim_cap: int = 256,
    rng: Optional[np.random.Generator] = None
) -> CountReport:
    """
    Compare distinct-eigenvalue counts of tensor-power pinchings with bounds.

    nu counts E^{B^n} (from rho_B^{(x) n}, via product spectra), nu1 counts
    E^{B^n}(rho_{u^n}) and, when ``inner`` is given, nu2 counts
    E_{1|u^n}(rho_{v^n}).

    Args:
        state: cq-state with the ``outer`` (and optional ``inner``) register
        n: Tensor power
        cluster_tol: Eigenvalue clustering tolerance
        outer: Register conditioning the first level
        inner: Register conditioning the second level
        max_sequences: Enumerate exhaustively up to this many sequences, else sample
        dim_cap: Cap on d_B^n for the dense levels
        rng: Generator for sampled sequences

    Returns:
        CountReport
    """
    rng = rng or np.random.default_rng(0)
    d_b = state.quantum_dim
    rho_b = state.average()
    base_spectrum = np.linalg.eigvalsh(rho_b)
    nu = product_spectrum_count([base_spectrum] * n, cluster_tol)
    d_u = state.register(outer).alphabet_size
    d_v = state.register(inner).alphabet_size if inner else 1
    bounds = count_bounds(n, d_b, d_u, d_v)
    report = CountReport(n=n, cluster_tol=cluster_tol, nu=nu, nu_bound=bounds['nu'])

    if d_b ** n > dim_cap:
        logger.warning(f"d_B^n = {d_b ** n:,} exceeds dim cap {dim_cap}; reporting nu only")
        return report

    rho_u = state.marginal([outer]).conditionals
    rho_v = state.marginal([inner]).conditionals if inner else None
    level0 = pinching_from_operator(reduce(np.kron, [rho_b] * n), cluster_tol)

    u_seqs, exhaustive = _sequences(rng, d_u, n, max_sequences)
    nu1 = 0
    nu2 = 0
    for u_seq in u_seqs:
        pinched_u = level0(reduce(np.kron, [rho_u[u] for u in u_seq]))
        count1 = distinct_eigenvalue_count(pinched_u, cluster_tol)
        nu1 = max(nu1, count1)
        if rho_v is not None:
            level1 = pinching_from_operator(pinched_u, cluster_tol)
            v_seqs, v_exhaustive = _sequences(rng, d_v, n, max(1, max_sequences // len(u_seqs)))
            exhaustive = exhaustive and v_exhaustive
            for v_seq in v_seqs:
                count2 = distinct_eigenvalue_count(level1(reduce(np.kron, [rho_v[v] for v in v_seq])), cluster_tol)
                nu2 = max(nu2, count2)
        report.details.append({'u': list(u_seq), 'count': count1})

    report.nu1 = nu1
    report.nu1_bound = bounds['nu1']
    if rho_v is not None:
        report.nu2 = nu2
        report.nu2_bound = bounds['nu2']
    report.sequences = len(u_seqs)
    report.exhaustive = exhaustive
    logger.info(
        f"Eigenvalue counts n={n}: nu={nu} (<= {bounds['nu']:.0f}), "
        f"nu1={nu1} (<= {bounds['nu1']:.0f}) over {len(u_seqs):,} sequences"
    )
    return report
