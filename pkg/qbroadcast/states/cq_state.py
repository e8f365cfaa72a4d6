"""
Classical-quantum states over named classical registers, the broadcast
channel, and the auxiliary distributions that feed the channel.

A ``CqState`` stores the joint pmf as an array of shape (|A|, |B|, ...) over
its registers in declared order, and one density matrix per classical tuple
in an array of shape (|A|, |B|, ..., d, d).
"""
import logging
from dataclasses import dataclass
from functools import reduce
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from ..errors import ValidationError
from ..linalg.hermitian import DENSITY_TOL, check_density, check_dim, partial_trace

logger = logging.getLogger(__name__)

RECEIVERS = ('B1', 'B2', 'B3')


@dataclass(frozen=True)
class ClassicalRegister:
    """Named classical register with a finite alphabet {0, ..., size-1}"""
    name: str
    alphabet_size: int

    def __post_init__(self):
        if int(self.alphabet_size) < 1:
            raise ValidationError(f"alphabet_size must be >= 1, got {self.alphabet_size}", self.name)


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _weighted_average(pmf: np.ndarray, cond: np.ndarray, axes: Tuple[int, ...]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Conditional average of ``cond`` over ``axes`` with weights ``pmf``.

    Zero-probability groups receive the maximally mixed placeholder.
    Returns the summed pmf and the averaged conditionals (axes kept as size 1).
    """
    d = cond.shape[-1]
    mass = pmf.sum(axis=axes, keepdims=True)
    weighted = (pmf[..., None, None] * cond).sum(axis=axes, keepdims=True)
    safe = np.where(mass > 0, mass, 1.0)
    avg = weighted / safe[..., None, None]
    placeholder = np.eye(d, dtype=complex) / d
    avg = np.where((mass > 0)[..., None, None], avg, placeholder)
    return mass, avg


class CqState:
    """
    Classical-quantum state sum_t p(t) |t><t| (x) rho_t.

    Values are immutable after construction.
    """

    def __init__(
        self,
        registers: Sequence[ClassicalRegister],
        pmf,
        conditionals,
        validate: bool = True,
        tol: float = DENSITY_TOL
    ):
        """
        Args:
            registers: Ordered classical registers
            pmf: Joint pmf with shape (alphabet sizes...)
            conditionals: Density matrices with shape (alphabet sizes..., d, d)
            validate: Check pmf and density-matrix invariants
            tol: Validation tolerance
        """
        self.registers = tuple(registers)
        names = [r.name for r in self.registers]
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate register names {names}")
        pmf = np.asarray(pmf, dtype=float).reshape(self.sizes)
        conditionals = np.asarray(conditionals, dtype=complex)
        if conditionals.shape[:-2] != self.sizes or conditionals.ndim != len(self.sizes) + 2:
            raise ValidationError(
                f"conditionals shape {conditionals.shape} does not match registers {self.sizes}"
            )
        if validate:
            if np.any(pmf < -tol):
                raise ValidationError("pmf has negative entries", 'pmf')
            if abs(pmf.sum() - 1.0) > tol:
                raise ValidationError(f"pmf sums to {pmf.sum():.12f}, expected 1", 'pmf')
            for idx in np.ndindex(*self.sizes):
                check_density(conditionals[idx], tol=tol, name=f"conditionals{list(idx)}")
            pmf = np.clip(pmf, 0.0, None)
        self.pmf = _freeze(pmf.copy())
        self.conditionals = _freeze(conditionals.copy())

    # -- structure ---------------------------------------------------------

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(r.name for r in self.registers)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(int(r.alphabet_size) for r in self.registers)

    @property
    def quantum_dim(self) -> int:
        return int(self.conditionals.shape[-1])

    def axis(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ValidationError(f"register '{name}' not in state registers {self.names}")

    def axes(self, names: Sequence[str]) -> Tuple[int, ...]:
        return tuple(self.axis(n) for n in names)

    def register(self, name: str) -> ClassicalRegister:
        return self.registers[self.axis(name)]

    def __repr__(self) -> str:
        regs = ', '.join(f"{r.name}:{r.alphabet_size}" for r in self.registers)
        return f"CqState([{regs}], d_B={self.quantum_dim})"

    # -- access ------------------------------------------------------------

    def items(self, include_zero: bool = False) -> Iterator[Tuple[Tuple[int, ...], float, np.ndarray]]:
        """Iterate (tuple, probability, conditional) in row-major order."""
        for idx in np.ndindex(*self.sizes):
            p = float(self.pmf[idx])
            if p > 0 or include_zero:
                yield idx, p, self.conditionals[idx]

    def average(self) -> np.ndarray:
        """Quantum marginal rho^B."""
        axes = tuple(range(len(self.sizes)))
        return np.tensordot(self.pmf, self.conditionals, axes=(axes, axes))

    # -- transformations ---------------------------------------------------

    def marginal(self, keep_registers: Sequence[str], keep_quantum: bool = True) -> 'CqState':
        """
        Marginal on a subset of registers, in the order given.

        Args:
            keep_registers: Register names to keep
            keep_quantum: Keep the quantum system (else d_B becomes 1)

        Returns:
            CqState over ``keep_registers``
        """
        keep_axes = self.axes(keep_registers)
        drop = tuple(i for i in range(len(self.sizes)) if i not in keep_axes)
        mass, avg = _weighted_average(self.pmf, self.conditionals, drop)
        remaining = [i for i in range(len(self.sizes)) if i in keep_axes]
        mass = mass.reshape([self.sizes[i] for i in remaining])
        avg = avg.reshape([self.sizes[i] for i in remaining] + [self.quantum_dim] * 2)
        order = [remaining.index(a) for a in keep_axes]
        mass = np.transpose(mass, order)
        avg = np.transpose(avg, order + [len(order), len(order) + 1])
        if not keep_quantum:
            avg = np.ones(mass.shape + (1, 1), dtype=complex)
        registers = [self.registers[a] for a in keep_axes]
        return CqState(registers, mass, avg, validate=False)

    def markov_break(self, conditioning: Sequence[str]) -> 'CqState':
        """
        Replace each conditional by its average given only ``conditioning``.

        Builds states like rho^{VX-U-B}: pmf unchanged, rho_t replaced by
        sum_{t' ~ t on conditioning} p(t'|t_C) rho_{t'}.

        Args:
            conditioning: Register names to keep in the conditioning (may be empty)

        Returns:
            New CqState with the same registers
        """
        cond_axes = self.axes(conditioning)
        other = tuple(i for i in range(len(self.sizes)) if i not in cond_axes)
        if not other:
            return self
        _, avg = _weighted_average(self.pmf, self.conditionals, other)
        broken = np.broadcast_to(avg, self.conditionals.shape).copy()
        return CqState(self.registers, self.pmf, broken, validate=False)

    def rename(self, mapping: Dict[str, str]) -> 'CqState':
        registers = [ClassicalRegister(mapping.get(r.name, r.name), r.alphabet_size) for r in self.registers]
        return CqState(registers, self.pmf, self.conditionals, validate=False)

    def tensor_power(self, n: int) -> 'CqState':
        """
        n-fold tensor power; registers of copy i are suffixed '_i' (1-based).

        Args:
            n: Number of copies (>= 1)

        Returns:
            CqState with registers [A_1, B_1, ..., A_n, B_n]
        """
        if n < 1:
            raise ValidationError(f"tensor power needs n >= 1, got {n}")
        if n == 1:
            return self
        registers = [
            ClassicalRegister(f"{r.name}_{i}", r.alphabet_size)
            for i in range(1, n + 1) for r in self.registers
        ]
        pmf = reduce(np.multiply.outer, [self.pmf] * n)
        d = self.quantum_dim
        sizes = self.sizes * n
        k = len(self.sizes)
        cond = np.empty(sizes + (d ** n, d ** n), dtype=complex)
        for idx in np.ndindex(*sizes):
            parts = [self.conditionals[idx[j * k:(j + 1) * k]] for j in range(n)]
            cond[idx] = reduce(np.kron, parts)
        return CqState(registers, pmf, cond, validate=False)

    def embed(self, dim_cap: int = 256) -> np.ndarray:
        """
        Block-diagonal operator sum_t p(t) |t><t| (x) rho_t.

        Blocks follow row-major order of the classical tuples.

        Args:
            dim_cap: Maximum total dimension

        Returns:
            Density matrix of dimension prod(sizes) * d_B
        """
        total = int(np.prod(self.sizes)) * self.quantum_dim
        check_dim(total, dim_cap, 'embedded cq-state')
        blocks = [self.pmf[idx] * self.conditionals[idx] for idx in np.ndindex(*self.sizes)]
        return scipy.linalg.block_diag(*blocks).astype(complex)

    def is_markov_broken(self, conditioning: Sequence[str], tol: float = 1e-12) -> bool:
        """True when every conditional depends only on ``conditioning``."""
        broken = self.markov_break(conditioning)
        mask = self.pmf > 0
        return bool(np.all(np.abs(broken.conditionals - self.conditionals)[mask] <= tol))


class BroadcastChannel:
    """
    Classical-input channel x -> rho_x on B1 (x) B2 (x) B3.
    """

    def __init__(self, outputs, dims: Sequence[int], validate: bool = True):
        """
        Args:
            outputs: Array of shape (d_X, D, D) with D = d_B1 * d_B2 * d_B3
            dims: Receiver dimensions (d_B1, d_B2, d_B3)
            validate: Check every output is a density matrix
        """
        outputs = np.asarray(outputs, dtype=complex)
        self.dims = tuple(int(d) for d in dims)
        total = int(np.prod(self.dims))
        if outputs.ndim != 3 or outputs.shape[1:] != (total, total):
            raise ValidationError(f"outputs shape {outputs.shape} inconsistent with dims {self.dims}")
        if validate:
            for x in range(outputs.shape[0]):
                check_density(outputs[x], name=f"outputs[{x}]")
        self.outputs = _freeze(outputs.copy())
        self._marginals: Dict[int, np.ndarray] = {}

    @classmethod
    def from_marginals(cls, marginals: Sequence[np.ndarray], validate: bool = True) -> 'BroadcastChannel':
        """
        Product-output channel rho_x = rho_x^{B1} (x) rho_x^{B2} (x) rho_x^{B3}.

        Every information quantity uses one receiver at a time, so only the
        marginals matter.
        """
        marginals = [np.asarray(m, dtype=complex) for m in marginals]
        sizes = {m.shape[0] for m in marginals}
        if len(sizes) != 1:
            raise ValidationError(f"marginals disagree on input size: {sorted(sizes)}")
        d_x = sizes.pop()
        outputs = np.stack([reduce(np.kron, [m[x] for m in marginals]) for x in range(d_x)])
        return cls(outputs, [m.shape[-1] for m in marginals], validate)

    @property
    def input_size(self) -> int:
        return int(self.outputs.shape[0])

    def receiver_outputs(self, receiver: Union[int, str]) -> np.ndarray:
        """Marginal outputs rho_x^{B_i} of one receiver, shape (d_X, d_i, d_i)."""
        i = receiver_index(receiver)
        if i not in self._marginals:
            self._marginals[i] = np.stack([
                partial_trace(self.outputs[x], self.dims, [i]) for x in range(self.input_size)
            ])
        return self._marginals[i]


def receiver_index(receiver: Union[int, str]) -> int:
    if isinstance(receiver, str):
        if receiver not in RECEIVERS:
            raise ValidationError(f"unknown receiver '{receiver}', expected one of {RECEIVERS}")
        return RECEIVERS.index(receiver)
    if receiver not in (0, 1, 2):
        raise ValidationError(f"receiver index {receiver} out of range")
    return int(receiver)


class AuxiliaryDistribution:
    """
    Joint pmf over auxiliary registers plus the deterministic input map x(t).
    """

    def __init__(self, registers: Sequence[ClassicalRegister], pmf, input_map, tol: float = 1e-10):
        """
        Args:
            registers: Ordered auxiliary registers (may include X itself)
            pmf: Joint pmf with shape (alphabet sizes...)
            input_map: Integer array of the same shape giving the channel input
            tol: pmf validation tolerance
        """
        self.registers = tuple(registers)
        sizes = tuple(r.alphabet_size for r in self.registers)
        pmf = np.asarray(pmf, dtype=float).reshape(sizes)
        input_map = np.asarray(input_map, dtype=int).reshape(sizes)
        if np.any(pmf < -tol) or abs(pmf.sum() - 1.0) > tol:
            raise ValidationError("pmf must be nonnegative and sum to 1", 'pmf')
        self.pmf = _freeze(np.clip(pmf, 0.0, None))
        self.input_map = _freeze(input_map.copy())

    @classmethod
    def with_input_register(
        cls,
        registers: Sequence[ClassicalRegister],
        pmf,
        input_register: str = 'X'
    ) -> 'AuxiliaryDistribution':
        """Distribution in which one register is the channel input itself."""
        names = [r.name for r in registers]
        axis = names.index(input_register)
        sizes = tuple(r.alphabet_size for r in registers)
        grid = np.indices(sizes)[axis]
        return cls(registers, pmf, grid)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(r.name for r in self.registers)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(r.alphabet_size for r in self.registers)

    def marginal_pmf(self, names: Sequence[str]) -> np.ndarray:
        axes = [self.names.index(n) for n in names]
        drop = tuple(i for i in range(len(self.sizes)) if i not in axes)
        m = self.pmf.sum(axis=drop)
        remaining = [i for i in range(len(self.sizes)) if i in axes]
        return np.transpose(m, [remaining.index(a) for a in axes])


def channel_to_cqstate(
    channel: BroadcastChannel,
    distribution: AuxiliaryDistribution,
    receiver: Union[int, str]
) -> CqState:
    """
    Evaluation state sum_t p(t) |t><t| (x) rho^{B_i}_{x(t)}.

    Args:
        channel: Broadcast channel
        distribution: Auxiliary pmf and input map
        receiver: 'B1', 'B2', 'B3' or 0-based index

    Returns:
        CqState over the distribution's registers and receiver B_i

    Raises:
        ValidationError: If the input map leaves the channel's input alphabet
    """
    outputs = channel.receiver_outputs(receiver)
    x = distribution.input_map
    if np.any(x < 0) or np.any(x >= channel.input_size):
        bad = np.argwhere((x < 0) | (x >= channel.input_size))[0]
        raise ValidationError(
            f"input map value {x[tuple(bad)]} out of range [0, {channel.input_size})",
            f"input_map{list(bad)}"
        )
    conditionals = outputs[x]
    return CqState(distribution.registers, distribution.pmf, conditionals, validate=False)


def cq_from_classical(registers: List[ClassicalRegister], pmf) -> CqState:
    """Classical-only state (d_B = 1)."""
    pmf = np.asarray(pmf, dtype=float)
    return CqState(registers, pmf, np.ones(pmf.shape + (1, 1), dtype=complex), validate=False)


def receiver_states(
    channel: BroadcastChannel,
    distribution: AuxiliaryDistribution,
    receivers: Optional[Sequence[str]] = None
) -> Dict[str, CqState]:
    return {r: channel_to_cqstate(channel, distribution, r) for r in (receivers or RECEIVERS)}
