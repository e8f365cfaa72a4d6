"""
Generators for auxiliary distributions and test channels.

Distributions are kept in factored form so that perturbations during a
frontier search stay inside the Markov family they were drawn from.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np

from ..errors import ValidationError
from ..linalg.random import depolarize, random_density, random_pmf, random_pure
from ..states.cq_state import AuxiliaryDistribution, BroadcastChannel, ClassicalRegister

logger = logging.getLogger(__name__)


def _mix(rng: np.random.Generator, table: np.ndarray, axes: int, step: float) -> np.ndarray:
    """Mix each distribution over the trailing ``axes`` axes with a Dirichlet draw."""
    lead = table.shape[:table.ndim - axes]
    tail = table.shape[table.ndim - axes:]
    flat = table.reshape(lead + (-1,))
    noise = rng.dirichlet(np.ones(flat.shape[-1]), size=lead if lead else None)
    mixed = (1 - step) * flat + step * noise
    return mixed.reshape(lead + tail)


@dataclass
class FactoredDistribution:
    """
    Auxiliary distribution stored as its generating factors.

    kind:
        'marton'         joint p(u0, u1, u2) and a map x(u0, u1, u2)
        'markov'         p(u) p(v|u) p(x|v)
        'superposition'  joint p(u, x)
        'double_markov'  p(u) p(w2, w3|u) p(x|u, w2, w3) with V2 = (U, W2), V3 = (U, W3)
    """
    kind: str
    factors: Dict[str, np.ndarray]
    trailing: Dict[str, int]
    input_map: Optional[np.ndarray] = None
    input_size: int = 2

    def build(self) -> AuxiliaryDistribution:
        f = self.factors
        if self.kind == 'marton':
            joint = f['joint']
            registers = [ClassicalRegister(n, s) for n, s in zip(('U0', 'U1', 'U2'), joint.shape)]
            return AuxiliaryDistribution(registers, joint, self.input_map)
        if self.kind == 'markov':
            p = f['p_u'][:, None, None] * f['p_v_u'][:, :, None] * f['p_x_v'][None, :, :]
            registers = [ClassicalRegister(n, s) for n, s in zip(('U', 'V', 'X'), p.shape)]
            return AuxiliaryDistribution.with_input_register(registers, p, 'X')
        if self.kind == 'superposition':
            p = f['joint']
            registers = [ClassicalRegister(n, s) for n, s in zip(('U', 'X'), p.shape)]
            return AuxiliaryDistribution.with_input_register(registers, p, 'X')
        if self.kind == 'double_markov':
            return _double_markov_joint(f['p_u'], f['p_w_u'], f['p_x_uw'])
        raise ValidationError(f"unknown distribution kind '{self.kind}'")

    def perturb(self, rng: np.random.Generator, step: float) -> 'FactoredDistribution':
        """Mix every factor with fresh Dirichlet noise; occasionally change one map entry."""
        factors = {k: _mix(rng, v, self.trailing[k], step) for k, v in self.factors.items()}
        input_map = None
        if self.input_map is not None:
            input_map = self.input_map.copy()
            if rng.random() < step:
                idx = tuple(rng.integers(0, s) for s in input_map.shape)
                input_map[idx] = rng.integers(0, self.input_size)
        return FactoredDistribution(self.kind, factors, self.trailing, input_map, self.input_size)


def _double_markov_joint(p_u: np.ndarray, p_w_u: np.ndarray, p_x_uw: np.ndarray) -> AuxiliaryDistribution:
    d_u, d_w2, d_w3 = p_w_u.shape
    d_x = p_x_uw.shape[-1]
    d_v2, d_v3 = d_u * d_w2, d_u * d_w3
    joint = np.zeros((d_u, d_v2, d_v3, d_x))
    for u in range(d_u):
        for w2 in range(d_w2):
            for w3 in range(d_w3):
                joint[u, u * d_w2 + w2, u * d_w3 + w3, :] = p_u[u] * p_w_u[u, w2, w3] * p_x_uw[u, w2, w3]
    registers = [
        ClassicalRegister('U', d_u),
        ClassicalRegister('V2', d_v2),
        ClassicalRegister('V3', d_v3),
        ClassicalRegister('X', d_x),
    ]
    return AuxiliaryDistribution.with_input_register(registers, joint, 'X')


def marton_distribution(
    rng: np.random.Generator,
    sizes: Sequence[int] = (2, 2, 2),
    input_size: int = 2
) -> FactoredDistribution:
    """Free joint pmf over (U0, U1, U2) and a random deterministic input map."""
    sizes = tuple(sizes)
    joint = random_pmf(rng, sizes)
    input_map = rng.integers(0, input_size, sizes)
    return FactoredDistribution('marton', {'joint': joint}, {'joint': 3}, input_map, input_size)


def markov_chain_distribution(
    rng: np.random.Generator,
    d_u: int = 2,
    d_v: int = 2,
    d_x: int = 2
) -> FactoredDistribution:
    """U - V - X with X the channel input."""
    factors = {
        'p_u': random_pmf(rng, d_u),
        'p_v_u': rng.dirichlet(np.ones(d_v), size=d_u),
        'p_x_v': rng.dirichlet(np.ones(d_x), size=d_v),
    }
    return FactoredDistribution('markov', factors, {'p_u': 1, 'p_v_u': 1, 'p_x_v': 1}, input_size=d_x)


def superposition_distribution(rng: np.random.Generator, d_u: int = 2, d_x: int = 2) -> FactoredDistribution:
    """Joint p(u, x) with X the channel input."""
    return FactoredDistribution('superposition', {'joint': random_pmf(rng, (d_u, d_x))}, {'joint': 2}, input_size=d_x)


def double_markov_distribution(
    rng: np.random.Generator,
    d_u: int = 2,
    d_w2: int = 2,
    d_w3: int = 2,
    d_x: int = 2,
    concentration: float = 0.5
) -> FactoredDistribution:
    """
    Distribution satisfying U - V2 - (V3, X) and U - V3 - (V2, X).

    V2 = (U, W2) and V3 = (U, W3), so U is a function of each; W2 and W3
    are drawn from a correlated joint conditional so I(V2;V3|U) > 0.
    """
    factors = {
        'p_u': random_pmf(rng, d_u),
        'p_w_u': np.stack([random_pmf(rng, (d_w2, d_w3), concentration) for _ in range(d_u)]),
        'p_x_uw': rng.dirichlet(np.ones(d_x), size=(d_u, d_w2, d_w3)),
    }
    trailing = {'p_u': 1, 'p_w_u': 2, 'p_x_uw': 1}
    return FactoredDistribution('double_markov', factors, trailing, input_size=d_x)


def copy_register(dist: AuxiliaryDistribution, source: str, name: str, position: int) -> AuxiliaryDistribution:
    """Insert a register that is an exact copy of ``source`` (e.g. V = U)."""
    axis = dist.names.index(source)
    size = dist.sizes[axis]
    eye = np.eye(size)
    # broadcast p(...) * [copy == source] with the copy at ``position``
    p = np.expand_dims(dist.pmf, position)
    m = np.expand_dims(dist.input_map, position)
    src_axis = axis + (1 if axis >= position else 0)
    shape = [1] * p.ndim
    shape[position] = size
    shape[src_axis] = size
    mask = eye.reshape(shape)
    p = p * mask
    m = np.broadcast_to(m, p.shape)
    registers = list(dist.registers)
    registers.insert(position, ClassicalRegister(name, size))
    return AuxiliaryDistribution(registers, p, m)


def rename_registers(dist: AuxiliaryDistribution, mapping: Dict[str, str], keep: Sequence[str]) -> AuxiliaryDistribution:
    """Marginalize onto ``keep`` (input map must be a function of them) and rename."""
    pmf = dist.marginal_pmf(keep)
    axes = [dist.names.index(n) for n in keep]
    # input map on the kept registers: take the value of any supported completion
    moved = np.moveaxis(dist.input_map, axes, list(range(len(axes))))
    weights = np.moveaxis(dist.pmf, axes, list(range(len(axes))))
    flat_map = moved.reshape(pmf.shape + (-1,))
    flat_w = weights.reshape(pmf.shape + (-1,))
    choice = np.argmax(flat_w > 0, axis=-1)
    input_map = np.take_along_axis(flat_map, choice[..., None], axis=-1)[..., 0]
    ok = np.all((flat_map == input_map[..., None]) | (flat_w == 0))
    if not ok:
        raise ValidationError(f"input map is not a function of {list(keep)}")
    registers = [ClassicalRegister(mapping.get(n, n), dist.sizes[dist.names.index(n)]) for n in keep]
    return AuxiliaryDistribution(registers, pmf, input_map)


def random_channel(
    rng: np.random.Generator,
    input_size: int = 2,
    dims: Sequence[int] = (2, 2, 2),
    pure: bool = False
) -> BroadcastChannel:
    """Product-output channel with independent random states per receiver."""
    draw = random_pure if pure else random_density
    marginals = [np.stack([draw(rng, d) for _ in range(input_size)]) for d in dims]
    return BroadcastChannel.from_marginals(marginals)


def degraded_channel(
    rng: np.random.Generator,
    input_size: int = 2,
    d_b: int = 2,
    noise: Sequence[float] = (0.2, 0.6),
    degrade_b3: bool = False
) -> BroadcastChannel:
    """
    Channel with B2 = M(B1) for a depolarizing M with parameter drawn from ``noise``.

    With ``degrade_b3`` B3 is a (separately) depolarized copy of B1 as well.
    """
    b1 = np.stack([random_density(rng, d_b) for _ in range(input_size)])
    p2 = rng.uniform(*noise)
    b2 = np.stack([depolarize(r, p2) for r in b1])
    if degrade_b3:
        p3 = rng.uniform(*noise)
        b3 = np.stack([depolarize(r, p3) for r in b1])
    else:
        b3 = np.stack([random_density(rng, d_b) for _ in range(input_size)])
    return BroadcastChannel.from_marginals([b1, b2, b3])


def identical_output_channel(states: np.ndarray) -> BroadcastChannel:
    """Every receiver sees the same state rho_x."""
    states = np.asarray(states, dtype=complex)
    return BroadcastChannel.from_marginals([states, states, states])


def classical_channel(transition: np.ndarray) -> BroadcastChannel:
    """Diagonal outputs from a row-stochastic matrix p(y|x), same at every receiver."""
    transition = np.asarray(transition, dtype=float)
    states = np.stack([np.diag(row).astype(complex) for row in transition])
    return identical_output_channel(states)


def constant_channel(input_size: int, rho: np.ndarray) -> BroadcastChannel:
    """Zero-capacity channel: all outputs equal."""
    return identical_output_channel(np.stack([rho] * input_size))
