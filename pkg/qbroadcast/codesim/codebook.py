"""
Random codebooks with superposition layers and in-bin pair selection.

Codebook sizes are ceil(2^rate) per message component; every bound is
evaluated with the realized log2 sizes.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Dict, Iterator, Mapping, Optional, Tuple

import numpy as np

from ..errors import DimensionError, ValidationError
from ..states.cq_state import AuxiliaryDistribution, BroadcastChannel, ClassicalRegister
from .scenarios import Scenario, get_scenario

logger = logging.getLogger(__name__)

SCORE_TOL = 1e-12


def codebook_size(rate: float) -> int:
    """ceil(2^rate), at least 1."""
    if rate < 0:
        raise ValidationError(f"rates must be nonnegative, got {rate}")
    return max(1, int(math.ceil(2.0 ** rate - 1e-12)))


@dataclass
class CodebookSpec:
    """
    Scenario, per-component rates and the instance they are drawn for.

    ``rates`` may name any message or bin component of the scenario;
    missing components get rate 0 (a single index).
    """
    scenario: str
    rates: Dict[str, float]
    distribution: AuxiliaryDistribution
    seed: int = 0
    encoder_threshold: float = 1.0

    def __post_init__(self):
        self.plan = get_scenario(self.scenario)
        unknown = set(self.rates) - set(self.plan.components)
        if unknown:
            raise ValidationError(
                f"rates {sorted(unknown)} not used by scenario '{self.scenario}' "
                f"(components {list(self.plan.components)})"
            )
        missing = [r for r in self.plan.registers if r not in self.distribution.names]
        if missing:
            raise ValidationError(f"distribution lacks registers {missing} for '{self.scenario}'")
        self.sizes: Dict[str, int] = {c: codebook_size(self.rates.get(c, 0.0)) for c in self.plan.components}

    def log_size(self, component: str) -> float:
        return math.log2(self.sizes[component])

    def realized_rate(self, components) -> float:
        return sum(self.log_size(c) for c in components)

    def realized_rates(self) -> Dict[str, float]:
        """Realized message rates (R0, R1[, R2]) of the scenario."""
        return {name: self.realized_rate(comps) for name, comps in self.plan.rate_map}


@dataclass
class Codebook:
    """Sampled codewords per layer plus the encoder's selection table"""
    spec: CodebookSpec
    codewords: Dict[str, np.ndarray]
    selection: Dict[Tuple[int, ...], Tuple[int, int]] = field(default_factory=dict)
    scores: Dict[Tuple[int, ...], float] = field(default_factory=dict)
    encoder_failure: Dict[Tuple[int, ...], bool] = field(default_factory=dict)

    @property
    def scenario(self) -> Scenario:
        return self.spec.plan

    @property
    def failure_fraction(self) -> float:
        if not self.encoder_failure:
            return 0.0
        return sum(self.encoder_failure.values()) / len(self.encoder_failure)

    def messages(self) -> Iterator[Dict[str, int]]:
        """All message tuples in row-major order, as component -> index maps."""
        names = self.scenario.messages
        for idx in itertools.product(*(range(self.spec.sizes[c]) for c in names)):
            yield dict(zip(names, idx))

    @property
    def message_count(self) -> int:
        return int(np.prod([self.spec.sizes[c] for c in self.scenario.messages]))

    def complete(self, assignment: Mapping[str, int]) -> Dict[str, int]:
        """Fill in bin components from the selection table when they are missing."""
        full = dict(assignment)
        binning = self.scenario.binning
        if binning is None:
            return full
        if binning.first_bin in full and binning.second_bin in full:
            return full
        key_comps = self.scenario.selection_key()
        if any(c not in full for c in key_comps):
            return full
        k1, k2 = self.selection[tuple(full[c] for c in key_comps)]
        full.setdefault(binning.first_bin, k1)
        full.setdefault(binning.second_bin, k2)
        return full

    def symbol(self, register: str, assignment: Mapping[str, int]) -> int:
        layer = self.scenario.layer(register)
        full = self.complete(assignment)
        return int(self.codewords[register][tuple(full[c] for c in layer.components)])

    def symbols(self, registers, assignment: Mapping[str, int]) -> Tuple[int, ...]:
        full = self.complete(assignment)
        return tuple(self.symbol(r, full) for r in registers)

    def channel_input(self, message: Mapping[str, int]) -> int:
        """Input letter sent for a message tuple."""
        full = self.complete(message)
        scenario = self.scenario
        if scenario.input_register is not None:
            return self.symbol(scenario.input_register, full)
        regs = scenario.registers
        return int(self.spec.distribution.input_map[self.symbols(regs, full)])


def _conditional(dist: AuxiliaryDistribution, target: str, given: Tuple[str, ...]) -> np.ndarray:
    """p(target | given) with shape (given sizes..., |target|); p(target) rows where p(given) = 0."""
    joint = dist.marginal_pmf(list(given) + [target])
    if not given:
        return joint
    mass = joint.sum(axis=-1, keepdims=True)
    prior = dist.marginal_pmf([target])
    return np.where(mass > 0, joint / np.where(mass > 0, mass, 1.0), prior)


def _sample_layer(rng, cond: np.ndarray, parent_symbols: np.ndarray) -> np.ndarray:
    """One draw per entry of ``parent_symbols`` (shape (..., n_parents))."""
    out = np.empty(parent_symbols.shape[:-1], dtype=int)
    for idx in np.ndindex(*out.shape):
        row = cond[tuple(parent_symbols[idx])]
        out[idx] = rng.choice(row.shape[0], p=row / row.sum())
    return out


def generate_codebook(spec: CodebookSpec) -> Codebook:
    """
    Sample every layer from the scenario's conditional distributions.

    Layers whose parents carry bin components they do not index are drawn
    after the encoder's selection, conditioned on the selected pair.

    Args:
        spec: Codebook specification (deterministic given ``spec.seed``)

    Returns:
        Codebook with the selection table filled when the scenario bins
    """
    scenario = spec.plan
    rng = np.random.default_rng(spec.seed)
    book = Codebook(spec=spec, codewords={})
    deferred = []
    for layer in scenario.layers:
        parent_comps = [c for p in layer.parents for c in scenario.layer(p).components]
        if any(c not in layer.components for c in parent_comps):
            deferred.append(layer)
            continue
        _draw(book, layer, rng)
    if scenario.binning is not None:
        encoder_select(book, spec.encoder_threshold)
    for layer in deferred:
        _draw(book, layer, rng)
    logger.debug(f"codebook {scenario.name}: sizes {spec.sizes}, {book.message_count:,} messages")
    return book


def _draw(book: Codebook, layer, rng: np.random.Generator) -> None:
    spec = book.spec
    shape = tuple(spec.sizes[c] for c in layer.components)
    cond = _conditional(spec.distribution, layer.register, layer.parents)
    parents = np.zeros(shape + (len(layer.parents),), dtype=int)
    for idx in np.ndindex(*shape):
        assignment = dict(zip(layer.components, idx))
        parents[idx] = [book.symbol(p, assignment) for p in layer.parents]
    book.codewords[layer.register] = _sample_layer(rng, cond, parents)


def encoder_select(book: Codebook, threshold: Optional[float] = None) -> Codebook:
    """
    Pick, for every selection key, the in-bin pair with the largest score
    p(a, b | c) / (p(a | c) p(b | c)); flag the key when the best score is
    below ``threshold``. Ties go to the first pair in row-major order.
    """
    scenario = book.scenario
    binning = scenario.binning
    if binning is None:
        raise ValidationError(f"scenario '{scenario.name}' has no binning")
    threshold = book.spec.encoder_threshold if threshold is None else threshold
    dist = book.spec.distribution
    joint = dist.marginal_pmf([binning.common, binning.first, binning.second])
    p_c = joint.sum(axis=(1, 2))
    p_ca = joint.sum(axis=2)
    p_cb = joint.sum(axis=1)

    key_comps = scenario.selection_key()
    n1, n2 = book.spec.sizes[binning.first_bin], book.spec.sizes[binning.second_bin]
    for key in itertools.product(*(range(book.spec.sizes[c]) for c in key_comps)):
        base = dict(zip(key_comps, key))
        scores = np.zeros((n1, n2))
        for k1, k2 in itertools.product(range(n1), range(n2)):
            full = {**base, binning.first_bin: k1, binning.second_bin: k2}
            c = book.symbol(binning.common, full)
            a = book.symbol(binning.first, full)
            b = book.symbol(binning.second, full)
            denom = p_ca[c, a] * p_cb[c, b]
            scores[k1, k2] = joint[c, a, b] * p_c[c] / denom if denom > 0 else 0.0
        best = np.unravel_index(int(np.argmax(scores)), scores.shape)
        book.selection[key] = (int(best[0]), int(best[1]))
        book.scores[key] = float(scores[best])
        book.encoder_failure[key] = bool(scores[best] < threshold - SCORE_TOL)
    failures = sum(book.encoder_failure.values())
    if failures:
        logger.debug(f"encoder failed on {failures:,} of {len(book.selection):,} selection keys")
    return book


def tensor_square(
    channel: BroadcastChannel,
    distribution: AuxiliaryDistribution,
    dim_cap: int = 256
) -> Tuple[BroadcastChannel, AuxiliaryDistribution]:
    """
    Two channel uses as one super-letter: registers and inputs become pairs,
    receiver outputs become rho_x (x) rho_x'.

    Raises:
        DimensionError: If a receiver dimension squared exceeds ``dim_cap``
    """
    for d in channel.dims:
        if d * d > dim_cap:
            raise DimensionError(f"receiver dimension {d * d} exceeds cap {dim_cap}")
    d_x = channel.input_size
    marginals = []
    for r in ('B1', 'B2', 'B3'):
        out = channel.receiver_outputs(r)
        marginals.append(np.stack([np.kron(out[a], out[b]) for a in range(d_x) for b in range(d_x)]))
    squared_channel = BroadcastChannel.from_marginals(marginals)

    regs = distribution.registers
    registers = [ClassicalRegister(r.name, r.alphabet_size ** 2) for r in regs]
    k = len(regs)
    pmf = reduce(np.multiply.outer, [distribution.pmf, distribution.pmf])
    x = distribution.input_map
    input_map = x.reshape(x.shape + (1,) * k) * d_x + x.reshape((1,) * k + x.shape)
    # interleave the axes so register i of both copies sits together, then merge
    order = [a for i in range(k) for a in (i, i + k)]
    pmf = np.transpose(pmf, order).reshape([r.alphabet_size for r in registers])
    input_map = np.transpose(input_map, order).reshape([r.alphabet_size for r in registers])
    return squared_channel, AuxiliaryDistribution(registers, pmf, input_map)
