"""
Coding scenarios: codebook layers, binning, and the decoder of each receiver.

Message components are named after the rates that size them (R0, S12,
r1, ...), so a threshold such as 2^(R0+S1+S2) is just the tuple of
component names whose realized log-sizes it adds up.
"""
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from ..errors import ValidationError
from ..quantum.pinching import SCENARIO_LEVELS, PinchingLevel


@dataclass(frozen=True)
class Layer:
    """
    One codebook layer.

    Codewords of ``register`` are indexed by ``components`` and drawn from
    p(register | parents). Parent components missing from ``components``
    are bin indices fixed by the encoder.
    """
    register: str
    components: Tuple[str, ...]
    parents: Tuple[str, ...] = ()


@dataclass(frozen=True)
class Binning:
    """Marton-style in-bin pair selection between two layers with a common parent"""
    common: str
    first: str
    second: str
    first_bin: str
    second_bin: str


@dataclass(frozen=True)
class ThresholdTest:
    """{P_level(rho_t) >= 2^threshold * reference_level(t)} for the receiver's tuple t"""
    name: str
    level: str
    threshold: Tuple[str, ...]


@dataclass(frozen=True)
class ReceiverPlan:
    """
    Decoder of one receiver.

    Hypotheses range over ``decoded`` plus ``nonunique`` components; the
    POVM element of a decoded tuple sums the operators of all its
    non-unique completions. Bin components not listed are resolved through
    the encoder's selection table.
    """
    receiver: str
    registers: Tuple[str, ...]
    levels: Tuple[PinchingLevel, ...]
    tests: Tuple[ThresholdTest, ...]
    decoded: Tuple[str, ...]
    nonunique: Tuple[str, ...] = ()

    @property
    def hypothesis_components(self) -> Tuple[str, ...]:
        return self.decoded + self.nonunique


@dataclass(frozen=True)
class Scenario:
    name: str
    family: str
    layers: Tuple[Layer, ...]
    messages: Tuple[str, ...]
    receivers: Tuple[ReceiverPlan, ...]
    binning: Optional[Binning] = None
    input_register: Optional[str] = 'X'
    rate_map: Tuple[Tuple[str, Tuple[str, ...]], ...] = ()

    @property
    def components(self) -> Tuple[str, ...]:
        seen: Dict[str, None] = {}
        for layer in self.layers:
            for c in layer.components:
                seen.setdefault(c, None)
        return tuple(seen)

    @property
    def registers(self) -> Tuple[str, ...]:
        return tuple(layer.register for layer in self.layers)

    def layer(self, register: str) -> Layer:
        for layer in self.layers:
            if layer.register == register:
                return layer
        raise ValidationError(f"scenario '{self.name}' has no layer '{register}'")

    def plan(self, receiver: str) -> ReceiverPlan:
        for plan in self.receivers:
            if plan.receiver == receiver:
                return plan
        raise ValidationError(f"scenario '{self.name}' has no receiver '{receiver}'")

    @property
    def bin_components(self) -> Tuple[str, ...]:
        if self.binning is None:
            return ()
        return (self.binning.first_bin, self.binning.second_bin)

    def selection_key(self) -> Tuple[str, ...]:
        """Message components that determine the selected bin pair."""
        if self.binning is None:
            return ()
        comps = self.layer(self.binning.first).components + self.layer(self.binning.second).components
        seen: Dict[str, None] = {}
        for c in comps:
            if c not in self.bin_components:
                seen.setdefault(c, None)
        return tuple(seen)


_E = (PinchingLevel('E'),)
_E_E1U = (PinchingLevel('E'), PinchingLevel('E1', 'E', ('U',)))


MARTON = Scenario(
    name='marton_common',
    family='marton',
    layers=(
        Layer('U0', ('R0', 'S11', 'S21')),
        Layer('U1', ('R0', 'S11', 'S21', 'S12', 'r1'), ('U0',)),
        Layer('U2', ('R0', 'S11', 'S21', 'S22', 'r2'), ('U0',)),
    ),
    messages=('R0', 'S11', 'S21', 'S12', 'S22'),
    binning=Binning('U0', 'U1', 'U2', 'r1', 'r2'),
    input_register=None,
    receivers=(
        ReceiverPlan(
            'B1', ('U0', 'U1'), SCENARIO_LEVELS['marton'],
            tests=(
                ThresholdTest('Pi1', 'E1', ('S12', 'r1')),
                ThresholdTest('Pi0', 'E', ('R0', 'S11', 'S21', 'S12', 'r1')),
            ),
            decoded=('R0', 'S11', 'S21', 'S12'),
            nonunique=('r1',),
        ),
        ReceiverPlan(
            'B2', ('U0', 'U2'), SCENARIO_LEVELS['marton'],
            tests=(
                ThresholdTest('Pi1', 'E1', ('S22', 'r2')),
                ThresholdTest('Pi0', 'E', ('R0', 'S11', 'S21', 'S22', 'r2')),
            ),
            decoded=('R0', 'S11', 'S21', 'S22'),
            nonunique=('r2',),
        ),
    ),
    rate_map=(('R0', ('R0',)), ('R1', ('S11', 'S12')), ('R2', ('S21', 'S22'))),
)

MULTILEVEL = Scenario(
    name='multilevel_2deg',
    family='multilevel',
    layers=(
        Layer('U', ('R0',)),
        Layer('V', ('R0', 'S1'), ('U',)),
        Layer('X', ('R0', 'S1', 'S2'), ('V',)),
    ),
    messages=('R0', 'S1', 'S2'),
    receivers=(
        ReceiverPlan(
            'B1', ('U', 'V', 'X'), SCENARIO_LEVELS['multilevel'][:3],
            tests=(
                ThresholdTest('T0', 'E', ('R0', 'S1', 'S2')),
                ThresholdTest('T1', 'E1', ('S1', 'S2')),
                ThresholdTest('T2', 'E2', ('S2',)),
            ),
            decoded=('R0', 'S1', 'S2'),
        ),
        ReceiverPlan('B2', ('U',), _E, (ThresholdTest('O', 'E', ('R0',)),), decoded=('R0',)),
        ReceiverPlan(
            'B3', ('U', 'V'), _E, (ThresholdTest('Upsilon', 'E', ('R0', 'S1')),),
            decoded=('R0',), nonunique=('S1',),
        ),
    ),
    rate_map=(('R0', ('R0',)), ('R1', ('S1', 'S2'))),
)

GENERAL_TWO = Scenario(
    name='general_2deg',
    family='general2',
    layers=(
        Layer('U', ('R0', 'S0')),
        Layer('V2', ('R0', 'S0', 'S2', 'r1'), ('U',)),
        Layer('V3', ('R0', 'S0', 'S3', 'r2'), ('U',)),
        Layer('X', ('R0', 'S0', 'S2', 'S3', 'S1'), ('V2', 'V3')),
    ),
    messages=('R0', 'S0', 'S1', 'S2', 'S3'),
    binning=Binning('U', 'V2', 'V3', 'r1', 'r2'),
    receivers=(
        ReceiverPlan(
            'B1', ('U', 'V2', 'V3', 'X'), SCENARIO_LEVELS['general_two'],
            tests=(
                ThresholdTest('Theta0', 'E', ('R0', 'S0', 'S1', 'S2', 'S3')),
                ThresholdTest('Theta1', 'E1', ('S1', 'S2', 'S3')),
                ThresholdTest('Theta2', 'E2', ('S3', 'S1')),
                ThresholdTest('Theta3', 'E3', ('S2', 'S1')),
                ThresholdTest('Theta4', 'E4', ('S1',)),
            ),
            decoded=('R0', 'S0', 'S1', 'S2', 'S3'),
        ),
        ReceiverPlan(
            'B2', ('V2',), _E, (ThresholdTest('Theta', 'E', ('R0', 'S0', 'S2', 'r1')),),
            decoded=('R0', 'S0'), nonunique=('S2', 'r1'),
        ),
        ReceiverPlan(
            'B3', ('V3',), _E, (ThresholdTest('Theta', 'E', ('R0', 'S0', 'S3', 'r2')),),
            decoded=('R0', 'S0'), nonunique=('S3', 'r2'),
        ),
    ),
    rate_map=(('R0', ('R0',)), ('R1', ('S0', 'S1', 'S2', 'S3'))),
)

GENERAL_THREE = Scenario(
    name='general_3deg',
    family='general3',
    layers=(
        Layer('U', ('R0', 'R10', 'S0')),
        Layer('V2', ('R0', 'R10', 'S0', 'R11', 'S2', 'r1'), ('U',)),
        Layer('V3', ('R0', 'R10', 'S0', 'S3', 'r2'), ('U',)),
        Layer('X', ('R0', 'R10', 'S0', 'R11', 'S2', 'S3', 'S1'), ('V2', 'V3')),
    ),
    messages=('R0', 'R10', 'R11', 'S0', 'S1', 'S2', 'S3'),
    binning=Binning('U', 'V2', 'V3', 'r1', 'r2'),
    receivers=(
        ReceiverPlan(
            'B1', ('U', 'V2', 'V3', 'X'), SCENARIO_LEVELS['three_degraded'],
            tests=(
                ThresholdTest('Xi0', 'E', ('R0', 'R10', 'R11', 'S0', 'S1', 'S2', 'S3')),
                ThresholdTest('Xi1', 'E1', ('R11', 'S1', 'S2', 'S3')),
                ThresholdTest('Xi2', 'E2', ('S3', 'S1')),
                ThresholdTest('Xi3', 'E3', ('R11', 'S2', 'S1')),
                ThresholdTest('Xi4', 'E4', ('S1',)),
            ),
            decoded=('R0', 'R10', 'R11', 'S0', 'S1', 'S2', 'S3'),
        ),
        ReceiverPlan(
            'B2', ('U', 'V2'), _E_E1U,
            tests=(
                ThresholdTest('Phi0', 'E', ('R0', 'R10', 'S0', 'R11', 'S2', 'r1')),
                ThresholdTest('Phi1', 'E1', ('R11', 'S2', 'r1')),
            ),
            decoded=('R0', 'R10', 'S0', 'R11', 'S2'),
            nonunique=('r1',),
        ),
        ReceiverPlan(
            'B3', ('U', 'V3'), _E, (ThresholdTest('W', 'E', ('R0', 'R10', 'S0', 'S3', 'r2')),),
            decoded=('R0', 'R10', 'S0'), nonunique=('S3', 'r2'),
        ),
    ),
    rate_map=(('R0', ('R0',)), ('R1', ('R10', 'R11')), ('R2', ('S0', 'S1', 'S2', 'S3'))),
)

SCENARIOS: Dict[str, Scenario] = {s.name: s for s in (MARTON, MULTILEVEL, GENERAL_TWO, GENERAL_THREE)}


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]
    except KeyError:
        raise ValidationError(f"unknown scenario '{name}', expected one of {sorted(SCENARIOS)}")
