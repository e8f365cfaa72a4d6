"""
Catalog of rate-region inequality systems.

Every region is a ``RegionSpec``: rate variables, the registers its atoms
read, Markov constraints on the distribution, and inequality templates
whose right-hand sides are integer combinations of mutual-information
atoms. Preliminary systems (before Fourier-Motzkin elimination) also carry
their auxiliary variables, the substitutions that introduce the rates, and
the final region they project to.
"""
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Tuple, Union

from ..errors import ValidationError

RECEIVER_NAMES = ('B1', 'B2', 'B3')

CONVERSE_BANNER = (
    "Converse region evaluated with classical auxiliaries only. The no-go "
    "statement permits quantum auxiliary systems, so this instance is an "
    "inner approximation of the outer bound."
)


@dataclass(frozen=True)
class AtomExpr:
    """
    Shannon mutual information I(left; right | given).

    ``right`` is a receiver name ('B1', 'B2', 'B3') or a tuple of registers.
    """
    left: Tuple[str, ...]
    right: Union[str, Tuple[str, ...]]
    given: Tuple[str, ...] = ()
    kind: str = 'shannon_mi'
    order: Optional[float] = None

    @property
    def quantum(self) -> bool:
        return isinstance(self.right, str)

    @property
    def registers(self) -> Tuple[str, ...]:
        right = () if self.quantum else self.right
        return self.left + right + self.given

    @property
    def label(self) -> str:
        right = self.right if self.quantum else ''.join(self.right)
        text = f"{''.join(self.left)};{right}"
        if self.given:
            text += '|' + ''.join(self.given)
        return f"I({text})"

    def __str__(self) -> str:
        return self.label


def I(left: str, right: str, given: str = '') -> AtomExpr:
    """Atom from space-separated register lists, e.g. I('X', 'B1', 'V2 V3')."""
    right_regs = right if right in RECEIVER_NAMES else tuple(right.split())
    return AtomExpr(tuple(left.split()), right_regs, tuple(given.split()))


@dataclass(frozen=True)
class Template:
    """sum rates[v] * v (<= or >=) sum atom coefficients * atom value"""
    rates: Tuple[Tuple[str, int], ...]
    bound: Tuple[Tuple[AtomExpr, int], ...]
    relation: str = '<='
    tag: str = ''

    @property
    def atoms(self) -> Tuple[AtomExpr, ...]:
        return tuple(a for a, _ in self.bound)


def T(rates: Mapping[str, int], bound: Mapping[AtomExpr, int], relation: str = '<=', tag: str = '') -> Template:
    if relation not in ('<=', '>='):
        raise ValidationError(f"unknown relation '{relation}'")
    return Template(tuple(rates.items()), tuple(bound.items()), relation, tag)


@dataclass(frozen=True)
class MarkovChain:
    """left - middle - right: p(l, m, r) = p(l, m) p(r | m)"""
    left: Tuple[str, ...]
    middle: Tuple[str, ...]
    right: Tuple[str, ...]

    @property
    def label(self) -> str:
        return f"{''.join(self.left)}-{''.join(self.middle)}-({','.join(self.right)})"


@dataclass(frozen=True)
class RegionSpec:
    """One theorem's inequality system over rate (and auxiliary) variables"""
    theorem_id: str
    rate_vars: Tuple[str, ...]
    registers: Tuple[str, ...]
    templates: Tuple[Template, ...]
    aux_vars: Tuple[str, ...] = ()
    markov: Tuple[MarkovChain, ...] = ()
    substitutions: Tuple[Tuple[str, Tuple[Tuple[str, int], ...]], ...] = ()
    eliminated_label: Tuple[str, ...] = ()
    final_id: Optional[str] = None
    conditions: Tuple[Template, ...] = ()
    converse: bool = False
    scenario: str = ''
    description: str = ''

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.aux_vars if self.aux_vars else self.rate_vars

    @property
    def atoms(self) -> Tuple[AtomExpr, ...]:
        seen: Dict[AtomExpr, None] = {}
        for t in self.templates + self.conditions:
            for a in t.atoms:
                seen.setdefault(a, None)
        return tuple(seen)

    @property
    def is_preliminary(self) -> bool:
        return self.final_id is not None


def _sub(expr: Mapping[str, int]) -> Tuple[Tuple[str, int], ...]:
    return tuple(expr.items())


# Marton coding (two receivers, common message plus two private messages)
_C1, _C2 = I('U0 U1', 'B1'), I('U0 U2', 'B2')
_A1, _A2 = I('U1', 'B1', 'U0'), I('U2', 'B2', 'U0')
_I12 = I('U1', 'U2', 'U0')

MARTON_FINAL = RegionSpec(
    theorem_id='marton_final',
    rate_vars=('R0', 'R1', 'R2'),
    registers=('U0', 'U1', 'U2'),
    scenario='marton',
    description='Marton coding with common message',
    templates=(
        T({'R0': 1, 'R1': 1}, {_C1: 1}),
        T({'R0': 1, 'R2': 1}, {_C2: 1}),
        T({'R0': 1, 'R1': 1, 'R2': 1}, {_C1: 1, _A2: 1, _I12: -1}),
        T({'R0': 1, 'R1': 1, 'R2': 1}, {_C2: 1, _A1: 1, _I12: -1}),
        T({'R0': 2, 'R1': 1, 'R2': 1}, {_C1: 1, _C2: 1, _I12: -1}),
    ),
)

MARTON_PRELIM = RegionSpec(
    theorem_id='marton_prelim',
    rate_vars=('R0', 'R1', 'R2'),
    aux_vars=('R0', 'S11', 'S12', 'S21', 'S22', 'r1', 'r2'),
    registers=('U0', 'U1', 'U2'),
    scenario='marton',
    description='Marton coding before elimination of split rates and binning rates',
    templates=(
        T({'r1': 1, 'r2': 1}, {_I12: 1}, '>=', 'covering'),
        T({'S12': 1, 'r1': 1}, {_A1: 1}, tag='B1 inner'),
        T({'R0': 1, 'S11': 1, 'S21': 1, 'S12': 1, 'r1': 1}, {_C1: 1}, tag='B1 joint'),
        T({'S22': 1, 'r2': 1}, {_A2: 1}, tag='B2 inner'),
        T({'R0': 1, 'S11': 1, 'S21': 1, 'S22': 1, 'r2': 1}, {_C2: 1}, tag='B2 joint'),
    ),
    substitutions=(
        ('S11', _sub({'R1': 1, 'S12': -1})),
        ('S21', _sub({'R2': 1, 'S22': -1})),
    ),
    eliminated_label=('S11', 'S12', 'S21', 'S22', 'r1', 'r2'),
    final_id='marton_final',
    conditions=(T({}, {_A1: 1, _A2: 1, _I12: -1}, '>=', 'binning feasibility'),),
)

# Multilevel channel (B2 degraded from B1), two-degraded message set
_IUB2, _IVB3 = I('U', 'B2'), I('V', 'B3')
_IXB1U, _IXB1V, _IXB1 = I('X', 'B1', 'U'), I('X', 'B1', 'V'), I('X', 'B1')
_MULTILEVEL_TEMPLATES = (
    T({'R0': 1}, {_IUB2: 1}),
    T({'R0': 1}, {_IVB3: 1}),
    T({'R1': 1}, {_IXB1U: 1}),
    T({'R0': 1, 'R1': 1}, {_IVB3: 1, _IXB1V: 1}),
)
_UVX = (MarkovChain(('U',), ('V',), ('X',)),)

MULTILEVEL_FINAL = RegionSpec(
    theorem_id='multilevel_final',
    rate_vars=('R0', 'R1'),
    registers=('U', 'V', 'X'),
    markov=_UVX,
    scenario='multilevel',
    description='Multilevel broadcast channel, superposition with an intermediate layer',
    templates=_MULTILEVEL_TEMPLATES,
)

MULTILEVEL_PRELIM = RegionSpec(
    theorem_id='multilevel_prelim',
    rate_vars=('R0', 'R1'),
    aux_vars=('R0', 'S1', 'S2'),
    registers=('U', 'V', 'X'),
    markov=_UVX,
    scenario='multilevel',
    description='Multilevel decoding conditions before eliminating the split of R1',
    templates=(
        T({'R0': 1, 'S1': 1, 'S2': 1}, {_IXB1: 1}, tag='B1 T0'),
        T({'S1': 1, 'S2': 1}, {_IXB1U: 1}, tag='B1 T1'),
        T({'S2': 1}, {_IXB1V: 1}, tag='B1 T2'),
        T({'R0': 1}, {_IUB2: 1}, tag='B2'),
        T({'R0': 1, 'S1': 1}, {_IVB3: 1}, tag='B3'),
    ),
    substitutions=(('S1', _sub({'R1': 1, 'S2': -1})),),
    eliminated_label=('S1', 'S2'),
    final_id='multilevel_final',
)

SUPERPOSITION = RegionSpec(
    theorem_id='superposition',
    rate_vars=('R0', 'R1'),
    registers=('U', 'X'),
    scenario='superposition',
    description='Straightforward superposition coding on the multilevel channel',
    templates=(
        T({'R0': 1}, {_IUB2: 1}),
        T({'R0': 1}, {I('U', 'B3'): 1}),
        T({'R1': 1}, {_IXB1U: 1}),
    ),
)

CONVERSE_MULTILEVEL = RegionSpec(
    theorem_id='converse_multilevel',
    rate_vars=('R0', 'R1'),
    registers=('U', 'V', 'X'),
    markov=_UVX,
    scenario='multilevel',
    description='No-go region of the multilevel channel',
    templates=_MULTILEVEL_TEMPLATES,
    converse=True,
)

# General three-receiver channel, two- and three-degraded message sets
_b2, _b3 = I('V2', 'B2'), I('V3', 'B3')
_b2U = I('V2', 'B2', 'U')
_IX = I('X', 'B1')
_aU, _a2, _a3, _a23 = I('X', 'B1', 'U'), I('X', 'B1', 'V2'), I('X', 'B1', 'V3'), I('X', 'B1', 'V2 V3')
_J = I('V2', 'V3', 'U')
_DOUBLE = (
    MarkovChain(('U',), ('V2',), ('V3', 'X')),
    MarkovChain(('U',), ('V3',), ('V2', 'X')),
)

GENERAL2_FINAL = RegionSpec(
    theorem_id='general2_final',
    rate_vars=('R0', 'R1'),
    registers=('U', 'V2', 'V3', 'X'),
    markov=_DOUBLE,
    scenario='general_two',
    description='General three-receiver channel, two-degraded message set',
    templates=(
        T({'R0': 1}, {_b2: 1}),
        T({'R0': 1}, {_b3: 1}),
        T({'R0': 2}, {_b2: 1, _b3: 1, _J: -1}),
        T({'R0': 1, 'R1': 1}, {_IX: 1}),
        T({'R0': 1, 'R1': 1}, {_b2: 1, _a2: 1}),
        T({'R0': 1, 'R1': 1}, {_b3: 1, _a3: 1}),
        T({'R0': 2, 'R1': 1}, {_b2: 1, _b3: 1, _a23: 1, _J: -1}),
        T({'R0': 2, 'R1': 2}, {_b2: 1, _a2: 1, _b3: 1, _a3: 1, _J: -1}),
        T({'R0': 2, 'R1': 2}, {_b2: 1, _b3: 1, _aU: 1, _a23: 1, _J: -1}),
    ),
)

GENERAL2_PRELIM = RegionSpec(
    theorem_id='general2_prelim',
    rate_vars=('R0', 'R1'),
    aux_vars=('R0', 'S0', 'S1', 'S2', 'S3', 'r1', 'r2'),
    registers=('U', 'V2', 'V3', 'X'),
    markov=_DOUBLE,
    scenario='general_two',
    description='Two-degraded general channel before eliminating split and binning rates',
    templates=(
        T({'r1': 1, 'r2': 1}, {_J: 1}, '>=', 'covering'),
        T({'R0': 1, 'S0': 1, 'S1': 1, 'S2': 1, 'S3': 1}, {_IX: 1}, tag='B1 Theta0'),
        T({'S1': 1, 'S2': 1, 'S3': 1}, {_aU: 1}, tag='B1 Theta1'),
        T({'S1': 1, 'S3': 1}, {_a2: 1}, tag='B1 Theta2'),
        T({'S1': 1, 'S2': 1}, {_a3: 1}, tag='B1 Theta3'),
        T({'S1': 1}, {_a23: 1}, tag='B1 Theta4'),
        T({'R0': 1, 'S0': 1, 'S2': 1, 'r1': 1}, {_b2: 1}, tag='B2'),
        T({'R0': 1, 'S0': 1, 'S3': 1, 'r2': 1}, {_b3: 1}, tag='B3'),
    ),
    substitutions=(('S0', _sub({'R1': 1, 'S1': -1, 'S2': -1, 'S3': -1})),),
    eliminated_label=('S0', 'S1', 'S2', 'S3', 'r1', 'r2'),
    final_id='general2_final',
)

CONVERSE_GENERAL2 = RegionSpec(
    theorem_id='converse_general2',
    rate_vars=('R0', 'R1'),
    registers=('U', 'V2', 'V3', 'X'),
    scenario='general_two',
    description='No-go region of the general channel with two-degraded message set',
    templates=(
        T({'R0': 1}, {I('U', 'B1'): 1}),
        T({'R0': 1}, {_b2: 1, I('V2', 'B1', 'U'): -1}),
        T({'R0': 1}, {_b3: 1, I('V3', 'B1', 'U'): -1}),
        T({'R1': 1}, {_aU: 1}),
    ),
    converse=True,
)

_T3 = {'R0': 1, 'R1': 1, 'R2': 1}
_T3x2 = {'R0': 2, 'R1': 2, 'R2': 2}

GENERAL3_FINAL = RegionSpec(
    theorem_id='general3_final',
    rate_vars=('R0', 'R1', 'R2'),
    registers=('U', 'V2', 'V3', 'X'),
    markov=_DOUBLE,
    scenario='three_degraded',
    description='General three-receiver channel, three-degraded message set',
    templates=(
        T({'R0': 1}, {_b3: 1}),
        T({'R0': 1, 'R1': 1}, {_b2: 1}),
        T({'R0': 1, 'R1': 1}, {_b2U: 1, _b3: 1, _J: -1}),
        T({'R0': 2, 'R1': 1}, {_b2: 1, _b3: 1, _J: -1}),
        T(_T3, {_IX: 1}),
        T(_T3, {_b2: 1, _a2: 1}),
        T(_T3, {_b3: 1, _a3: 1}),
        T(_T3, {_b2U: 1, _b3: 1, _a23: 1, _J: -1}),
        T({'R0': 2, 'R1': 1, 'R2': 1}, {_b2: 1, _b3: 1, _a23: 1, _J: -1}),
        T({'R0': 2, 'R1': 2, 'R2': 1}, {_b2: 1, _b3: 1, _a3: 1, _J: -1}),
        T(_T3x2, {_b2: 1, _b3: 1, _a2: 1, _a3: 1, _J: -1}),
        T(_T3x2, {_b2U: 1, _b3: 1, _aU: 1, _a23: 1, _J: -1}),
    ),
)

GENERAL3_PRELIM = RegionSpec(
    theorem_id='general3_prelim',
    rate_vars=('R0', 'R1', 'R2'),
    aux_vars=('R0', 'R10', 'R11', 'S0', 'S1', 'S2', 'S3', 'r1', 'r2'),
    registers=('U', 'V2', 'V3', 'X'),
    markov=_DOUBLE,
    scenario='three_degraded',
    description='Three-degraded general channel before eliminating split and binning rates',
    templates=(
        T({'r1': 1, 'r2': 1}, {_J: 1}, '>=', 'covering'),
        T({'R0': 1, 'R10': 1, 'R11': 1, 'S0': 1, 'S1': 1, 'S2': 1, 'S3': 1}, {_IX: 1}, tag='B1 Xi0'),
        T({'R11': 1, 'S1': 1, 'S2': 1, 'S3': 1}, {_aU: 1}, tag='B1 Xi1'),
        T({'S1': 1, 'S3': 1}, {_a2: 1}, tag='B1 Xi2'),
        T({'R11': 1, 'S1': 1, 'S2': 1}, {_a3: 1}, tag='B1 Xi3'),
        T({'S1': 1}, {_a23: 1}, tag='B1 Xi4'),
        T({'R0': 1, 'S0': 1, 'R10': 1, 'R11': 1, 'S2': 1, 'r1': 1}, {_b2: 1}, tag='B2 Phi0'),
        T({'R11': 1, 'S2': 1, 'r1': 1}, {_b2U: 1}, tag='B2 Phi1'),
        T({'R0': 1, 'S0': 1, 'R10': 1, 'S3': 1, 'r2': 1}, {_b3: 1}, tag='B3 W'),
    ),
    substitutions=(
        ('R10', _sub({'R1': 1, 'R11': -1})),
        ('S0', _sub({'R2': 1, 'S1': -1, 'S2': -1, 'S3': -1})),
    ),
    eliminated_label=('S0', 'S1', 'S2', 'S3', 'R10', 'R11', 'r1', 'r2'),
    final_id='general3_final',
)

CATALOG: Dict[str, RegionSpec] = {
    spec.theorem_id: spec for spec in (
        MARTON_FINAL,
        MARTON_PRELIM,
        MULTILEVEL_FINAL,
        MULTILEVEL_PRELIM,
        SUPERPOSITION,
        CONVERSE_MULTILEVEL,
        GENERAL2_FINAL,
        GENERAL2_PRELIM,
        CONVERSE_GENERAL2,
        GENERAL3_FINAL,
        GENERAL3_PRELIM,
    )
}

# Short theorem names accepted by the CLI
FAMILIES = {
    'marton': ('marton_prelim', 'marton_final'),
    'multilevel': ('multilevel_prelim', 'multilevel_final'),
    'general2': ('general2_prelim', 'general2_final'),
    'general3': ('general3_prelim', 'general3_final'),
}


def get_spec(theorem_id: str) -> RegionSpec:
    try:
        return CATALOG[theorem_id]
    except KeyError:
        raise ValidationError(f"unknown region '{theorem_id}', expected one of {sorted(CATALOG)}")
