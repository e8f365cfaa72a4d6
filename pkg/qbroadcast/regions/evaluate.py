"""
Evaluation of catalog regions on a channel and auxiliary distribution.

An ``AtomTable`` computes each mutual-information atom once and stores its
quantized rational value; every inequality system built from the table
uses those rationals only, so the same atom always enters with the same
exact value.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..config import OptimizerConfig
from ..errors import MarkovConstraintError, ValidationError
from ..polyhedra import (
    DEFAULT_BITS,
    InequalitySystem,
    LinearInequality,
    contains,
    fm_eliminate,
    is_feasible,
    lp_max,
    quantize,
    violated_constraints,
)
from ..quantum.information import MutualInfoRequest, mutual_information, renyi_mi_down, renyi_mi_up
from ..states.cq_state import (
    AuxiliaryDistribution,
    BroadcastChannel,
    CqState,
    channel_to_cqstate,
    cq_from_classical,
)
from .catalog import (
    CONVERSE_BANNER,
    CONVERSE_GENERAL2,
    CONVERSE_MULTILEVEL,
    MULTILEVEL_FINAL,
    SUPERPOSITION,
    AtomExpr,
    MarkovChain,
    RegionSpec,
    Template,
    get_spec,
)
from .distributions import copy_register, rename_registers

logger = logging.getLogger(__name__)

MARKOV_TOL = 1e-9
# one quantization step per atom, for regions related through a chain-rule identity
CHECK_SLACK = Fraction(1, 2 ** 30)


class AtomTable:
    """
    Lazily evaluated atom values for one (channel, distribution) pair.

    Receiver states are built on first use and shared across atoms.
    """

    def __init__(
        self,
        channel: BroadcastChannel,
        distribution: AuxiliaryDistribution,
        bits: int = DEFAULT_BITS,
        optimizer: Optional[OptimizerConfig] = None,
        seed: int = 0
    ):
        self.channel = channel
        self.distribution = distribution
        self.bits = bits
        self.optimizer = optimizer
        self.seed = seed
        self._states: Dict[str, CqState] = {}
        self._classical: Optional[CqState] = None
        self._values: Dict[AtomExpr, float] = {}
        self._rationals: Dict[AtomExpr, Fraction] = {}

    def state(self, receiver: str) -> CqState:
        if receiver not in self._states:
            self._states[receiver] = channel_to_cqstate(self.channel, self.distribution, receiver)
        return self._states[receiver]

    @property
    def classical_state(self) -> CqState:
        if self._classical is None:
            self._classical = cq_from_classical(list(self.distribution.registers), self.distribution.pmf)
        return self._classical

    def _compute(self, atom: AtomExpr) -> float:
        missing = [r for r in atom.registers if r not in self.distribution.names]
        if missing:
            raise ValidationError(f"atom {atom.label} reads registers {missing} absent from the distribution")
        if not atom.quantum:
            return mutual_information(self.classical_state, atom.left, atom.right, atom.given)
        state = self.state(atom.right)
        if atom.kind == 'shannon_mi':
            return mutual_information(state, atom.left, 'B', atom.given)
        req = MutualInfoRequest(state, atom.left, 'B', atom.given, atom.order)
        if atom.kind == 'renyi_up':
            return renyi_mi_up(req)
        if atom.kind == 'renyi_down':
            return renyi_mi_down(req, self.optimizer, self.seed).value
        raise ValidationError(f"unknown atom kind '{atom.kind}'")

    def evaluate(self, atoms: Iterable[AtomExpr], workers: int = 1) -> None:
        """Compute every atom not yet in the table, optionally in parallel."""
        pending = [a for a in dict.fromkeys(atoms) if a not in self._values]
        if not pending:
            return
        # states are built up front so worker threads only read them
        for atom in pending:
            if atom.quantum:
                self.state(atom.right)
        if workers > 1 and len(pending) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                values = list(pool.map(self._compute, pending))
        else:
            values = [self._compute(a) for a in pending]
        for atom, value in zip(pending, values):
            self._values[atom] = float(value)
            self._rationals[atom] = quantize(value, self.bits)
        logger.debug(f"evaluated {len(pending):,} atoms")

    def value(self, atom: AtomExpr) -> float:
        self.evaluate([atom])
        return self._values[atom]

    def rational(self, atom: AtomExpr) -> Fraction:
        self.evaluate([atom])
        return self._rationals[atom]

    def bound(self, template: Template) -> Fraction:
        return sum((coef * self.rational(a) for a, coef in template.bound), Fraction(0))

    def to_dict(self) -> List[dict]:
        return [
            {'atom': a.label, 'kind': a.kind, 'value': self._values[a], 'rational': str(self._rationals[a])}
            for a in self._values
        ]


def markov_deviation(distribution: AuxiliaryDistribution, chain: MarkovChain) -> float:
    """max |p(l, m, r) - p(l, m) p(m, r) / p(m)| over the support of p(m)."""
    nl, nm = len(chain.left), len(chain.middle)
    p = distribution.marginal_pmf(chain.left + chain.middle + chain.right)
    p_lm = p.sum(axis=tuple(range(nl + nm, p.ndim)), keepdims=True)
    p_mr = p.sum(axis=tuple(range(nl)), keepdims=True)
    p_m = p_lm.sum(axis=tuple(range(nl)), keepdims=True)
    safe = np.where(p_m > 0, p_m, 1.0)
    expected = np.where(p_m > 0, p_lm * p_mr / safe, 0.0)
    return float(np.max(np.abs(p - expected)))


def check_markov(distribution: AuxiliaryDistribution, chains: Sequence[MarkovChain], tol: float = MARKOV_TOL) -> Dict[str, float]:
    """
    Raises:
        MarkovConstraintError: On the first chain deviating by more than ``tol``
    """
    deviations = {}
    for chain in chains:
        dev = markov_deviation(distribution, chain)
        deviations[chain.label] = dev
        if dev > tol:
            raise MarkovConstraintError(chain.label, dev)
    return deviations


def bound_label(template: Template) -> str:
    """Signed sum of the atom labels of a template's right-hand side."""
    text = ''
    for atom, coef in template.bound:
        mag = abs(coef)
        term = atom.label if mag == 1 else f"{mag} {atom.label}"
        if not text:
            text = f"-{term}" if coef < 0 else term
        else:
            text += f" - {term}" if coef < 0 else f" + {term}"
    return text or '0'


def build_system(spec: RegionSpec, atoms: AtomTable) -> InequalitySystem:
    """
    Materialize a spec's inequalities on an evaluated atom table.

    Preliminary systems get nonnegativity of all their auxiliary variables,
    then the substitutions that introduce the rates; final systems get
    nonnegativity of the rates.
    """
    rows = []
    for t in spec.templates:
        rhs = atoms.bound(t)
        rates = dict(t.rates)
        tag = t.tag or bound_label(t)
        if t.relation == '>=':
            rows.append(LinearInequality.geq(rates, rhs, tag))
        else:
            rows.append(LinearInequality(rates, rhs, tag))
    system = InequalitySystem(spec.variables, rows).with_nonnegativity()
    for var, expr in spec.substitutions:
        system = system.substitute(var, dict(expr))
    rates_first = [v for v in spec.rate_vars if v in system.variables]
    rest = [v for v in system.variables if v not in rates_first]
    return system.reorder(rates_first + rest)


@dataclass
class RegionInstance:
    """A spec evaluated on one channel and distribution"""
    spec: RegionSpec
    system: InequalitySystem
    atoms: AtomTable
    markov: Dict[str, float] = field(default_factory=dict)

    @property
    def states(self) -> Dict[str, CqState]:
        return dict(self.atoms._states)

    def to_dict(self) -> dict:
        data = {
            'theorem_id': self.spec.theorem_id,
            'description': self.spec.description,
            'variables': list(self.system.variables),
            'atoms': [a for a in self.atoms.to_dict() if a['atom'] in {x.label for x in self.spec.atoms}],
            'inequalities': [str(row) for row in self.system.inequalities],
            'infeasible': self.system.infeasible,
            'markov_deviation': self.markov,
        }
        if self.spec.converse:
            data['banner'] = CONVERSE_BANNER
        return data


def evaluate_region(
    spec,
    channel: BroadcastChannel,
    distribution: AuxiliaryDistribution,
    atoms: Optional[AtomTable] = None,
    workers: int = 1,
    markov_tol: float = MARKOV_TOL
) -> RegionInstance:
    """
    Evaluate a region on a channel and auxiliary distribution.

    Args:
        spec: RegionSpec or its theorem id
        channel: Broadcast channel
        distribution: Registers, pmf and input map
        atoms: Shared atom table (created when omitted)
        workers: Threads for atom evaluation
        markov_tol: Allowed deviation of each required factorization

    Returns:
        RegionInstance whose system uses only the table's rational values

    Raises:
        MarkovConstraintError: If a required Markov chain is violated
        ValidationError: If the distribution lacks a register the region reads
    """
    if isinstance(spec, str):
        spec = get_spec(spec)
    missing = [r for r in spec.registers if r not in distribution.names]
    if missing:
        raise ValidationError(f"{spec.theorem_id} needs registers {missing}")
    deviations = check_markov(distribution, spec.markov, markov_tol)
    if atoms is None:
        atoms = AtomTable(channel, distribution)
    elif atoms.distribution is not distribution or atoms.channel is not channel:
        raise ValidationError("atom table was built for a different channel or distribution")
    atoms.evaluate(spec.atoms, workers)
    system = build_system(spec, atoms)
    logger.info(f"{spec.theorem_id}: {len(system):,} inequalities over {list(system.variables)}")
    return RegionInstance(spec, system, atoms, deviations)


@dataclass
class ReproductionReport:
    """Outcome of projecting a preliminary system and comparing to its final region"""
    prelim_id: str
    final_id: str
    eliminated: Tuple[str, ...]
    projection: InequalitySystem
    final: InequalitySystem
    equal: bool
    final_in_projection: bool
    projection_in_final: bool
    tighter_rows: List[str] = field(default_factory=list)
    conditions: Dict[str, dict] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.equal

    @property
    def conditions_hold(self) -> bool:
        return all(c['holds'] for c in self.conditions.values())

    def to_dict(self) -> dict:
        return {
            'prelim_id': self.prelim_id,
            'final_id': self.final_id,
            'eliminated': list(self.eliminated),
            'equal': self.equal,
            'final_in_projection': self.final_in_projection,
            'projection_in_final': self.projection_in_final,
            'projection_infeasible': self.projection.infeasible,
            'tighter_rows': self.tighter_rows,
            'conditions': self.conditions,
            'projection': [str(row) for row in self.projection.inequalities],
            'final': [str(row) for row in self.final.inequalities],
        }


def project_preliminary(instance: RegionInstance) -> InequalitySystem:
    """Eliminate every non-rate variable of a preliminary instance."""
    spec = instance.spec
    drop = [v for v in instance.system.variables if v not in spec.rate_vars]
    projected = fm_eliminate(instance.system, drop)
    return projected.reorder(list(spec.rate_vars))


def reproduce_final_region(
    prelim_id: str,
    final_id: str,
    channel: BroadcastChannel,
    distribution: AuxiliaryDistribution,
    atoms: Optional[AtomTable] = None,
    workers: int = 1
) -> ReproductionReport:
    """
    Fourier-Motzkin project a preliminary system and compare it with the
    final region on the same atom table.

    Returns:
        ReproductionReport; truthy iff the projection equals the final region
    """
    prelim_spec, final_spec = get_spec(prelim_id), get_spec(final_id)
    if prelim_spec.final_id != final_spec.theorem_id:
        raise ValidationError(f"{prelim_id} does not project to {final_id}")
    atoms = atoms or AtomTable(channel, distribution)
    prelim = evaluate_region(prelim_spec, channel, distribution, atoms, workers)
    final = evaluate_region(final_spec, channel, distribution, atoms, workers)

    conditions = {}
    for t in prelim_spec.conditions:
        value = atoms.bound(t)
        conditions[t.tag] = {'value': float(value), 'holds': value >= 0}
        if value < 0:
            logger.warning(f"{prelim_id}: condition '{t.tag}' fails ({float(value):.3e}); projection is empty")

    projection = project_preliminary(prelim)
    final_in = contains(final.system, projection)
    proj_in = contains(projection, final.system)
    tighter = [str(row) for row in violated_constraints(final.system, projection)]
    tighter += [str(row) for row in violated_constraints(projection, final.system)]
    report = ReproductionReport(
        prelim_id=prelim_id,
        final_id=final_id,
        eliminated=prelim_spec.eliminated_label,
        projection=projection,
        final=final.system,
        equal=final_in and proj_in,
        final_in_projection=final_in,
        projection_in_final=proj_in,
        tighter_rows=tighter,
        conditions=conditions,
    )
    mark = '✓' if report.equal else '✗'
    logger.info(
        f"{mark} {prelim_id} -> {final_id}: {len(projection):,} projected rows, "
        f"final in projection={final_in}, projection in final={proj_in}"
    )
    return report


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {'name': self.name, 'passed': self.passed, **self.detail}


def superposition_collapse(
    channel: BroadcastChannel,
    distribution: AuxiliaryDistribution
) -> CheckResult:
    """Multilevel region with V = U equals the superposition region on (U, X)."""
    with_v = copy_register(distribution, 'U', 'V', 1)
    multilevel = evaluate_region(MULTILEVEL_FINAL, channel, with_v)
    superposition = evaluate_region(SUPERPOSITION, channel, distribution)
    equal = (
        contains(multilevel.system, superposition.system.relaxed(CHECK_SLACK))
        and contains(superposition.system, multilevel.system.relaxed(CHECK_SLACK))
    )
    return CheckResult('superposition_collapse', equal)


def data_processing_margin(channel: BroadcastChannel, distribution: AuxiliaryDistribution) -> float:
    """I(U;B2) - [I(V2;B2) - I(V2;B1|U)]; nonnegative when B2 is degraded from B1."""
    b1 = channel_to_cqstate(channel, distribution, 'B1')
    b2 = channel_to_cqstate(channel, distribution, 'B2')
    gap = mutual_information(b2, ['V2']) - mutual_information(b1, ['V2'], 'B', ['U'])
    return mutual_information(b2, ['U']) - gap


def degraded_data_processing(
    channel: BroadcastChannel,
    distribution: AuxiliaryDistribution,
    tol: float = 1e-9
) -> CheckResult:
    margin = data_processing_margin(channel, distribution)
    return CheckResult('degraded_data_processing', margin >= -tol, {'margin': margin})


def converse_within_multilevel(
    channel: BroadcastChannel,
    distribution: AuxiliaryDistribution
) -> CheckResult:
    """
    The general two-degraded converse instance lies inside the multilevel
    region evaluated on (U, V3 -> V, X), for a degraded channel and a
    double-Markov distribution.
    """
    converse = evaluate_region(CONVERSE_GENERAL2, channel, distribution)
    reduced = rename_registers(distribution, {'V3': 'V'}, ['U', 'V3', 'X'])
    achievable = evaluate_region(MULTILEVEL_FINAL, channel, reduced)
    inside = contains(converse.system, achievable.system.relaxed(CHECK_SLACK))
    return CheckResult('converse_within_multilevel', inside, {'banner': CONVERSE_BANNER})


def multilevel_within_converse(
    channel: BroadcastChannel,
    distribution: AuxiliaryDistribution
) -> CheckResult:
    """Same classical auxiliaries give the same inequality set."""
    achievable = evaluate_region(MULTILEVEL_FINAL, channel, distribution)
    converse = evaluate_region(CONVERSE_MULTILEVEL, channel, distribution, achievable.atoms)
    return CheckResult('multilevel_within_converse', contains(achievable.system, converse.system))


def special_case_checks(
    channel: BroadcastChannel,
    superposition_dist: Optional[AuxiliaryDistribution] = None,
    markov_dist: Optional[AuxiliaryDistribution] = None,
    double_markov_dist: Optional[AuxiliaryDistribution] = None,
    tol: float = 1e-9
) -> List[CheckResult]:
    """
    Run the collapse and containment checks the supplied distributions allow.

    The degraded checks assume the caller built ``channel`` with B2 a
    post-processing of B1.
    """
    results = []
    if superposition_dist is not None:
        results.append(superposition_collapse(channel, superposition_dist))
    if markov_dist is not None:
        results.append(multilevel_within_converse(channel, markov_dist))
    if double_markov_dist is not None:
        results.append(degraded_data_processing(channel, double_markov_dist, tol))
        results.append(converse_within_multilevel(channel, double_markov_dist))
    for r in results:
        level = logging.INFO if r.passed else logging.WARNING
        logger.log(level, f"{'✓' if r.passed else '✗'} {r.name}")
    return results


def slice_system(system: InequalitySystem, keep: Sequence[str] = ('R0', 'R1')) -> InequalitySystem:
    """Fix every variable outside ``keep`` to zero."""
    return system.fix({v: 0 for v in system.variables if v not in keep})


def slice_vertices(
    system: InequalitySystem,
    keep: Sequence[str] = ('R0', 'R1'),
    directions: int = 64
) -> List[Tuple[Fraction, Fraction]]:
    """
    Vertices of a 2-D slice found by exact LP along a fan of directions.

    Directions are rational approximations of unit vectors around the circle,
    so every returned point is an exact basic solution.
    """
    plane = slice_system(system, keep).reorder(list(keep))
    if plane.infeasible or not is_feasible(plane):
        return []
    x, y = keep
    found: Dict[Tuple[Fraction, Fraction], float] = {}
    for k in range(directions):
        theta = 2 * math.pi * k / directions
        c = {x: Fraction(round(math.cos(theta) * 1024), 1024), y: Fraction(round(math.sin(theta) * 1024), 1024)}
        result = lp_max(plane, c)
        if result.optimal:
            point = (result.point[x], result.point[y])
            found.setdefault(point, theta)
    center = (sum(float(p[0]) for p in found) / max(len(found), 1), sum(float(p[1]) for p in found) / max(len(found), 1))
    return sorted(found, key=lambda p: math.atan2(float(p[1]) - center[1], float(p[0]) - center[0]))


def check_downward_closed(
    system: InequalitySystem,
    rng: np.random.Generator,
    samples: int = 20
) -> bool:
    """
    Sampled check that shrinking any coordinate of a feasible point keeps it feasible.

    Feasible points come from LP maxima along random nonnegative directions.
    """
    if system.infeasible or not is_feasible(system):
        return True
    for _ in range(samples):
        weights = rng.integers(0, 8, len(system.variables))
        result = lp_max(system, {v: int(w) for v, w in zip(system.variables, weights)})
        if not result.optimal:
            continue
        shrink = {v: result.point[v] * Fraction(int(rng.integers(0, 9)), 8) for v in system.variables}
        if not system.contains_point(shrink):
            logger.warning(f"downward closure fails at {shrink}")
            return False
    return True
