"""
Fourier-Motzkin elimination with exact LP redundancy pruning, and exact
polytope containment / equality.
"""
import logging
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from ..errors import UnboundedSystemError, ValidationError
from .simplex import INFEASIBLE, UNBOUNDED, is_feasible, lp_max
from .system import InequalitySystem, LinearInequality

logger = logging.getLogger(__name__)


def _dedup(rows: Sequence[LinearInequality]) -> List[LinearInequality]:
    """Keep the tightest row per normalized direction."""
    best: Dict[Tuple, Tuple[Fraction, LinearInequality]] = {}
    order: List[Tuple] = []
    for row in rows:
        key, rhs = row.normalized()
        if key not in best:
            order.append(key)
            best[key] = (rhs, row)
        elif rhs < best[key][0]:
            best[key] = (rhs, row)
    return [best[k][1] for k in order]


def prune_redundant(system: InequalitySystem) -> InequalitySystem:
    """
    Drop inequalities implied by the others (exact LP dominance).

    Rows are tested one at a time against the current remaining system, so
    of two equivalent rows exactly one survives.
    """
    if system.infeasible:
        return system
    kept = list(system.inequalities)
    i = 0
    while i < len(kept):
        row = kept[i]
        others = InequalitySystem(system.variables, kept[:i] + kept[i + 1:])
        result = lp_max(others, row.coeffs)
        if result.status == UNBOUNDED:
            i += 1
        elif result.status == INFEASIBLE or result.value <= row.rhs:
            del kept[i]
        else:
            i += 1
    return InequalitySystem(system.variables, kept)


def _eliminate_one(system: InequalitySystem, var: str) -> InequalitySystem:
    zero, pos, neg = [], [], []
    for row in system.inequalities:
        c = row.coefficient(var)
        (pos if c > 0 else neg if c < 0 else zero).append(row)
    combined = list(zero)
    for p in pos:
        cp = p.coefficient(var)
        for n in neg:
            cn = -n.coefficient(var)
            coeffs: Dict[str, Fraction] = {}
            for v, a in p.coeffs.items():
                coeffs[v] = coeffs.get(v, Fraction(0)) + cn * a
            for v, a in n.coeffs.items():
                coeffs[v] = coeffs.get(v, Fraction(0)) + cp * a
            coeffs.pop(var, None)
            combined.append(LinearInequality(coeffs, cn * p.rhs + cp * n.rhs, 'fm'))
    remaining = [v for v in system.variables if v != var]

    rows = []
    for row in combined:
        if row.is_constant:
            if row.rhs < 0:
                logger.debug(f"eliminating {var} derived 0 <= {row.rhs}; projection is empty")
                return InequalitySystem(remaining, [], infeasible=True)
            continue
        rows.append(row)
    return InequalitySystem(remaining, _dedup(rows))


def fm_eliminate(
    system: InequalitySystem,
    drop_vars: Sequence[str],
    prune: bool = True
) -> InequalitySystem:
    """
    Project a system onto the variables not in ``drop_vars``.

    Args:
        system: Input system
        drop_vars: Variables to eliminate, in elimination order
        prune: Remove redundant rows by exact LP after every step

    Returns:
        System over the remaining variables (original order); an empty
        projection is returned with ``infeasible=True``

    Raises:
        ValidationError: If a dropped variable is not in the system
    """
    missing = [v for v in drop_vars if v not in system.variables]
    if missing:
        raise ValidationError(f"cannot eliminate unknown variables {missing}")
    current = system
    if not current.infeasible and not is_feasible(current):
        remaining = [v for v in system.variables if v not in drop_vars]
        return InequalitySystem(remaining, [], infeasible=True)
    for var in drop_vars:
        if current.infeasible:
            current = InequalitySystem([v for v in current.variables if v != var], [], infeasible=True)
            continue
        before = len(current)
        current = _eliminate_one(current, var)
        if prune:
            current = prune_redundant(current)
        logger.debug(f"eliminated {var}: {before:,} -> {len(current):,} inequalities")
    return current


def _bounded(system: InequalitySystem) -> bool:
    for v in system.variables:
        for sign in (1, -1):
            if lp_max(system, {v: sign}).status == UNBOUNDED:
                return False
    return True


def contains(a: InequalitySystem, b: InequalitySystem, check_bounded: bool = True) -> bool:
    """
    True when polytope ``a`` lies inside polytope ``b``.

    For every row of ``b`` the maximum of its left side over ``a`` must not
    exceed its right side.

    Raises:
        ValidationError: If the variable sets differ
        UnboundedSystemError: If a feasible input is unbounded
    """
    if set(a.variables) != set(b.variables):
        raise ValidationError(f"variable sets differ: {a.variables} vs {b.variables}")
    if a.infeasible or not is_feasible(a):
        return True
    if b.infeasible or not is_feasible(b):
        return False
    if check_bounded:
        for name, system in (('first', a), ('second', b)):
            if not _bounded(system):
                raise UnboundedSystemError(f"{name} system is unbounded; add box constraints")
    for row in b.inequalities:
        result = lp_max(a, row.coeffs)
        if result.status == UNBOUNDED or result.value > row.rhs:
            return False
    return True


def polytope_equal(a: InequalitySystem, b: InequalitySystem) -> bool:
    """Mutual containment."""
    return contains(a, b) and contains(b, a)


def violated_constraints(a: InequalitySystem, b: InequalitySystem) -> List[LinearInequality]:
    """Rows of ``b`` that some point of ``a`` violates."""
    out = []
    if a.infeasible or not is_feasible(a):
        return out
    for row in b.inequalities:
        result = lp_max(a, row.coeffs)
        if result.status == UNBOUNDED or result.value > row.rhs:
            out.append(row)
    return out
