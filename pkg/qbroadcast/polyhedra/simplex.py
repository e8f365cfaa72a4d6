"""
Exact two-phase simplex over ``fractions.Fraction``.

Solves max c.x subject to A x <= b with free variables, which are split as
x = x+ - x-. Bland's rule (lowest-index entering column, lowest-index
leaving basis variable on ties) prevents cycling.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional

from .system import InequalitySystem, Number, as_fraction

logger = logging.getLogger(__name__)

OPTIMAL = 'optimal'
UNBOUNDED = 'unbounded'
INFEASIBLE = 'infeasible'

ZERO = Fraction(0)


@dataclass
class LPResult:
    """Exact LP outcome; ``value`` and ``point`` are set only when optimal"""
    status: str
    value: Optional[Fraction] = None
    point: Optional[Dict[str, Fraction]] = None

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def _pivot(rows: List[List[Fraction]], r: int, c: int) -> None:
    pivot = rows[r][c]
    if pivot != 1:
        rows[r] = [v / pivot for v in rows[r]]
    base = rows[r]
    for i, row in enumerate(rows):
        if i != r:
            f = row[c]
            if f != 0:
                rows[i] = [a - f * b for a, b in zip(row, base)]


def _optimize(rows: List[List[Fraction]], basis: List[int], cost: List[Fraction], columns: int) -> str:
    """Maximize cost.z over the tableau in place; columns >= ``columns`` never enter."""
    while True:
        in_basis = set(basis)
        cb = [cost[b] for b in basis]
        entering = None
        for j in range(columns):
            if j in in_basis:
                continue
            reduced = cost[j] - sum((cb[i] * rows[i][j] for i in range(len(rows)) if rows[i][j] != 0), ZERO)
            if reduced > 0:
                entering = j
                break
        if entering is None:
            return OPTIMAL
        leave = None
        best = None
        for i, row in enumerate(rows):
            a = row[entering]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return UNBOUNDED
        _pivot(rows, leave, entering)
        basis[leave] = entering


def solve(a: List[List[Fraction]], b: List[Fraction], c: List[Fraction]) -> LPResult:
    """
    max c.x s.t. a x <= b, x free.

    Args:
        a: m x n coefficient rows
        b: m right-hand sides
        c: n objective coefficients

    Returns:
        LPResult with ``point`` as a list-indexed dict {'0': x0, ...}
    """
    m, n = len(a), len(c)
    negative = [i for i in range(m) if b[i] < 0]
    n_art = len(negative)
    width = 2 * n + m + n_art
    rows: List[List[Fraction]] = []
    basis: List[int] = []
    art_of_row = {r: 2 * n + m + k for k, r in enumerate(negative)}
    for i in range(m):
        sign = -1 if i in art_of_row else 1
        row = [ZERO] * (width + 1)
        for j in range(n):
            if a[i][j] != 0:
                row[j] = sign * a[i][j]
                row[n + j] = -sign * a[i][j]
        row[2 * n + i] = Fraction(sign)
        if i in art_of_row:
            row[art_of_row[i]] = Fraction(1)
            basis.append(art_of_row[i])
        else:
            basis.append(2 * n + i)
        row[-1] = sign * b[i]
        rows.append(row)

    if n_art:
        phase1 = [ZERO] * width
        for col in art_of_row.values():
            phase1[col] = Fraction(-1)
        _optimize(rows, basis, phase1, width)
        infeasibility = sum((rows[i][-1] for i, bv in enumerate(basis) if bv >= 2 * n + m), ZERO)
        if infeasibility > 0:
            return LPResult(INFEASIBLE)
        # drive remaining (zero-valued) artificials out of the basis
        for i in reversed(range(len(rows))):
            if basis[i] < 2 * n + m:
                continue
            col = next((j for j in range(2 * n + m) if rows[i][j] != 0), None)
            if col is None:
                del rows[i]
                del basis[i]
            else:
                _pivot(rows, i, col)
                basis[i] = col

    cost = [ZERO] * width
    for j in range(n):
        cost[j] = c[j]
        cost[n + j] = -c[j]
    status = _optimize(rows, basis, cost, 2 * n + m)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    z = [ZERO] * width
    for i, bv in enumerate(basis):
        z[bv] = rows[i][-1]
    x = [z[j] - z[n + j] for j in range(n)]
    value = sum((c[j] * x[j] for j in range(n)), ZERO)
    return LPResult(OPTIMAL, value, {str(j): x[j] for j in range(n)})


def lp_max(system: InequalitySystem, objective: Mapping[str, Number]) -> LPResult:
    """
    Exact maximum of a linear objective over a system.

    Args:
        system: Inequality system (infeasible flag honored)
        objective: Map variable -> coefficient (unknown variables rejected)

    Returns:
        LPResult: optimal value with a maximizing point, or unbounded / infeasible
    """
    if system.infeasible:
        return LPResult(INFEASIBLE)
    index = {v: j for j, v in enumerate(system.variables)}
    unknown = set(objective) - set(index)
    if unknown:
        raise KeyError(f"objective references unknown variables {sorted(unknown)}")
    n = len(index)
    a = []
    b = []
    for ineq in system.inequalities:
        row = [ZERO] * n
        for v, coef in ineq.coeffs.items():
            row[index[v]] = coef
        a.append(row)
        b.append(ineq.rhs)
    c = [ZERO] * n
    for v, coef in objective.items():
        c[index[v]] = as_fraction(coef)
    result = solve(a, b, c)
    if result.optimal:
        result.point = {v: result.point[str(j)] for v, j in index.items()}
    return result


def is_feasible(system: InequalitySystem) -> bool:
    return lp_max(system, {}).status != INFEASIBLE
