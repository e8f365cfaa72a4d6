"""
Exact-rational linear inequality systems.

Every coefficient and right-hand side is a ``fractions.Fraction``. Entropic
constants enter through ``quantize`` so the same float always maps to the
same rational.
"""
import math
import re
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from ..errors import ValidationError

Number = Union[int, Fraction, str]

DEFAULT_BITS = 40


def quantize(value: float, bits: int = DEFAULT_BITS) -> Fraction:
    """
    Round a float to the nearest multiple of 2^-bits.

    Raises:
        ValidationError: For non-finite values
    """
    if isinstance(value, Fraction):
        return value
    if not math.isfinite(value):
        raise ValidationError(f"cannot quantize non-finite value {value}")
    scale = 1 << bits
    return Fraction(int(round(float(value) * scale)), scale)


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(value)
    return Fraction(value)


class LinearInequality:
    """
    sum_v coeffs[v] * v <= rhs, with a provenance tag.

    Zero coefficients are dropped; an inequality without coefficients is a
    constant condition 0 <= rhs.
    """

    __slots__ = ('coeffs', 'rhs', 'tag')

    def __init__(self, coeffs: Mapping[str, Number], rhs: Number, tag: str = ''):
        self.coeffs: Dict[str, Fraction] = {
            v: as_fraction(c) for v, c in coeffs.items() if as_fraction(c) != 0
        }
        self.rhs = as_fraction(rhs)
        self.tag = tag

    @classmethod
    def geq(cls, coeffs: Mapping[str, Number], rhs: Number, tag: str = '') -> 'LinearInequality':
        """sum coeffs * v >= rhs, stored as its negation."""
        return cls({v: -as_fraction(c) for v, c in coeffs.items()}, -as_fraction(rhs), tag)

    @property
    def variables(self) -> Tuple[str, ...]:
        return tuple(self.coeffs)

    @property
    def is_constant(self) -> bool:
        return not self.coeffs

    def coefficient(self, var: str) -> Fraction:
        return self.coeffs.get(var, Fraction(0))

    def evaluate(self, point: Mapping[str, Number]) -> Fraction:
        return sum((c * as_fraction(point[v]) for v, c in self.coeffs.items()), Fraction(0))

    def satisfied(self, point: Mapping[str, Number]) -> bool:
        return self.evaluate(point) <= self.rhs

    def scaled(self, factor: Fraction) -> 'LinearInequality':
        if factor <= 0:
            raise ValueError("inequalities scale by positive factors only")
        return LinearInequality({v: c * factor for v, c in self.coeffs.items()}, self.rhs * factor, self.tag)

    def normalized(self) -> Tuple[Tuple[Tuple[str, Fraction], ...], Fraction]:
        """Direction key (first coefficient scaled to +-1) and the scaled rhs."""
        if not self.coeffs:
            return (), self.rhs
        first = self.coeffs[min(self.coeffs)]
        scale = abs(first)
        key = tuple(sorted((v, c / scale) for v, c in self.coeffs.items()))
        return key, self.rhs / scale

    def substitute(self, var: str, expr: Mapping[str, Number], constant: Number = 0) -> 'LinearInequality':
        """Replace ``var`` by sum expr[w] * w + constant."""
        c = self.coeffs.get(var)
        if c is None:
            return self
        coeffs = {v: a for v, a in self.coeffs.items() if v != var}
        for w, a in expr.items():
            coeffs[w] = coeffs.get(w, Fraction(0)) + c * as_fraction(a)
        return LinearInequality(coeffs, self.rhs - c * as_fraction(constant), self.tag)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LinearInequality)
            and self.coeffs == other.coeffs
            and self.rhs == other.rhs
        )

    def __hash__(self):
        return hash((tuple(sorted(self.coeffs.items())), self.rhs))

    def __str__(self) -> str:
        if not self.coeffs:
            lhs = '0'
        else:
            lhs = ' '.join(f"{'-' if c < 0 else '+'}{abs(c)}*{v}" for v, c in self.coeffs.items())
        text = f"{lhs} <= {self.rhs}"
        return f"{text}  # {self.tag}" if self.tag else text

    __repr__ = __str__


_TERM = re.compile(r'([+-])\s*([0-9/]+)\*([A-Za-z_][A-Za-z0-9_]*)')


def parse_inequality(line: str) -> LinearInequality:
    """Parse one line written by ``str(LinearInequality)``."""
    body, _, tag = line.partition('#')
    if '<=' not in body:
        raise ValidationError(f"missing '<=' in inequality line: {line!r}")
    lhs, rhs = body.split('<=')
    coeffs: Dict[str, Fraction] = {}
    if lhs.strip() != '0':
        consumed = 0
        for m in _TERM.finditer(lhs):
            sign = -1 if m.group(1) == '-' else 1
            coeffs[m.group(3)] = coeffs.get(m.group(3), Fraction(0)) + sign * Fraction(m.group(2))
            consumed += 1
        if not consumed:
            raise ValidationError(f"cannot parse left side of {line!r}")
    return LinearInequality(coeffs, Fraction(rhs.strip()), tag.strip())


class InequalitySystem:
    """
    Ordered variables plus a list of tagged inequalities.

    An ``infeasible`` system is the empty polyhedron (produced when
    elimination derives 0 <= negative constant).
    """

    def __init__(
        self,
        variables: Sequence[str],
        inequalities: Iterable[LinearInequality] = (),
        infeasible: bool = False
    ):
        """
        Args:
            variables: Ordered variable names
            inequalities: Inequalities over these variables
            infeasible: Mark the system as the empty set
        """
        self.variables: Tuple[str, ...] = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValidationError(f"duplicate variables {self.variables}")
        self.inequalities: Tuple[LinearInequality, ...] = tuple(inequalities)
        self.infeasible = infeasible
        known = set(self.variables)
        for ineq in self.inequalities:
            unknown = set(ineq.coeffs) - known
            if unknown:
                raise ValidationError(f"inequality '{ineq}' references unknown variables {sorted(unknown)}")

    def __len__(self) -> int:
        return len(self.inequalities)

    def __iter__(self):
        return iter(self.inequalities)

    def __repr__(self) -> str:
        state = ', infeasible' if self.infeasible else ''
        return f"InequalitySystem(vars={list(self.variables)}, {len(self)} inequalities{state})"

    def add(self, *inequalities: LinearInequality) -> 'InequalitySystem':
        return InequalitySystem(self.variables, self.inequalities + tuple(inequalities), self.infeasible)

    def with_nonnegativity(self, variables: Optional[Sequence[str]] = None) -> 'InequalitySystem':
        """Append v >= 0 for the given variables (default: all)."""
        rows = [LinearInequality({v: -1}, 0, 'nonnegativity') for v in (variables or self.variables)]
        return self.add(*rows)

    def substitute(self, var: str, expr: Mapping[str, Number], constant: Number = 0) -> 'InequalitySystem':
        """
        Replace ``var`` by an affine expression; new variables in ``expr``
        are appended to the variable list.
        """
        if var not in self.variables:
            raise ValidationError(f"cannot substitute unknown variable '{var}'")
        variables = [v for v in self.variables if v != var]
        variables += [w for w in expr if w not in variables]
        rows = [ineq.substitute(var, expr, constant) for ineq in self.inequalities]
        return InequalitySystem(variables, rows, self.infeasible)

    def fix(self, values: Mapping[str, Number]) -> 'InequalitySystem':
        """Substitute constants for some variables."""
        system = self
        for var, value in values.items():
            system = system.substitute(var, {}, value)
        return system

    def relaxed(self, slack: Number) -> 'InequalitySystem':
        """Loosen every right side by ``slack``."""
        slack = as_fraction(slack)
        rows = [LinearInequality(ineq.coeffs, ineq.rhs + slack, ineq.tag) for ineq in self.inequalities]
        return InequalitySystem(self.variables, rows, self.infeasible)

    def reorder(self, variables: Sequence[str]) -> 'InequalitySystem':
        if set(variables) != set(self.variables):
            raise ValidationError(f"reorder needs the same variables: {variables} vs {self.variables}")
        return InequalitySystem(variables, self.inequalities, self.infeasible)

    def contains_point(self, point: Mapping[str, Number]) -> bool:
        if self.infeasible:
            return False
        return all(ineq.satisfied(point) for ineq in self.inequalities)

    def constant_rows(self) -> List[LinearInequality]:
        return [ineq for ineq in self.inequalities if ineq.is_constant]

    def to_text(self) -> str:
        """One inequality per line with exact fractions, preceded by the variable list."""
        lines = ['vars: ' + ' '.join(self.variables)]
        if self.infeasible:
            lines.append('infeasible')
        lines.extend(str(ineq) for ineq in self.inequalities)
        return '\n'.join(lines) + '\n'

    @classmethod
    def from_text(cls, text: str) -> 'InequalitySystem':
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith('vars:'):
            raise ValidationError("system text must start with a 'vars:' line")
        variables = lines[0][len('vars:'):].split()
        infeasible = len(lines) > 1 and lines[1] == 'infeasible'
        body = lines[2:] if infeasible else lines[1:]
        return cls(variables, [parse_inequality(ln) for ln in body], infeasible)
