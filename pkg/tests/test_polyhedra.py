"""Tests for exact LP, Fourier-Motzkin elimination and containment."""
from fractions import Fraction

import pytest

from qbroadcast.errors import UnboundedSystemError, ValidationError
from qbroadcast.polyhedra import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    InequalitySystem,
    LinearInequality,
    contains,
    fm_eliminate,
    is_feasible,
    lp_max,
    parse_inequality,
    polytope_equal,
    prune_redundant,
    quantize,
    violated_constraints,
)


def box(x_max=1, y_max=2):
    return InequalitySystem(['x', 'y'], [
        LinearInequality({'x': 1}, x_max, 'x cap'),
        LinearInequality({'y': 1}, y_max, 'y cap'),
    ]).with_nonnegativity()


def test_quantize_is_exact_and_rejects_nan():
    assert quantize(0.5) == Fraction(1, 2)
    assert quantize(1e-17) == 0
    assert quantize(-1e-17) == 0
    with pytest.raises(ValidationError):
        quantize(float('nan'))
    with pytest.raises(ValidationError):
        quantize(float('inf'))


def test_geq_is_stored_negated():
    row = LinearInequality.geq({'x': 2}, 1)
    assert row.coeffs == {'x': -2}
    assert row.rhs == -1
    assert row.satisfied({'x': 1})
    assert not row.satisfied({'x': 0})


def test_parse_inequality():
    row = parse_inequality('+1*R0 -1/2*R1 <= 3/4  # tag')
    assert row.coeffs == {'R0': 1, 'R1': Fraction(-1, 2)}
    assert row.rhs == Fraction(3, 4)
    assert row.tag == 'tag'


def test_unknown_variable_rejected():
    with pytest.raises(ValidationError):
        InequalitySystem(['x'], [LinearInequality({'y': 1}, 0)])


def test_lp_box_optimum():
    result = lp_max(box(), {'x': 1, 'y': 1})
    assert result.status == OPTIMAL
    assert result.value == 3
    assert result.point == {'x': 1, 'y': 2}


def test_lp_unbounded_and_infeasible():
    half_line = InequalitySystem(['x'], []).with_nonnegativity()
    assert lp_max(half_line, {'x': 1}).status == UNBOUNDED
    empty = InequalitySystem(['x'], [LinearInequality({'x': 1}, -1)]).with_nonnegativity()
    assert lp_max(empty, {'x': 1}).status == INFEASIBLE
    assert not is_feasible(empty)


def test_lp_free_variables():
    system = InequalitySystem(['x'], [LinearInequality({'x': 1}, 3), LinearInequality.geq({'x': 1}, -5)])
    assert lp_max(system, {'x': -1}).value == 5


def test_lp_degenerate_cycling_example():
    # Classic degenerate instance on which Dantzig's rule cycles.
    v = ['x4', 'x5', 'x6', 'x7']
    system = InequalitySystem(v, [
        LinearInequality({'x4': Fraction(1, 4), 'x5': -8, 'x6': -1, 'x7': 9}, 0),
        LinearInequality({'x4': Fraction(1, 2), 'x5': -12, 'x6': Fraction(-1, 2), 'x7': 3}, 0),
        LinearInequality({'x6': 1}, 1),
    ]).with_nonnegativity()
    result = lp_max(system, {'x4': Fraction(3, 4), 'x5': -20, 'x6': Fraction(1, 2), 'x7': -6})
    assert result.status == OPTIMAL
    assert result.value == Fraction(1, 20)


def test_fm_eliminate_simplex():
    system = InequalitySystem(['x', 'y'], [LinearInequality({'x': 1, 'y': 1}, 2)]).with_nonnegativity()
    projected = fm_eliminate(system, ['y'])
    assert projected.variables == ('x',)
    expected = InequalitySystem(['x'], [LinearInequality({'x': 1}, 2)]).with_nonnegativity()
    assert polytope_equal(projected, expected)


def test_fm_eliminate_infeasible_projection():
    system = InequalitySystem(['x', 'y'], [
        LinearInequality({'x': 1, 'y': 1}, -1),
    ]).with_nonnegativity()
    projected = fm_eliminate(system, ['y'])
    assert projected.infeasible


def test_fm_eliminate_unknown_variable():
    with pytest.raises(ValidationError):
        fm_eliminate(box(), ['z'])


def test_prune_redundant_drops_implied_rows():
    system = box().add(LinearInequality({'x': 1}, 5, 'loose'), LinearInequality({'x': 1, 'y': 1}, 10))
    pruned = prune_redundant(system)
    assert len(pruned) == 4
    assert all(row.tag != 'loose' for row in pruned)
    assert polytope_equal(pruned, box())


def test_contains_and_violations():
    small = box(1, 1)
    large = box(2, 2)
    assert contains(small, large)
    assert not contains(large, small)
    violated = violated_constraints(large, small)
    assert {row.tag for row in violated} == {'x cap', 'y cap'}
    assert violated_constraints(small, large) == []


def test_contains_empty_set():
    empty = InequalitySystem(['x', 'y'], [], infeasible=True)
    assert contains(empty, box())
    assert not contains(box(), empty)


def test_contains_rejects_unbounded_and_mismatched():
    quadrant = InequalitySystem(['x', 'y'], []).with_nonnegativity()
    with pytest.raises(UnboundedSystemError):
        contains(quadrant, box())
    with pytest.raises(ValidationError):
        contains(box(), InequalitySystem(['x'], []))


def test_text_round_trip():
    system = box().add(LinearInequality({'x': Fraction(1, 3), 'y': -1}, Fraction(-2, 7), 'mixed'))
    parsed = InequalitySystem.from_text(system.to_text())
    assert parsed.variables == system.variables
    assert list(parsed.inequalities) == list(system.inequalities)


def test_substitute_and_fix():
    system = box().substitute('x', {'a': 1, 'b': 1})
    assert set(system.variables) == {'y', 'a', 'b'}
    fixed = box().fix({'x': 1})
    assert fixed.variables == ('y',)
    assert lp_max(fixed, {'y': 1}).value == 2


def test_relaxed_absorbs_small_excess():
    tight = box(1, 2)
    wide = box(Fraction(1) + Fraction(1, 2 ** 40), 2)
    assert not contains(wide, tight)
    assert contains(wide, tight.relaxed(Fraction(1, 2 ** 30)))
    assert all(r.tag for r in tight.relaxed(1))
