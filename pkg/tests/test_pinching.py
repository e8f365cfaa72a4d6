"""Tests for pinching maps, nested families and eigenvalue-count bounds."""
import numpy as np
import pytest

from qbroadcast.errors import DimensionError, ValidationError
from qbroadcast.linalg.hermitian import commutator_norm
from qbroadcast.linalg.random import random_density
from qbroadcast.quantum.pinching import (
    SCENARIO_LEVELS,
    build_nested,
    check_count_bounds,
    count_bounds,
    distinct_eigenvalue_count,
    pinch,
    pinching_from_operator,
    product_spectrum_count,
    verify_pinching_inequality,
)

from .conftest import make_cq_state


def test_identity_reference_gives_trivial_map(rng):
    pinching = pinching_from_operator(np.eye(3) / 3)
    assert pinching.size == 1
    x = random_density(rng, 3)
    assert np.allclose(pinch(pinching, x), x)


def test_nondegenerate_reference_dephases():
    pinching = pinching_from_operator(np.diag([0.1, 0.3, 0.6]))
    x = np.arange(9, dtype=float).reshape(3, 3)
    x = x + x.T
    assert pinching.size == 3
    assert np.allclose(pinching(x), np.diag(np.diag(x)))


def test_pinch_dimension_mismatch():
    with pytest.raises(DimensionError):
        pinch(pinching_from_operator(np.eye(2)), np.eye(3))


def test_pinched_state_commutes_with_reference(rng):
    sigma = random_density(rng, 4)
    rho = random_density(rng, 4)
    pinched = pinching_from_operator(sigma)(rho)
    assert commutator_norm(pinched, sigma) < 1e-10
    assert np.trace(pinched).real == pytest.approx(1.0)


@pytest.mark.parametrize('dim', [2, 3, 4, 6])
def test_pinching_inequality_margin(dim):
    rng = np.random.default_rng(dim)
    for _ in range(20):
        rank = int(rng.integers(1, dim + 1))
        margin = verify_pinching_inequality(random_density(rng, dim), random_density(rng, dim, rank=rank))
        assert margin >= -1e-9


@pytest.mark.parametrize('n', range(1, 9))
def test_qubit_product_spectrum_count(n):
    spectrum = [0.3, 0.7]
    count = product_spectrum_count([spectrum] * n)
    assert count <= n + 1
    assert count == n + 1


def test_product_spectrum_matches_dense_count(rng):
    a = random_density(rng, 2)
    b = random_density(rng, 3)
    dense = distinct_eigenvalue_count(np.kron(a, b))
    assert product_spectrum_count([np.linalg.eigvalsh(a), np.linalg.eigvalsh(b)]) == dense


def test_count_bounds_formula():
    bounds = count_bounds(3, d_b=2, d_u=2, d_v=2)
    assert bounds['nu'] == 4
    assert bounds['nu1'] == 4 ** 4
    assert bounds['nu2'] == 4 ** 8


def test_check_count_bounds_qubit(rng):
    state = make_cq_state(rng, sizes=(2,), names=('U',))
    report = check_count_bounds(state, n=3)
    assert report.passed
    assert report.exhaustive
    assert report.sequences == 8
    assert report.nu <= 4
    assert report.nu1 <= 8
    assert report.to_dict()['passed']


def test_check_count_bounds_nested(rng):
    state = make_cq_state(rng, sizes=(2, 2), names=('U', 'V'))
    report = check_count_bounds(state, n=2, inner='V')
    assert report.passed
    assert report.nu2 is not None


def test_check_count_bounds_over_dim_cap(rng):
    state = make_cq_state(rng, sizes=(2,), names=('U',))
    report = check_count_bounds(state, n=9, dim_cap=256)
    assert report.nu1 is None
    assert report.passed


def test_nested_family_keys_and_counts(cq_state):
    family = build_nested(cq_state, 'multilevel')
    assert family.key_registers('E') == ()
    assert family.key_registers('E2') == ('U', 'V')
    assert family.key_registers('E3') == ('U', 'V', 'X')
    assert len(family.keys('E2')) == 4
    assert np.allclose(family.reference('E'), cq_state.average())
    for name in family.levels:
        assert 1 <= family.max_count(name) <= cq_state.quantum_dim
    assert family.map('E1', (1,)) is family.map('E1', (1,))


def test_nested_levels_refine_their_parents(rng):
    state = make_cq_state(rng, sizes=(2, 2, 2), dim=3)
    family = build_nested(state, 'multilevel')
    for u in range(2):
        parent = family.map('E', ())
        child = family.map('E1', (u,))
        for p in parent.projectors:
            for q in child.projectors:
                assert commutator_norm(p, q) < 1e-8


def test_nested_family_errors(cq_state):
    family = build_nested(cq_state, 'multilevel')
    with pytest.raises(ValidationError):
        family.map('E2', (0,))
    with pytest.raises(ValidationError):
        family.map('E9')
    with pytest.raises(ValidationError):
        build_nested(cq_state, 'unknown')
    with pytest.raises(ValidationError):
        build_nested(cq_state, 'marton')


def test_scenario_levels_are_declared():
    assert set(SCENARIO_LEVELS) == {'multilevel', 'marton', 'general_two', 'three_degraded'}
