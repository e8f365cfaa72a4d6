"""Tests for the Hermitian helpers and random generators."""
import numpy as np
import pytest

from qbroadcast.errors import DimensionError, ValidationError
from qbroadcast.linalg.hermitian import (
    check_density,
    check_dim,
    cluster_eigenvalues,
    commutator_norm,
    fidelity,
    kron,
    matrix_power,
    partial_trace,
    positive_part_projector,
    spectral,
    support_projector,
    trace_norm,
)
from qbroadcast.linalg.random import (
    depolarize,
    random_commuting_projectors,
    random_density,
    random_pmf,
    random_projector,
)


def test_cluster_eigenvalues_merges_within_tolerance():
    groups = cluster_eigenvalues([0.0, 1e-12, 0.5, 1.0])
    assert [list(g) for g in groups] == [[0, 1], [2], [3]]


def test_cluster_eigenvalues_empty():
    assert cluster_eigenvalues([]) == []


def test_spectral_reconstructs_operator(rng):
    rho = random_density(rng, 4)
    decomp = spectral(rho)
    assert np.allclose(decomp.reconstruct(), rho, atol=1e-12)
    assert np.allclose(sum(decomp.projectors), np.eye(4), atol=1e-12)


def test_spectral_identity_has_one_eigenspace():
    decomp = spectral(np.eye(3) / 3)
    assert len(decomp) == 1


def test_matrix_power_on_support():
    rho = np.diag([0.5, 0.5, 0.0])
    inv, info = matrix_power(rho, -1.0, return_info=True)
    assert info['pseudo_inverse']
    assert np.allclose(inv, np.diag([2.0, 2.0, 0.0]))
    assert np.allclose(support_projector(rho), np.diag([1.0, 1.0, 0.0]))


def test_matrix_power_full_rank_is_not_pseudo_inverse(rng):
    rho = random_density(rng, 3)
    inv, info = matrix_power(rho, -1.0, return_info=True)
    assert not info['pseudo_inverse']
    assert np.allclose(inv @ rho, np.eye(3), atol=1e-8)


def test_positive_part_projector_keeps_ties():
    t = np.diag([2.0, 1.0, 0.0])
    o = np.eye(3)
    proj = positive_part_projector(t, o)
    assert np.allclose(proj, np.diag([1.0, 1.0, 0.0]))


def test_positive_part_projector_shape_mismatch():
    with pytest.raises(DimensionError):
        positive_part_projector(np.eye(2), np.eye(3))


def test_partial_trace_of_product(rng):
    a = random_density(rng, 2)
    b = random_density(rng, 3)
    joint = kron(a, b)
    assert np.allclose(partial_trace(joint, [2, 3], [0]), a)
    assert np.allclose(partial_trace(joint, [2, 3], [1]), b)


def test_partial_trace_rejects_bad_dims():
    with pytest.raises(DimensionError):
        partial_trace(np.eye(6), [2, 2], [0])


def test_check_density_errors():
    with pytest.raises(ValidationError, match='trace'):
        check_density(np.eye(2))
    with pytest.raises(ValidationError, match='positive semidefinite'):
        check_density(np.diag([1.5, -0.5]))
    with pytest.raises(ValidationError, match='Hermitian'):
        check_density(np.array([[0.5, 0.3], [0.0, 0.5]]))


def test_check_density_error_carries_path():
    with pytest.raises(ValidationError, match=r'outputs\[3\]'):
        check_density(np.diag([1.5, -0.5]), name='outputs[3]')


def test_check_dim():
    check_dim(16, 16)
    with pytest.raises(DimensionError):
        check_dim(17, 16)


def test_fidelity_and_trace_norm(rng):
    rho = random_density(rng, 3)
    assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-8)
    assert fidelity(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) == pytest.approx(0.0, abs=1e-12)
    assert trace_norm(rho) == pytest.approx(1.0)


@pytest.mark.parametrize('dim,rank', [(2, 1), (3, 2), (4, 4)])
def test_random_density_is_valid(rng, dim, rank):
    rho = random_density(rng, dim, rank=rank)
    check_density(rho)
    assert np.linalg.matrix_rank(rho, tol=1e-10) == rank


def test_random_projectors(rng):
    p = random_projector(rng, 4, 2)
    assert np.allclose(p @ p, p, atol=1e-12)
    assert np.trace(p).real == pytest.approx(2.0)
    projs = random_commuting_projectors(rng, 4, 3)
    for a in projs:
        for b in projs:
            assert commutator_norm(a, b) < 1e-10


def test_random_pmf_sums_to_one(rng):
    p = random_pmf(rng, (2, 3))
    assert p.shape == (2, 3)
    assert p.sum() == pytest.approx(1.0)


def test_depolarize_fully_mixes(rng):
    rho = random_density(rng, 3)
    assert np.allclose(depolarize(rho, 1.0), np.eye(3) / 3)
    assert np.allclose(depolarize(rho, 0.0), rho)
