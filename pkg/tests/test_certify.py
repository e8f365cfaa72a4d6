"""Tests for the lemma certifiers and randomized sweeps."""
import numpy as np
import pytest

from qbroadcast.certify import (
    LEMMA_GENERATORS,
    SUITES,
    certify_hayashi_nagaoka,
    certify_hypothesis_testing,
    certify_nested_pinching_proposition,
    certify_petz_to_sandwich,
    certify_pinching_inequality,
    certify_union_bound,
    instance_digest,
    regenerate,
    run_suite,
    sweep,
)
from qbroadcast.errors import ValidationError
from qbroadcast.linalg.random import random_commuting_projectors, random_density, random_projector

from .conftest import make_cq_state


def test_hayashi_nagaoka_random_effects(rng):
    for dim in (2, 3, 5):
        s = random_density(rng, dim) * 0.9 * dim / 2
        s = s / max(1.0, np.linalg.eigvalsh(s)[-1])
        t = random_density(rng, dim) * 3.0
        cert = certify_hayashi_nagaoka(s, t)
        assert cert.passed
        assert cert.margin >= -1e-9


def test_hayashi_nagaoka_on_shared_kernel():
    s = np.diag([0.7, 0.0])
    t = np.diag([0.2, 0.0])
    cert = certify_hayashi_nagaoka(s, t)
    assert cert.passed
    assert cert.details['rank_deficient']


def test_hayashi_nagaoka_rejects_bad_effect():
    with pytest.raises(ValidationError):
        certify_hayashi_nagaoka(np.diag([1.5, 0.0]), np.eye(2))
    with pytest.raises(ValidationError):
        certify_hayashi_nagaoka(np.eye(2) / 2, np.diag([-1.0, 0.0]))


def test_pinching_inequality_certificate(rng):
    cert = certify_pinching_inequality(random_density(rng, 4), random_density(rng, 4, rank=2))
    assert cert.passed
    assert cert.details['nu'] >= 2
    assert cert.lhs == 0.0


@pytest.mark.parametrize('exponent', [-4, 0, 3, 8])
@pytest.mark.parametrize('alpha', [0.1, 0.5, 0.9])
def test_hypothesis_testing_bound(rng, exponent, alpha):
    rho, sigma = random_density(rng, 3), random_density(rng, 3)
    cert = certify_hypothesis_testing(rho, sigma, 2.0 ** exponent, alpha)
    assert cert.passed
    assert 0 <= cert.details['projector_rank'] <= 3


def test_hypothesis_testing_rejects_parameters(rng):
    rho = random_density(rng, 2)
    with pytest.raises(ValidationError):
        certify_hypothesis_testing(rho, rho, 0.0, 0.5)
    with pytest.raises(ValidationError):
        certify_hypothesis_testing(rho, rho, 1.0, 1.0)


@pytest.mark.parametrize('alpha', [0.2, 0.5, 0.8])
def test_petz_to_sandwich(rng, alpha):
    for rank in (1, 3):
        cert = certify_petz_to_sandwich(random_density(rng, 3), random_density(rng, 3, rank=rank), alpha)
        assert cert.passed


def test_union_bound_commuting_and_not(rng):
    rho = random_density(rng, 4)
    commuting = certify_union_bound(random_commuting_projectors(rng, 4, 3), rho)
    assert commuting.passed
    assert commuting.details['commuting']
    general = certify_union_bound([random_projector(rng, 4, 3) for _ in range(2)], rho)
    assert general.details['operators'] == 2
    with pytest.raises(ValidationError):
        certify_union_bound([], rho)


@pytest.mark.parametrize('alpha', [0.3, 0.7])
def test_nested_pinching_proposition(rng, alpha):
    state = make_cq_state(rng, sizes=(2, 2, 2), dim=2)
    certs = certify_nested_pinching_proposition(state, alpha)
    assert [c.lemma_id for c in certs] == ['nested_pinching_2', 'nested_pinching_3']
    assert all(c.passed for c in certs)


def test_instance_digest_depends_on_inputs():
    a = instance_digest('x', 1e-9, [np.eye(2)])
    assert a == instance_digest('x', 1e-9, [np.eye(2)])
    assert a != instance_digest('y', 1e-9, [np.eye(2)])
    assert a != instance_digest('x', 1e-8, [np.eye(2)])
    assert a != instance_digest('x', 1e-9, [np.eye(3)])


def test_sweep_is_deterministic_and_regenerable():
    first = sweep('hayashi_nagaoka', 5, master_seed=7, workers=2)
    second = sweep('hayashi_nagaoka', 5, master_seed=7, workers=1)
    assert [c.instance_digest for c in first.certificates] == [c.instance_digest for c in second.certificates]
    cert = first.certificates[2]
    rebuilt = regenerate('hayashi_nagaoka', cert.instance_seed)
    assert rebuilt[0].instance_digest == cert.instance_digest
    assert rebuilt[0].margin == cert.margin


def test_sweep_counts_errors(monkeypatch):
    def broken(rng, tolerance):
        raise RuntimeError('generator failure')

    monkeypatch.setitem(LEMMA_GENERATORS, 'broken', broken)
    summary = sweep('broken', 3, workers=1)
    assert summary.stats['errors'] == 3
    assert not summary.passed
    assert summary.to_dict()['certificates'] == 0


def test_sweep_unknown_lemma():
    with pytest.raises(KeyError):
        sweep('nonexistent', 1)
    with pytest.raises(KeyError):
        run_suite('nonexistent', 1)


def test_lemma_suite_passes():
    summaries = run_suite('lemmas', trials=10, master_seed=3)
    assert [s.lemma_id for s in summaries] == list(SUITES['lemmas'])
    for s in summaries:
        assert s.passed
        assert len(s.certificates) == 10
        assert s.min_margin >= -1e-9


def test_pinching_suite_passes():
    summaries = run_suite('pinching', trials=10, master_seed=3)
    assert all(s.passed for s in summaries)
    nested = summaries[1]
    assert len(nested.certificates) == 20


@pytest.mark.slow
def test_full_sweep_counts():
    for lemma_id in SUITES['lemmas'] + ('nested_pinching',):
        assert sweep(lemma_id, 500, master_seed=1).passed
    assert sweep('pinching_inequality', 1000, master_seed=1).passed
