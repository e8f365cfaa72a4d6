"""Tests for relative entropy, Renyi divergences and max-relative entropies."""
import math

import numpy as np
import pytest

from qbroadcast.errors import ValidationError
from qbroadcast.linalg.random import random_density, random_pmf
from qbroadcast.quantum.divergence import (
    RenyiOrder,
    dmax,
    petz_renyi,
    relative_entropy,
    renyi_q,
    sandwiched_renyi,
    smooth_dmax_classical,
    support_contained,
)
from qbroadcast.states.cq_state import ClassicalRegister, CqState

KET0 = np.diag([1.0, 0.0])
KET1 = np.diag([0.0, 1.0])


def well_conditioned_pair(rng, dim):
    mix = np.eye(dim) / dim
    return 0.5 * random_density(rng, dim) + 0.5 * mix, 0.5 * random_density(rng, dim) + 0.5 * mix


@pytest.mark.parametrize('alpha', [0.5, 2.0])
def test_renyi_order_validation(alpha):
    assert RenyiOrder(alpha).alpha == alpha
    for bad in (1.0, 0.0, -0.5, math.inf):
        with pytest.raises(ValidationError):
            RenyiOrder(bad)


def test_renyi_q_rejects_unknown_kind(rng):
    rho = random_density(rng, 2)
    with pytest.raises(ValidationError):
        renyi_q(rho, rho, 0.5, 'bogus')


def test_divergences_vanish_on_equal_states(rng):
    rho = random_density(rng, 3)
    assert relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-9)
    assert petz_renyi(rho, rho, 0.5) == pytest.approx(0.0, abs=1e-9)
    assert sandwiched_renyi(rho, rho, 2.0) == pytest.approx(0.0, abs=1e-9)
    assert dmax(rho, rho) == pytest.approx(0.0, abs=1e-8)


def test_support_violation_is_infinite():
    assert not support_contained(KET0, KET1)
    assert math.isinf(relative_entropy(KET0, KET1))
    assert math.isinf(petz_renyi(KET0, KET1, 2.0))
    assert math.isinf(sandwiched_renyi(KET0, KET1, 1.5))
    assert math.isinf(dmax(KET0, KET1))


def test_classical_relative_entropy():
    p = np.array([0.2, 0.8])
    q = np.array([0.5, 0.5])
    expected = float(np.sum(p * np.log2(p / q)))
    assert relative_entropy(np.diag(p), np.diag(q)) == pytest.approx(expected, abs=1e-12)
    alpha = 0.7
    renyi = math.log2(np.sum(p ** alpha * q ** (1 - alpha))) / (alpha - 1)
    assert petz_renyi(np.diag(p), np.diag(q), alpha) == pytest.approx(renyi, abs=1e-12)
    assert sandwiched_renyi(np.diag(p), np.diag(q), alpha) == pytest.approx(renyi, abs=1e-12)


@pytest.mark.parametrize('seed', range(5))
def test_limit_at_order_one(seed):
    rng = np.random.default_rng(seed)
    rho, sigma = well_conditioned_pair(rng, 2 + seed % 2)
    base = relative_entropy(rho, sigma)
    for alpha in (1 - 1e-4, 1 + 1e-4, 1 + 5e-5):
        assert abs(petz_renyi(rho, sigma, alpha) - base) <= 1e-3
        assert abs(sandwiched_renyi(rho, sigma, alpha) - base) <= 1e-3


@pytest.mark.parametrize('alpha', [0.5, 0.8, 1.5, 2.0])
def test_sandwiched_below_petz(rng, alpha):
    for _ in range(10):
        rho, sigma = random_density(rng, 3), random_density(rng, 3)
        assert sandwiched_renyi(rho, sigma, alpha) <= petz_renyi(rho, sigma, alpha) + 1e-9


def test_monotone_in_order_and_below_dmax(rng):
    rho, sigma = well_conditioned_pair(rng, 3)
    values = [sandwiched_renyi(rho, sigma, a) for a in (0.5, 0.8, 1.5, 3.0)]
    assert all(a <= b + 1e-9 for a, b in zip(values, values[1:]))
    assert values[0] <= relative_entropy(rho, sigma) + 1e-9 <= values[2] + 2e-9
    assert values[-1] <= dmax(rho, sigma) + 1e-9


def test_cq_state_divergence_adds_classical_part(rng):
    regs = [ClassicalRegister('X', 2)]
    cond = np.stack([random_density(rng, 2), random_density(rng, 2)])
    p = np.array([0.3, 0.7])
    q = np.array([0.6, 0.4])
    rho = CqState(regs, p, cond)
    sigma = CqState(regs, q, cond)
    expected = float(np.sum(p * np.log2(p / q)))
    assert relative_entropy(rho, sigma) == pytest.approx(expected, abs=1e-10)
    assert dmax(rho, sigma) == pytest.approx(math.log2(max(p / q)), abs=1e-9)


def test_smooth_dmax_classical(rng):
    p = random_pmf(rng, (3, 3))
    q = np.outer(p.sum(axis=1), p.sum(axis=0))
    exact = math.log2(np.max(p / q))
    assert smooth_dmax_classical(p, q, 0.0) == pytest.approx(exact, abs=1e-12)
    assert smooth_dmax_classical(p, p, 0.2) == 0.0
    values = [smooth_dmax_classical(p, q, eps) for eps in (0.0, 0.05, 0.1, 0.3)]
    assert all(b <= a + 1e-10 for a, b in zip(values, values[1:]))
    assert values[-1] >= 0.0


def test_smooth_dmax_support_and_range():
    p = np.array([0.5, 0.5])
    q = np.array([1.0, 0.0])
    assert math.isinf(smooth_dmax_classical(p, q, 0.0))
    assert math.isinf(smooth_dmax_classical(p, q, 0.1))
    assert smooth_dmax_classical(p, q, 0.8) < math.inf
    with pytest.raises(ValidationError):
        smooth_dmax_classical(p, q, 1.0)
    with pytest.raises(ValidationError):
        smooth_dmax_classical(p, np.ones(3) / 3, 0.1)
