"""Tests for Shannon and Renyi mutual informations of cq-states."""
import math

import numpy as np
import pytest

from qbroadcast.config import OptimizerConfig
from qbroadcast.errors import ValidationError
from qbroadcast.linalg.random import random_density, random_pmf
from qbroadcast.quantum.information import (
    MutualInfoRequest,
    imax_conditional_classical,
    mutual_information,
    renyi_mi_down,
    renyi_mi_up,
    shannon_entropy,
    von_neumann_entropy,
)
from qbroadcast.regions import classical_channel, markov_chain_distribution
from qbroadcast.states.cq_state import (
    AuxiliaryDistribution,
    ClassicalRegister,
    CqState,
    channel_to_cqstate,
    cq_from_classical,
)

from .conftest import make_cq_state

PAULIS = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)


def mixed_state(rng, sizes, names):
    """cq-state whose qubit conditionals stay away from the Bloch sphere."""
    state = make_cq_state(rng, sizes=sizes, names=names)
    cond = 0.6 * state.conditionals + 0.4 * np.eye(2) / 2
    return CqState(state.registers, state.pmf, cond)


def bloch_grid(step):
    axis = np.arange(-1.0, 1.0 + step / 2, step)
    pts = np.array(np.meshgrid(axis, axis, axis, indexing='ij')).reshape(3, -1).T
    return pts[np.linalg.norm(pts, axis=1) <= 1.0]


def grid_down_value(state, alpha, step):
    """Best D~_alpha(rho_XB || rho_X (x) sigma) over a Bloch-ball grid of qubit sigmas."""
    pts = bloch_grid(step)
    sigmas = 0.5 * (np.eye(2) + np.einsum('nk,kij->nij', pts, PAULIS))
    w, v = np.linalg.eigh(sigmas)
    w = np.clip(w, 1e-300, None) ** ((1 - alpha) / (2 * alpha))
    s = (v * w[:, None, :]) @ v.conj().transpose(0, 2, 1)
    q = np.zeros(len(pts))
    for _, p, rho in state.items():
        lam = np.clip(np.linalg.eigvalsh(s @ rho @ s), 0.0, None)
        q += p * np.sum(lam ** alpha, axis=1)
    best = q.max() if alpha < 1 else q.min()
    return math.log2(best) / (alpha - 1)


def classical_mi(p_x, transition):
    joint = p_x[:, None] * transition
    p_y = joint.sum(axis=0)
    mask = joint > 0
    return float(np.sum(joint[mask] * np.log2((joint / (p_x[:, None] * p_y[None, :]))[mask])))


def test_entropies():
    assert shannon_entropy([0.5, 0.5, 0.0]) == pytest.approx(1.0)
    assert von_neumann_entropy(np.eye(4) / 4) == pytest.approx(2.0)
    assert von_neumann_entropy(np.diag([1.0, 0.0])) == pytest.approx(0.0)


def test_request_validation(cq_state):
    with pytest.raises(ValidationError):
        MutualInfoRequest(cq_state, ('U',), conditioning=('U',))
    with pytest.raises(ValidationError):
        MutualInfoRequest(cq_state, ())
    with pytest.raises(ValidationError):
        MutualInfoRequest(cq_state, ('W',))
    with pytest.raises(ValidationError):
        MutualInfoRequest(cq_state, ('U',), order=1.0)
    with pytest.raises(ValidationError):
        renyi_mi_up(MutualInfoRequest(cq_state, ('U',)))
    with pytest.raises(ValidationError):
        renyi_mi_up(MutualInfoRequest(cq_state, ('U',), conditioning=('V',), order=0.5))


@pytest.mark.parametrize('seed', range(20))
def test_classical_channel_reduces_to_shannon(seed):
    rng = np.random.default_rng(seed)
    transition = rng.dirichlet(np.ones(3), size=3)
    p_x = random_pmf(rng, 3)
    channel = classical_channel(transition)
    dist = AuxiliaryDistribution.with_input_register([ClassicalRegister('X', 3)], p_x, 'X')
    state = channel_to_cqstate(channel, dist, 'B1')
    assert mutual_information(state, ['X']) == pytest.approx(classical_mi(p_x, transition), abs=1e-10)


def test_classical_renyi_up_matches_formula(rng):
    transition = rng.dirichlet(np.ones(2), size=2)
    p_x = random_pmf(rng, 2)
    regs = [ClassicalRegister('X', 2)]
    state = CqState(regs, p_x, np.stack([np.diag(row) for row in transition]))
    joint = p_x[:, None] * transition
    product = p_x[:, None] * joint.sum(axis=0)[None, :]
    for alpha in (0.5, 1.5):
        expected = math.log2(np.sum(joint ** alpha * product ** (1 - alpha))) / (alpha - 1)
        req = MutualInfoRequest(state, ('X',), order=alpha)
        assert renyi_mi_up(req, 'petz') == pytest.approx(expected, abs=1e-10)
        assert renyi_mi_up(req, 'sandwiched') == pytest.approx(expected, abs=1e-10)


def test_chain_rule(cq_state):
    total = mutual_information(cq_state, ['U', 'X'])
    split = mutual_information(cq_state, ['U']) + mutual_information(cq_state, ['X'], given=['U'])
    assert total == pytest.approx(split, abs=1e-10)
    assert mutual_information(cq_state, ['X'], given=['U']) >= -1e-12


def test_classical_right_side(rng):
    pmf = random_pmf(rng, (2, 2))
    state = cq_from_classical([ClassicalRegister('A', 2), ClassicalRegister('C', 2)], pmf)
    p_a, p_c = pmf.sum(axis=1), pmf.sum(axis=0)
    expected = float(np.sum(pmf * np.log2(pmf / np.outer(p_a, p_c))))
    assert mutual_information(state, ['A'], right=['C']) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize('alpha', [0.6, 0.8, 1.5])
def test_renyi_up_is_additive(rng, alpha):
    state = mixed_state(rng, (2,), ('X',))
    single = renyi_mi_up(MutualInfoRequest(state, ('X',), order=alpha))
    double = renyi_mi_up(MutualInfoRequest(state.tensor_power(2), ('X_1', 'X_2'), order=alpha))
    assert double == pytest.approx(2 * single, abs=1e-7)


def test_shannon_is_additive(rng):
    state = make_cq_state(rng, sizes=(2, 2), names=('U', 'X'))
    square = state.tensor_power(2)
    single = mutual_information(state, ['X'], given=['U'])
    double = mutual_information(square, ['X_1', 'X_2'], given=['U_1', 'U_2'])
    assert double == pytest.approx(2 * single, abs=1e-9)


@pytest.mark.parametrize('alpha', [0.7, 1.5])
def test_renyi_down_below_up(rng, alpha):
    state = mixed_state(rng, (2,), ('X',))
    req = MutualInfoRequest(state, ('X',), order=alpha)
    down = renyi_mi_down(req, OptimizerConfig(restarts=2), seed=3)
    assert down.value <= renyi_mi_up(req) + 1e-9
    assert () in down.sigmas
    assert np.trace(down.sigmas[()]).real == pytest.approx(1.0)


@pytest.mark.parametrize('alpha', [0.7, 1.5])
def test_renyi_down_against_coarse_grid(alpha):
    rng = np.random.default_rng(11)
    for _ in range(3):
        state = mixed_state(rng, (2,), ('X',))
        value = renyi_mi_down(MutualInfoRequest(state, ('X',), order=alpha), OptimizerConfig(restarts=2)).value
        grid = grid_down_value(state, alpha, step=0.1)
        assert value <= grid + 1e-7
        assert grid - value <= 1e-2


def test_renyi_down_conditional_blocks(rng):
    state = mixed_state(rng, (2, 2), ('U', 'X'))
    req = MutualInfoRequest(state, ('X',), conditioning=('U',), order=0.8)
    result = renyi_mi_down(req, OptimizerConfig(restarts=1))
    assert set(result.sigmas) == {(0,), (1,)}
    assert result.value >= -1e-9
    assert float(result) == result.value


def test_renyi_down_rejects_missing_order(cq_state):
    with pytest.raises(ValidationError):
        renyi_mi_down(MutualInfoRequest(cq_state, ('U',)))


@pytest.mark.slow
@pytest.mark.parametrize('alpha', [0.7, 1.5])
def test_renyi_down_against_fine_grid(alpha):
    rng = np.random.default_rng(29)
    for _ in range(10):
        state = mixed_state(rng, (2,), ('X',))
        value = renyi_mi_down(MutualInfoRequest(state, ('X',), order=alpha)).value
        grid = grid_down_value(state, alpha, step=0.02)
        assert abs(value - grid) <= 1e-3


@pytest.mark.slow
def test_renyi_down_conditional_is_additive():
    rng = np.random.default_rng(5)
    state = mixed_state(rng, (2, 2), ('U', 'X'))
    config = OptimizerConfig(restarts=1)
    single = renyi_mi_down(MutualInfoRequest(state, ('X',), conditioning=('U',), order=0.8), config).value
    square = state.tensor_power(2)
    req = MutualInfoRequest(square, ('X_1', 'X_2'), conditioning=('U_1', 'U_2'), order=0.8)
    assert renyi_mi_down(req, config).value == pytest.approx(2 * single, abs=1e-5)


def test_imax_vanishes_on_markov_chain(rng):
    dist = markov_chain_distribution(rng).build()
    state = cq_from_classical(list(dist.registers), dist.pmf)
    assert imax_conditional_classical(state, ['U'], ['X'], ['V'], 0.0) == pytest.approx(0.0, abs=1e-9)
    assert imax_conditional_classical(state, ['U'], ['X'], ['V'], 0.1) == 0.0


def test_imax_positive_without_markov(rng):
    pmf = random_pmf(rng, (2, 2, 2))
    state = cq_from_classical([ClassicalRegister(n, 2) for n in ('U', 'V', 'X')], pmf)
    exact = imax_conditional_classical(state, ['U'], ['X'], ['V'], 0.0)
    assert exact > 0
    assert imax_conditional_classical(state, ['U'], ['X'], ['V'], 0.2) <= exact
    with pytest.raises(ValidationError):
        imax_conditional_classical(make_cq_state(rng), ['U'], ['X'], ['V'], 0.0)
