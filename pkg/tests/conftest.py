"""Shared fixtures: seeded generators, small cq-states and channels."""
import numpy as np
import pytest

from qbroadcast.linalg.random import random_density, random_pmf
from qbroadcast.regions import (
    degraded_channel,
    double_markov_distribution,
    markov_chain_distribution,
    random_channel,
    superposition_distribution,
)
from qbroadcast.states.cq_state import ClassicalRegister, CqState


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def make_cq_state(rng, sizes=(2, 2, 2), names=('U', 'V', 'X'), dim=2):
    registers = [ClassicalRegister(n, s) for n, s in zip(names, sizes)]
    pmf = random_pmf(rng, sizes)
    count = int(np.prod(sizes))
    cond = np.stack([random_density(rng, dim) for _ in range(count)]).reshape(tuple(sizes) + (dim, dim))
    return CqState(registers, pmf, cond)


@pytest.fixture
def cq_state(rng):
    return make_cq_state(rng)


@pytest.fixture
def degraded(rng):
    """Qubit channel with B2 a depolarized copy of B1."""
    return degraded_channel(rng, input_size=2, d_b=2)


@pytest.fixture
def generic_channel(rng):
    return random_channel(rng, input_size=2, dims=(2, 2, 2))


@pytest.fixture
def markov_dist(rng):
    return markov_chain_distribution(rng, 2, 2, 2).build()


@pytest.fixture
def superposition_dist(rng):
    return superposition_distribution(rng, 2, 2).build()


@pytest.fixture
def double_markov_dist(rng):
    return double_markov_distribution(rng, 2, 2, 2, 2).build()
