"""Tests for region evaluation, Fourier-Motzkin reproduction, special cases and frontier search."""
from fractions import Fraction

import numpy as np
import pytest

from qbroadcast.config import SearchConfig
from qbroadcast.errors import MarkovConstraintError, ValidationError
from qbroadcast.linalg.random import random_pmf
from qbroadcast.polyhedra import is_feasible, lp_max
from qbroadcast.regions import (
    CONVERSE_BANNER,
    FAMILIES,
    FactoredDistribution,
    FrontierPoint,
    check_downward_closed,
    constant_channel,
    data_processing_margin,
    double_markov_distribution,
    evaluate_region,
    get_spec,
    marton_distribution,
    nondominated,
    pareto_search,
    random_channel,
    reproduce_final_region,
    slice_vertices,
    special_case_checks,
)
from qbroadcast.regions.catalog import I, T
from qbroadcast.regions.evaluate import bound_label, converse_within_multilevel, superposition_collapse
from qbroadcast.regions.search import weight_vectors
from qbroadcast.states.cq_state import AuxiliaryDistribution, ClassicalRegister


def conditionally_independent_marton(rng):
    """p(u0) p(u1|u0) p(u2|u0), so I(U1;U2|U0) = 0."""
    p0 = random_pmf(rng, 2)
    p1 = rng.dirichlet(np.ones(2), size=2)
    p2 = rng.dirichlet(np.ones(2), size=2)
    joint = p0[:, None, None] * p1[:, :, None] * p2[:, None, :]
    input_map = rng.integers(0, 2, (2, 2, 2))
    return FactoredDistribution('marton', {'joint': joint}, {'joint': 3}, input_map, 2).build()


def test_get_spec_unknown():
    with pytest.raises(ValidationError):
        get_spec('no_such_region')
    for prelim, final in FAMILIES.values():
        assert get_spec(prelim).final_id == final


def test_multilevel_reproduction_on_degraded_channel(degraded, markov_dist):
    report = reproduce_final_region('multilevel_prelim', 'multilevel_final', degraded, markov_dist)
    assert report.equal
    assert report.final_in_projection and report.projection_in_final
    assert set(report.eliminated).isdisjoint({'R0', 'R1'})


def test_marton_reproduction_without_binning_dependence(rng, generic_channel):
    dist = conditionally_independent_marton(rng)
    report = reproduce_final_region('marton_prelim', 'marton_final', generic_channel, dist)
    assert report.conditions_hold
    assert report.equal


def test_marton_reproduction_follows_binning_condition():
    for seed in range(4):
        rng = np.random.default_rng(seed)
        channel = random_channel(rng, 2, (2, 2, 2))
        dist = marton_distribution(rng).build()
        report = reproduce_final_region('marton_prelim', 'marton_final', channel, dist)
        assert 'binning feasibility' in report.conditions
        if report.conditions_hold:
            assert report.equal, report.tighter_rows


def feasible_double_markov_instances(final_id, seeds=range(6)):
    """Seeded instances on which the final region is nonempty."""
    instances = []
    for seed in seeds:
        rng = np.random.default_rng(seed)
        channel = random_channel(rng, 2, (2, 2, 2))
        dist = double_markov_distribution(rng, 2, 2, 2, 2, concentration=20.0).build()
        if is_feasible(evaluate_region(final_id, channel, dist).system):
            instances.append((channel, dist))
    return instances


def test_general_two_reproduction():
    instances = feasible_double_markov_instances('general2_final')
    assert instances
    for channel, dist in instances:
        report = reproduce_final_region('general2_prelim', 'general2_final', channel, dist)
        assert not report.projection.infeasible
        assert report.equal, report.tighter_rows


@pytest.mark.slow
def test_general_three_reproduction():
    instances = feasible_double_markov_instances('general3_final', seeds=range(4))
    assert instances
    for channel, dist in instances:
        report = reproduce_final_region('general3_prelim', 'general3_final', channel, dist)
        assert report.final_in_projection and report.projection_in_final
        assert report.equal, report.tighter_rows


def test_mismatched_family_rejected(degraded, markov_dist):
    with pytest.raises(ValidationError):
        reproduce_final_region('multilevel_prelim', 'marton_final', degraded, markov_dist)


def test_superposition_collapse(generic_channel, superposition_dist):
    assert superposition_collapse(generic_channel, superposition_dist).passed


def test_special_cases_on_degraded_channel(degraded, superposition_dist, markov_dist, double_markov_dist):
    results = special_case_checks(degraded, superposition_dist, markov_dist, double_markov_dist)
    assert [r.name for r in results] == [
        'superposition_collapse',
        'multilevel_within_converse',
        'degraded_data_processing',
        'converse_within_multilevel',
    ]
    assert all(r.passed for r in results), [r.to_dict() for r in results]
    assert data_processing_margin(degraded, double_markov_dist) >= -1e-9


def test_converse_inside_multilevel_carries_banner(degraded, double_markov_dist):
    result = converse_within_multilevel(degraded, double_markov_dist)
    assert result.passed
    assert result.to_dict()['banner'] == CONVERSE_BANNER


def test_instance_dict_banner_only_for_converse(degraded, double_markov_dist, markov_dist):
    converse = evaluate_region('converse_general2', degraded, double_markov_dist)
    achievable = evaluate_region('multilevel_final', degraded, markov_dist)
    assert converse.to_dict()['banner'] == CONVERSE_BANNER
    assert 'banner' not in achievable.to_dict()
    assert achievable.to_dict()['inequalities']


def test_multilevel_final_is_downward_closed(rng, degraded, markov_dist):
    instance = evaluate_region('multilevel_final', degraded, markov_dist)
    assert check_downward_closed(instance.system, rng, samples=30)


def test_constant_channel_region_is_origin(markov_dist):
    channel = constant_channel(2, np.diag([0.7, 0.3]).astype(complex))
    instance = evaluate_region('multilevel_final', channel, markov_dist)
    assert lp_max(instance.system, {'R0': 1, 'R1': 1}).value == 0
    assert slice_vertices(instance.system) == [(Fraction(0), Fraction(0))]


def test_slice_vertices_are_exact(degraded, markov_dist):
    instance = evaluate_region('multilevel_final', degraded, markov_dist)
    vertices = slice_vertices(instance.system)
    assert (Fraction(0), Fraction(0)) in vertices
    assert all(isinstance(c, Fraction) for v in vertices for c in v)
    assert all(instance.system.contains_point({'R0': a, 'R1': b}) for a, b in vertices)


def test_markov_violation_raises(rng, degraded):
    registers = [ClassicalRegister('U', 2), ClassicalRegister('V', 2), ClassicalRegister('X', 2)]
    dist = AuxiliaryDistribution.with_input_register(registers, random_pmf(rng, (2, 2, 2)), 'X')
    with pytest.raises(MarkovConstraintError) as e:
        evaluate_region('multilevel_final', degraded, dist)
    assert e.value.deviation > 1e-9


def test_missing_register_raises(degraded, superposition_dist):
    with pytest.raises(ValidationError):
        evaluate_region('multilevel_final', degraded, superposition_dist)


def test_weight_vectors_are_distinct_directions():
    weights = weight_vectors(2)
    assert (0, 0) not in weights
    assert (1, 1) in weights and (2, 2) not in weights
    assert len(weights) == len(set(weights))


def test_nondominated_filters():
    witness = None
    points = [
        FrontierPoint((Fraction(1), Fraction(0)), (1, 0), witness),
        FrontierPoint((Fraction(1, 2), Fraction(1, 2)), (1, 1), witness),
        FrontierPoint((Fraction(1, 4), Fraction(1, 4)), (1, 1), witness),
        FrontierPoint((Fraction(1), Fraction(0)), (2, 1), witness),
    ]
    front = nondominated(points)
    assert {p.rates for p in front} == {(Fraction(1), Fraction(0)), (Fraction(1, 2), Fraction(1, 2))}


def test_pareto_points_lie_in_their_witness_region(degraded):
    config = SearchConfig(samples=3, refine_steps=2)
    points = pareto_search('multilevel_final', degraded, config, seed=5)
    assert points
    for p in points:
        instance = evaluate_region('multilevel_final', degraded, p.witness.build())
        assert instance.system.contains_point(dict(zip(('R0', 'R1'), p.rates)))
    again = pareto_search('multilevel_final', degraded, config, seed=5)
    assert [p.rates for p in again] == [p.rates for p in points]


def test_pareto_rejects_preliminary(degraded):
    with pytest.raises(ValidationError):
        pareto_search('multilevel_prelim', degraded, SearchConfig(samples=1, refine_steps=0))


def test_bound_label_renders_signed_coefficients():
    template = T({'R0': 2}, {I('U', 'B2'): 1, I('V3', 'B1', 'U'): -1, I('V2', 'B1', 'U'): 2})
    first, second, third = (atom.label for atom, _ in template.bound)
    assert bound_label(template) == f"{first} - {second} + 2 {third}"
    assert bound_label(T({'R0': 1}, {I('U', 'B2'): -1})) == f"-{first}"


def test_untagged_rows_carry_signed_labels(degraded, double_markov_dist):
    instance = evaluate_region('converse_general2', degraded, double_markov_dist)
    tags = [row.tag for row in instance.system.inequalities]
    assert any(' - ' in tag for tag in tags)
