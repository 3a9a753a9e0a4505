import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import random_physical_arrays
from xdiscord.correlations import conditional_entropy_branches, quantum_discord
from xdiscord.errors import DomainError, MeasurementError, NonPhysicalStateError
from xdiscord.measurement_oracle import (
    X_AXIS,
    Z_AXIS,
    MeasurementAxis,
    MeasurementOracle,
    analytic_axis_entropies,
    condition_on_measurement,
    conditional_entropies,
    discord_oracle,
    measured_conditional_entropy,
    optimize_measurement,
)
from xdiscord.state_core import XStateParams, build_density_matrix


class TestMeasurementAxis:
    def test_unit_check(self):
        with pytest.raises(MeasurementError):
            MeasurementAxis(1.0, 1.0, 0.0)

    def test_from_angles(self):
        axis = MeasurementAxis.from_angles(np.pi / 2, 0.0)
        assert_allclose(axis.vector, [1.0, 0.0, 0.0], atol=1e-15)
        assert_allclose(axis.negated().vector, [-1.0, 0.0, 0.0], atol=1e-15)


class TestConditionOnMeasurement:
    def test_maximally_mixed(self, mixed_state):
        rho = build_density_matrix(mixed_state)
        axis = MeasurementAxis.from_angles(0.7, 1.3)
        for outcome in condition_on_measurement(rho, axis):
            assert_allclose(outcome.probability, 0.5)
            assert_allclose(outcome.state, np.eye(2) / 2, atol=1e-15)

    def test_bell_z(self, bell_state):
        up, down = condition_on_measurement(build_density_matrix(bell_state), Z_AXIS)
        assert_allclose([up.probability, down.probability], [0.5, 0.5])
        assert_allclose(up.state, [[1, 0], [0, 0]], atol=1e-15)
        assert_allclose(down.state, [[0, 0], [0, 1]], atol=1e-15)

    def test_werner_z(self, werner_state):
        outcomes = condition_on_measurement(build_density_matrix(werner_state), Z_AXIS)
        for outcome in outcomes:
            assert_allclose(outcome.probability, 0.5)
            bz = np.real(outcome.state[0, 0] - outcome.state[1, 1])
            assert_allclose(abs(bz), 0.5)
            assert_allclose(np.trace(outcome.state), 1.0)

    def test_zero_probability_branch(self):
        # B is pure |0>, so the minus outcome along z never happens
        rho = build_density_matrix(XStateParams(0.0, 1.0, 0.0, 0.0, 0.0))
        _, minus = condition_on_measurement(rho, Z_AXIS)
        assert minus.zero_probability
        assert minus.state is None
        assert_allclose(measured_conditional_entropy(rho, Z_AXIS), 1.0)

    def test_probabilities_sum(self, random_states):
        axis = MeasurementAxis.from_angles(1.1, 0.4)
        for p in random_states[:30]:
            outcomes = condition_on_measurement(build_density_matrix(p), axis)
            assert_allclose(sum(o.probability for o in outcomes), 1.0, atol=1e-12)


class TestMeasuredConditionalEntropy:
    def test_values(self, mixed_state, bell_state, werner_state):
        axis = MeasurementAxis.from_angles(0.3, 2.0)
        assert_allclose(measured_conditional_entropy(build_density_matrix(mixed_state), axis), 1.0)
        assert_allclose(measured_conditional_entropy(build_density_matrix(bell_state), Z_AXIS), 0.0, atol=1e-12)
        assert_allclose(measured_conditional_entropy(build_density_matrix(werner_state), Z_AXIS), 0.811278, atol=1e-5)

    def test_axis_parity(self, random_states):
        axis = MeasurementAxis.from_angles(0.9, 2.2)
        for p in random_states[:30]:
            rho = build_density_matrix(p)
            assert measured_conditional_entropy(rho, axis) == measured_conditional_entropy(rho, axis.negated())

    def test_batched_matches_single(self, example_state):
        rho = build_density_matrix(example_state)
        axes = [MeasurementAxis.from_angles(t, f) for t, f in ((0.1, 0.2), (1.0, 2.0), (2.5, 0.7))]
        batched = conditional_entropies(rho, np.array([a.vector for a in axes]))
        assert_allclose(batched, [measured_conditional_entropy(rho, a) for a in axes], atol=1e-14)

    def test_analytic_axes_reproduce_branches(self, random_states):
        for p in random_states:
            assert_allclose(analytic_axis_entropies(p), conditional_entropy_branches(p), atol=1e-10)


class TestOptimizeMeasurement:
    def test_maximally_mixed(self, mixed_state):
        assert_allclose(optimize_measurement(mixed_state).min_conditional_entropy, 1.0, atol=1e-12)

    def test_werner(self, werner_state):
        assert_allclose(optimize_measurement(werner_state).min_conditional_entropy, 0.811278, atol=1e-4)

    def test_example_prefers_x(self, example_state):
        result = optimize_measurement(example_state)
        assert_allclose(result.min_conditional_entropy, 0.185800, atol=5e-4)
        assert abs(result.best_axis.nx) > 0.99
        assert result.local_minimum_certified
        assert not result.below_closed_form

    def test_deterministic(self, example_state):
        first = optimize_measurement(example_state, grid_n=16, refine_depth=4)
        second = optimize_measurement(example_state, grid_n=16, refine_depth=4)
        assert first == second

    def test_refinement_never_worsens(self, example_state):
        coarse = optimize_measurement(example_state, grid_n=16, refine_depth=0)
        fine = optimize_measurement(example_state, grid_n=16, refine_depth=6)
        assert fine.min_conditional_entropy <= coarse.min_conditional_entropy

    def test_bad_arguments(self, example_state):
        with pytest.raises(DomainError):
            MeasurementOracle(grid_n=4)
        with pytest.raises(DomainError):
            MeasurementOracle(refine_depth=-1)
        with pytest.raises(NonPhysicalStateError):
            optimize_measurement(XStateParams.bell_diagonal(1.0, 1.0, 1.0))

    def test_bounded_by_analytic_minimum(self, random_states):
        for p in random_states[:30]:
            result = optimize_measurement(p, grid_n=64, refine_depth=6)
            analytic = min(conditional_entropy_branches(p))
            assert result.min_conditional_entropy <= analytic + 1e-3
            assert abs(result.min_conditional_entropy - analytic) <= 1e-3 or result.below_closed_form


class TestDiscordOracle:
    def test_values(self, bell_state, werner_state, example_state):
        assert_allclose(discord_oracle(bell_state).discord, 1.0, atol=1e-4)
        assert_allclose(discord_oracle(werner_state).discord, 0.262483, atol=5e-4)
        assert_allclose(discord_oracle(example_state).discord, 0.172430, atol=5e-4)

    def test_x_axis_is_the_example_branch(self, example_state):
        rho = build_density_matrix(example_state)
        assert_allclose(measured_conditional_entropy(rho, X_AXIS), conditional_entropy_branches(example_state)[1], atol=1e-12)

    @pytest.mark.slow
    def test_agrees_with_closed_form(self):
        for row in random_physical_arrays(1000, seed=21):
            p = XStateParams.from_sequence(row)
            result = discord_oracle(p, grid_n=64, refine_depth=6)
            if result.below_closed_form:
                continue
            assert abs(result.discord - quantum_discord(p)) <= 1e-3
