import math

import numpy as np
import pytest

from dipolar_chains import exceptions
from dipolar_chains import harmonic
from dipolar_chains import landscape
from dipolar_chains import potential


def expansion_model(theta, strength_u):
    coeffs = landscape.expansion_coefficients(theta)

    return coeffs, harmonic.build_from_expansion(coeffs, strength_u)


class TestJacobiTransform(object):
    def test_orthogonal(self):
        result = harmonic.jacobi_transform()

        assert np.allclose(result.to_jacobi @ result.to_particles,
                           np.eye(2), atol=1e-15)

    def test_center_of_mass(self):
        result = harmonic.jacobi_transform()

        assert np.allclose(result.to_particles.sum(axis=0), 0.0, atol=1e-15)

    def test_pair_vectors(self):
        result = harmonic.jacobi_transform()

        assert np.allclose(result.pair_vectors[(1, 2)],
                           [1.0 / math.sqrt(2.0), math.sqrt(1.5)])
        assert np.allclose(result.pair_vectors[(2, 3)],
                           [1.0 / math.sqrt(2.0), -math.sqrt(1.5)])
        assert np.allclose(result.pair_vectors[(1, 3)], [math.sqrt(2.0), 0.0])


class TestPairVector(object):
    def test_reversed(self):
        assert np.allclose(harmonic.pair_vector((2, 1)),
                           -harmonic.pair_vector((1, 2)))

    def test_unknown(self):
        with pytest.raises(exceptions.ValidationError):
            harmonic.pair_vector((1, 4))


class TestHarmonicChainModel(object):
    def test_missing_pair(self):
        term = harmonic.PairTerm(1.0, 1.0, 0.0, 0.0)

        with pytest.raises(exceptions.ValidationError):
            harmonic.HarmonicChainModel({(1, 2): term, (2, 3): term})

    def test_non_positive_coupling(self):
        term = harmonic.PairTerm(1.0, 1.0, 0.0, 0.0)
        bad = harmonic.PairTerm(1.0, 0.0, 0.0, 0.0)

        with pytest.raises(exceptions.ValidationError):
            harmonic.HarmonicChainModel(
                {(1, 2): term, (2, 3): term, (1, 3): bad},
            )

    def test_constant(self):
        model = harmonic.HarmonicChainModel({
            (1, 2): harmonic.PairTerm(1.0, 1.0, 0.0, -1.0),
            (2, 3): harmonic.PairTerm(1.0, 1.0, 0.0, -2.0),
            (1, 3): harmonic.PairTerm(1.0, 1.0, 0.0, 0.5),
        })

        assert model.constant == -2.5

    def test_quadratic_form_matches_potential(self):
        model = harmonic.HarmonicChainModel({
            (1, 2): harmonic.PairTerm(2.0, 3.0, 0.4, -1.0),
            (2, 3): harmonic.PairTerm(1.5, 2.5, 0.3, -1.0),
            (1, 3): harmonic.PairTerm(0.2, 0.1, 0.9, -0.2),
        })
        qx = np.array([0.3, -0.7])
        qy = np.array([-0.2, 0.5])
        to_particles = harmonic.jacobi_transform().to_particles

        expected = model.potential(to_particles @ qx, to_particles @ qy)

        total = model.constant
        for direction, q in (('x', qx), ('y', qy)):
            form, lin, const = model.quadratic_form(direction)
            total += q @ form @ q - 2.0 * lin @ q + const

        assert total == pytest.approx(expected, rel=1e-12)


class TestSolveQuadraticModel(object):
    def test_matches_closed_form(self):
        for theta, strength_u in ((potential.THETA_C_STAR, 10.0),
                                  (math.pi / 2, 3.0), (0.6, 25.0)):
            coeffs, model = expansion_model(theta, strength_u)

            energy, state = harmonic.solve_quadratic_model(model)
            closed = harmonic.chain_wavefunction(coeffs, strength_u)

            assert energy == pytest.approx(
                harmonic.closed_form_energy(coeffs, strength_u), rel=1e-10,
            )
            assert np.allclose(state.x_form, closed.x_form, rtol=1e-10,
                               atol=1e-10)
            assert np.allclose(state.y_form, closed.y_form, rtol=1e-10,
                               atol=1e-10)
            assert np.allclose(state.x_center, closed.x_center, atol=1e-12)

    def test_not_positive_definite(self):
        term = harmonic.PairTerm(1.0, 1.0, 0.0, 0.0)
        model = harmonic.HarmonicChainModel(
            {(1, 2): term, (2, 3): term, (1, 3): term},
        )
        model.pairs[(1, 2)] = harmonic.PairTerm(-5.0, 1.0, 0.0, 0.0)

        with pytest.raises(exceptions.NotPositiveDefinite):
            harmonic.solve_quadratic_model(model)


class TestFrustrationResidual(object):
    def test_compatible(self):
        _coeffs, model = expansion_model(potential.THETA_C_STAR, 10.0)

        assert abs(harmonic.frustration_residual(model)) < 1e-10

    def test_incompatible(self):
        model = harmonic.HarmonicChainModel({
            (1, 2): harmonic.PairTerm(1.0, 1.0, 1.0, 0.0),
            (2, 3): harmonic.PairTerm(1.0, 1.0, 1.0, 0.0),
            (1, 3): harmonic.PairTerm(1.0, 1.0, 0.0, 0.0),
        })

        assert harmonic.frustration_residual(model) > 0.1


class TestClosedFormEnergy(object):
    def test_perpendicular(self):
        coeffs = landscape.expansion_coefficients(math.pi / 2)

        result = harmonic.closed_form_energy(coeffs, 10.0)

        expected = ((math.sqrt(1.5) + math.sqrt(17.0 / 32.0)) *
                    2.0 * math.sqrt(60.0) - 42.5)
        assert result == pytest.approx(expected)

    def test_bad_strength(self):
        coeffs = landscape.expansion_coefficients(math.pi / 2)

        with pytest.raises(exceptions.ValidationError):
            harmonic.closed_form_energy(coeffs, -1.0)


class TestChainGaussian(object):
    def test_not_positive_definite(self):
        with pytest.raises(exceptions.NotPositiveDefinite):
            harmonic.ChainGaussian(np.diag([1.0, -1.0]), [0.0, 0.0],
                                   np.eye(2))

    def test_normalization(self):
        state = harmonic.ChainGaussian(np.diag([2.0, 3.0]), [0.0, 0.0],
                                       np.diag([4.0, 5.0]))

        assert state.normalization ** 2 == pytest.approx(
            math.sqrt(120.0) / math.pi ** 2)

    def test_amplitude_peak(self):
        state = harmonic.ChainGaussian(np.eye(2), [0.5, -0.1], np.eye(2))

        peak = state.amplitude([0.5, -0.1], [0.0, 0.0])
        off = state.amplitude([1.5, -0.1], [0.0, 0.0])

        assert peak == pytest.approx(state.normalization)
        assert off == pytest.approx(state.normalization * math.exp(-0.5))

    def test_kinetic_energy(self):
        state = harmonic.ChainGaussian(np.diag([2.0, 3.0]), [0.0, 0.0],
                                       np.diag([4.0, 5.0]))

        assert state.kinetic_energy == pytest.approx(3.5)
        assert state.widths == (2.0, 3.0, 4.0, 5.0)

    def test_pair_moments(self):
        coeffs = landscape.expansion_coefficients(potential.THETA_C_STAR)
        state = harmonic.chain_wavefunction(coeffs, 10.0)

        near = state.pair_moments((1, 2))
        other = state.pair_moments((2, 3))
        outer = state.pair_moments((1, 3))

        assert near[0] == pytest.approx(coeffs.a0)
        assert other[0] == pytest.approx(coeffs.a0)
        assert outer[0] == pytest.approx(2.0 * coeffs.a0)
        assert near[1] == pytest.approx(other[1])


class TestVirialBalance(object):
    def test_ground_state(self):
        _coeffs, model = expansion_model(1.0, 12.0)
        _energy, state = harmonic.solve_quadratic_model(model)

        result = harmonic.virial_balance(model, state)

        for kinetic, excitation in result.values():
            assert kinetic == pytest.approx(excitation, rel=1e-10)


class TestLayerMarginal(object):
    def test_means(self):
        coeffs = landscape.expansion_coefficients(potential.THETA_C_STAR)
        state = harmonic.chain_wavefunction(coeffs, 5.0)

        means = [harmonic.layer_marginal(state, layer)[0]
                 for layer in (1, 2, 3)]

        assert means == [pytest.approx(coeffs.a0), pytest.approx(0.0),
                         pytest.approx(-coeffs.a0)]

    def test_bad_particle(self):
        state = harmonic.ChainGaussian(np.eye(2), [0.0, 0.0], np.eye(2))

        with pytest.raises(exceptions.ValidationError):
            harmonic.layer_marginal(state, 4)


class TestLayerDensity(object):
    def test_normalized(self):
        coeffs = landscape.expansion_coefficients(potential.THETA_C_STAR)
        state = harmonic.chain_wavefunction(coeffs, 5.0)
        axis = np.linspace(-3.0, 3.0, 121)
        cell = (axis[1] - axis[0]) ** 2

        for layer in (1, 2, 3):
            table = harmonic.layer_density(state, layer, axis, axis)

            assert table.shape == (121 * 121, 3)
            assert table[:, 2].sum() * cell == pytest.approx(1.0, abs=1e-6)

    def test_row_major_in_y(self):
        state = harmonic.ChainGaussian(np.eye(2), [0.0, 0.0], np.eye(2))

        table = harmonic.layer_density(state, 1, [0.0, 1.0], [-1.0, 2.0])

        assert table[:, 0].tolist() == [0.0, 1.0, 0.0, 1.0]
        assert table[:, 1].tolist() == [-1.0, -1.0, 2.0, 2.0]


class TestSampleLayerPositions(object):
    def test_samples(self):
        coeffs = landscape.expansion_coefficients(potential.THETA_C_STAR)
        state = harmonic.chain_wavefunction(coeffs, 10.0)
        rng = np.random.default_rng(1234)

        x, y = harmonic.sample_layer_positions(state, 4000, rng)

        assert x.shape == (4000, 3)
        assert y.shape == (4000, 3)
        assert np.allclose(x.sum(axis=1), 0.0, atol=1e-12)
        assert np.allclose(y.sum(axis=1), 0.0, atol=1e-12)

        mean, varx, _vary = harmonic.layer_marginal(state, 1)
        assert abs(x[:, 0].mean() - mean) < 5.0 * math.sqrt(varx / 4000)
