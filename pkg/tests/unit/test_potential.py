import math

import numpy as np
import pytest

from dipolar_chains import exceptions
from dipolar_chains import potential


class TestCriticalAngles(object):
    def test_values(self):
        result = potential.critical_angles()

        assert math.sin(result.theta_c) ** 2 == pytest.approx(1.0 / 3.0)
        assert math.cos(result.theta_c_star) ** 2 == pytest.approx(1.0 / 3.0)
        assert result.theta_c < math.pi / 4 < result.theta_c_star


class TestModelConfig(object):
    def test_init(self):
        result = potential.ModelConfig(1.0, 3)

        assert result.theta == 1.0
        assert result.strength_u == 3.0
        assert result.layer_spacing == 1.0

    def test_bad_theta(self):
        with pytest.raises(exceptions.ValidationError):
            potential.ModelConfig(-0.1, 1.0)

    def test_bad_strength(self):
        with pytest.raises(exceptions.ValidationError):
            potential.ModelConfig(1.0, -1.0)

    def test_zero_strength(self):
        result = potential.ModelConfig(1.0, 0.0)

        assert result.strength_u == 0.0

    def test_bad_spacing(self):
        with pytest.raises(exceptions.ValidationError):
            potential.ModelConfig(1.0, 1.0, layer_spacing=2.0)


class TestEvaluate(object):
    def test_perpendicular_origin(self):
        config = potential.ModelConfig(math.pi / 2, 1.0)

        assert potential.evaluate(config, 0.0, 0.0) == pytest.approx(-2.0)

    def test_in_plane_origin(self):
        config = potential.ModelConfig(0.0, 1.0)

        assert potential.evaluate(config, 0.0, 0.0) == pytest.approx(1.0)

    def test_outer_pair(self):
        config = potential.ModelConfig(math.pi / 2, 1.0)

        result = potential.evaluate(config, 0.0, 0.0, pair_distance=2.0)

        assert result == pytest.approx(-0.25)

    def test_linear_in_strength(self):
        one = potential.ModelConfig(0.7, 1.0)
        five = potential.ModelConfig(0.7, 5.0)

        assert (potential.evaluate(five, 0.4, -0.3) ==
                pytest.approx(5.0 * potential.evaluate(one, 0.4, -0.3)))

    def test_pair_distance_scaling(self):
        config = potential.ModelConfig(1.1, 1.0)
        x = np.array([-1.5, 0.2, 0.9])
        y = np.array([0.3, -0.7, 1.2])

        near = potential.evaluate(config, x, y, 1.0)
        outer = potential.evaluate(config, 2.0 * x, 2.0 * y, 2.0)

        assert np.allclose(outer, near / 8.0, rtol=1e-13)

    def test_y_symmetry(self):
        config = potential.ModelConfig(0.6, 2.0)
        x = np.linspace(-3.0, 3.0, 7)

        assert np.allclose(potential.evaluate(config, x, 0.8),
                           potential.evaluate(config, x, -0.8),
                           rtol=1e-14)

    def test_scalar_result(self):
        config = potential.ModelConfig(0.6, 2.0)

        result = potential.evaluate(config, 0.1, 0.2)

        assert isinstance(result, float)

    def test_array_result(self):
        config = potential.ModelConfig(0.6, 2.0)

        result = potential.evaluate(config, np.zeros((2, 3)), 0.0)

        assert result.shape == (2, 3)

    def test_non_finite(self):
        config = potential.ModelConfig(0.6, 2.0)

        with pytest.raises(exceptions.ValidationError):
            potential.evaluate(config, float('nan'), 0.0)

    def test_bad_pair_distance(self):
        config = potential.ModelConfig(0.6, 2.0)

        with pytest.raises(exceptions.ValidationError):
            potential.evaluate(config, 0.0, 0.0, pair_distance=0.0)


class TestGradientX(object):
    def test_finite_difference(self):
        config = potential.ModelConfig(0.9, 3.0)
        step = 1e-6

        for x, y, rho in ((0.3, 0.1, 1.0), (-1.2, 0.5, 1.0),
                          (0.8, -0.4, 2.0)):
            expected = (potential.evaluate(config, x + step, y, rho) -
                        potential.evaluate(config, x - step, y, rho)) / (
                            2.0 * step)

            result = potential.gradient_x(config, x, y, rho)

            assert result == pytest.approx(expected, rel=1e-6, abs=1e-8)

    def test_over_tilt_angles(self):
        step = 1e-3
        for theta in np.linspace(0.1, 1.5, 15):
            config = potential.ModelConfig(theta, 1.0)
            for x, y in ((-1.5, 0.0), (-0.4, 0.3), (0.2, 0.0), (1.1, -0.6)):
                values = [potential.evaluate(config, x + k * step, y)
                          for k in (-2, -1, 1, 2)]
                expected = (values[0] - 8.0 * values[1] + 8.0 * values[2] -
                            values[3]) / (12.0 * step)

                result = potential.gradient_x(config, x, y)

                assert result == pytest.approx(expected, rel=1e-8, abs=1e-9)


class TestAngularHarmonics(object):
    def test_reconstruction(self):
        config = potential.ModelConfig(0.8, 2.0)
        radius = 1.3
        phis = np.linspace(0.0, 2.0 * math.pi, 9)

        harm = potential.angular_harmonics(config, radius)
        expected = potential.evaluate(
            config, radius * np.cos(phis), radius * np.sin(phis),
        )

        assert np.allclose(
            harm.monopole + harm.dipole * np.cos(phis) +
            harm.quadrupole * np.cos(2.0 * phis),
            expected, rtol=1e-12, atol=1e-14,
        )

    def test_negative_radius(self):
        config = potential.ModelConfig(0.8, 2.0)

        with pytest.raises(exceptions.ValidationError):
            potential.angular_harmonics(config, -1.0)


class TestAngularMonopole(object):
    def test_vanishes_at_theta_c(self):
        config = potential.ModelConfig(potential.THETA_C, 4.0)
        radii = np.linspace(0.0, 5.0, 11)

        result = potential.angular_monopole(config, radii)

        assert np.all(np.abs(result) < 1e-12)

    def test_perpendicular(self):
        config = potential.ModelConfig(math.pi / 2, 1.0)

        result = potential.angular_monopole(config, 1.0)

        # (r^2 - 2) / (r^2 + 1)^(5/2) at r = 1
        assert result == pytest.approx(-1.0 / 2.0 ** 2.5)


class TestPlaneIntegral(object):
    def test_vanishes(self):
        for theta in (0.0, 0.5, potential.THETA_C_STAR, math.pi / 2):
            config = potential.ModelConfig(theta, 1.0)

            result = potential.plane_integral(config, 20.0)

            assert abs(result) < 1e-5

    def test_outer_pair(self):
        config = potential.ModelConfig(1.0, 1.0)

        result = potential.plane_integral(config, 40.0, pair_distance=2.0)

        assert abs(result) < 1e-5

    def test_no_tail(self, mocker):
        mock_log = mocker.patch.object(potential, 'LOG')
        config = potential.ModelConfig(math.pi / 2, 1.0)

        result = potential.plane_integral(config, 20.0, tail=False)

        # The disc misses roughly 2 pi / R
        assert result == pytest.approx(-2.0 * math.pi / 20.0, rel=1e-2)
        assert mock_log.warning.called

    def test_short_cutoff_warns(self, mocker):
        mock_log = mocker.patch.object(potential, 'LOG')
        config = potential.ModelConfig(math.pi / 2, 1.0)

        potential.plane_integral(config, 10.0)

        assert mock_log.warning.called

    def test_bad_cutoff(self):
        config = potential.ModelConfig(math.pi / 2, 1.0)

        with pytest.raises(exceptions.ValidationError):
            potential.plane_integral(config, 0.0)


class TestStationaryPointsOnAxis(object):
    def test_perpendicular(self):
        config = potential.ModelConfig(math.pi / 2, 1.0)

        result = potential.stationary_points_on_axis(config)

        assert [point.kind for point in result] == ['max', 'min', 'max']
        assert result[0].x == pytest.approx(-2.0, abs=1e-8)
        assert result[1].x == pytest.approx(0.0, abs=1e-8)
        assert result[1].value == pytest.approx(-2.0)
        assert result[2].x == pytest.approx(2.0, abs=1e-8)

    def test_in_plane(self):
        config = potential.ModelConfig(0.0, 1.0)

        result = potential.stationary_points_on_axis(config)

        minima = [point for point in result if point.kind == 'min']
        assert len(minima) == 2
        assert minima[0].x == pytest.approx(-math.sqrt(1.5), abs=1e-8)
        assert minima[1].x == pytest.approx(math.sqrt(1.5), abs=1e-8)
        assert minima[0].value == pytest.approx(minima[1].value, rel=1e-10)
        assert [point.kind for point in result
                if abs(point.x) < 1e-8] == ['max']

    def test_two_minima_below_theta_c_star(self):
        config = potential.ModelConfig(math.pi / 4, 1.0)

        result = potential.stationary_points_on_axis(config, x_max=20.0)

        minima = [point for point in result if point.kind == 'min']
        assert len(minima) == 2
        shallow, deep = sorted(minima, key=lambda point: -point.value)
        assert deep.x > 0.0
        assert shallow.x < 0.0

    def test_one_minimum_above_theta_c_star(self):
        config = potential.ModelConfig(1.2, 1.0)

        result = potential.stationary_points_on_axis(config, x_max=20.0)

        minima = [point for point in result if point.kind == 'min']
        assert len(minima) == 1
        assert minima[0].x > 0.0

    def test_no_minimum(self):
        config = potential.ModelConfig(0.0, 1.0)

        with pytest.raises(exceptions.NoRootError):
            potential.stationary_points_on_axis(config, x_max=1e-3)


class TestEmitGrid(object):
    def test_layout(self):
        config = potential.ModelConfig(math.pi / 4, 1.0)

        result = potential.emit_grid(config, (-1.0, 1.0), (0.0, 2.0), (3, 2))

        assert result.shape == (6, 3)
        assert result[:3, 1].tolist() == [0.0, 0.0, 0.0]
        assert result[:3, 0].tolist() == [-1.0, 0.0, 1.0]
        assert result[3:, 1].tolist() == [2.0, 2.0, 2.0]
        assert result[4, 2] == pytest.approx(
            potential.evaluate(config, 0.0, 2.0))

    def test_resolution_too_small(self):
        config = potential.ModelConfig(math.pi / 4, 1.0)

        with pytest.raises(exceptions.ValidationError):
            potential.emit_grid(config, (-1.0, 1.0), (-1.0, 1.0), 1)

    def test_numpy_integer_resolution(self):
        config = potential.ModelConfig(math.pi / 4, 1.0)

        result = potential.emit_grid(config, (-1.0, 1.0), (-1.0, 1.0),
                                     np.int64(4))

        assert result.shape == (16, 3)


class TestEmitCut(object):
    def test_layout(self):
        config = potential.ModelConfig(0.5, 1.0)

        result = potential.emit_cut(config, (-2.0, 2.0), 5)

        assert result.shape == (5, 2)
        assert result[:, 0].tolist() == [-2.0, -1.0, 0.0, 1.0, 2.0]
        assert result[2, 1] == pytest.approx(
            potential.evaluate(config, 0.0, 0.0))

    def test_too_few_points(self):
        config = potential.ModelConfig(0.5, 1.0)

        with pytest.raises(exceptions.ValidationError):
            potential.emit_cut(config, (-2.0, 2.0), 1)
