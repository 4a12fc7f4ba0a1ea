# Copyright (C) 2019 by the dipolar-chains developers
#
# Licensed under the Apache License, Version 2.0 (the "License"); you
# may not use this file except in compliance with the License. You may
# obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
# implied. See the License for the specific language governing
# permissions and limitations under the License.

"""
The interlayer dipole-dipole potential.

Two molecules with dipole moment ``D``, tilted by ``theta`` out of the
layer plane towards +x, sit in parallel layers a distance ``rho`` apart.
With lengths in units of the layer spacing ``d`` and energies in units
of hbar^2/(m d^2), the potential between them is::

    V(x, y) = U * (x^2 + y^2 + rho^2 - 3 (x cos(theta) + rho sin(theta))^2)
                / (x^2 + y^2 + rho^2)^(5/2)

where ``U = m D^2 / (hbar^2 d)`` and ``rho`` is 1 for adjacent layers
and 2 for next-nearest layers.
"""

import collections
import math
import numbers

import numpy as np
from scipy import integrate
from scipy import optimize

from dipolar_chains import exceptions
from dipolar_chains import utils


LOG = utils.get_logger(__name__)

# Critical tilt angles: sin^2 = 1/3 and cos^2 = 1/3
THETA_C = math.asin(1.0 / math.sqrt(3.0))
THETA_C_STAR = math.acos(1.0 / math.sqrt(3.0))

# Half-width of the on-axis stationary point scan, in units of d
X_MAX = 10.0


CriticalAngles = collections.namedtuple(
    'CriticalAngles', ['theta_c', 'theta_c_star'],
)

StationaryPoint = collections.namedtuple(
    'StationaryPoint', ['x', 'value', 'kind'],
)

AngularHarmonics = collections.namedtuple(
    'AngularHarmonics', ['monopole', 'dipole', 'quadrupole'],
)


def critical_angles():
    """
    Return the two critical tilt angles.

    :returns: ``theta_c`` (vanishing monopole) and ``theta_c_star``
              (end of the two-minima regime).
    :rtype: ``CriticalAngles``
    """

    return CriticalAngles(THETA_C, THETA_C_STAR)


class ModelConfig(collections.namedtuple(
        'ModelConfig', ['theta', 'strength_u', 'layer_spacing'])):
    """
    The physical parameterization of the layered system: the tilt
    angle ``theta`` in ``[0, pi/2]``, the dimensionless dipolar
    strength ``strength_u`` and the layer spacing, which is the unit of
    length and therefore always 1.
    """

    __slots__ = ()

    def __new__(cls, theta, strength_u, layer_spacing=1.0):
        """
        Construct and validate a ``ModelConfig``.

        :param float theta: The tilt angle in radians.
        :param float strength_u: The dipolar strength ``U >= 0``.
        :param float layer_spacing: The layer spacing; must be 1.

        :raises dipolar_chains.ValidationError:
            A parameter is out of range.
        """

        theta = utils.check_theta(theta)
        strength_u = utils.check_positive(
            'strength_u', strength_u, strict=False,
        )
        if utils.check_finite('layer_spacing', layer_spacing) != 1.0:
            raise exceptions.ValidationError(
                'layer_spacing is the unit of length and must be 1, got %r' %
                layer_spacing
            )

        return super(ModelConfig, cls).__new__(
            cls, theta, strength_u, 1.0,
        )


def _check_array(name, value):
    """
    Convert coordinates to a float array, rejecting non-finite entries.
    """

    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise exceptions.ValidationError('%s must be finite' % name)

    return arr


def _scalar(arr):
    """
    Return plain floats for zero-dimensional results.
    """

    return float(arr) if np.ndim(arr) == 0 else arr


def shape(theta, x, y, pair_distance=1.0):
    """
    The potential for ``U = 1``, without input validation.  Accepts
    numpy arrays.

    :param float theta: The tilt angle.
    :param x: The x separation.
    :param y: The y separation.
    :param float pair_distance: The interlayer distance of the pair.

    :returns: The potential in units of hbar^2/(m d^2) per unit ``U``.
    """

    cos, sin = math.cos(theta), math.sin(theta)
    quad = x * x + y * y + pair_distance * pair_distance
    lin = x * cos + pair_distance * sin

    return (quad - 3.0 * lin * lin) / quad ** 2.5


def evaluate(config, x, y, pair_distance=1.0):
    """
    Evaluate the interlayer potential.

    :param config: The model parameters.
    :type config: ``ModelConfig``
    :param x: The x separation (scalar or array).
    :param y: The y separation (scalar or array).
    :param float pair_distance: The interlayer distance of the pair:
                                1 for adjacent layers, 2 for the outer
                                pair of a three-layer chain.

    :returns: The potential energy.

    :raises dipolar_chains.ValidationError:
        An input is non-finite or the pair distance is not positive.
    """

    x = _check_array('x', x)
    y = _check_array('y', y)
    pair_distance = utils.check_positive('pair_distance', pair_distance)

    return _scalar(
        config.strength_u * shape(config.theta, x, y, pair_distance)
    )


def gradient_x(config, x, y, pair_distance=1.0):
    """
    Evaluate the analytic derivative of the potential along x.

    :param config: The model parameters.
    :type config: ``ModelConfig``
    :param x: The x separation (scalar or array).
    :param y: The y separation (scalar or array).
    :param float pair_distance: The interlayer distance of the pair.

    :returns: dV/dx.
    """

    x = _check_array('x', x)
    y = _check_array('y', y)
    rho = utils.check_positive('pair_distance', pair_distance)

    cos, sin = math.cos(config.theta), math.sin(config.theta)
    quad = x * x + y * y + rho * rho
    lin = x * cos + rho * sin
    numer = quad - 3.0 * lin * lin

    result = ((2.0 * x - 6.0 * cos * lin) / quad ** 2.5 -
              5.0 * x * numer / quad ** 3.5)

    return _scalar(config.strength_u * result)


def axis_numerator(theta, x, pair_distance=1.0):
    """
    The numerator of dV(x, 0)/dx; the denominator (x^2 + rho^2)^(7/2)
    is positive, so the sign and the zeros coincide with those of the
    derivative.  For ``pair_distance = 1`` this is the minimum
    condition of the harmonic expansion.

    :param float theta: The tilt angle.
    :param x: The x separation (scalar or array).
    :param float pair_distance: The interlayer distance of the pair.

    :returns: The numerator value.
    """

    cos, sin = math.cos(theta), math.sin(theta)
    rho2 = pair_distance * pair_distance
    lin = x * cos + pair_distance * sin

    return (15.0 * x * lin * lin - 3.0 * x * (x * x + rho2) -
            6.0 * cos * (x * x + rho2) * lin)


def angular_harmonics(config, r, pair_distance=1.0):
    """
    Decompose the potential on a circle of radius ``r`` into its
    angular harmonics.  Only 1, cos(phi) and cos(2 phi) appear.

    :param config: The model parameters.
    :type config: ``ModelConfig``
    :param r: The radius (scalar or array, ``r >= 0``).
    :param float pair_distance: The interlayer distance of the pair.

    :returns: The monopole, dipole and quadrupole coefficients.
    :rtype: ``AngularHarmonics``
    """

    r = _check_array('r', r)
    if np.any(r < 0):
        raise exceptions.ValidationError('r must be non-negative')
    rho = utils.check_positive('pair_distance', pair_distance)

    cos, sin = math.cos(config.theta), math.sin(config.theta)
    rho2 = rho * rho
    denom = (r * r + rho2) ** 2.5
    strength = config.strength_u

    # <cos^2 phi> = 1/2 and <cos phi> = 0 over the circle
    monopole = ((1.0 - 1.5 * cos * cos) * r * r +
                (1.0 - 3.0 * sin * sin) * rho2) / denom
    dipole = -6.0 * r * rho * cos * sin / denom
    quadrupole = -1.5 * r * r * cos * cos / denom

    return AngularHarmonics(
        _scalar(strength * monopole),
        _scalar(strength * dipole),
        _scalar(strength * quadrupole),
    )


def angular_monopole(config, r, pair_distance=1.0):
    """
    The angular average of the potential over a circle of radius
    ``r``.  It vanishes identically at the critical angle ``theta_c``.

    :param config: The model parameters.
    :type config: ``ModelConfig``
    :param r: The radius (scalar or array, ``r >= 0``).
    :param float pair_distance: The interlayer distance of the pair.

    :returns: The monopole term.
    """

    return angular_harmonics(config, r, pair_distance).monopole


def plane_integral(config, radial_cutoff, pair_distance=1.0, tail=True,
                   tolerance=1e-4):
    """
    Integrate the potential over the plane.  The disc of radius
    ``radial_cutoff`` is integrated numerically through the angular
    monopole; beyond it the two leading far-field orders of the
    monopole, which decays as r^-3, are added analytically.  The exact
    value is zero for every tilt angle.

    :param config: The model parameters.
    :type config: ``ModelConfig``
    :param float radial_cutoff: The disc radius, in units of d.
    :param float pair_distance: The interlayer distance of the pair.
    :param bool tail: If ``False``, the far-field tail is omitted and
                      the bare disc integral is returned.
    :param float tolerance: The target accuracy; a warning is logged
                            when the estimated truncation error
                            exceeds it.

    :returns: The integral, in units of energy times length squared.
    :rtype: ``float``
    """

    cutoff = utils.check_positive('radial_cutoff', radial_cutoff)
    rho = utils.check_positive('pair_distance', pair_distance)

    cos, sin = math.cos(config.theta), math.sin(config.theta)
    lead = 1.0 - 1.5 * cos * cos
    const = 1.0 - 3.0 * sin * sin
    rho2 = rho * rho

    def integrand(r):
        return (2.0 * math.pi * r * (lead * r * r + const * rho2) /
                (r * r + rho2) ** 2.5)

    disc, _err = integrate.quad(
        integrand, 0.0, cutoff, epsabs=1e-13, epsrel=1e-12, limit=500,
    )

    # Far-field orders r^-3 and r^-5 of the monopole, integrated out
    first = 2.0 * math.pi * lead / cutoff
    second = 2.0 * math.pi * rho2 * (const - 2.5 * lead) / (3.0 * cutoff ** 3)
    if tail:
        result = disc + first + second
        error = abs(math.pi * (1.75 * lead - const) * rho2 * rho2 /
                    cutoff ** 5)
    else:
        result = disc
        error = abs(first + second)

    if error > tolerance:
        LOG.warning(
            'plane integral at cutoff %g has estimated truncation error '
            '%.3g above tolerance %.3g', cutoff, error, tolerance,
        )

    return config.strength_u * result


def _scan_grid(x_max, points):
    """
    A symmetric scan grid, log-spaced away from the origin.
    """

    positive = np.logspace(-8, math.log10(x_max), points)
    return np.concatenate((-positive[::-1], [0.0], positive))


def stationary_points_on_axis(config, x_max=X_MAX, points=4000,
                              pair_distance=1.0):
    """
    Locate all stationary points of ``x -> V(x, 0)`` on
    ``[-x_max, x_max]``.  Sign changes of the derivative are bracketed
    on a log-spaced scan and refined with Brent's method; minima and
    maxima are told apart by the direction of the sign change, which
    is the sign of the second derivative.

    :param config: The model parameters.
    :type config: ``ModelConfig``
    :param float x_max: The half-width of the scan.
    :param int points: The number of scan points on each side.
    :param float pair_distance: The interlayer distance of the pair.

    :returns: The stationary points, sorted by x.
    :rtype: ``list`` of ``StationaryPoint``

    :raises dipolar_chains.NoRootError:
        No minimum was found.
    """

    x_max = utils.check_positive('x_max', x_max)
    rho = utils.check_positive('pair_distance', pair_distance)
    theta = config.theta

    def numer(x):
        return axis_numerator(theta, x, rho)

    grid = _scan_grid(x_max, points)
    values = numer(grid)

    roots = []
    for i in range(len(grid) - 1):
        left, right = values[i], values[i + 1]
        if left == 0.0:
            roots.append((grid[i], None))
            continue
        if left * right < 0.0:
            root = optimize.brentq(numer, grid[i], grid[i + 1], xtol=1e-14)
            roots.append((root, right > 0.0))

    result = []
    for root, rising in roots:
        if rising is None:
            # Exact zero on the grid; classify from the neighbors
            step = 1e-7 * max(1.0, abs(root))
            rising = numer(root + step) > numer(root - step)
        result.append(StationaryPoint(
            float(root),
            evaluate(config, root, 0.0, rho),
            'min' if rising else 'max',
        ))

    if not any(point.kind == 'min' for point in result):
        raise exceptions.NoRootError(
            'No minimum of V(x, 0) found on [-%g, %g] at theta=%r' %
            (x_max, x_max, theta)
        )

    LOG.debug('theta=%r: stationary points %r', theta, result)

    return result


def emit_grid(config, x_range, y_range, resolution, pair_distance=1.0):
    """
    Tabulate the potential on a rectangular grid, row-major in y.

    :param config: The model parameters.
    :type config: ``ModelConfig``
    :param tuple x_range: The ``(min, max)`` of x.
    :param tuple y_range: The ``(min, max)`` of y.
    :param resolution: The number of points per axis, either one
                       integer or an ``(nx, ny)`` pair; at least 2.
    :param float pair_distance: The interlayer distance of the pair.

    :returns: An array of rows ``(x, y, V)``.
    :rtype: ``numpy.ndarray``
    """

    if isinstance(resolution, numbers.Integral):
        nx = ny = resolution
    else:
        nx, ny = resolution
    if nx < 2 or ny < 2:
        raise exceptions.ValidationError(
            'resolution must be at least 2 per axis, got %r' % (resolution,)
        )

    xs = np.linspace(x_range[0], x_range[1], nx)
    ys = np.linspace(y_range[0], y_range[1], ny)
    yy, xx = np.meshgrid(ys, xs, indexing='ij')
    values = evaluate(config, xx, yy, pair_distance)

    return np.column_stack((xx.ravel(), yy.ravel(), values.ravel()))


def emit_cut(config, x_range, points, pair_distance=1.0):
    """
    Tabulate the potential along the y = 0 axis.

    :param config: The model parameters.
    :type config: ``ModelConfig``
    :param tuple x_range: The ``(min, max)`` of x.
    :param int points: The number of points, at least 2.
    :param float pair_distance: The interlayer distance of the pair.

    :returns: An array of rows ``(x, V)``.
    :rtype: ``numpy.ndarray``
    """

    if points < 2:
        raise exceptions.ValidationError(
            'points must be at least 2, got %r' % points
        )

    xs = np.linspace(x_range[0], x_range[1], points)

    return np.column_stack((xs, evaluate(config, xs, 0.0, pair_distance)))
