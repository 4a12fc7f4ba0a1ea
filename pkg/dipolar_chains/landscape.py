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
Harmonic expansion of the interlayer potential around its deep
minimum at ``(a0, 0)`` on the x > 0 side::

    V(a0 + w, y) ~ U * (v0 + alpha0 * w^2 + beta0 * y^2)

All coefficients are dimensionless; for a pair at distance ``rho`` the
minimum sits at ``rho * a0`` and the coefficients scale as ``rho^-3``
(``v0``) and ``rho^-5`` (``alpha0``, ``beta0``).
"""

import collections
import math

from dipolar_chains import exceptions
from dipolar_chains import potential
from dipolar_chains import utils


LOG = utils.get_logger(__name__)

# Below this tilt the two minima are too close in depth for a single
# harmonic well
THETA_MIN = 0.05

# Accepted residual of the minimum condition
RESIDUAL_TOL = 1e-12

ALPHA_FORMS = ('curvature', 'printed')


ExpansionCoefficients = collections.namedtuple(
    'ExpansionCoefficients', ['a0', 'v0', 'alpha0', 'beta0'],
)


def _check_expansion_theta(theta):
    """
    Validate a tilt angle for the harmonic expansion.
    """

    theta = utils.check_theta(theta)
    if theta < THETA_MIN:
        raise exceptions.ValidationError(
            'the harmonic expansion needs theta >= %g; below it the two '
            'minima of the potential are nearly degenerate, got %r' %
            (THETA_MIN, theta)
        )

    return theta


def minimum_condition(theta, a0):
    """
    The residual of the minimum condition dV(a, 0)/da = 0 with the
    positive denominator cleared, for unit layer distance.

    :param float theta: The tilt angle.
    :param a0: The candidate minimum position.

    :returns: The residual.
    """

    return potential.axis_numerator(theta, a0, 1.0)


def solve_minimum(theta):
    """
    Locate the deep minimum of ``V(x, 0)`` on the x > 0 side.  The
    brackets come from the stationary-point scan; among the minima at
    x > 0 the deepest one is kept.

    :param float theta: The tilt angle, in ``[0.05, pi/2]``.

    :returns: The dimensionless minimum position ``a0``.
    :rtype: ``float``

    :raises dipolar_chains.ValidationError:
        The angle is outside the expansion domain.
    :raises dipolar_chains.NoRootError:
        No minimum was found.
    """

    theta = _check_expansion_theta(theta)
    if theta == math.pi / 2:
        return 0.0

    config = potential.ModelConfig(theta, 1.0)
    minima = [
        point for point in potential.stationary_points_on_axis(config)
        if point.kind == 'min' and point.x > 0.0
    ]
    if not minima:
        raise exceptions.NoRootError(
            'No minimum of V(x, 0) at x > 0 for theta=%r' % theta
        )

    a0 = min(minima, key=lambda point: point.value).x

    residual = minimum_condition(theta, a0)
    if abs(residual) > RESIDUAL_TOL:
        raise exceptions.NoRootError(
            'Minimum condition residual %.3g at a0=%r exceeds %g' %
            (residual, a0, RESIDUAL_TOL)
        )

    return a0


def printed_alpha0(theta, a0=None):
    """
    The x-curvature factor in the closed form as it is usually quoted.
    It agrees with the Taylor coefficient at ``theta = pi/2`` but not
    in general; it is kept to reproduce the quoted value 2.66 at
    ``theta_c_star``.

    :param float theta: The tilt angle.
    :param float a0: The minimum position; solved for if omitted.

    :returns: The printed-form ``alpha0``.
    :rtype: ``float``
    """

    if a0 is None:
        a0 = solve_minimum(theta)

    cos, sin = math.cos(theta), math.sin(theta)
    quad = 1.0 + a0 * a0
    lin = a0 * cos + sin
    numer = quad - 3.0 * lin * lin

    return (1.0 - 3.0 * cos * cos +
            (30.0 * a0 * a0 - 5.0) * numer / (2.0 * quad) -
            5.0 * a0 * (2.0 * a0 - 6.0 * cos * lin) / (2.0 * quad * quad)
            ) / quad ** 2.5


def expansion_coefficients(theta, alpha_form='curvature'):
    """
    Compute the harmonic expansion coefficients.

    :param float theta: The tilt angle, in ``[0.05, pi/2]``.
    :param str alpha_form: "curvature" (the default) returns half the
                           second x-derivative at the minimum;
                           "printed" returns ``printed_alpha0()``.

    :returns: The expansion coefficients.
    :rtype: ``ExpansionCoefficients``
    """

    if alpha_form not in ALPHA_FORMS:
        raise exceptions.ValidationError(
            'alpha_form must be one of %s, got %r' %
            (', '.join(ALPHA_FORMS), alpha_form)
        )

    a0 = solve_minimum(theta)

    cos, sin = math.cos(theta), math.sin(theta)
    quad = 1.0 + a0 * a0
    lin = a0 * cos + sin
    numer = quad - 3.0 * lin * lin
    dnumer = 2.0 * a0 - 6.0 * cos * lin

    v0 = numer / quad ** 2.5
    beta0 = -1.5 * (quad - 5.0 * lin * lin) / quad ** 3.5

    if alpha_form == 'printed':
        alpha0 = printed_alpha0(theta, a0)
    else:
        alpha0 = (1.0 - 3.0 * cos * cos - 5.0 * a0 * dnumer / quad -
                  2.5 * numer / quad +
                  17.5 * a0 * a0 * numer / (quad * quad)) / quad ** 2.5

    return ExpansionCoefficients(a0, v0, alpha0, beta0)


def two_body_expansion_energy(theta, strength_u, alpha_form='curvature'):
    """
    The ground-state energy of an adjacent-layer pair in the harmonic
    expansion: the well depth plus the zero-point energies of the two
    relative-motion oscillators (reduced mass m/2).

    :param float theta: The tilt angle.
    :param float strength_u: The dipolar strength, ``U > 0``.
    :param str alpha_form: See ``expansion_coefficients()``.

    :returns: The energy in units of hbar^2/(m d^2).
    :rtype: ``float``
    """

    strength_u = utils.check_positive('strength_u', strength_u)
    coeffs = expansion_coefficients(theta, alpha_form)
    root_u = math.sqrt(strength_u)

    return (strength_u * coeffs.v0 +
            root_u * (math.sqrt(coeffs.alpha0) + math.sqrt(coeffs.beta0)))


def harmonic_pair_widths(coeffs, strength_u, pair_distance=1.0):
    """
    The Gaussian ground state of the expanded pair potential at a
    given pair distance, ``exp(-alpha/2 (w - shift)^2 - beta/2 y^2)``.

    :param coeffs: The expansion coefficients.
    :type coeffs: ``ExpansionCoefficients``
    :param float strength_u: The dipolar strength.
    :param float pair_distance: The interlayer distance of the pair.

    :returns: A tuple ``(alpha, beta, shift)``.
    :rtype: ``tuple``
    """

    scale = strength_u / pair_distance ** 5

    return (
        math.sqrt(scale * coeffs.alpha0),
        math.sqrt(scale * coeffs.beta0),
        coeffs.a0 * pair_distance,
    )


def sweep(thetas, alpha_form='curvature'):
    """
    Tabulate the expansion coefficients over a set of tilt angles.

    :param thetas: The tilt angles.
    :param str alpha_form: See ``expansion_coefficients()``.

    :returns: Rows ``(theta, a0, v0, alpha0, beta0)``.
    :rtype: ``list`` of ``tuple``
    """

    rows = []
    for theta in thetas:
        coeffs = expansion_coefficients(theta, alpha_form)
        LOG.debug('theta=%r: %r', theta, coeffs)
        rows.append((float(theta),) + tuple(coeffs))

    return rows
