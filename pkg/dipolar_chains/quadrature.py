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
Expectation values of the interlayer potential under 2D Gaussian
weights.

The default "laplace" kernel uses::

    Q^(-5/2) = 1/Gamma(5/2) * integral_0^inf t^(3/2) exp(-t Q) dt

which turns the Gaussian-weighted integral over the plane into closed
form, leaving a one-dimensional integral over ``u = log(t)``.  That
integrand decays doubly exponentially at both ends, so the trapezoid
rule converges geometrically in the step size no matter how broad or
narrow the Gaussian is.  The "hermite" kernel is the tensor-product
Gauss-Hermite rule in standardized variables.
"""

import collections
import math

import numpy as np
from numpy.polynomial import hermite
from scipy import integrate

from dipolar_chains import exceptions
from dipolar_chains import harmonic
from dipolar_chains import potential
from dipolar_chains import utils


LOG = utils.get_logger(__name__)

METHODS = ('laplace', 'hermite')

PAIR_DISTANCES = (1.0, 2.0)

# Convergence criteria shared by both kernels
REL_TOL = 1e-9
ABS_TOL = 1e-12

# Trapezoid steps in log(t)
STEP_START = 0.5
STEP_MIN = 1.0 / 32.0

HERMITE_NODES = (32, 64, 128, 256)

_GAMMA_5_2 = 0.75 * math.sqrt(math.pi)


class PairMarginal(collections.namedtuple(
        'PairMarginal',
        ['mean_x', 'variance_x', 'variance_y', 'pair_distance'])):
    """
    The Gaussian distribution of one pair's relative coordinate.  The
    y mean is zero for every state of interest.
    """

    __slots__ = ()

    def __new__(cls, mean_x, variance_x, variance_y, pair_distance=1.0):
        mean_x = utils.check_finite('mean_x', mean_x)
        variance_x = utils.check_positive('variance_x', variance_x)
        variance_y = utils.check_positive('variance_y', variance_y)
        pair_distance = utils.check_finite('pair_distance', pair_distance)
        if pair_distance not in PAIR_DISTANCES:
            raise exceptions.ValidationError(
                'pair_distance must be 1 or 2, got %r' % pair_distance
            )

        return super(PairMarginal, cls).__new__(
            cls, mean_x, variance_x, variance_y, pair_distance,
        )


def _converged(new, old):
    """
    Test successive estimates against the shared tolerances.
    """

    return np.all(
        np.abs(new - old) <= np.maximum(REL_TOL * np.abs(new), ABS_TOL)
    )


def _worst(old, new):
    """
    Select the estimates of the marginal with the largest discrepancy.
    """

    idx = int(np.argmax(np.abs(new - old)))

    return float(old[idx]), float(new[idx])


def _laplace_integrand(u, theta, mean, varx, vary, rho):
    """
    The integrand over ``u = log(t)``; the marginal arrays broadcast
    against ``u`` along the last axis.
    """

    cos, sin = math.cos(theta), math.sin(theta)
    t = np.exp(u)

    denx = 1.0 + 2.0 * t * varx
    deny = 1.0 + 2.0 * t * vary
    mu = mean / denx
    weight = np.exp(-t * (rho * rho + mean * mean / denx)) / np.sqrt(
        denx * deny
    )
    numer = ((1.0 - 3.0 * cos * cos) * (mu * mu + varx / denx) +
             vary / deny - 6.0 * cos * sin * rho * mu +
             rho * rho * (1.0 - 3.0 * sin * sin))

    return t ** 2.5 * weight * numer / _GAMMA_5_2


def _laplace(theta, mean, varx, vary, rho):
    """
    Evaluate the unit-strength expectation with the Laplace kernel.
    """

    scale = rho * rho + mean * mean + varx + vary
    lower = math.log(1e-7 / float(np.max(scale)))
    upper = math.log(60.0 / float(np.min(rho * rho)))

    cols = (mean[:, None], varx[:, None], vary[:, None], rho[:, None])
    step = STEP_START
    last = None
    while True:
        count = int(math.ceil((upper - lower) / step)) + 1
        grid = lower + step * np.arange(count)
        estimate = integrate.trapezoid(
            _laplace_integrand(grid, theta, *cols), dx=step, axis=-1,
        )

        if last is not None and _converged(estimate, last):
            return estimate

        if step <= STEP_MIN:
            raise exceptions.QuadratureError(
                'Laplace kernel did not converge at step %g' % step,
                _worst(last, estimate),
            )

        LOG.debug('laplace kernel: halving step %g', step)
        last = estimate
        step *= 0.5


def _hermite(theta, mean, varx, vary, rho):
    """
    Evaluate the unit-strength expectation with tensor-product
    Gauss-Hermite rules of increasing order.
    """

    last = None
    for nodes in HERMITE_NODES:
        xi, wi = hermite.hermgauss(nodes)
        weight = np.outer(wi, wi) / math.pi
        xs = (mean[:, None, None] +
              np.sqrt(2.0 * varx)[:, None, None] * xi[None, :, None])
        ys = np.sqrt(2.0 * vary)[:, None, None] * xi[None, None, :]
        values = potential.shape(theta, xs, ys, rho[:, None, None])
        estimate = np.sum(values * weight, axis=(1, 2))

        if last is not None and _converged(estimate, last):
            return estimate

        LOG.debug('hermite kernel: %d nodes not converged', nodes)
        previous, last = last, estimate

    raise exceptions.QuadratureError(
        'Gauss-Hermite rule did not converge with %d nodes' %
        HERMITE_NODES[-1], _worst(previous, last),
    )


_KERNELS = {
    'laplace': _laplace,
    'hermite': _hermite,
}


def expect_potential_many(marginals, theta, strength_u, method='laplace'):
    """
    Evaluate the potential expectation for many pair marginals at
    once.

    :param marginals: The pair marginals.
    :type marginals: ``list`` of ``PairMarginal``
    :param float theta: The tilt angle.
    :param float strength_u: The dipolar strength ``U >= 0``.
    :param str method: The kernel, "laplace" (the default) or
                       "hermite".

    :returns: The expectations, in order.
    :rtype: ``numpy.ndarray``

    :raises dipolar_chains.QuadratureError:
        The kernel did not converge; the error carries the last two
        estimates.
    """

    if method not in _KERNELS:
        raise exceptions.ValidationError(
            'quadrature method must be one of %s, got %r' %
            (', '.join(METHODS), method)
        )
    theta = utils.check_theta(theta)
    strength_u = utils.check_positive('strength_u', strength_u, strict=False)

    if not marginals:
        return np.zeros(0)

    table = np.array([tuple(marg) for marg in marginals], dtype=float)
    unit = _KERNELS[method](theta, *table.T)

    return strength_u * unit


def expect_potential(marginal, theta, strength_u, method='laplace'):
    """
    Evaluate ``<V>`` for one pair whose relative coordinate is
    distributed as ``N(x; mean_x, variance_x) N(y; 0, variance_y)``.

    :param marginal: The pair marginal.
    :type marginal: ``PairMarginal``
    :param float theta: The tilt angle.
    :param float strength_u: The dipolar strength ``U >= 0``.
    :param str method: The kernel, "laplace" (the default) or
                       "hermite".

    :returns: The expectation value; exactly linear in ``strength_u``.
    :rtype: ``float``
    """

    return float(
        expect_potential_many([marginal], theta, strength_u, method)[0]
    )


def pair_coordinate(pair, modes):
    """
    The coefficients of a pair's relative coordinate in Jacobi
    coordinates.

    :param tuple pair: The pair ``(i, j)``.
    :param int modes: The number of Jacobi modes per direction: 1 for
                      two bodies, 2 for three.

    :returns: The coefficient vector.
    :rtype: ``numpy.ndarray``
    """

    if modes == 1:
        if tuple(pair) != (1, 2):
            raise exceptions.ValidationError(
                'A two-body system has only the pair (1, 2), got %r' %
                (pair,)
            )

        # q = (x1 - x2) / sqrt(2)
        return np.array([math.sqrt(2.0)])

    return harmonic.pair_vector(pair)


def gaussian_product_marginal(x_precision, x_mean, y_precision, pair):
    """
    Project the Gaussian ``exp(-1/2 (q - m)^T P (q - m))`` in Jacobi
    coordinates onto one pair's relative coordinate.

    :param x_precision: The precision matrix of the x sector.
    :param x_mean: The mean of the x sector.
    :param y_precision: The precision matrix of the y sector.
    :param tuple pair: The pair ``(i, j)``; the pair distance is
                       ``|i - j|``.

    :returns: The pair marginal.
    :rtype: ``PairMarginal``

    :raises dipolar_chains.NotPositiveDefinite:
        A precision matrix is degenerate.
    """

    x_precision = np.atleast_2d(np.asarray(x_precision, dtype=float))
    y_precision = np.atleast_2d(np.asarray(y_precision, dtype=float))
    x_mean = np.atleast_1d(np.asarray(x_mean, dtype=float))

    for form in (x_precision, y_precision):
        eigs = np.linalg.eigvalsh(form)
        if eigs[0] <= 1e-14 * eigs[-1] or eigs[0] <= 0.0:
            raise exceptions.NotPositiveDefinite(
                'Degenerate Gaussian form', eigs,
            )

    vec = pair_coordinate(pair, len(x_mean))

    return PairMarginal(
        float(vec @ x_mean),
        float(vec @ np.linalg.solve(x_precision, vec)),
        float(vec @ np.linalg.solve(y_precision, vec)),
        float(abs(pair[0] - pair[1])),
    )
