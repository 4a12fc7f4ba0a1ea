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
The exactly solvable three-body harmonic chain.

Molecule 1 sits in the top layer, 2 in the middle and 3 in the bottom
one.  Each pair ``(i, j)`` contributes::

    kx (x_i - x_j - s)^2 + ky (y_i - y_j)^2 + c

With the center of mass removed, the relative motion lives on two
orthonormal Jacobi coordinates per direction::

    q1 = (x1 - x3) / sqrt(2)
    q2 = (x1 + x3 - 2 x2) / sqrt(6)

each carrying the molecular mass, so the kinetic energy is
``-1/2 (d^2/dq1^2 + d^2/dq2^2)`` in units of hbar^2/(m d^2).
"""

import collections
import math

import numpy as np

from dipolar_chains import exceptions
from dipolar_chains import utils


LOG = utils.get_logger(__name__)

PAIRS = ((1, 2), (2, 3), (1, 3))

# Rows map Jacobi coordinates back to particle coordinates (CoM = 0)
_PARTICLES = np.array([
    [1.0 / math.sqrt(2.0), 1.0 / math.sqrt(6.0)],
    [0.0, -2.0 / math.sqrt(6.0)],
    [-1.0 / math.sqrt(2.0), 1.0 / math.sqrt(6.0)],
])

# Relative coordinates of each pair in Jacobi coordinates
_PAIR_VECTORS = {
    pair: _PARTICLES[pair[0] - 1] - _PARTICLES[pair[1] - 1]
    for pair in PAIRS
}


JacobiTransform = collections.namedtuple(
    'JacobiTransform', ['to_jacobi', 'to_particles', 'pair_vectors'],
)

PairTerm = collections.namedtuple(
    'PairTerm', ['coupling_x', 'coupling_y', 'shift_x', 'constant'],
)

DirectionSolution = collections.namedtuple(
    'DirectionSolution',
    ['form', 'center', 'frequencies', 'modes', 'residual'],
)


def jacobi_transform():
    """
    Return the fixed orthogonal map between particle coordinates and
    Jacobi coordinates.

    :returns: ``to_jacobi`` (2x3, rows q1 and q2), ``to_particles``
              (3x2, valid on the zero center-of-mass subspace) and the
              ``pair_vectors`` mapping each pair to the coefficients
              of ``x_i - x_j`` in (q1, q2).
    :rtype: ``JacobiTransform``
    """

    return JacobiTransform(
        _PARTICLES.T.copy(),
        _PARTICLES.copy(),
        {pair: vec.copy() for pair, vec in _PAIR_VECTORS.items()},
    )


def pair_vector(pair):
    """
    The coefficients of ``x_i - x_j`` in Jacobi coordinates.

    :param tuple pair: The pair ``(i, j)``; either order is accepted.

    :returns: A length-2 array.
    :rtype: ``numpy.ndarray``
    """

    pair = tuple(pair)
    if pair in _PAIR_VECTORS:
        return _PAIR_VECTORS[pair]
    if pair[::-1] in _PAIR_VECTORS:
        return -_PAIR_VECTORS[pair[::-1]]

    raise exceptions.ValidationError('Unknown pair %r' % (pair,))


class HarmonicChainModel(object):
    """
    A three-body harmonic chain: one ``PairTerm`` for each of the
    pairs (1, 2), (2, 3) and (1, 3).
    """

    def __init__(self, pairs):
        """
        Initialize a ``HarmonicChainModel`` instance.

        :param pairs: The pair terms.
        :type pairs: ``dict`` mapping ``tuple`` to ``PairTerm``

        :raises dipolar_chains.ValidationError:
            A pair is missing or has a non-positive coupling.
        """

        self.pairs = {}
        for pair in PAIRS:
            if pair not in pairs:
                raise exceptions.ValidationError(
                    'Missing pair term %r' % (pair,)
                )
            term = PairTerm(*(
                utils.check_finite('%s%r' % (field, pair), value)
                for field, value in zip(PairTerm._fields, pairs[pair])
            ))
            if term.coupling_x <= 0 or term.coupling_y <= 0:
                raise exceptions.ValidationError(
                    'Couplings of pair %r must be positive, got %r' %
                    (pair, term)
                )
            self.pairs[pair] = term

    def __repr__(self):
        return '<%s %r>' % (self.__class__.__name__, self.pairs)

    @property
    def constant(self):
        """
        The sum of the pair constants.
        """

        return sum(term.constant for term in self.pairs.values())

    def quadratic_form(self, direction):
        """
        Write the potential along one direction as
        ``q^T A q - 2 b^T q + c`` in Jacobi coordinates.

        :param str direction: Either "x" or "y".

        :returns: A tuple ``(A, b, c)``.
        """

        form = np.zeros((2, 2))
        lin = np.zeros(2)
        const = 0.0
        for pair, term in self.pairs.items():
            vec = _PAIR_VECTORS[pair]
            if direction == 'x':
                coupling, shift = term.coupling_x, term.shift_x
            else:
                coupling, shift = term.coupling_y, 0.0

            form += coupling * np.outer(vec, vec)
            lin += coupling * shift * vec
            const += coupling * shift * shift

        return form, lin, const

    def potential(self, x, y):
        """
        Evaluate the chain potential at particle coordinates.

        :param x: The x coordinates of the three particles.
        :param y: The y coordinates of the three particles.

        :returns: The potential energy.
        :rtype: ``float``
        """

        total = 0.0
        for (i, j), term in self.pairs.items():
            dx = x[i - 1] - x[j - 1] - term.shift_x
            dy = y[i - 1] - y[j - 1]
            total += (term.coupling_x * dx * dx +
                      term.coupling_y * dy * dy + term.constant)

        return total


class ChainGaussian(object):
    """
    A three-body Gaussian in Jacobi coordinates::

        N exp(-1/2 (qx - c)^T Wx (qx - c) - 1/2 qy^T Wy qy)

    ``x_form`` and ``y_form`` are the symmetric width matrices ``Wx``
    and ``Wy`` (units 1/d^2), ``x_center`` is ``c``.
    """

    def __init__(self, x_form, x_center, y_form):
        """
        Initialize a ``ChainGaussian`` instance.

        :param x_form: The 2x2 width matrix of the x sector.
        :param x_center: The x-sector center, length 2.
        :param y_form: The 2x2 width matrix of the y sector.

        :raises dipolar_chains.NotPositiveDefinite:
            A width matrix is not positive-definite.
        """

        self.x_form = np.array(x_form, dtype=float).reshape(2, 2)
        self.x_center = np.array(x_center, dtype=float).reshape(2)
        self.y_form = np.array(y_form, dtype=float).reshape(2, 2)

        for name, form in (('x', self.x_form), ('y', self.y_form)):
            eigs = np.linalg.eigvalsh(form)
            if eigs[0] <= 0.0:
                raise exceptions.NotPositiveDefinite(
                    'Width matrix of the %s sector' % name, eigs,
                )

    def __repr__(self):
        return '<%s x_form=%r x_center=%r y_form=%r>' % (
            self.__class__.__name__, self.x_form.tolist(),
            self.x_center.tolist(), self.y_form.tolist(),
        )

    @property
    def normalization(self):
        """
        The normalization constant ``N``.
        """

        return math.sqrt(
            math.sqrt(np.linalg.det(self.x_form) *
                      np.linalg.det(self.y_form)) / math.pi ** 2
        )

    @property
    def x_covariance(self):
        """
        The covariance of the x-sector Jacobi coordinates under
        ``|Psi|^2``.
        """

        return np.linalg.inv(2.0 * self.x_form)

    @property
    def y_covariance(self):
        """
        The covariance of the y-sector Jacobi coordinates under
        ``|Psi|^2``.
        """

        return np.linalg.inv(2.0 * self.y_form)

    @property
    def widths(self):
        """
        The per-coordinate widths ``(q1x, q2x, q1y, q2y)``: the
        diagonals of the width matrices.
        """

        return (self.x_form[0, 0], self.x_form[1, 1],
                self.y_form[0, 0], self.y_form[1, 1])

    @property
    def kinetic_energy(self):
        """
        The kinetic energy expectation, ``(tr Wx + tr Wy) / 4``.
        """

        return 0.25 * (np.trace(self.x_form) + np.trace(self.y_form))

    def pair_moments(self, pair):
        """
        The distribution of one pair's relative coordinate.

        :param tuple pair: The pair ``(i, j)``.

        :returns: A tuple ``(mean_x, variance_x, variance_y)``.
        """

        vec = pair_vector(pair)

        return (
            float(vec @ self.x_center),
            float(vec @ self.x_covariance @ vec),
            float(vec @ self.y_covariance @ vec),
        )

    def amplitude(self, qx, qy):
        """
        Evaluate the normalized wavefunction.

        :param qx: The x-sector Jacobi coordinates, shape ``(..., 2)``.
        :param qy: The y-sector Jacobi coordinates, shape ``(..., 2)``.

        :returns: The amplitude.
        """

        dqx = np.asarray(qx, dtype=float) - self.x_center
        qy = np.asarray(qy, dtype=float)
        expo = (np.einsum('...i,ij,...j->...', dqx, self.x_form, dqx) +
                np.einsum('...i,ij,...j->...', qy, self.y_form, qy))

        return self.normalization * np.exp(-0.5 * expo)


def build_from_expansion(coeffs, strength_u):
    """
    Build the harmonic chain from the pair expansion.  Adjacent pairs
    get the couplings ``U alpha0`` and ``U beta0`` and shift ``a0``;
    the outer pair, twice as far apart, gets couplings divided by
    2^5, shift ``2 a0`` and depth divided by 2^3.

    :param coeffs: The expansion coefficients.
    :type coeffs: ``dipolar_chains.ExpansionCoefficients``
    :param float strength_u: The dipolar strength.

    :returns: The chain model.
    :rtype: ``HarmonicChainModel``
    """

    strength_u = utils.check_positive('strength_u', strength_u)
    near = PairTerm(
        strength_u * coeffs.alpha0,
        strength_u * coeffs.beta0,
        coeffs.a0,
        strength_u * coeffs.v0,
    )
    outer = PairTerm(
        near.coupling_x / 32.0,
        near.coupling_y / 32.0,
        2.0 * coeffs.a0,
        near.constant / 8.0,
    )

    return HarmonicChainModel({(1, 2): near, (2, 3): near, (1, 3): outer})


def solve_direction(form, lin, const):
    """
    Solve the harmonic problem along one direction by completing the
    square and diagonalizing the quadratic form.

    :param form: The 2x2 matrix ``A``.
    :param lin: The linear coefficients ``b``.
    :param float const: The constant ``c``.

    :returns: The Gaussian width matrix, center, normal-mode
              frequencies and vectors, and the frustration residual
              ``c - b^T A^-1 b``.
    :rtype: ``DirectionSolution``

    :raises dipolar_chains.NotPositiveDefinite:
        The form is not positive-definite.
    """

    eigs, modes = np.linalg.eigh(form)
    if eigs[0] <= 0.0:
        raise exceptions.NotPositiveDefinite(
            'Quadratic form of the chain is not positive-definite', eigs,
        )

    center = np.linalg.solve(form, lin)
    residual = const - float(lin @ center)

    # m = 1 per Jacobi mode: lambda q^2 = 1/2 omega^2 q^2
    freqs = np.sqrt(2.0 * eigs)
    width = modes @ np.diag(freqs) @ modes.T

    return DirectionSolution(0.5 * (width + width.T), center, freqs, modes,
                             residual)


def solve_quadratic_model(model):
    """
    Solve a harmonic chain exactly.

    :param model: The chain model.
    :type model: ``HarmonicChainModel``

    :returns: A tuple ``(energy, state)``: the ground-state energy
              (zero-point energies, pair constants and frustration
              residual) and the Gaussian ground state.
    :rtype: ``tuple`` of ``float`` and ``ChainGaussian``
    """

    solx = solve_direction(*model.quadratic_form('x'))
    soly = solve_direction(*model.quadratic_form('y'))

    energy = (0.5 * (solx.frequencies.sum() + soly.frequencies.sum()) +
              solx.residual + soly.residual + model.constant)
    LOG.debug(
        'harmonic chain: frequencies x=%r y=%r, residual %.3g',
        solx.frequencies, soly.frequencies, solx.residual,
    )

    return float(energy), ChainGaussian(solx.form, solx.center, soly.form)


def frustration_residual(model):
    """
    The constant left over after completing the squares of the x
    sector; zero when the pair shifts are geometrically compatible.

    :param model: The chain model.
    :type model: ``HarmonicChainModel``

    :returns: The residual.
    :rtype: ``float``
    """

    return solve_direction(*model.quadratic_form('x')).residual


def closed_form_energy(coeffs, strength_u):
    """
    The closed-form ground-state energy of the chain built from the
    pair expansion.

    :param coeffs: The expansion coefficients.
    :type coeffs: ``dipolar_chains.ExpansionCoefficients``
    :param float strength_u: The dipolar strength, ``U > 0``.

    :returns: The energy in units of hbar^2/(m d^2).
    :rtype: ``float``
    """

    strength_u = utils.check_positive('strength_u', strength_u)

    return ((math.sqrt(1.5) + math.sqrt(17.0 / 32.0)) *
            (math.sqrt(coeffs.alpha0) + math.sqrt(coeffs.beta0)) *
            math.sqrt(strength_u) +
            17.0 / 8.0 * coeffs.v0 * strength_u)


def chain_wavefunction(coeffs, strength_u):
    """
    The closed-form Gaussian ground state of the chain built from the
    pair expansion.

    :param coeffs: The expansion coefficients.
    :type coeffs: ``dipolar_chains.ExpansionCoefficients``
    :param float strength_u: The dipolar strength, ``U > 0``.

    :returns: The ground state.
    :rtype: ``ChainGaussian``
    """

    strength_u = utils.check_positive('strength_u', strength_u)
    ua, ub = strength_u * coeffs.alpha0, strength_u * coeffs.beta0

    return ChainGaussian(
        np.diag([math.sqrt(17.0 * ua / 8.0), math.sqrt(6.0 * ua)]),
        [math.sqrt(2.0) * coeffs.a0, 0.0],
        np.diag([math.sqrt(17.0 * ub / 8.0), math.sqrt(6.0 * ub)]),
    )


def virial_balance(model, state):
    """
    Compare kinetic energy and harmonic excitation energy for each
    direction.  For a harmonic ground state both are equal.

    :param model: The chain model.
    :type model: ``HarmonicChainModel``
    :param state: The state to test.
    :type state: ``ChainGaussian``

    :returns: A ``dict`` mapping "x" and "y" to ``(T, V - Vmin)``.
    """

    result = {}
    for direction, form, cov in (
            ('x', state.x_form, state.x_covariance),
            ('y', state.y_form, state.y_covariance)):
        quad = model.quadratic_form(direction)[0]
        result[direction] = (
            0.25 * float(np.trace(form)),
            float(np.trace(quad @ cov)),
        )

    return result


def layer_marginal(state, particle):
    """
    The Gaussian distribution of one particle's position with the
    center of mass fixed at the origin.

    :param state: The chain state.
    :type state: ``ChainGaussian``
    :param int particle: The particle (layer) index: 1, 2 or 3.

    :returns: A tuple ``(mean_x, variance_x, variance_y)``.
    """

    if particle not in (1, 2, 3):
        raise exceptions.ValidationError(
            'particle must be 1, 2 or 3, got %r' % (particle,)
        )

    vec = _PARTICLES[particle - 1]

    return (
        float(vec @ state.x_center),
        float(vec @ state.x_covariance @ vec),
        float(vec @ state.y_covariance @ vec),
    )


def layer_density(state, particle, xs, ys):
    """
    Tabulate the probability density of one particle's position,
    row-major in y.

    :param state: The chain state.
    :type state: ``ChainGaussian``
    :param int particle: The particle (layer) index: 1, 2 or 3.
    :param xs: The x grid.
    :param ys: The y grid.

    :returns: An array of rows ``(x, y, F)``.
    :rtype: ``numpy.ndarray``
    """

    mean, varx, vary = layer_marginal(state, particle)
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    yy, xx = np.meshgrid(ys, xs, indexing='ij')

    dens = (np.exp(-(xx - mean) ** 2 / (2.0 * varx)) /
            math.sqrt(2.0 * math.pi * varx) *
            np.exp(-yy ** 2 / (2.0 * vary)) /
            math.sqrt(2.0 * math.pi * vary))

    return np.column_stack((xx.ravel(), yy.ravel(), dens.ravel()))


def sample_layer_positions(state, count, rng):
    """
    Draw particle positions from ``|Psi|^2`` with the center of mass
    at the origin.

    :param state: The chain state.
    :type state: ``ChainGaussian``
    :param int count: The number of samples.
    :param rng: The random generator.
    :type rng: ``numpy.random.Generator``

    :returns: Arrays ``(x, y)`` of shape ``(count, 3)``.
    """

    qx = rng.multivariate_normal(state.x_center, state.x_covariance, count)
    qy = rng.multivariate_normal(np.zeros(2), state.y_covariance, count)

    return qx @ _PARTICLES.T, qy @ _PARTICLES.T
