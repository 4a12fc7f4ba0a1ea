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
Stochastic variational solver for the two- and three-body problems.

The basis consists of products of a shifted Gaussian in the x Jacobi
coordinates and an unshifted Gaussian in the y Jacobi coordinates::

    phi(qx, qy) = exp(-1/2 (qx - s)^T A (qx - s) - 1/2 qy^T B qy)

Two bodies have one Jacobi mode per direction, ``q = (x1 - x2) /
sqrt(2)``; three bodies have two (see ``dipolar_chains.harmonic``).
Every mode carries the molecular mass.  Elements are sampled at
random and kept when they lower the ground-state energy of the
generalized eigenproblem ``H c = E S c``.
"""

import collections
import math

import numpy as np
from scipy import linalg

from dipolar_chains import exceptions
from dipolar_chains import harmonic
from dipolar_chains import landscape
from dipolar_chains import quadrature
from dipolar_chains import utils


LOG = utils.get_logger(__name__)

BODIES = (2, 3)

# Relative eigenvalue floor of element forms
FORM_TOL = 1e-14

# Relative eigenvalue floor of the normalized overlap matrix
CONDITION_TOL = 1e-12

# Width factors relative to the natural scale, sampled log-uniformly
WIDTH_RANGE = (0.05, 50.0)

# Shift range in units of max(a0, 0.5)
SHIFT_RANGE = 3.0

# Early stop: the trailing fraction of accepted elements and the
# energy change it must stay below
TAIL_FRACTION = 0.2
TAIL_TOL = 1e-4
TAIL_MIN_BASIS = 10

# Consecutive fruitless steps before giving up
MAX_STAGNANT = 10


Sector = collections.namedtuple(
    'Sector', ['overlap', 'mean', 'precision', 'covariance', 'kinetic'],
)


def _check_form(name, form):
    """
    Validate a symmetric positive-definite form.
    """

    form = np.atleast_2d(np.asarray(form, dtype=float))
    if form.shape[0] != form.shape[1] or not np.allclose(form, form.T):
        raise exceptions.ValidationError(
            '%s must be a symmetric square matrix' % name
        )

    eigs = np.linalg.eigvalsh(form)
    if eigs[-1] <= 0.0 or eigs[0] <= FORM_TOL * eigs[-1]:
        raise exceptions.NotPositiveDefinite(
            '%s is not positive-definite' % name, eigs,
        )

    return 0.5 * (form + form.T)


class SvmBasisElement(object):
    """
    One basis function: an x-sector form ``x_form`` with center
    ``x_shift`` and an unshifted y-sector form ``y_form``.
    """

    def __init__(self, x_form, x_shift, y_form):
        """
        Initialize a ``SvmBasisElement`` instance.

        :param x_form: The x-sector form, 1x1 or 2x2.
        :param x_shift: The x-sector center.
        :param y_form: The y-sector form, same size as ``x_form``.

        :raises dipolar_chains.ValidationError:
            The shapes are inconsistent.
        :raises dipolar_chains.NotPositiveDefinite:
            A form is not positive-definite.
        """

        self.x_form = _check_form('x_form', x_form)
        self.y_form = _check_form('y_form', y_form)
        self.x_shift = np.atleast_1d(np.asarray(x_shift, dtype=float))

        modes = self.x_form.shape[0]
        if self.y_form.shape[0] != modes or self.x_shift.shape != (modes,):
            raise exceptions.ValidationError(
                'Inconsistent element shapes: x_form %r, x_shift %r, '
                'y_form %r' %
                (self.x_form.shape, self.x_shift.shape, self.y_form.shape)
            )
        if modes not in (1, 2):
            raise exceptions.ValidationError(
                'Elements must have 1 or 2 modes, got %d' % modes
            )

    def __repr__(self):
        return '<%s x_form=%r x_shift=%r y_form=%r>' % (
            self.__class__.__name__, self.x_form.tolist(),
            self.x_shift.tolist(), self.y_form.tolist(),
        )

    @property
    def modes(self):
        """
        The number of Jacobi modes per direction.
        """

        return self.x_form.shape[0]

    @classmethod
    def from_chain_gaussian(cls, state):
        """
        Construct the element equal to a three-body chain Gaussian.

        :param state: The chain Gaussian.
        :type state: ``dipolar_chains.ChainGaussian``

        :returns: The element.
        :rtype: ``SvmBasisElement``
        """

        return cls(state.x_form, state.x_center, state.y_form)

    @classmethod
    def from_pair_gaussian(cls, alpha, beta, shift):
        """
        Construct the two-body element equal to
        ``exp(-alpha/2 (w - shift)^2 - beta/2 y^2)``.

        :param float alpha: The x width.
        :param float beta: The y width.
        :param float shift: The x shift of the relative coordinate.

        :returns: The element.
        :rtype: ``SvmBasisElement``
        """

        return cls([[2.0 * alpha]], [shift / math.sqrt(2.0)], [[2.0 * beta]])

    def to_dict(self):
        return {
            'x_form': self.x_form.tolist(),
            'x_shift': self.x_shift.tolist(),
            'y_form': self.y_form.tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(data['x_form'], data['x_shift'], data['y_form'])


def _sector(form_a, shift_a, form_b, shift_b):
    """
    Integrate the product of two shifted Gaussians over one sector.
    The product is ``overlap`` times a normalized Gaussian with the
    given mean and precision.
    """

    precision = form_a + form_b
    covariance = np.linalg.inv(precision)
    vec = form_a @ shift_a + form_b @ shift_b
    mean = covariance @ vec

    expo = 0.5 * (vec @ mean - shift_a @ form_a @ shift_a -
                  shift_b @ form_b @ shift_b)
    overlap = ((2.0 * math.pi) ** (0.5 * len(shift_a)) /
               math.sqrt(np.linalg.det(precision)) * math.exp(expo))

    # <grad phi_a . grad phi_b> / 2 under the product Gaussian
    cross = form_a @ form_b
    kinetic = 0.5 * overlap * (
        np.trace(cross @ covariance) +
        (mean - shift_a) @ cross @ (mean - shift_b)
    )

    return Sector(overlap, mean, precision, covariance, kinetic)


def _sectors(a, b):
    """
    Compute both sectors of a matrix element.
    """

    if a.modes != b.modes:
        raise exceptions.ValidationError(
            'Elements with %d and %d modes cannot be combined' %
            (a.modes, b.modes)
        )

    zero = np.zeros(a.modes)

    return (
        _sector(a.x_form, a.x_shift, b.x_form, b.x_shift),
        _sector(a.y_form, zero, b.y_form, zero),
    )


def overlap(a, b):
    """
    The overlap ``<a|b>`` of two basis elements.

    :param a: The bra element.
    :type a: ``SvmBasisElement``
    :param b: The ket element.
    :type b: ``SvmBasisElement``

    :returns: The overlap.
    :rtype: ``float``
    """

    secx, secy = _sectors(a, b)

    return float(secx.overlap * secy.overlap)


def kinetic_element(a, b):
    """
    The kinetic energy matrix element ``<a|T|b>``, with
    ``T = -1/2 sum_k d^2/dq_k^2``.

    :param a: The bra element.
    :type a: ``SvmBasisElement``
    :param b: The ket element.
    :type b: ``SvmBasisElement``

    :returns: The matrix element.
    :rtype: ``float``
    """

    secx, secy = _sectors(a, b)

    return float(secx.kinetic * secy.overlap + secx.overlap * secy.kinetic)


def _pairs(modes):
    """
    The interacting pairs for a number of Jacobi modes.
    """

    return ((1, 2),) if modes == 1 else harmonic.PAIRS


def _marginals(secx, secy, modes):
    """
    Project a product Gaussian onto every pair coordinate.
    """

    return [
        quadrature.gaussian_product_marginal(
            secx.precision, secx.mean, secy.precision, pair,
        )
        for pair in _pairs(modes)
    ]


def potential_element(a, b, theta, strength_u, method='laplace'):
    """
    The potential energy matrix element ``<a|V|b>`` summed over all
    interacting pairs.

    :param a: The bra element.
    :type a: ``SvmBasisElement``
    :param b: The ket element.
    :type b: ``SvmBasisElement``
    :param float theta: The tilt angle.
    :param float strength_u: The dipolar strength ``U >= 0``.
    :param str method: The quadrature kernel.

    :returns: The matrix element.
    :rtype: ``float``
    """

    secx, secy = _sectors(a, b)
    values = quadrature.expect_potential_many(
        _marginals(secx, secy, a.modes), theta, strength_u, method,
    )

    return float(secx.overlap * secy.overlap * values.sum())


def _natural_scales(theta, strength_u):
    """
    The width scales and shift scale that candidates are drawn around.
    """

    coeffs = landscape.expansion_coefficients(
        max(theta, landscape.THETA_MIN),
    )

    return (
        math.sqrt(strength_u * coeffs.alpha0),
        math.sqrt(strength_u * coeffs.beta0),
        max(coeffs.a0, 0.5),
    )


def random_element(rng, modes, scales):
    """
    Draw a random basis element.

    :param rng: The random generator.
    :type rng: ``numpy.random.Generator``
    :param int modes: The number of Jacobi modes per direction.
    :param tuple scales: The x width, y width and shift scales.

    :returns: The element.
    :rtype: ``SvmBasisElement``
    """

    scale_x, scale_y, scale_s = scales
    pairs = _pairs(modes)
    low, high = np.log(WIDTH_RANGE)

    forms = []
    for scale in (scale_x, scale_y):
        weights = scale * np.exp(rng.uniform(low, high, len(pairs)))
        vectors = [quadrature.pair_coordinate(pair, modes) for pair in pairs]
        forms.append(sum(
            weight * np.outer(vec, vec)
            for weight, vec in zip(weights, vectors)
        ))

    shifts = rng.uniform(-SHIFT_RANGE, SHIFT_RANGE, modes) * scale_s
    if modes == 1:
        center = shifts / math.sqrt(2.0)
    else:
        # Shifts of the pairs (1, 2) and (2, 3)
        center = np.array([
            (shifts[0] + shifts[1]) / math.sqrt(2.0),
            (shifts[0] - shifts[1]) / math.sqrt(6.0),
        ])

    return SvmBasisElement(forms[0], center, forms[1])


class SvmState(object):
    """
    A growing SVM basis with its normalized overlap and Hamiltonian
    matrices.  Elements are normalized, so the overlap matrix has a
    unit diagonal.
    """

    def __init__(self, theta, strength_u, bodies, rng_seed=0,
                 method='laplace'):
        """
        Initialize an empty ``SvmState``.

        :param float theta: The tilt angle.
        :param float strength_u: The dipolar strength, ``U > 0``.
        :param int bodies: The number of bodies, 2 or 3.
        :param int rng_seed: The seed of the candidate streams.
        :param str method: The quadrature kernel.
        """

        if bodies not in BODIES:
            raise exceptions.ValidationError(
                'bodies must be 2 or 3, got %r' % (bodies,)
            )
        if not isinstance(rng_seed, int) or rng_seed < 0:
            raise exceptions.ValidationError(
                'rng_seed must be a non-negative integer, got %r' %
                (rng_seed,)
            )

        self.theta = utils.check_theta(theta)
        self.strength_u = utils.check_positive('strength_u', strength_u)
        self.bodies = bodies
        self.rng_seed = rng_seed
        self.method = method

        self.basis = []
        self.norms = np.zeros(0)
        self.overlap_matrix = np.zeros((0, 0))
        self.hamiltonian_matrix = np.zeros((0, 0))
        self.energy_history = []
        self.coefficients = np.zeros(0)
        self.steps = 0
        self.stagnant = 0

    def __len__(self):
        return len(self.basis)

    @property
    def modes(self):
        return self.bodies - 1

    @property
    def energy(self):
        """
        The current ground-state energy, or ``None`` for an empty
        basis.
        """

        return self.energy_history[-1][1] if self.energy_history else None

    def pair_mean(self, pair):
        """
        The ground-state expectation of ``x_i - x_j``.

        :param tuple pair: The pair ``(i, j)``.

        :returns: The mean separation.
        :rtype: ``float``
        """

        if not self.basis:
            raise exceptions.ValidationError('The basis is empty')

        vec = quadrature.pair_coordinate(pair, self.modes)

        total = 0.0
        for i, a in enumerate(self.basis):
            for j, b in enumerate(self.basis):
                secx, secy = _sectors(a, b)
                total += (self.coefficients[i] * self.coefficients[j] *
                          secx.overlap * secy.overlap * (vec @ secx.mean) /
                          (self.norms[i] * self.norms[j]))

        norm = self.coefficients @ self.overlap_matrix @ self.coefficients

        return float(total / norm)

    def to_dict(self):
        """
        Serialize the state.

        :returns: A JSON-ready ``dict``.
        """

        return {
            'theta': self.theta,
            'strength_u': self.strength_u,
            'bodies': self.bodies,
            'rng_seed': self.rng_seed,
            'method': self.method,
            'steps': self.steps,
            'stagnant': self.stagnant,
            'energy': self.energy,
            'energy_history': [list(entry) for entry in self.energy_history],
            'basis': [elem.to_dict() for elem in self.basis],
            'overlap_matrix': self.overlap_matrix.tolist(),
            'hamiltonian_matrix': self.hamiltonian_matrix.tolist(),
            'coefficients': self.coefficients.tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        """
        Restore a serialized state.

        :param dict data: The output of ``to_dict()``.

        :returns: The state.
        :rtype: ``SvmState``
        """

        try:
            state = cls(data['theta'], data['strength_u'], data['bodies'],
                        data['rng_seed'], data.get('method', 'laplace'))
            state.basis = [
                SvmBasisElement.from_dict(elem) for elem in data['basis']
            ]
            size = len(state.basis)
            state.norms = np.sqrt(
                [overlap(elem, elem) for elem in state.basis]
            )
            state.overlap_matrix = np.array(
                data['overlap_matrix'], dtype=float,
            ).reshape(size, size)
            state.hamiltonian_matrix = np.array(
                data['hamiltonian_matrix'], dtype=float,
            ).reshape(size, size)
            state.energy_history = [
                (int(size_), float(energy))
                for size_, energy in data['energy_history']
            ]
            state.coefficients = np.array(data['coefficients'], dtype=float)
            state.steps = int(data.get('steps', len(state.energy_history)))
            state.stagnant = int(data.get('stagnant', 0))
        except (KeyError, TypeError, ValueError) as exc:
            raise exceptions.ValidationError(
                'Invalid serialized SVM state: %s' % exc
            )

        return state


def _ground(hamiltonian, overlap_matrix):
    """
    Solve the generalized eigenproblem for its lowest pair.
    """

    try:
        vals, vecs = linalg.eigh(
            hamiltonian, overlap_matrix, subset_by_index=[0, 0],
        )
    except linalg.LinAlgError as exc:
        raise exceptions.NotPositiveDefinite(
            'Overlap matrix is not positive-definite: %s' % exc,
        )

    return float(vals[0]), vecs[:, 0]


def solve_ground(state):
    """
    The lowest generalized eigenvalue of the state's matrices.

    :param state: The SVM state.
    :type state: ``SvmState``

    :returns: The ground-state energy.
    :rtype: ``float``

    :raises dipolar_chains.NotPositiveDefinite:
        The overlap matrix is not positive-definite.
    """

    if not state.basis:
        raise exceptions.ValidationError('The basis is empty')

    return _ground(state.hamiltonian_matrix, state.overlap_matrix)[0]


def _borders(state, candidates):
    """
    Compute the normalized overlap and Hamiltonian rows of each
    candidate against the basis and itself.  All potential integrals
    of a step go through the quadrature in one batch.
    """

    marginals = []
    entries = []
    for cand in candidates:
        row = []
        for elem in state.basis + [cand]:
            secx, secy = _sectors(cand, elem)
            olap = secx.overlap * secy.overlap
            kin = secx.kinetic * secy.overlap + secx.overlap * secy.kinetic
            pieces = _marginals(secx, secy, state.modes)
            row.append((olap, kin, len(marginals), len(pieces)))
            marginals.extend(pieces)
        entries.append(row)

    values = quadrature.expect_potential_many(
        marginals, state.theta, state.strength_u, state.method,
    )

    results = []
    for row in entries:
        olap_row = np.array([olap for olap, _kin, _start, _count in row])
        ham_row = np.array([
            olap * values[start:start + count].sum() + kin
            for olap, kin, start, count in row
        ])

        self_norm = math.sqrt(olap_row[-1])
        scale = 1.0 / (self_norm * np.append(state.norms, self_norm))
        results.append((olap_row * scale, ham_row * scale, self_norm))

    return results


def _bordered(matrix, row):
    """
    Append a row and column to a symmetric matrix.
    """

    size = matrix.shape[0]
    result = np.empty((size + 1, size + 1))
    result[:size, :size] = matrix
    result[size, :] = row
    result[:, size] = row

    return result


def _well_conditioned(overlap_matrix):
    """
    Apply the conditioning filter to a normalized overlap matrix.
    """

    eigs = np.linalg.eigvalsh(overlap_matrix)

    return eigs[0] >= CONDITION_TOL * eigs[-1]


def grow_basis(state, candidates_per_step=30, extra=()):
    """
    Attempt to add one element to the basis.  The best of the random
    candidates (plus any ``extra`` elements) is accepted if it passes
    the conditioning filter and does not raise the energy; otherwise
    the step is recorded as stagnant.

    :param state: The SVM state; updated in place.
    :type state: ``SvmState``
    :param int candidates_per_step: The number of random candidates.
    :param extra: Additional candidates offered first.
    :type extra: ``list`` of ``SvmBasisElement``

    :returns: The updated state.
    :rtype: ``SvmState``
    """

    scales = _natural_scales(state.theta, state.strength_u)
    candidates = list(extra) + [
        random_element(
            np.random.default_rng([state.rng_seed, state.steps, idx]),
            state.modes, scales,
        )
        for idx in range(candidates_per_step)
    ]
    state.steps += 1

    current = state.energy if state.basis else float('inf')
    best = None
    for cand, (olap_row, ham_row, norm) in zip(
            candidates, _borders(state, candidates)):
        olap = _bordered(state.overlap_matrix, olap_row)
        if not _well_conditioned(olap):
            continue

        ham = _bordered(state.hamiltonian_matrix, ham_row)
        try:
            energy, coeffs = _ground(ham, olap)
        except exceptions.NotPositiveDefinite:
            continue

        if best is None or energy < best[0]:
            best = (energy, coeffs, cand, norm, olap, ham)

    if best is None or best[0] > current:
        state.stagnant += 1
        LOG.warning(
            'svm step %d: no candidate accepted (basis %d)',
            state.steps, len(state),
        )
        return state

    energy, coeffs, cand, norm, olap, ham = best
    state.basis.append(cand)
    state.norms = np.append(state.norms, norm)
    state.overlap_matrix = olap
    state.hamiltonian_matrix = ham
    state.coefficients = coeffs
    state.energy_history.append((len(state.basis), energy))
    LOG.debug('svm step %d: basis %d, E=%.12g', state.steps, len(state),
              energy)

    return state


def _settled(history):
    """
    Test the early-stopping rule on the energy history.
    """

    if len(history) < TAIL_MIN_BASIS:
        return False

    tail = max(1, int(math.ceil(TAIL_FRACTION * len(history))))

    return history[-tail - 1][1] - history[-1][1] < TAIL_TOL


def run(theta, strength_u, bodies, target_basis=80, seed=0, candidates=30,
        initial_elements=None, method='laplace'):
    """
    Grow an SVM basis until it reaches ``target_basis`` elements or
    the energy has settled.

    :param float theta: The tilt angle.
    :param float strength_u: The dipolar strength, ``U > 0``.
    :param int bodies: The number of bodies, 2 or 3.
    :param int target_basis: The maximum basis size.
    :param int seed: The seed of the candidate streams.
    :param int candidates: The random candidates per step.
    :param initial_elements: Elements offered ahead of the random
                             candidates, one per step.  Defaults to
                             the harmonic-expansion ground state.
    :type initial_elements: ``list`` of ``SvmBasisElement``
    :param str method: The quadrature kernel.

    :returns: The final energy and state.
    :rtype: ``tuple`` of ``float`` and ``SvmState``
    """

    if target_basis < 1 or candidates < 1:
        raise exceptions.ValidationError(
            'target_basis and candidates must be positive, got %r and %r' %
            (target_basis, candidates)
        )

    state = SvmState(theta, strength_u, bodies, seed, method)
    if initial_elements is None:
        initial_elements = []
        if state.theta >= landscape.THETA_MIN:
            coeffs = landscape.expansion_coefficients(state.theta)
            if bodies == 2:
                initial_elements.append(SvmBasisElement.from_pair_gaussian(
                    *landscape.harmonic_pair_widths(coeffs, strength_u)
                ))
            else:
                initial_elements.append(SvmBasisElement.from_chain_gaussian(
                    harmonic.chain_wavefunction(coeffs, strength_u)
                ))

    pending = list(initial_elements)
    stagnant = 0
    while len(state) < target_basis:
        extra = [pending.pop(0)] if pending else []
        before = len(state)
        grow_basis(state, candidates, extra)

        stagnant = stagnant + 1 if len(state) == before else 0
        if stagnant >= MAX_STAGNANT:
            LOG.warning('svm: stopping after %d stagnant steps', stagnant)
            break
        if not pending and _settled(state.energy_history):
            LOG.info('svm: energy settled at basis %d', len(state))
            break

    if not state.basis:
        raise exceptions.NumericalError('SVM accepted no basis element')

    LOG.info(
        'svm theta=%r U=%r bodies=%d: E=%.12g with %d elements',
        state.theta, state.strength_u, bodies, state.energy, len(state),
    )

    return state.energy, state
