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
Gaussian variational approximations to the two- and three-body
problems.

A pair Gaussian::

    G = exp(-alpha/2 (w - a)^2 - beta/2 y^2),  w = x1 - x2

describes the relative motion of a pair; with reduced mass m/2 its
kinetic energy is ``(alpha + beta) / 2``.  The harmonic oscillator
``-d^2/dw^2 + alpha^2 (w - a)^2`` (likewise in y) has exactly ``G`` as
its ground state and zero-point energy ``alpha + beta``; this is the
"optimized oscillator" transplanted into the chain.
"""

import collections
import concurrent.futures
import math

import numpy as np
from scipy import optimize

from dipolar_chains import exceptions
from dipolar_chains import harmonic
from dipolar_chains import landscape
from dipolar_chains import methods
from dipolar_chains import quadrature
from dipolar_chains import svm
from dipolar_chains import utils


LOG = utils.get_logger(__name__)

OUTER_PAIR_MODES = ('independent', 'scaled')

# Restart offsets in (log alpha, log beta, a)
RESTARTS = (
    (0.0, 0.0, 0.0),
    (0.3, -0.3, 0.05),
    (-0.3, 0.3, -0.05),
)

# Bounds on log widths inside the objective
LOG_WIDTH_LIMIT = 40.0

# Relative agreement expected between restarts
RESTART_TOL = 1e-8


OptimizationResult = collections.namedtuple(
    'OptimizationResult',
    ['params', 'energy', 'oscillator_energy', 'iterations', 'converged'],
)

OscChain = collections.namedtuple(
    'OscChain', ['model', 'state', 'near', 'outer'],
)

SweepOptions = collections.namedtuple(
    'SweepOptions',
    ['outer_pair', 'pair_constants', 'quadrature', 'alpha_form', 'seed',
     'svm_basis_size', 'svm_candidates'],
)
SweepOptions.__new__.__defaults__ = (
    'independent', True, 'laplace', 'curvature', 0, 80, 30,
)


class PairGaussian(collections.namedtuple(
        'PairGaussian',
        ['alpha_tilde', 'beta_tilde', 'a_tilde', 'pair_distance'])):
    """
    The two-body Gaussian ansatz.  Widths are in units of 1/d^2 and
    the shift in units of d for either pair distance.
    """

    __slots__ = ()

    def __new__(cls, alpha_tilde, beta_tilde, a_tilde, pair_distance=1.0):
        alpha_tilde = utils.check_positive('alpha_tilde', alpha_tilde)
        beta_tilde = utils.check_positive('beta_tilde', beta_tilde)
        a_tilde = utils.check_finite('a_tilde', a_tilde)
        pair_distance = utils.check_positive('pair_distance', pair_distance)

        return super(PairGaussian, cls).__new__(
            cls, alpha_tilde, beta_tilde, a_tilde, pair_distance,
        )

    @property
    def marginal(self):
        """
        The distribution of the relative coordinate under ``G^2``.
        """

        return quadrature.PairMarginal(
            self.a_tilde, 0.5 / self.alpha_tilde, 0.5 / self.beta_tilde,
            self.pair_distance,
        )

    @property
    def kinetic_energy(self):
        """
        The kinetic energy of the relative motion.
        """

        return 0.5 * (self.alpha_tilde + self.beta_tilde)

    @property
    def oscillator_energy(self):
        """
        The zero-point energy of the oscillator whose ground state is
        this Gaussian.
        """

        return self.alpha_tilde + self.beta_tilde


def two_body_energy(params, theta, strength_u, method='laplace'):
    """
    Evaluate the energy functional of a pair Gaussian in the exact
    pair potential.

    :param params: The pair Gaussian.
    :type params: ``PairGaussian``
    :param float theta: The tilt angle.
    :param float strength_u: The dipolar strength ``U >= 0``.
    :param str method: The quadrature kernel.

    :returns: The energy in units of hbar^2/(m d^2).
    :rtype: ``float``
    """

    return params.kinetic_energy + quadrature.expect_potential(
        params.marginal, theta, strength_u, method,
    )


def _objective(theta, strength_u, pair_distance, method):
    """
    Build the optimizer objective over ``(log alpha, log beta, a)``.
    """

    def objective(point):
        log_a, log_b = np.clip(point[:2], -LOG_WIDTH_LIMIT, LOG_WIDTH_LIMIT)
        params = PairGaussian(
            math.exp(log_a), math.exp(log_b), point[2], pair_distance,
        )

        return two_body_energy(params, theta, strength_u, method)

    return objective


def optimize_two_body(theta, strength_u, pair_distance=1.0,
                      method='laplace', alpha_form='curvature'):
    """
    Minimize the pair energy functional over ``alpha``, ``beta`` and
    the shift, starting at the harmonic-expansion prediction, with two
    restarts from perturbed starts.

    :param float theta: The tilt angle, in ``[0.05, pi/2]``.
    :param float strength_u: The dipolar strength, ``U > 0``.
    :param float pair_distance: The interlayer distance of the pair.
    :param str method: The quadrature kernel.
    :param str alpha_form: Passed to
                           ``landscape.expansion_coefficients()``.

    :returns: The best result found.  ``converged`` is ``False`` if a
              simplex run failed to converge, the restarts disagree or
              the optimum is not bound (``E >= 0``).
    :rtype: ``OptimizationResult``
    """

    strength_u = utils.check_positive('strength_u', strength_u)
    pair_distance = utils.check_positive('pair_distance', pair_distance)
    coeffs = landscape.expansion_coefficients(theta, alpha_form)
    alpha0, beta0, shift0 = landscape.harmonic_pair_widths(
        coeffs, strength_u, pair_distance,
    )
    start = np.array([math.log(alpha0), math.log(beta0), shift0])
    objective = _objective(theta, strength_u, pair_distance, method)

    runs = []
    for offset in RESTARTS:
        runs.append(optimize.minimize(
            objective, start + np.array(offset) * [1.0, 1.0, pair_distance],
            method='Nelder-Mead',
            options={'xatol': 1e-8, 'fatol': 1e-10, 'maxiter': 4000,
                     'maxfev': 8000},
        ))
        LOG.debug(
            'two-body fit theta=%r U=%r rho=%r: E=%r after %d iterations',
            theta, strength_u, pair_distance, runs[-1].fun, runs[-1].nit,
        )

    best = min(runs, key=lambda run: run.fun)
    energies = [run.fun for run in runs]
    spread = max(energies) - min(energies)
    log_a, log_b = np.clip(best.x[:2], -LOG_WIDTH_LIMIT, LOG_WIDTH_LIMIT)
    params = PairGaussian(
        math.exp(log_a), math.exp(log_b), best.x[2], pair_distance,
    )

    converged = all(run.success for run in runs)
    if spread > RESTART_TOL * max(1.0, abs(best.fun)):
        LOG.warning(
            'two-body fit restarts disagree by %.3g at theta=%r U=%r',
            spread, theta, strength_u,
        )
        converged = False
    if best.fun >= 0.0:
        LOG.warning(
            'no bound Gaussian pair state at theta=%r U=%r rho=%r',
            theta, strength_u, pair_distance,
        )
        converged = False

    return OptimizationResult(
        params, float(best.fun), params.oscillator_energy,
        sum(run.nit for run in runs), converged,
    )


def energy_of_chain_gaussian(state, theta, strength_u, method='laplace'):
    """
    Evaluate the full three-body Hamiltonian on a chain Gaussian: the
    analytic kinetic energy of the four Jacobi modes plus the exact
    potential of the pairs (1, 2) and (2, 3) at distance 1 and (1, 3)
    at distance 2.

    :param state: The chain Gaussian.
    :type state: ``dipolar_chains.ChainGaussian``
    :param float theta: The tilt angle.
    :param float strength_u: The dipolar strength ``U >= 0``.
    :param str method: The quadrature kernel.

    :returns: The energy in units of hbar^2/(m d^2).
    :rtype: ``float``
    """

    marginals = [
        quadrature.gaussian_product_marginal(
            2.0 * state.x_form, state.x_center, 2.0 * state.y_form, pair,
        )
        for pair in harmonic.PAIRS
    ]
    potentials = quadrature.expect_potential_many(
        marginals, theta, strength_u, method,
    )

    return float(state.kinetic_energy + potentials.sum())


def fit_osc_pairs(theta, strength_u, outer_pair='independent',
                  method='laplace', alpha_form='curvature'):
    """
    Optimize the pair Gaussians transplanted into the chain.

    :param float theta: The tilt angle.
    :param float strength_u: The dipolar strength.
    :param str outer_pair: "independent" fits the outer pair at
                           distance 2; "scaled" derives it from the
                           adjacent pair.
    :param str method: The quadrature kernel.
    :param str alpha_form: See ``landscape.expansion_coefficients()``.

    :returns: A tuple ``(near, outer)`` of ``OptimizationResult``;
              ``outer`` is ``None`` when the outer pair is to be
              derived by scaling.

    :raises dipolar_chains.OptimizationError:
        The adjacent pair has no bound Gaussian state.
    """

    if outer_pair not in OUTER_PAIR_MODES:
        raise exceptions.ValidationError(
            'outer_pair must be one of %s, got %r' %
            (', '.join(OUTER_PAIR_MODES), outer_pair)
        )

    near = optimize_two_body(theta, strength_u, 1.0, method, alpha_form)
    if near.energy >= 0.0:
        raise exceptions.OptimizationError(
            'Adjacent pair has no bound Gaussian state at theta=%r U=%r' %
            (theta, strength_u)
        )

    outer = None
    if outer_pair == 'independent':
        outer = optimize_two_body(theta, strength_u, 2.0, method, alpha_form)
        if outer.energy >= 0.0:
            LOG.warning(
                'outer pair unbound at theta=%r U=%r; using the scaled '
                'adjacent-pair fit', theta, strength_u,
            )
            outer = None

    return near, outer


def assemble_osc_chain(near, outer=None, pair_constants=True):
    """
    Assemble the optimized-oscillator chain from pair fits and solve
    it.

    :param near: The adjacent-pair fit.
    :type near: ``OptimizationResult``
    :param outer: The outer-pair fit, or ``None`` to scale the
                  adjacent fit: couplings divided by 2^5, shift
                  doubled, constant divided by 2^3.
    :type outer: ``OptimizationResult``
    :param bool pair_constants: If ``True`` (the default), each pair
                                carries ``E[G*] - E_osc`` so that the
                                pair oscillator reproduces the pair's
                                variational energy.

    :returns: The chain model and its Gaussian ground state.
    :rtype: ``tuple`` of ``HarmonicChainModel`` and ``ChainGaussian``
    """

    def term(result):
        params = result.params
        constant = result.energy - result.oscillator_energy
        return harmonic.PairTerm(
            params.alpha_tilde ** 2, params.beta_tilde ** 2,
            params.a_tilde, constant if pair_constants else 0.0,
        )

    adjacent = term(near)
    if outer is None:
        far = harmonic.PairTerm(
            adjacent.coupling_x / 32.0, adjacent.coupling_y / 32.0,
            2.0 * adjacent.shift_x, adjacent.constant / 8.0,
        )
    else:
        far = term(outer)

    model = harmonic.HarmonicChainModel(
        {(1, 2): adjacent, (2, 3): adjacent, (1, 3): far},
    )

    return model, harmonic.solve_quadratic_model(model)[1]


def build_osc_chain(theta, strength_u, outer_pair='independent',
                    pair_constants=True, method='laplace',
                    alpha_form='curvature'):
    """
    Build the three-body harmonic chain whose pair oscillators have
    the optimized pair Gaussians as ground states.

    :param float theta: The tilt angle.
    :param float strength_u: The dipolar strength.
    :param str outer_pair: See ``fit_osc_pairs()``.
    :param bool pair_constants: See ``assemble_osc_chain()``.
    :param str method: The quadrature kernel.
    :param str alpha_form: See ``landscape.expansion_coefficients()``.

    :returns: The chain model and its Gaussian ground state.
    :rtype: ``tuple`` of ``HarmonicChainModel`` and ``ChainGaussian``
    """

    near, outer = fit_osc_pairs(
        theta, strength_u, outer_pair, method, alpha_form,
    )

    return assemble_osc_chain(near, outer, pair_constants)


class SweepCell(object):
    """
    All the energies of one ``(theta, U)`` point.  Intermediate
    results shared by several methods are computed once.
    """

    def __init__(self, theta, strength_u, options=None):
        """
        Initialize a ``SweepCell`` instance.

        :param float theta: The tilt angle.
        :param float strength_u: The dipolar strength.
        :param options: The sweep options.
        :type options: ``SweepOptions``
        """

        self.theta = utils.check_theta(theta)
        self.strength_u = utils.check_positive('strength_u', strength_u)
        self.options = options or SweepOptions()

        self._coeffs = None
        self._osc = None

    @property
    def coeffs(self):
        """
        The expansion coefficients.
        """

        if self._coeffs is None:
            self._coeffs = landscape.expansion_coefficients(
                self.theta, self.options.alpha_form,
            )

        return self._coeffs

    @property
    def expansion_state(self):
        """
        The closed-form chain ground state of the harmonic expansion.
        """

        return harmonic.chain_wavefunction(self.coeffs, self.strength_u)

    @property
    def osc(self):
        """
        The optimized-oscillator chain.
        """

        if self._osc is None:
            near, outer = fit_osc_pairs(
                self.theta, self.strength_u, self.options.outer_pair,
                self.options.quadrature, self.options.alpha_form,
            )
            model, state = assemble_osc_chain(
                near, outer, self.options.pair_constants,
            )
            self._osc = OscChain(model, state, near, outer)

        return self._osc

    @property
    def osc_converged(self):
        """
        Whether the pair fits behind the oscillator chain converged.
        """

        fits = [self.osc.near] + ([self.osc.outer] if self.osc.outer else [])

        return all(fit.converged for fit in fits)

    def expansion_energy(self):
        return harmonic.closed_form_energy(self.coeffs, self.strength_u)

    def e_psi(self):
        return energy_of_chain_gaussian(
            self.expansion_state, self.theta, self.strength_u,
            self.options.quadrature,
        )

    def osc_energy(self):
        return float(harmonic.solve_quadratic_model(self.osc.model)[0])

    def e_psi_osc(self):
        return energy_of_chain_gaussian(
            self.osc.state, self.theta, self.strength_u,
            self.options.quadrature,
        )

    def svm_energy(self):
        """
        Run the reference solver, seeded with the expansion state and,
        when it can be built, the oscillator state.
        """

        seeds = [svm.SvmBasisElement.from_chain_gaussian(
            self.expansion_state,
        )]
        try:
            seeds.append(svm.SvmBasisElement.from_chain_gaussian(
                self.osc.state,
            ))
        except exceptions.DipolarError as exc:
            LOG.info('svm: no oscillator seed: %s', exc)

        energy, _state = svm.run(
            self.theta, self.strength_u, 3,
            target_basis=self.options.svm_basis_size,
            seed=self.options.seed,
            candidates=self.options.svm_candidates,
            initial_elements=seeds,
            method=self.options.quadrature,
        )

        return energy


def _sweep_cell(theta, strength_u, resolved, options):
    """
    Compute every requested method at one strength, isolating
    failures.
    """

    cell = SweepCell(theta, strength_u, options)
    rows = []
    for method in resolved:
        try:
            energy, converged = method.compute(cell)
        except exceptions.DipolarError as exc:
            LOG.warning(
                'method %s failed at theta=%r U=%r: %s',
                method.name, theta, strength_u, exc,
            )
            energy, converged = None, False

        rows.append((strength_u, method.name, energy, converged))

    return rows


def energy_sweep(theta, u_list, method_names=None, options=None):
    """
    Compute chain energies over a list of strengths.  Strengths are
    processed in parallel, up to the thread cap; the result does not
    depend on the cap.

    :param float theta: The tilt angle.
    :param u_list: The dipolar strengths.
    :param method_names: The methods to run; defaults to all built-in
                         methods.
    :type method_names: ``list`` of ``str``
    :param options: The sweep options.
    :type options: ``SweepOptions``

    :returns: Rows ``(U, method, energy, converged)``; ``energy`` is
              ``None`` for failed cells.
    :rtype: ``list`` of ``tuple``
    """

    theta = utils.check_theta(theta)
    u_list = [utils.check_positive('U', value) for value in u_list]
    resolved = [
        methods.get_method(name)
        for name in (method_names or methods.METHOD_NAMES)
    ]

    with concurrent.futures.ThreadPoolExecutor(
            max_workers=utils.thread_cap()) as executor:
        cells = executor.map(
            lambda value: _sweep_cell(theta, value, resolved, options),
            u_list,
        )

        return [row for rows in cells for row in rows]


def two_body_chain_energies(theta, strength_u, options=None):
    """
    Compute the pair energies that the chain is compared against.

    :param float theta: The tilt angle.
    :param float strength_u: The dipolar strength.
    :param options: The sweep options.
    :type options: ``SweepOptions``

    :returns: A ``dict`` with the keys "expansion", "gaussian" and
              "svm".
    """

    options = options or SweepOptions()
    fit = optimize_two_body(
        theta, strength_u, 1.0, options.quadrature, options.alpha_form,
    )
    coeffs = landscape.expansion_coefficients(theta, options.alpha_form)
    seed = svm.SvmBasisElement.from_pair_gaussian(
        *landscape.harmonic_pair_widths(coeffs, strength_u)
    )
    svm_energy, _state = svm.run(
        theta, strength_u, 2,
        target_basis=options.svm_basis_size, seed=options.seed,
        candidates=options.svm_candidates,
        initial_elements=[seed, svm.SvmBasisElement.from_pair_gaussian(
            fit.params.alpha_tilde, fit.params.beta_tilde,
            fit.params.a_tilde,
        )],
        method=options.quadrature,
    )

    return {
        'expansion': landscape.two_body_expansion_energy(
            theta, strength_u, options.alpha_form,
        ),
        'gaussian': fit.energy,
        'svm': svm_energy,
    }
