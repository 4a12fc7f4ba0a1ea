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
============================================
Dipolar Chains in Layers with Tilted Dipoles
============================================

Polar molecules confined to a stack of parallel two-dimensional
layers, one molecule per layer, attract each other across the layers
when their dipoles are polarized by an external field.  This package
computes the bound states of two- and three-molecule chains for an
arbitrary tilt ``theta`` of the dipoles out of the layer plane.

Units
=====

Lengths are measured in units of the layer spacing ``d`` and energies
in units of hbar^2/(m d^2).  The single interaction parameter is the
dimensionless dipolar strength ``U = m D^2 / (hbar^2 d)``.  Molecule 1
sits in the top layer, molecule 2 in the middle and molecule 3 in the
bottom layer; the outer pair (1, 3) is two layer spacings apart.

The Potential
=============

The ``dipolar_chains.potential`` module evaluates the interlayer
potential (``evaluate()``), its angular structure
(``angular_monopole()``, ``angular_harmonics()``), its plane integral,
which vanishes for every tilt (``plane_integral()``), and its
stationary points along the tilt direction
(``stationary_points_on_axis()``).  Two angles are special: at
``THETA_C`` the angular monopole vanishes identically, and beyond
``THETA_C_STAR`` the shallow second minimum on the x < 0 side is gone.

The Approximation Ladder
========================

The deep minimum of the potential at ``(a0, 0)`` is expanded to
second order by ``dipolar_chains.landscape``, giving the
``ExpansionCoefficients`` ``(a0, v0, alpha0, beta0)``.  Inserted into
the three-body problem, the expansion produces a harmonic chain that
``dipolar_chains.harmonic`` solves exactly in Jacobi coordinates, both
in closed form (``closed_form_energy()``, ``chain_wavefunction()``)
and through a generic quadratic-form solver
(``solve_quadratic_model()``).

The ``dipolar_chains.variational`` module evaluates the full
Hamiltonian on Gaussian states, using the quadrature kernel of
``dipolar_chains.quadrature``.  It optimizes the two-body Gaussian in
the exact pair potential, derives the "optimized oscillator" whose
ground state is that Gaussian, and transplants it into the chain.
Energies are reported under five method names:

``expansion``
    The closed-form energy of the harmonic chain.

``e_psi``
    The full Hamiltonian on the harmonic chain's ground state.

``osc``
    The ground-state energy of the optimized-oscillator chain.

``e_psi_osc``
    The full Hamiltonian on the optimized-oscillator ground state.

``svm``
    The stochastic variational reference energy computed by
    ``dipolar_chains.svm``.

Additional methods may be registered in the "dipolar_chains.methods"
entrypoint group as subclasses of ``EnergyMethod``.

Errors
======

All errors derive from ``DipolarError``.  Invalid input raises
``ValidationError``, which carries the ``ConfigAddress`` of the
offending configuration value when there is one; failures of a
numerical procedure raise subclasses of ``NumericalError``.
"""

from dipolar_chains.addresses import ConfigAddress
from dipolar_chains.config import SweepConfig
from dipolar_chains.exceptions import (DipolarError, ValidationError,
                                       NumericalError, NoRootError,
                                       QuadratureError, NotPositiveDefinite,
                                       OptimizationError)
from dipolar_chains.harmonic import (HarmonicChainModel, ChainGaussian,
                                     PairTerm)
from dipolar_chains.landscape import ExpansionCoefficients
from dipolar_chains.methods import EnergyMethod
from dipolar_chains.potential import (ModelConfig, CriticalAngles,
                                      THETA_C, THETA_C_STAR)
from dipolar_chains.quadrature import PairMarginal
from dipolar_chains.svm import SvmBasisElement, SvmState
from dipolar_chains.variational import (PairGaussian, OptimizationResult,
                                        SweepCell, SweepOptions)

__all__ = [
    # addresses.py
    'ConfigAddress',

    # config.py
    'SweepConfig',

    # exceptions.py
    'DipolarError', 'ValidationError', 'NumericalError', 'NoRootError',
    'QuadratureError', 'NotPositiveDefinite', 'OptimizationError',

    # harmonic.py
    'HarmonicChainModel', 'ChainGaussian', 'PairTerm',

    # landscape.py
    'ExpansionCoefficients',

    # methods.py
    'EnergyMethod',

    # potential.py
    'ModelConfig', 'CriticalAngles', 'THETA_C', 'THETA_C_STAR',

    # quadrature.py
    'PairMarginal',

    # svm.py
    'SvmBasisElement', 'SvmState',

    # variational.py
    'PairGaussian', 'OptimizationResult', 'SweepCell', 'SweepOptions',
]
