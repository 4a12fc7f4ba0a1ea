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
Named energy methods.  Each method computes one chain energy for a
``dipolar_chains.SweepCell``; methods are looked up by name in the
"dipolar_chains.methods" entrypoint group, falling back to the
built-in methods declared here.
"""

import abc

import entrypointer

from dipolar_chains import exceptions
from dipolar_chains import utils


LOG = utils.get_logger(__name__)

NAMESPACE = 'dipolar_chains.methods'

METHOD_NAMES = ('expansion', 'e_psi', 'osc', 'e_psi_osc', 'svm')


class EnergyMethod(object, metaclass=abc.ABCMeta):
    """
    Abstract superclass for energy methods.
    """

    name = None

    @abc.abstractmethod
    def compute(self, cell):
        """
        Compute the energy of a sweep cell.

        :param cell: The sweep cell.
        :type cell: ``dipolar_chains.SweepCell``

        :returns: A tuple ``(energy, converged)``.
        """

        pass  # pragma: no cover


class ExpansionMethod(EnergyMethod):
    """
    The closed-form energy of the harmonic expansion.
    """

    name = 'expansion'

    def compute(self, cell):
        return cell.expansion_energy(), True


class PsiMethod(EnergyMethod):
    """
    The full Hamiltonian evaluated on the expansion ground state.
    """

    name = 'e_psi'

    def compute(self, cell):
        return cell.e_psi(), True


class OscMethod(EnergyMethod):
    """
    The ground-state energy of the optimized-oscillator chain.
    """

    name = 'osc'

    def compute(self, cell):
        return cell.osc_energy(), cell.osc_converged


class PsiOscMethod(EnergyMethod):
    """
    The full Hamiltonian evaluated on the optimized-oscillator ground
    state.
    """

    name = 'e_psi_osc'

    def compute(self, cell):
        return cell.e_psi_osc(), cell.osc_converged


class SvmMethod(EnergyMethod):
    """
    The stochastic variational reference energy.
    """

    name = 'svm'

    def compute(self, cell):
        return cell.svm_energy(), True


BUILTINS = {
    cls.name: cls
    for cls in (ExpansionMethod, PsiMethod, OscMethod, PsiOscMethod,
                SvmMethod)
}

_group = None


def _lookup(name):
    """
    Look a method class up in the entrypoint group.
    """

    global _group

    if _group is None:
        _group = getattr(entrypointer.eps, NAMESPACE)

    return _group[name]


def get_method(name):
    """
    Resolve an energy method by name.

    :param str name: The method name.

    :returns: An instance of the method.
    :rtype: ``EnergyMethod``

    :raises dipolar_chains.ValidationError:
        No method of that name exists.
    """

    try:
        method_cls = _lookup(name)
    except (KeyError, ImportError):
        method_cls = BUILTINS.get(name)

    if method_cls is None:
        raise exceptions.ValidationError(
            'Unknown energy method "%s"; known methods are %s' %
            (name, ', '.join(METHOD_NAMES))
        )

    LOG.debug('energy method %s resolved to %r', name, method_cls)

    return method_cls()
