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


class DipolarError(Exception):
    """
    Base class for all errors reported by ``dipolar_chains``.
    """

    pass


class ValidationError(DipolarError):
    """
    Report an invalid input or configuration value.  The address, if
    provided, will be stored in the ``addr`` attribute.
    """

    def __init__(self, msg, addr=None):
        """
        Initialize a ``ValidationError`` instance.

        :param str msg: A message describing the error.
        :param addr: The address at which the error occurred.
        :type addr: ``dipolar_chains.ConfigAddress``
        """

        # Add the address to the message
        if addr is not None:
            msg += ' (%s)' % addr

        super(ValidationError, self).__init__(msg)

        # Save the address
        self.addr = addr


class NumericalError(DipolarError):
    """
    Base class for failures of a numerical procedure on otherwise
    valid input.
    """

    pass


class NoRootError(NumericalError):
    """
    Raised when root bracketing finds no sign change where one is
    required.
    """

    pass


class QuadratureError(NumericalError):
    """
    Raised when the Gaussian-weighted quadrature fails to converge.
    The last two estimates are kept in the ``estimates`` attribute.
    """

    def __init__(self, msg, estimates=()):
        """
        Initialize a ``QuadratureError`` instance.

        :param str msg: A message describing the error.
        :param tuple estimates: The last two quadrature estimates.
        """

        if estimates:
            msg += ' (last estimates: %s)' % ', '.join(
                '%.12g' % est for est in estimates
            )

        super(QuadratureError, self).__init__(msg)

        self.estimates = tuple(estimates)


class NotPositiveDefinite(NumericalError):
    """
    Raised when a quadratic form or an overlap matrix that must be
    positive-definite is not.  The offending eigenvalues are kept in
    the ``eigenvalues`` attribute.
    """

    def __init__(self, msg, eigenvalues=None):
        """
        Initialize a ``NotPositiveDefinite`` instance.

        :param str msg: A message describing the error.
        :param eigenvalues: The eigenvalues of the rejected matrix.
        """

        if eigenvalues is not None:
            msg += ' (eigenvalues: %s)' % ', '.join(
                '%.6g' % val for val in eigenvalues
            )

        super(NotPositiveDefinite, self).__init__(msg)

        self.eigenvalues = eigenvalues


class OptimizationError(NumericalError):
    """
    Raised when a variational optimization cannot produce a usable
    result.
    """

    pass
