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

import csv
import logging
import math
import os

from dipolar_chains import exceptions


# Environment variable capping worker threads
THREADS_ENV = 'DIPOLAR_CHAINS_THREADS'

# Significant digits for every emitted number
NUMBER_FORMAT = '%.12g'


def get_logger(name):
    """
    Return the package logger for a module.

    :param str name: The module name, usually ``__name__``.

    :returns: A child of the "dipolar_chains" logger.
    :rtype: ``logging.Logger``
    """

    return logging.getLogger('dipolar_chains').getChild(
        name.rsplit('.', 1)[-1]
    )


def check_finite(name, value):
    """
    Coerce a value to ``float`` and reject non-finite values.

    :param str name: The name of the value, for the error message.
    :param value: The value to check.

    :returns: The value as a ``float``.
    :rtype: ``float``

    :raises dipolar_chains.ValidationError:
        The value is not a finite number.
    """

    try:
        result = float(value)
    except (TypeError, ValueError):
        raise exceptions.ValidationError(
            '%s must be a number, got %r' % (name, value)
        )

    if not math.isfinite(result):
        raise exceptions.ValidationError(
            '%s must be finite, got %r' % (name, value)
        )

    return result


def check_theta(theta, lower=0.0):
    """
    Validate a tilt angle.

    :param theta: The tilt angle in radians.
    :param float lower: The smallest accepted angle.

    :returns: The angle as a ``float``.
    :rtype: ``float``

    :raises dipolar_chains.ValidationError:
        The angle lies outside ``[lower, pi/2]``.
    """

    theta = check_finite('theta', theta)

    # Tolerate rounding in symbolic pi/2
    if theta < lower or theta > math.pi / 2 + 1e-14:
        raise exceptions.ValidationError(
            'theta must lie in [%g, pi/2], got %r' % (lower, theta)
        )

    return min(theta, math.pi / 2)


def check_positive(name, value, strict=True):
    """
    Validate a positive (or non-negative) number.

    :param str name: The name of the value, for the error message.
    :param value: The value to check.
    :param bool strict: If ``True`` (the default), zero is rejected.

    :returns: The value as a ``float``.
    :rtype: ``float``

    :raises dipolar_chains.ValidationError:
        The value is not positive.
    """

    value = check_finite(name, value)
    if value < 0 or (strict and value == 0):
        raise exceptions.ValidationError(
            '%s must be %s, got %r' %
            (name, 'positive' if strict else 'non-negative', value)
        )

    return value


def thread_cap():
    """
    Determine the number of worker threads from the environment.

    :returns: The thread cap; defaults to 1.
    :rtype: ``int``

    :raises dipolar_chains.ValidationError:
        The environment variable is not a positive integer.
    """

    raw = os.environ.get(THREADS_ENV, '1')
    try:
        result = int(raw)
    except ValueError:
        result = 0

    if result < 1:
        raise exceptions.ValidationError(
            '%s must be a positive integer, got %r' % (THREADS_ENV, raw)
        )

    return result


def _canonicalize_path(cwd, path):
    """
    Canonicalizes a path relative to a given working directory.  That
    is, if the path is not absolute, it is interpreted relative to the
    specified working directory, then converted to absolute form.

    :param str cwd: The working directory.
    :param str path: The path to canonicalize.

    :returns: The absolute path.
    :rtype: ``str``
    """

    if not os.path.isabs(path):
        path = os.path.join(cwd, path)

    return os.path.abspath(path)


def format_row(row):
    """
    Format a row of values for CSV emission.  Floats use the package
    number format; ``None`` becomes an empty cell.

    :param row: The values.

    :returns: A list of strings.
    :rtype: ``list`` of ``str``
    """

    result = []
    for value in row:
        if value is None:
            result.append('')
        elif isinstance(value, bool):
            result.append('true' if value else 'false')
        elif isinstance(value, (float, int)) and not isinstance(value, bool):
            result.append(NUMBER_FORMAT % value)
        else:
            result.append(str(value))

    return result


def write_csv(path, header, rows):
    """
    Write a CSV table.

    :param str path: The output path.
    :param header: The column names.
    :type header: ``list`` of ``str``
    :param rows: The table rows.

    :returns: The path written.
    :rtype: ``str``

    :raises dipolar_chains.ValidationError:
        The file could not be written.
    """

    try:
        with open(path, 'w', newline='') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(header)
            for row in rows:
                writer.writerow(format_row(row))
    except (IOError, OSError) as exc:
        raise exceptions.ValidationError(
            'Unable to write "%s": %s' % (path, exc)
        )

    return path
