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

import configparser
import math
import os
import re

import numpy as np

from dipolar_chains import addresses
from dipolar_chains import exceptions
from dipolar_chains import methods
from dipolar_chains import potential
from dipolar_chains import quadrature
from dipolar_chains import utils
from dipolar_chains import variational


LOG = utils.get_logger(__name__)

SYMBOLIC_THETAS = {
    'pi/2': math.pi / 2,
    'pi/4': math.pi / 4,
    'theta_c': potential.THETA_C,
    'theta_c_star': potential.THETA_C_STAR,
}

BOOLEANS = {
    'on': True, 'true': True, 'yes': True, '1': True,
    'off': False, 'false': False, 'no': False, '0': False,
}

DEFAULTS = {
    'theta': 'pi/2',
    'u_min': '1',
    'u_max': '20',
    'steps': '20',
    'methods': ','.join(methods.METHOD_NAMES),
    'output_dir': '.',
    'seed': '0',
    'svm_basis_size': '80',
    'svm_candidates': '30',
    'outer_pair': 'independent',
    'pair_constants': 'on',
    'quadrature': 'laplace',
    'alpha_form': 'curvature',
    'bodies': '3',
}

# Defaults of particular subcommands, below the file values
SECTION_DEFAULTS = {
    'density': {'theta': 'theta_c_star', 'u_grid': '5, 15'},
    'svm-run': {'u_grid': '10'},
    'potential': {'theta': '0, theta_c, theta_c_star, pi/2'},
    'potential-cut': {'theta': '0, theta_c, theta_c_star, pi/2'},
    'potential-grid': {'theta': 'pi/4'},
    'energies': {'theta': 'pi/2, theta_c_star'},
}

_SECTION_RE = re.compile(r'^\s*\[(?P<name>[^\]]+)\]')
_KEY_RE = re.compile(r'^\s*(?P<key>[^=:#;\s][^=:]*?)\s*[=:]')


def _key_lines(text):
    """
    Map each ``(section, key)`` of an INI text to its line number.
    """

    result = {}
    section = configparser.DEFAULTSECT
    for lineno, line in enumerate(text.splitlines(), 1):
        match = _SECTION_RE.match(line)
        if match:
            section = match.group('name').strip()
            continue

        match = _KEY_RE.match(line)
        if match and not line[:1].isspace():
            result[(section, match.group('key').strip().lower())] = lineno

    return result


def resolve_theta(value, addr=None):
    """
    Resolve a tilt angle given as a number of radians or one of the
    symbols "pi/2", "theta_c" and "theta_c_star".

    :param value: The angle.
    :param addr: The address of the value.
    :type addr: ``dipolar_chains.ConfigAddress``

    :returns: The angle in radians.
    :rtype: ``float``

    :raises dipolar_chains.ValidationError:
        The value is not a valid angle.
    """

    if isinstance(value, str):
        text = value.strip().lower()
        if text in SYMBOLIC_THETAS:
            return SYMBOLIC_THETAS[text]
        try:
            value = float(text)
        except ValueError:
            raise exceptions.ValidationError(
                'Invalid theta "%s"; use radians or one of %s' %
                (value, ', '.join(sorted(SYMBOLIC_THETAS))), addr,
            )

    try:
        return utils.check_theta(value)
    except exceptions.ValidationError as exc:
        raise exceptions.ValidationError(str(exc), addr)


def _split(value):
    return [item.strip() for item in str(value).split(',') if item.strip()]


def _number(name, value, addr, kind=float):
    try:
        return kind(str(value).strip())
    except ValueError:
        raise exceptions.ValidationError(
            '%s must be %s, got "%s"' %
            (name, 'an integer' if kind is int else 'a number', value), addr,
        )


class SweepConfig(object):
    """
    The resolved parameters of a run.  Values come from the built-in
    defaults, then the "[DEFAULT]" and subcommand sections of a
    configuration file, then command line flags.
    """

    def __init__(self, raw=None, addrs=None):
        """
        Initialize and validate a ``SweepConfig`` instance.

        :param dict raw: Raw string values by key; missing keys take
                         the defaults.
        :param dict addrs: The address of each key, for error
                           reporting.
        """

        self.raw = dict(DEFAULTS)
        self.raw.update(raw or {})
        self.addrs = addrs or {}

        self._resolve()

    def _addr(self, key):
        return self.addrs.get(key)

    def _resolve(self):
        """
        Convert and validate all values.
        """

        raw = self.raw

        self.thetas = [
            resolve_theta(item, self._addr('theta'))
            for item in _split(raw['theta'])
        ]
        if not self.thetas:
            raise exceptions.ValidationError(
                'theta must not be empty', self._addr('theta'),
            )

        if raw.get('u_grid'):
            addr = self._addr('u_grid')
            grid = [_number('u_grid', item, addr)
                    for item in _split(raw['u_grid'])]
        else:
            addr = self._addr('steps') or self._addr('u_min')
            u_min = _number('u_min', raw['u_min'], self._addr('u_min'))
            u_max = _number('u_max', raw['u_max'], self._addr('u_max'))
            steps = _number('steps', raw['steps'], self._addr('steps'), int)
            if steps < 1:
                raise exceptions.ValidationError(
                    'steps must be positive, got %d' % steps, addr,
                )
            grid = ([u_min] if steps == 1 else
                    np.linspace(u_min, u_max, steps).tolist())

        if not grid or any(not math.isfinite(u) or u <= 0 for u in grid):
            raise exceptions.ValidationError(
                'U values must be positive, got %s' %
                ', '.join('%g' % u for u in grid), addr,
            )
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise exceptions.ValidationError(
                'U values must be strictly increasing', addr,
            )
        self.u_grid = grid

        self.methods = _split(raw['methods'])
        if not self.methods:
            raise exceptions.ValidationError(
                'methods must not be empty', self._addr('methods'),
            )
        for name in self.methods:
            self._check_method(name)

        self.output_dir = str(raw['output_dir']).strip()

        for key in ('seed', 'svm_basis_size', 'svm_candidates', 'bodies'):
            value = _number(key, raw[key], self._addr(key), int)
            if value < (0 if key == 'seed' else 1):
                raise exceptions.ValidationError(
                    '%s is out of range: %d' % (key, value), self._addr(key),
                )
            setattr(self, key, value)
        if self.bodies not in (2, 3):
            raise exceptions.ValidationError(
                'bodies must be 2 or 3, got %d' % self.bodies,
                self._addr('bodies'),
            )

        self.outer_pair = self._choice(
            'outer_pair', variational.OUTER_PAIR_MODES,
        )
        self.quadrature = self._choice('quadrature', quadrature.METHODS)
        self.alpha_form = self._choice('alpha_form', ('curvature', 'printed'))

        flag = str(raw['pair_constants']).strip().lower()
        if flag not in BOOLEANS:
            raise exceptions.ValidationError(
                'pair_constants must be "on" or "off", got "%s"' %
                raw['pair_constants'], self._addr('pair_constants'),
            )
        self.pair_constants = BOOLEANS[flag]

    def _check_method(self, name):
        try:
            methods.get_method(name)
        except exceptions.ValidationError as exc:
            raise exceptions.ValidationError(
                str(exc), self._addr('methods'),
            )

    def _choice(self, key, choices):
        value = str(self.raw[key]).strip()
        if value not in choices:
            raise exceptions.ValidationError(
                '%s must be one of %s, got "%s"' %
                (key, ', '.join(choices), value), self._addr(key),
            )

        return value

    @property
    def theta(self):
        """
        The first (usually the only) tilt angle.
        """

        return self.thetas[0]

    @property
    def options(self):
        """
        The options passed to energy sweeps.
        """

        return variational.SweepOptions(
            outer_pair=self.outer_pair,
            pair_constants=self.pair_constants,
            quadrature=self.quadrature,
            alpha_form=self.alpha_form,
            seed=self.seed,
            svm_basis_size=self.svm_basis_size,
            svm_candidates=self.svm_candidates,
        )

    def override(self, **kwargs):
        """
        Construct a new configuration with some values replaced.
        Values of ``None`` are ignored.

        :returns: The new configuration.
        :rtype: ``SweepConfig``
        """

        raw = dict(self.raw)
        addrs = dict(self.addrs)
        for key, value in kwargs.items():
            if value is None:
                continue
            if isinstance(value, (list, tuple)):
                value = ','.join(str(item) for item in value)
            raw[key] = str(value)
            addrs[key] = addresses.ConfigAddress('<command line>', '--%s' %
                                                 key.replace('_', '-'))

        # An explicit range on the command line replaces a file grid
        if any(kwargs.get(key) is not None
               for key in ('u_min', 'u_max', 'steps')) and \
                kwargs.get('u_grid') is None:
            raw.pop('u_grid', None)

        return self.__class__(raw, addrs)

    def to_dict(self):
        """
        The resolved configuration, for the run manifest.
        """

        return {
            'thetas': self.thetas,
            'u_grid': self.u_grid,
            'methods': self.methods,
            'output_dir': self.output_dir,
            'seed': self.seed,
            'svm_basis_size': self.svm_basis_size,
            'svm_candidates': self.svm_candidates,
            'outer_pair': self.outer_pair,
            'pair_constants': self.pair_constants,
            'quadrature': self.quadrature,
            'alpha_form': self.alpha_form,
            'bodies': self.bodies,
        }


def defaults(section):
    """
    The configuration of a subcommand when no file is given.

    :param str section: The subcommand name.

    :returns: The configuration.
    :rtype: ``SweepConfig``
    """

    return SweepConfig(SECTION_DEFAULTS.get(section, {}))


def load(filename, section):
    """
    Load a configuration file.

    :param str filename: The path of the file.
    :param str section: The subcommand section to read, in addition
                        to "[DEFAULT]".

    :returns: The configuration.
    :rtype: ``SweepConfig``

    :raises dipolar_chains.ValidationError:
        The file cannot be read, cannot be parsed or holds invalid
        values.
    """

    try:
        with open(filename) as f:
            text = f.read()
    except (IOError, OSError) as exc:
        raise exceptions.ValidationError(
            'Unable to read configuration "%s": %s' % (filename, exc)
        )

    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text, source=filename)
    except configparser.Error as exc:
        raise exceptions.ValidationError(
            'Unable to parse configuration "%s": %s' % (filename, exc),
            addresses.ConfigAddress(filename, '', getattr(exc, 'lineno',
                                                          None)),
        )

    lines = _key_lines(text)
    base = addresses.ConfigAddress(filename)
    values = parser[section] if parser.has_section(section) else \
        parser[configparser.DEFAULTSECT]

    raw = dict(SECTION_DEFAULTS.get(section, {}))
    addrs = {}
    for key, value in values.items():
        where = section if (section, key) in lines else \
            configparser.DEFAULTSECT
        addr = base.section(where).key(key)
        if (where, key) in lines:
            addr = addr.line(lines[(where, key)])

        if key not in DEFAULTS and key != 'u_grid':
            raise exceptions.ValidationError(
                'Unknown configuration key "%s"' % key, addr,
            )

        # Output paths in a file are relative to the file
        if key == 'output_dir':
            value = utils._canonicalize_path(
                os.path.dirname(os.path.abspath(filename)), value.strip(),
            )

        raw[key] = value
        addrs[key] = addr

    # A range in the file replaces a subcommand's default grid
    if 'u_grid' not in addrs and any(
            key in addrs for key in ('u_min', 'u_max', 'steps')):
        raw.pop('u_grid', None)

    LOG.debug('loaded %d keys from %s [%s]', len(raw), filename, section)

    return SweepConfig(raw, addrs)
