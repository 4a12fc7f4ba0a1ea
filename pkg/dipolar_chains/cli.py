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
Command line front end.  Every subcommand writes plot-ready CSV files
and a "manifest.json" with the resolved configuration into the output
directory.
"""

import argparse
import json
import logging
import math
import os
import sys

import numpy as np

from dipolar_chains import config
from dipolar_chains import exceptions
from dipolar_chains import harmonic
from dipolar_chains import landscape
from dipolar_chains import potential
from dipolar_chains import svm
from dipolar_chains import utils
from dipolar_chains import variational


LOG = utils.get_logger(__name__)

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

MANIFEST = 'manifest.json'

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2

# Extent and resolution of emitted grids, in units of d
GRID_EXTENT = 3.0
GRID_POINTS = 101
CUT_EXTENT = 4.0
CUT_POINTS = 801
DENSITY_EXTENT = 2.0
DENSITY_POINTS = 201


def _label(theta):
    return 'theta%.4f' % theta


def _u_label(strength_u):
    return 'U%s' % (utils.NUMBER_FORMAT % strength_u)


class Run(object):
    """
    The output side of one invocation: the output directory and the
    files written to it.
    """

    def __init__(self, command, cfg):
        self.command = command
        self.cfg = cfg
        self.files = []
        self.checks = {}

        try:
            os.makedirs(cfg.output_dir, exist_ok=True)
        except OSError as exc:
            raise exceptions.ValidationError(
                'Unable to create output directory "%s": %s' %
                (cfg.output_dir, exc)
            )

    def path(self, name):
        return os.path.join(self.cfg.output_dir, name)

    def write_csv(self, name, header, rows):
        """
        Write a CSV file into the output directory and record it.
        """

        utils.write_csv(self.path(name), header, rows)
        self.files.append(name)
        LOG.info('wrote %s', self.path(name))

    def write_json(self, name, data):
        try:
            with open(self.path(name), 'w') as f:
                json.dump(data, f, indent=2, sort_keys=True)
                f.write('\n')
        except (IOError, OSError) as exc:
            raise exceptions.ValidationError(
                'Unable to write "%s": %s' % (self.path(name), exc)
            )
        self.files.append(name)

    def finish(self):
        """
        Write the manifest.
        """

        self.write_json(MANIFEST, {
            'command': self.command,
            'config': self.cfg.to_dict(),
            'seed': self.cfg.seed,
            'files': sorted(self.files),
            'checks': self.checks,
        })


def _check(run, name, passed, detail):
    """
    Record a ``--verify`` self-check; a failure is a numerical error.
    """

    run.checks[name] = bool(passed)
    if not passed:
        raise exceptions.NumericalError(
            'self-check "%s" failed: %s' % (name, detail)
        )


def _emit_grid(run, args, thetas):
    for theta in thetas:
        model = potential.ModelConfig(theta, args.u)
        table = potential.emit_grid(
            model, (-GRID_EXTENT, GRID_EXTENT), (-GRID_EXTENT, GRID_EXTENT),
            args.resolution,
        )
        run.write_csv('potential_grid_%s.csv' % _label(theta),
                      ['x', 'y', 'V'], table)

        if args.verify:
            values = table[:, 2].reshape(args.resolution, args.resolution)
            _check(run, 'grid_y_symmetry_%s' % _label(theta),
                   np.allclose(values, values[::-1], rtol=1e-12,
                               atol=1e-14),
                   'V(x, y) != V(x, -y)')


def _emit_cuts(run, args):
    for theta in run.cfg.thetas:
        model = potential.ModelConfig(theta, args.u)
        table = potential.emit_cut(model, (-CUT_EXTENT, CUT_EXTENT),
                                   CUT_POINTS)
        run.write_csv('potential_cut_%s.csv' % _label(theta),
                      ['x', 'V'], table)

        if args.verify and theta == 0.0:
            minima = [point for point in
                      potential.stationary_points_on_axis(model)
                      if point.kind == 'min']
            _check(run, 'cut_two_minima_%s' % _label(theta),
                   len(minima) == 2 and math.isclose(
                       minima[0].value, minima[1].value, rel_tol=1e-10),
                   'minima %r' % (minima,))


def cmd_potential(args, cfg):
    """
    Emit the potential grid at pi/4 and the y = 0 cuts at every
    configured angle.
    """

    run = Run('potential', cfg)
    _emit_cuts(run, args)
    _emit_grid(run, args, [config.resolve_theta(args.grid_theta)])

    return run


def cmd_potential_grid(args, cfg):
    run = Run('potential-grid', cfg)
    _emit_grid(run, args, cfg.thetas)

    return run


def cmd_potential_cut(args, cfg):
    run = Run('potential-cut', cfg)
    _emit_cuts(run, args)

    return run


def cmd_landscape(args, cfg):
    """
    Tabulate the expansion coefficients over the tilt angle.
    """

    run = Run('landscape', cfg)
    thetas = np.linspace(landscape.THETA_MIN, math.pi / 2, args.points)
    run.write_csv(
        'landscape.csv', ['theta', 'a0', 'v0', 'alpha0', 'beta0'],
        landscape.sweep(thetas, cfg.alpha_form),
    )

    return run


def cmd_energy_sweep(args, cfg):
    """
    Compute the requested energies over the strength grid, one long
    table per angle.
    """

    run = Run('energy-sweep', cfg)
    for theta in cfg.thetas:
        rows = variational.energy_sweep(
            theta, cfg.u_grid, cfg.methods, cfg.options,
        )
        run.write_csv('energy_sweep_%s.csv' % _label(theta),
                      ['U', 'method', 'energy', 'converged'], rows)

    return run


def cmd_energies(args, cfg):
    """
    Compute the requested energies over the strength grid, one wide
    table per angle with a column per method.
    """

    run = Run('energies', cfg)
    for theta in cfg.thetas:
        rows = variational.energy_sweep(
            theta, cfg.u_grid, cfg.methods, cfg.options,
        )
        table = {}
        for strength_u, name, energy, _converged in rows:
            table.setdefault(strength_u, {})[name] = energy

        run.write_csv(
            'energies_%s.csv' % _label(theta), ['U'] + cfg.methods,
            [[strength_u] + [table[strength_u].get(name)
                             for name in cfg.methods]
             for strength_u in cfg.u_grid],
        )

        if args.verify and 'svm' in cfg.methods:
            # Only the variational energies bound the SVM energy
            for strength_u in cfg.u_grid:
                cells = table[strength_u]
                reference = cells.get('svm')
                bounds = [cells[name] for name in ('e_psi', 'e_psi_osc')
                          if cells.get(name) is not None]
                _check(run, 'svm_lowest_%s_%s' %
                       (_label(theta), _u_label(strength_u)),
                       reference is not None and
                       all(reference <= value + 1e-6 for value in bounds),
                       'svm %r, bounds %r' % (reference, bounds))

    return run


def _density_state(args, theta, strength_u, cfg):
    if args.state == 'osc':
        return variational.build_osc_chain(
            theta, strength_u, cfg.outer_pair, cfg.pair_constants,
            cfg.quadrature, cfg.alpha_form,
        )[1]

    coeffs = landscape.expansion_coefficients(theta, cfg.alpha_form)

    return harmonic.chain_wavefunction(coeffs, strength_u)


def cmd_density(args, cfg):
    """
    Emit the probability density of each layer's molecule for every
    configured ``(theta, U)``.
    """

    run = Run('density', cfg)
    axis = np.linspace(-DENSITY_EXTENT, DENSITY_EXTENT, args.resolution)
    cell = (axis[1] - axis[0]) ** 2

    for theta in cfg.thetas:
        for strength_u in cfg.u_grid:
            state = _density_state(args, theta, strength_u, cfg)
            for layer in (1, 2, 3):
                table = harmonic.layer_density(state, layer, axis, axis)
                run.write_csv(
                    'density_%s_%s_layer%d.csv' %
                    (_label(theta), _u_label(strength_u), layer),
                    ['x', 'y', 'F'], table,
                )

                if args.verify:
                    name = '%s_%s_layer%d' % (
                        _label(theta), _u_label(strength_u), layer,
                    )
                    total = table[:, 2].sum() * cell
                    _check(run, 'normalized_' + name,
                           abs(total - 1.0) <= 1e-6, 'total %r' % total)
                    peak = table[np.argmax(table[:, 2]), 0]
                    mean = harmonic.layer_marginal(state, layer)[0]
                    _check(run, 'peak_' + name,
                           abs(peak - mean) <= axis[1] - axis[0],
                           'peak %r, mean %r' % (peak, mean))

    return run


def cmd_svm_run(args, cfg):
    """
    Run the stochastic variational solver and persist its state.
    """

    run = Run('svm-run', cfg)
    for theta in cfg.thetas:
        for strength_u in cfg.u_grid:
            energy, state = svm.run(
                theta, strength_u, cfg.bodies,
                target_basis=cfg.svm_basis_size, seed=cfg.seed,
                candidates=cfg.svm_candidates, method=cfg.quadrature,
            )
            stem = 'svm_%s_%s_bodies%d' % (
                _label(theta), _u_label(strength_u), cfg.bodies,
            )
            run.write_json(stem + '.json', state.to_dict())
            run.write_csv(stem + '.csv', ['basis_size', 'energy'],
                          state.energy_history)

            if args.verify:
                energies = [entry[1] for entry in state.energy_history]
                _check(run, 'monotone_' + stem,
                       all(b <= a for a, b in zip(energies, energies[1:])),
                       'energy history %r' % energies)

    return run


def cmd_config(args):
    """
    Resolve the configuration of a subcommand: defaults, then the
    configuration file, then command line flags.

    :param args: The parsed arguments.

    :returns: The configuration.
    :rtype: ``dipolar_chains.SweepConfig``
    """

    if args.config:
        cfg = config.load(args.config, args.command)
    else:
        cfg = config.defaults(args.command)

    return cfg.override(
        theta=args.theta,
        u_grid=getattr(args, 'u_grid', None),
        u_min=getattr(args, 'u_min', None),
        u_max=getattr(args, 'u_max', None),
        steps=getattr(args, 'steps', None),
        methods=getattr(args, 'methods', None),
        output_dir=args.out,
        seed=args.seed,
        svm_basis_size=getattr(args, 'basis_size', None),
        svm_candidates=getattr(args, 'candidates', None),
        bodies=getattr(args, 'bodies', None),
        outer_pair=getattr(args, 'outer_pair', None),
        pair_constants=getattr(args, 'pair_constants', None),
        quadrature=getattr(args, 'quadrature', None),
        alpha_form=getattr(args, 'alpha_form', None),
    )


def _common(parser):
    parser.add_argument('--config', help='configuration file')
    parser.add_argument('--theta',
                        help='tilt angle(s): radians or pi/2, pi/4, '
                        'theta_c, theta_c_star; comma-separated')
    parser.add_argument('--out', help='output directory')
    parser.add_argument('--seed', type=int, help='random seed')
    parser.add_argument('--verify', action='store_true',
                        help='run the bundled self-checks')
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='increase logging verbosity')


def _strengths(parser):
    parser.add_argument('--u', dest='u_grid',
                        help='dipolar strength(s), comma-separated')
    parser.add_argument('--u-min', type=float, help='smallest strength')
    parser.add_argument('--u-max', type=float, help='largest strength')
    parser.add_argument('--steps', type=int, help='number of strengths')


def _model(parser):
    parser.add_argument('--outer-pair', choices=('independent', 'scaled'))
    parser.add_argument('--pair-constants', choices=('on', 'off'))
    parser.add_argument('--quadrature', choices=('laplace', 'hermite'))
    parser.add_argument('--alpha-form', choices=('curvature', 'printed'))


def _svm(parser):
    parser.add_argument('--basis-size', type=int, help='SVM basis size')
    parser.add_argument('--candidates', type=int,
                        help='SVM candidates per step')


def build_parser():
    """
    Build the argument parser.

    :returns: The parser.
    :rtype: ``argparse.ArgumentParser``
    """

    parser = argparse.ArgumentParser(
        prog='dipolar-chains',
        description='Dipolar chains in stacked layers with tilted dipoles.',
    )
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    for name, func, helptext in (
            ('potential', cmd_potential, 'potential grid and cuts'),
            ('potential-grid', cmd_potential_grid, 'potential grid'),
            ('potential-cut', cmd_potential_cut, 'potential cuts')):
        cmd = sub.add_parser(name, help=helptext)
        _common(cmd)
        cmd.add_argument('--u', type=float, default=1.0,
                         help='dipolar strength')
        cmd.add_argument('--resolution', type=int, default=GRID_POINTS,
                         help='grid points per axis')
        if name == 'potential':
            cmd.add_argument('--grid-theta', default='pi/4',
                             help='tilt angle of the grid')
        cmd.set_defaults(func=func)

    cmd = sub.add_parser('landscape', help='expansion coefficients')
    _common(cmd)
    cmd.add_argument('--points', type=int, default=50,
                     help='number of tilt angles')
    cmd.add_argument('--alpha-form', choices=('curvature', 'printed'))
    cmd.set_defaults(func=cmd_landscape)

    for name, func, helptext in (
            ('energy-sweep', cmd_energy_sweep, 'energies, long table'),
            ('energies', cmd_energies, 'energies, one column per method')):
        cmd = sub.add_parser(name, help=helptext)
        _common(cmd)
        _strengths(cmd)
        _model(cmd)
        _svm(cmd)
        cmd.add_argument('--methods', help='comma-separated methods')
        cmd.set_defaults(func=func)

    cmd = sub.add_parser('density', help='layer probability densities')
    _common(cmd)
    _strengths(cmd)
    _model(cmd)
    cmd.add_argument('--state', choices=('expansion', 'osc'),
                     default='expansion', help='chain state')
    cmd.add_argument('--resolution', type=int, default=DENSITY_POINTS,
                     help='grid points per axis')
    cmd.set_defaults(func=cmd_density)

    cmd = sub.add_parser('svm-run', help='stochastic variational solver')
    _common(cmd)
    _strengths(cmd)
    _svm(cmd)
    cmd.add_argument('--bodies', type=int, choices=(2, 3))
    cmd.add_argument('--quadrature', choices=('laplace', 'hermite'))
    cmd.set_defaults(func=cmd_svm_run)

    return parser


def _setup_logging(verbosity):
    """
    Attach a stderr handler to the package logger.
    """

    logger = logging.getLogger('dipolar_chains')
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)

    logger.setLevel(
        logging.DEBUG if verbosity >= 2 else
        logging.INFO if verbosity == 1 else logging.WARNING
    )


def main(argv=None):
    """
    Run the command line front end.

    :param argv: The arguments; defaults to ``sys.argv[1:]``.

    :returns: The exit code: 0 on success, 1 for invalid input, 2 for
              numerical failures.
    :rtype: ``int``
    """

    args = build_parser().parse_args(argv)
    _setup_logging(args.verbose)

    try:
        cfg = cmd_config(args)
        run = args.func(args, cfg)
        run.finish()
    except exceptions.ValidationError as exc:
        LOG.error('%s', exc)
        return EXIT_VALIDATION
    except exceptions.NumericalError as exc:
        LOG.error('%s', exc)
        return EXIT_NUMERICAL

    return EXIT_OK
