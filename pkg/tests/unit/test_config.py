import math

import pytest

from dipolar_chains import addresses
from dipolar_chains import config
from dipolar_chains import exceptions
from dipolar_chains import potential


def write_ini(tmp_path, text, name='run.ini'):
    path = tmp_path / name
    path.write_text(text)

    return str(path)


class TestResolveTheta(object):
    def test_symbols(self):
        assert config.resolve_theta('pi/2') == math.pi / 2
        assert config.resolve_theta(' PI/4 ') == math.pi / 4
        assert config.resolve_theta('theta_c') == potential.THETA_C
        assert config.resolve_theta('theta_c_star') == potential.THETA_C_STAR

    def test_radians(self):
        assert config.resolve_theta('0.5') == 0.5
        assert config.resolve_theta(1.0) == 1.0

    def test_invalid(self):
        addr = addresses.ConfigAddress('run.ini', '/[energies]/theta', 3)

        with pytest.raises(exceptions.ValidationError) as exc_info:
            config.resolve_theta('spam', addr)

        assert exc_info.value.addr is addr

    def test_out_of_range(self):
        addr = addresses.ConfigAddress('run.ini', '/[energies]/theta', 3)

        with pytest.raises(exceptions.ValidationError) as exc_info:
            config.resolve_theta('2.0', addr)

        assert exc_info.value.addr is addr


class TestSweepConfig(object):
    def test_defaults(self):
        result = config.SweepConfig()

        assert result.thetas == [math.pi / 2]
        assert result.theta == math.pi / 2
        assert result.u_grid == [float(u) for u in range(1, 21)]
        assert result.methods == list(config.methods.METHOD_NAMES)
        assert result.seed == 0
        assert result.bodies == 3
        assert result.pair_constants is True
        assert result.outer_pair == 'independent'

    def test_explicit_grid(self):
        result = config.SweepConfig({'u_grid': '10, 2.5e1'})

        assert result.u_grid == [10.0, 25.0]

    def test_single_step(self):
        result = config.SweepConfig({'u_min': '3', 'steps': '1'})

        assert result.u_grid == [3.0]

    def test_grid_not_increasing(self):
        with pytest.raises(exceptions.ValidationError):
            config.SweepConfig({'u_grid': '3, 2'})

    def test_grid_not_positive(self):
        with pytest.raises(exceptions.ValidationError):
            config.SweepConfig({'u_grid': '0, 2'})

    def test_bad_steps(self):
        with pytest.raises(exceptions.ValidationError):
            config.SweepConfig({'steps': 'many'})

    def test_bad_bodies(self):
        with pytest.raises(exceptions.ValidationError):
            config.SweepConfig({'bodies': '4'})

    def test_bad_choice(self):
        for key in ('outer_pair', 'quadrature', 'alpha_form'):
            with pytest.raises(exceptions.ValidationError):
                config.SweepConfig({key: 'spam'})

    def test_pair_constants_off(self):
        result = config.SweepConfig({'pair_constants': 'Off'})

        assert result.pair_constants is False

    def test_bad_pair_constants(self):
        with pytest.raises(exceptions.ValidationError):
            config.SweepConfig({'pair_constants': 'maybe'})

    def test_unknown_method(self):
        addr = addresses.ConfigAddress('run.ini', '/[energies]/methods', 5)

        with pytest.raises(exceptions.ValidationError) as exc_info:
            config.SweepConfig({'methods': 'expansion, spam'},
                               {'methods': addr})

        assert exc_info.value.addr is addr

    def test_options(self):
        result = config.SweepConfig({
            'seed': '4', 'outer_pair': 'scaled', 'svm_basis_size': '20',
        }).options

        assert result.seed == 4
        assert result.outer_pair == 'scaled'
        assert result.svm_basis_size == 20
        assert result.quadrature == 'laplace'

    def test_to_dict(self):
        result = config.SweepConfig({'u_grid': '5'}).to_dict()

        assert result['u_grid'] == [5.0]
        assert result['thetas'] == [math.pi / 2]
        assert result['bodies'] == 3


class TestOverride(object):
    def test_replace(self):
        cfg = config.SweepConfig({'seed': '2'})

        result = cfg.override(seed=5, theta=None)

        assert result.seed == 5
        assert cfg.seed == 2
        assert result.thetas == cfg.thetas

    def test_command_line_address(self):
        cfg = config.SweepConfig()

        with pytest.raises(exceptions.ValidationError) as exc_info:
            cfg.override(theta='spam')

        assert str(exc_info.value.addr) == '<command line>:--theta'

    def test_range_replaces_grid(self):
        cfg = config.defaults('density')

        result = cfg.override(u_min=1.0, u_max=2.0, steps=2)

        assert result.u_grid == [1.0, 2.0]

    def test_list_values(self):
        result = config.SweepConfig().override(methods=['expansion', 'svm'])

        assert result.methods == ['expansion', 'svm']


class TestDefaults(object):
    def test_density(self):
        result = config.defaults('density')

        assert result.thetas == [potential.THETA_C_STAR]
        assert result.u_grid == [5.0, 15.0]

    def test_energies(self):
        result = config.defaults('energies')

        assert result.thetas == [math.pi / 2, potential.THETA_C_STAR]

    def test_potential(self):
        result = config.defaults('potential')

        assert result.thetas == [0.0, potential.THETA_C,
                                 potential.THETA_C_STAR, math.pi / 2]

    def test_unknown_section(self):
        result = config.defaults('landscape')

        assert result.thetas == [math.pi / 2]


class TestLoad(object):
    def test_sections(self, tmp_path):
        path = write_ini(tmp_path, '\n'.join([
            '[DEFAULT]',
            'seed = 7',
            'output_dir = results',
            '',
            '[energies]',
            'theta = pi/2',
            'u_min = 2',
            'u_max = 4',
            'steps = 3',
            '',
        ]))

        result = config.load(path, 'energies')

        assert result.seed == 7
        assert result.thetas == [math.pi / 2]
        assert result.u_grid == [2.0, 3.0, 4.0]
        assert result.output_dir == str(tmp_path / 'results')
        assert result.addrs['seed'].lineno == 2
        assert str(result.addrs['theta']) == '%s:6:/[energies]/theta' % path

    def test_default_only(self, tmp_path):
        path = write_ini(tmp_path, '[DEFAULT]\nseed = 3\n')

        result = config.load(path, 'svm-run')

        assert result.seed == 3
        assert result.u_grid == [10.0]

    def test_range_replaces_section_grid(self, tmp_path):
        path = write_ini(tmp_path,
                         '[density]\nu_min = 1\nu_max = 3\nsteps = 3\n')

        result = config.load(path, 'density')

        assert result.u_grid == [1.0, 2.0, 3.0]

    def test_bad_value_address(self, tmp_path):
        path = write_ini(tmp_path, '[energies]\n\ntheta = spam\n')

        with pytest.raises(exceptions.ValidationError) as exc_info:
            config.load(path, 'energies')

        assert exc_info.value.addr.lineno == 3
        assert exc_info.value.addr.path == '/[energies]/theta'

    def test_unknown_key(self, tmp_path):
        path = write_ini(tmp_path, '[energies]\ncolour = red\n')

        with pytest.raises(exceptions.ValidationError) as exc_info:
            config.load(path, 'energies')

        assert exc_info.value.addr.lineno == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(exceptions.ValidationError):
            config.load(str(tmp_path / 'missing.ini'), 'energies')

    def test_unparseable(self, tmp_path):
        path = write_ini(tmp_path, 'theta = pi/2\n')

        with pytest.raises(exceptions.ValidationError):
            config.load(path, 'energies')

    def test_absolute_output_dir(self, tmp_path):
        target = str(tmp_path / 'elsewhere')
        path = write_ini(tmp_path, '[DEFAULT]\noutput_dir = %s\n' % target)

        result = config.load(path, 'energies')

        assert result.output_dir == target
