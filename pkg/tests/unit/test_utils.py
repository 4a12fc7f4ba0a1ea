import logging
import math

import pytest

from dipolar_chains import exceptions
from dipolar_chains import utils


class TestGetLogger(object):
    def test_base(self):
        result = utils.get_logger('dipolar_chains.svm')

        assert result.name == 'dipolar_chains.svm'
        assert result.parent is logging.getLogger('dipolar_chains')


class TestCheckFinite(object):
    def test_number(self):
        assert utils.check_finite('x', '2.5') == 2.5

    def test_not_number(self):
        with pytest.raises(exceptions.ValidationError):
            utils.check_finite('x', 'spam')

    def test_none(self):
        with pytest.raises(exceptions.ValidationError):
            utils.check_finite('x', None)

    def test_nan(self):
        with pytest.raises(exceptions.ValidationError):
            utils.check_finite('x', float('nan'))

    def test_inf(self):
        with pytest.raises(exceptions.ValidationError):
            utils.check_finite('x', float('inf'))


class TestCheckTheta(object):
    def test_range(self):
        assert utils.check_theta(0.0) == 0.0
        assert utils.check_theta(1.0) == 1.0

    def test_rounded_half_pi(self):
        assert utils.check_theta(math.pi / 2 + 1e-15) == math.pi / 2

    def test_negative(self):
        with pytest.raises(exceptions.ValidationError):
            utils.check_theta(-0.1)

    def test_too_large(self):
        with pytest.raises(exceptions.ValidationError):
            utils.check_theta(2.0)

    def test_lower(self):
        with pytest.raises(exceptions.ValidationError):
            utils.check_theta(0.01, lower=0.05)


class TestCheckPositive(object):
    def test_positive(self):
        assert utils.check_positive('U', 3) == 3.0

    def test_zero_strict(self):
        with pytest.raises(exceptions.ValidationError):
            utils.check_positive('U', 0.0)

    def test_zero_not_strict(self):
        assert utils.check_positive('U', 0.0, strict=False) == 0.0

    def test_negative(self):
        with pytest.raises(exceptions.ValidationError):
            utils.check_positive('U', -1.0, strict=False)


class TestThreadCap(object):
    def test_default(self, mocker):
        mocker.patch.dict(utils.os.environ, clear=True)

        assert utils.thread_cap() == 1

    def test_set(self, mocker):
        mocker.patch.dict(utils.os.environ, {utils.THREADS_ENV: '4'})

        assert utils.thread_cap() == 4

    def test_invalid(self, mocker):
        mocker.patch.dict(utils.os.environ, {utils.THREADS_ENV: 'many'})

        with pytest.raises(exceptions.ValidationError):
            utils.thread_cap()

    def test_zero(self, mocker):
        mocker.patch.dict(utils.os.environ, {utils.THREADS_ENV: '0'})

        with pytest.raises(exceptions.ValidationError):
            utils.thread_cap()


class TestCanonicalizePath(object):
    def test_absolute(self, mocker):
        mocker.patch.object(
            utils.os.path, 'isabs',
            return_value=True,
        )
        mock_join = mocker.patch.object(
            utils.os.path, 'join',
            return_value='/joined/path',
        )
        mock_abspath = mocker.patch.object(
            utils.os.path, 'abspath',
            return_value='/absolute/path',
        )

        result = utils._canonicalize_path('/some/path', '/other/path')

        assert result == '/absolute/path'
        mock_join.assert_not_called()
        mock_abspath.assert_called_once_with('/other/path')

    def test_relative(self, mocker):
        mocker.patch.object(
            utils.os.path, 'isabs',
            return_value=False,
        )
        mock_join = mocker.patch.object(
            utils.os.path, 'join',
            return_value='/joined/path',
        )
        mock_abspath = mocker.patch.object(
            utils.os.path, 'abspath',
            return_value='/absolute/path',
        )

        result = utils._canonicalize_path('/some/path', 'other/path')

        assert result == '/absolute/path'
        mock_join.assert_called_once_with('/some/path', 'other/path')
        mock_abspath.assert_called_once_with('/joined/path')


class TestFormatRow(object):
    def test_base(self):
        result = utils.format_row([1.0 / 3.0, 2, None, True, 'svm'])

        assert result == ['0.333333333333', '2', '', 'true', 'svm']


class TestWriteCsv(object):
    def test_base(self, tmp_path):
        path = str(tmp_path / 'out.csv')

        result = utils.write_csv(path, ['U', 'E'], [(1.0, -0.5), (2, None)])

        assert result == path
        with open(path) as f:
            assert f.read() == 'U,E\n1,-0.5\n2,\n'

    def test_unwritable(self, tmp_path):
        path = str(tmp_path / 'missing' / 'out.csv')

        with pytest.raises(exceptions.ValidationError):
            utils.write_csv(path, ['U'], [])
