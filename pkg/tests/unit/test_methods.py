import pytest

from dipolar_chains import exceptions
from dipolar_chains import methods


class MethodForTest(methods.EnergyMethod):
    name = 'test'

    def compute(self, cell):
        return -1.0, True


class TestGetMethod(object):
    def test_cached(self, mocker):
        klass = mocker.Mock(return_value='method')
        cached = mocker.Mock(return_value='cached')
        mocker.patch.object(
            methods.entrypointer.eps, 'dipolar_chains.methods',
            {'test': klass},
        )
        mocker.patch.object(methods, '_group', {'test': cached})

        result = methods.get_method('test')

        assert result == 'cached'
        klass.assert_not_called()
        cached.assert_called_once_with()

    def test_uncached(self, mocker):
        mocker.patch.object(
            methods.entrypointer.eps, 'dipolar_chains.methods',
            {'test': MethodForTest},
        )
        mocker.patch.object(methods, '_group', None)

        result = methods.get_method('test')

        assert isinstance(result, MethodForTest)
        assert methods._group == {'test': MethodForTest}

    def test_builtin_fallback(self, mocker):
        mocker.patch.object(methods, '_group', {'test': MethodForTest})

        for name in methods.METHOD_NAMES:
            result = methods.get_method(name)

            assert isinstance(result, methods.BUILTINS[name])
            assert result.name == name

    def test_unknown(self, mocker):
        mocker.patch.object(methods, '_group', {'test': MethodForTest})

        with pytest.raises(exceptions.ValidationError):
            methods.get_method('spam')

    def test_broken_entrypoint(self, mocker):
        group = mocker.MagicMock(**{'__getitem__.side_effect': ImportError})
        mocker.patch.object(methods, '_group', group)

        result = methods.get_method('svm')

        assert isinstance(result, methods.SvmMethod)

    def test_imports_entrypointer(self):
        assert methods.entrypointer.eps is not None


class TestBuiltins(object):
    def test_compute(self, mocker):
        cell = mocker.Mock(**{
            'expansion_energy.return_value': -1.0,
            'e_psi.return_value': -2.0,
            'osc_energy.return_value': -3.0,
            'e_psi_osc.return_value': -4.0,
            'svm_energy.return_value': -5.0,
            'osc_converged': False,
        })

        result = [methods.BUILTINS[name]().compute(cell)
                  for name in methods.METHOD_NAMES]

        assert result == [(-1.0, True), (-2.0, True), (-3.0, False),
                          (-4.0, False), (-5.0, True)]

    def test_abstract(self):
        with pytest.raises(TypeError):
            methods.EnergyMethod()
