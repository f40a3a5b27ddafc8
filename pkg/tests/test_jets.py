import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis.strategies import floats

from curlkit.modules import jets
from curlkit.modules.jets import Jet
from curlkit.utilities.errors import DomainError, SingularPointError

import oracles

coordinates = floats(min_value=-2.0, max_value=2.0, allow_nan=False)


def _field(coords):
    x, y, z = coords
    return jets.sin(x * y) + jets.exp(z) * x / (jets.cos(y) * 0.5 + 2.0) - z ** 3


def _field_values(point):
    x, y, z = point
    return math.sin(x * y) + math.exp(z) * x / (math.cos(y) * 0.5 + 2.0) - z ** 3


@given(coordinates, coordinates, coordinates)
def test_jet_derivatives_match_central_differences(x, y, z):
    point = (x, y, z)
    result = _field(jets.seed_point(point))
    assert result.value == pytest.approx(_field_values(point), abs=1e-12)
    np.testing.assert_allclose(result.gradient, oracles.gradient(_field_values, point), atol=1e-6)
    np.testing.assert_allclose(result.hessian, oracles.hessian(_field_values, point), atol=1e-4)


def test_seed_variable_is_coordinate_function():
    jet = jets.seed_variable(1, (0.5, -1.0, 2.0), 3)
    assert jet.value == -1.0
    assert jet.gradient.tolist() == [0.0, 1.0, 0.0]
    assert not jet.hessian.any()


def test_hessian_is_symmetric():
    x, y = jets.seed_point((0.3, -0.7))
    result = jets.exp(x * y * y) * jets.sin(x)
    np.testing.assert_array_equal(result.hessian, result.hessian.T)


def test_partial_lowers_order():
    x, y = jets.seed_point((2.0, 3.0))
    f = x * x * y
    dx = f.partial(0)
    assert dx.order == 1
    assert dx.value == pytest.approx(12.0)
    assert dx.gradient.tolist() == pytest.approx([6.0, 4.0])
    assert dx.partial(1) == pytest.approx(4.0)


def test_partial_out_of_range():
    x, _ = jets.seed_point((1.0, 1.0))
    with pytest.raises(IndexError):
        x.partial(2)


def test_power_and_log():
    (x,) = jets.seed_point((4.0,))
    root = jets.power(x, 0.5)
    assert root.value == pytest.approx(2.0)
    assert root.gradient[0] == pytest.approx(0.25)
    assert root.hessian[0, 0] == pytest.approx(-1.0 / 32.0)
    logarithm = jets.log(x)
    assert logarithm.gradient[0] == pytest.approx(0.25)
    assert logarithm.hessian[0, 0] == pytest.approx(-1.0 / 16.0)


def test_integer_power_of_negative_value():
    (x,) = jets.seed_point((-2.0,))
    cube = x ** 3
    assert cube.value == -8.0
    assert cube.gradient[0] == pytest.approx(12.0)
    assert cube.hessian[0, 0] == pytest.approx(-12.0)


@pytest.mark.parametrize("function", [jets.sqrt, jets.log, lambda a: jets.power(a, 1.5)])
def test_domain_errors(function):
    (x,) = jets.seed_point((-1.0,))
    with pytest.raises(DomainError):
        function(x)


def test_division_by_zero_jet():
    x, y = jets.seed_point((1.0, 0.0))
    with pytest.raises(SingularPointError):
        x / y
    with pytest.raises(SingularPointError):
        x / 0


def test_elementary_dispatch():
    (x,) = jets.seed_point((0.5,))
    assert jets.elementary("sin", x).value == pytest.approx(math.sin(0.5))
    assert jets.elementary("powi", x, 2).value == pytest.approx(0.25)
    with pytest.raises(ValueError):
        jets.elementary("tan", x)


def test_arith_and_order_mixing():
    x, y = jets.seed_point((1.5, 2.0))
    assert jets.arith("mul", x, y).value == 3.0
    assert jets.arith("neg", x).value == -1.5
    mixed = x.truncate(1) * y
    assert mixed.order == 1
    assert mixed.gradient.tolist() == [2.0, 1.5]


def test_truncate_and_assemble():
    x, y = jets.seed_point((1.0, 2.0))
    f = x * y
    assert f.truncate(0) == 2.0
    array = np.array([[f, x], [y, 3.0]], dtype=object)
    assert jets.jet_order(array) == 2
    np.testing.assert_array_equal(jets.values(array), [[2.0, 1.0], [2.0, 3.0]])
    rebuilt = jets.assemble(jets.values(array), jets.gradients(array, 2), jets.hessians(array, 2))
    assert rebuilt[0, 0].gradient.tolist() == [2.0, 1.0]
    assert rebuilt[0, 0].hessian.tolist() == [[0.0, 1.0], [1.0, 0.0]]


def test_jet_rejects_unknown_order():
    with pytest.raises(ValueError):
        Jet(1.0, [0.0], order=3)
