from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis.strategies import fractions, integers
from sympy import QQ

from curlkit.modules.darboux_poly import (OperatorDecomposition, Poly, PolyDiffOp, PolyVectorField,
                                          WeightedDensityPoly, bracket_field_sign, compose_ops, euler_field, generators,
                                          hamiltonian_field, hamiltonian_of, hamiltonian_weight,
                                          lie_derivative_density, lie_derivative_operator, multiplication_operator,
                                          poisson_bracket, random_decomposition, random_poly, random_tangent_field,
                                          random_weight, reeb_field, subsymbol_from_coefficients,
                                          subsymbol_from_decomposition, subsymbol_groups,
                                          subsymbol_prefactor, variable_names)
from curlkit.utilities.errors import NonTangentFieldError, OrderOverflowError

N = 3
X, Y, Z = (Poly.variable(N, i) for i in range(N))


def _density(poly, ell=1):
    return WeightedDensityPoly(poly, hamiltonian_weight(ell))


def test_variable_names():
    assert variable_names(1) == ["x1", "y1", "z"]
    assert variable_names(2) == ["x1", "x2", "y1", "y2", "z"]


def test_exact_arithmetic():
    p = X * Fraction(1, 2) + Y * Z - 3
    assert (p - p).is_zero()
    assert (p * 2).terms[(1, 0, 0)] == 1
    assert p.derivative(2) == Y
    assert p.evaluate([Fraction(2), Fraction(1), Fraction(1, 3)]) == Fraction(1) + Fraction(1, 3) - 3
    assert ((X + Y) ** 2 - X * X - Y * Y) == X * Y * 2
    assert (p / 2).constant_term() == Fraction(-3, 2)
    with pytest.raises(ZeroDivisionError):
        p / 0
    with pytest.raises(ValueError):
        X + Poly.variable(5, 0)


def test_polynomials_live_in_the_rational_ring():
    p = X * Fraction(1, 3) - Y * Z * Fraction(5, 2) + 1
    assert p.poly.domain == QQ
    assert p.poly.gens == generators(N)
    x, y, z = generators(N)
    assert p.poly.as_expr() == x / 3 - sympy.Rational(5, 2) * y * z + 1
    assert p.terms == {(1, 0, 0): Fraction(1, 3), (0, 1, 1): Fraction(-5, 2), (0, 0, 0): Fraction(1)}
    assert hash(p) == hash(Poly(N, p.terms))
    assert Poly(N, {(0, 0, 0): 0}).is_zero()
    assert Poly.zero(N).degree() == 0


def test_printing():
    assert str(X * Y - Z * Z * Fraction(1, 2)) == "x1*y1 - 1/2*z^2"
    assert str(Poly.zero(N)) == "0"
    assert str(-X + 1) == "-x1 + 1"


def test_reeb_field_is_field_of_constant():
    assert hamiltonian_field(Poly.constant(N, 1)) == reeb_field(1)


def test_field_of_z_is_scaling():
    # X_z = 1/2 E + z d_z
    expected = euler_field(1).scale(Fraction(1, 2)) + PolyVectorField.coordinate(N, 2).scale(Z)
    assert hamiltonian_field(Z) == expected


@pytest.mark.parametrize("seed", range(5))
def test_hamiltonian_of_inverts_field(seed):
    rng = np.random.default_rng(seed)
    for ell in (1, 2):
        phi = random_poly(rng, 2 * ell + 1, 3)
        assert hamiltonian_of(hamiltonian_field(phi)) == phi


def test_poisson_bracket_of_coordinates():
    assert poisson_bracket(_density(X), _density(Y)).poly == Poly.constant(N, 1)
    bracket = poisson_bracket(_density(Z), _density(X))
    assert bracket.poly == X * Fraction(-1, 2)
    assert bracket.weight == Fraction(-1, 2)
    assert hamiltonian_field(Z).commutator(hamiltonian_field(X)) == hamiltonian_field(bracket)
    assert bracket_field_sign(_density(Z), _density(X)) == 1
    assert bracket_field_sign(_density(Z), _density(Z)) is None


@pytest.mark.parametrize("seed", range(10))
def test_bracket_field_is_commutator(seed):
    rng = np.random.default_rng(seed)
    for ell in (1, 2):
        n = 2 * ell + 1
        first, second = _density(random_poly(rng, n, 3), ell), _density(random_poly(rng, n, 3), ell)
        bracket_field = hamiltonian_field(poisson_bracket(first, second))
        assert bracket_field == hamiltonian_field(first).commutator(hamiltonian_field(second))
        assert poisson_bracket(first, second).poly == -poisson_bracket(second, first).poly


@pytest.mark.parametrize("seed", range(5))
def test_jacobi_identity_for_arbitrary_weights(seed):
    rng = np.random.default_rng(seed)
    for ell in (1, 2):
        n = 2 * ell + 1
        a, b, c = (WeightedDensityPoly(random_poly(rng, n, 2, terms=3), random_weight(rng)) for _ in range(3))
        jacobi = (poisson_bracket(a, poisson_bracket(b, c)) + poisson_bracket(b, poisson_bracket(c, a))
                  + poisson_bracket(c, poisson_bracket(a, b)))
        assert jacobi.poly.is_zero()
        assert jacobi.weight == a.weight + b.weight + c.weight + Fraction(2, ell + 1)


def test_bracket_of_hamiltonian_with_density_is_lie_derivative(rng):
    phi = _density(random_poly(rng, N, 3))
    density = WeightedDensityPoly(random_poly(rng, N, 3), Fraction(1, 3))
    transported = lie_derivative_density(hamiltonian_field(phi), density)
    assert poisson_bracket(phi, density).poly == transported.poly
    assert poisson_bracket(phi, density).weight == density.weight


def test_lie_derivative_of_density():
    # L_{d_x} (x vol^w) = vol^w for a divergence-free field
    result = lie_derivative_density(PolyVectorField.coordinate(N, 0), WeightedDensityPoly(X, Fraction(1, 3)))
    assert result.poly == Poly.constant(N, 1)
    # the Euler field has divergence 2
    scaled = lie_derivative_density(euler_field(1), WeightedDensityPoly(Poly.constant(N, 1), Fraction(1, 2)))
    assert scaled.poly == Poly.constant(N, 1)


def test_operator_storage_and_application():
    op = PolyDiffOp(1, 0, {(0, 1): Z, (1, 0): Z, (2,): X, (): Poly.constant(N, 3)})
    assert op.order == 2
    assert op.coefficient(0, 1) == Z * 2
    assert op.second(0, 1) == Z
    assert op.first(2) == X
    assert op.apply(X * Y * Z) == Z * Z * 2 + X * X * Y + X * Y * Z * 3
    with pytest.raises(OrderOverflowError):
        PolyDiffOp(1, 0, {(0, 1, 2): X})


def test_composition_of_first_order_operators():
    dx = lie_derivative_operator(PolyVectorField.coordinate(N, 0), 0)
    times_x = multiplication_operator(X, 0)
    composed = compose_ops(dx, times_x)
    # d_x o x = x d_x + 1
    assert composed == PolyDiffOp(1, 0, {(0,): X, (): Poly.constant(N, 1)})
    with pytest.raises(ValueError):
        compose_ops(dx, multiplication_operator(X, 1))


def test_prefactor():
    assert subsymbol_prefactor(1, Fraction(1, 2)) == 1
    assert subsymbol_prefactor(1, 0) == Fraction(1, 3)
    assert subsymbol_prefactor(2, 1) == Fraction(7, 4)


def test_subsymbol_of_first_order_contact_operator():
    # T = L_{X_phi} has subsymbol phi
    phi = X * Y + Z
    decomposition = OperatorDecomposition(1, Fraction(1, 3), [Poly.zero(N)] * 3 + [phi],
                                          [PolyVectorField.zero(N)] * 4, Poly.zero(N))
    operator = decomposition.to_operator()
    assert subsymbol_from_coefficients(operator).poly == phi
    assert subsymbol_from_decomposition(decomposition).poly == phi


def test_subsymbol_ignores_zeroth_order():
    operator = multiplication_operator(X * Y * Z, Fraction(1, 2))
    assert subsymbol_from_coefficients(operator).poly.is_zero()
    assert set(subsymbol_groups(operator)) == {"z", "x", "y", "first"}


@settings(max_examples=25, deadline=None)
@given(integers(min_value=0, max_value=2 ** 32 - 1), fractions(min_value=-2, max_value=3, max_denominator=4),
       integers(min_value=1, max_value=2))
def test_subsymbol_is_well_defined(seed, weight, ell):
    rng = np.random.default_rng(seed)
    decomposition = random_decomposition(rng, ell, weight, degree=3 if ell == 1 else 2)
    from_coefficients = subsymbol_from_coefficients(decomposition.to_operator())
    from_decomposition = subsymbol_from_decomposition(decomposition)
    assert from_coefficients.poly == from_decomposition.poly
    assert from_coefficients.weight == hamiltonian_weight(ell)


def test_random_tangent_fields_are_horizontal(rng):
    for ell in (1, 2):
        assert hamiltonian_of(random_tangent_field(rng, ell, 2)).is_zero()


def test_non_tangent_field_is_rejected():
    decomposition = OperatorDecomposition(1, Fraction(0), [Poly.zero(N)] * 4,
                                          [reeb_field(1)] + [PolyVectorField.zero(N)] * 3, Poly.zero(N))
    with pytest.raises(NonTangentFieldError):
        decomposition.to_operator()
    with pytest.raises(NonTangentFieldError):
        subsymbol_from_decomposition(decomposition)
