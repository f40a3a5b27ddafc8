"""
Exact polynomial algebra in Darboux coordinates (x_1..x_l, y_1..y_l, z).

Polynomials are ``sympy.Poly`` objects over QQ, so the bracket identities and the agreement of the
two subsymbol formulas are checked as exact equalities. Variable i of a polynomial in 2l+1
variables is x_{i+1} for i < l, y_{i-l+1} for l <= i < 2l and z for i = 2l.
"""
import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from sympy import QQ

from ..utilities.errors import NonTangentFieldError, OrderOverflowError

Rational = Union[int, Fraction]
Exponents = Tuple[int, ...]


def variable_names(ell: int) -> List[str]:
    return [f"x{i + 1}" for i in range(ell)] + [f"y{i + 1}" for i in range(ell)] + ["z"]


def x_index(i: int, ell: int) -> int:
    return i


def y_index(i: int, ell: int) -> int:
    return ell + i


def z_index(ell: int) -> int:
    return 2 * ell


@functools.lru_cache(maxsize=None)
def generators(nvars: int) -> Tuple[sympy.Symbol, ...]:
    """Generators v0..v{n-1} of the polynomial ring QQ[v0, .., v{n-1}]."""
    return tuple(sympy.symbols(f"v0:{nvars}"))


def _rational(value) -> sympy.Rational:
    # floats convert exactly as binary rationals
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def _fraction(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


class Poly:
    """A polynomial with exact rational coefficients, held as a ``sympy.Poly`` over QQ."""
    __slots__ = ("nvars", "poly")

    def __init__(self, nvars: int, terms: Optional[Dict[Exponents, Rational]] = None):
        if nvars < 1:
            raise ValueError(f"Polynomial in {nvars} variables is not defined")
        self.nvars = nvars
        clean: Dict[Exponents, Fraction] = {}
        for exponents, coefficient in (terms or {}).items():
            exponents = tuple(int(e) for e in exponents)
            if len(exponents) != nvars or any(e < 0 for e in exponents):
                raise ValueError(f"Exponents {exponents} do not fit a polynomial in {nvars} variables")
            clean[exponents] = clean.get(exponents, Fraction(0)) + Fraction(coefficient)
        clean = {exponents: c for exponents, c in clean.items() if c != 0}
        if clean:
            self.poly = sympy.Poly.from_dict({exponents: _rational(c) for exponents, c in clean.items()},
                                             *generators(nvars), domain=QQ)
        else:
            self.poly = sympy.Poly(0, *generators(nvars), domain=QQ)

    @staticmethod
    def _wrap(nvars: int, poly: sympy.Poly) -> 'Poly':
        result = Poly.__new__(Poly)
        result.nvars = nvars
        result.poly = poly
        return result

    # region constructors
    @staticmethod
    def constant(nvars: int, value: Rational) -> 'Poly':
        return Poly._wrap(nvars, sympy.Poly(_rational(value), *generators(nvars), domain=QQ))

    @staticmethod
    def variable(nvars: int, i: int) -> 'Poly':
        if not 0 <= i < nvars:
            raise IndexError(f"Variable index {i} is out of range for {nvars} variables")
        gens = generators(nvars)
        return Poly._wrap(nvars, sympy.Poly(gens[i], *gens, domain=QQ))

    @staticmethod
    def zero(nvars: int) -> 'Poly':
        return Poly(nvars)

    # endregion

    @property
    def terms(self) -> Dict[Exponents, Fraction]:
        """Nonzero coefficients keyed by exponent tuples."""
        return {tuple(exponents): _fraction(c) for exponents, c in self.poly.as_dict().items() if c != 0}

    @property
    def ell(self) -> int:
        return (self.nvars - 1) // 2

    def is_zero(self) -> bool:
        return self.poly.is_zero

    def degree(self) -> int:
        return 0 if self.poly.is_zero else int(self.poly.total_degree())

    def constant_term(self) -> Fraction:
        return _fraction(self.poly.coeff_monomial(1))

    def is_constant(self) -> bool:
        return self.degree() == 0

    # region arithmetic
    def _coerce(self, other) -> 'Poly':
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError(f"Polynomials in {self.nvars} and {other.nvars} variables cannot be combined")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Poly._wrap(self.nvars, self.poly + other.poly)

    __radd__ = __add__

    def __neg__(self):
        return Poly._wrap(self.nvars, -self.poly)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Poly._wrap(self.nvars, self.poly - other.poly)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Poly._wrap(self.nvars, self.poly * other.poly)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Poly):
            if not other.is_constant() or other.is_zero():
                raise ZeroDivisionError("Polynomials can only be divided by nonzero constants")
            other = other.constant_term()
        if other == 0:
            raise ZeroDivisionError("Division of a polynomial by zero")
        return self * (Fraction(1) / Fraction(other))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError(f"Polynomial power {k} is not a non-negative integer")
        return Poly._wrap(self.nvars, self.poly ** k)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(self.nvars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.poly == other.poly

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # endregion

    def derivative(self, i: int) -> 'Poly':
        if not 0 <= i < self.nvars:
            raise IndexError(f"Variable index {i} is out of range for {self.nvars} variables")
        return Poly._wrap(self.nvars, self.poly.diff(generators(self.nvars)[i]))

    def evaluate(self, point: Sequence):
        """
        Value at a point of floats, Fractions or jets.

        Fraction and int points give an exact Fraction, anything else is evaluated in floating point.
        """
        if len(point) != self.nvars:
            raise ValueError(f"Point of length {len(point)} given to a polynomial in {self.nvars} variables")
        exact = all(isinstance(coordinate, (int, Fraction)) for coordinate in point)
        total = Fraction(0) if exact else 0.0
        for exponents, coefficient in self.terms.items():
            term = coefficient if exact else float(coefficient)
            for coordinate, e in zip(point, exponents):
                if e:
                    term = term * coordinate ** e
            total = term + total
        return total

    def __str__(self):
        terms = self.terms
        if not terms:
            return "0"
        names = variable_names(self.ell) if self.nvars % 2 == 1 else [f"v{i + 1}" for i in range(self.nvars)]
        ordered = sorted(terms, key=lambda e: (-sum(e), tuple(-k for k in e)))
        text = ""
        for position, exponents in enumerate(ordered):
            coefficient = terms[exponents]
            sign = "-" if coefficient < 0 else "+"
            magnitude = abs(coefficient)
            factors = [name if e == 1 else f"{name}^{e}" for name, e in zip(names, exponents) if e]
            if not factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = f"{magnitude}*" + "*".join(factors)
            if position == 0:
                text = body if sign == "+" else f"-{body}"
            else:
                text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Poly({self})"


def random_poly(rng: np.random.Generator, nvars: int, degree: int, terms: int = 4, spread: int = 5) -> Poly:
    """A polynomial with at most ``terms`` monomials of total degree <= degree and small rational coefficients."""
    result = {}
    for _ in range(terms):
        exponents = [0] * nvars
        for _ in range(int(rng.integers(0, degree + 1))):
            exponents[int(rng.integers(0, nvars))] += 1
        numerator = int(rng.integers(-spread, spread + 1))
        denominator = int(rng.integers(1, 4))
        result[tuple(exponents)] = result.get(tuple(exponents), Fraction(0)) + Fraction(numerator, denominator)
    return Poly(nvars, result)


def random_weight(rng: np.random.Generator, spread: int = 3) -> Fraction:
    return Fraction(int(rng.integers(-spread, spread + 1)), int(rng.integers(1, 4)))


class PolyVectorField:
    def __init__(self, components: Sequence[Poly]):
        components = list(components)
        if not components:
            raise ValueError("A vector field needs at least one component")
        nvars = components[0].nvars
        if len(components) != nvars or any(c.nvars != nvars for c in components):
            raise ValueError("Vector field components must be polynomials in as many variables as there are components")
        self.components = components

    @property
    def nvars(self) -> int:
        return len(self.components)

    @property
    def ell(self) -> int:
        return (self.nvars - 1) // 2

    @staticmethod
    def zero(nvars: int) -> 'PolyVectorField':
        return PolyVectorField([Poly.zero(nvars) for _ in range(nvars)])

    @staticmethod
    def coordinate(nvars: int, i: int) -> 'PolyVectorField':
        return PolyVectorField([Poly.constant(nvars, 1 if k == i else 0) for k in range(nvars)])

    def apply(self, f: Poly) -> Poly:
        """The derivative X(f) = X^i d_i f."""
        result = Poly.zero(self.nvars)
        for i, component in enumerate(self.components):
            if not component.is_zero():
                result = result + component * f.derivative(i)
        return result

    def divergence(self) -> Poly:
        result = Poly.zero(self.nvars)
        for i, component in enumerate(self.components):
            result = result + component.derivative(i)
        return result

    def commutator(self, other: 'PolyVectorField') -> 'PolyVectorField':
        return PolyVectorField([self.apply(b) - other.apply(a) for a, b in zip(self.components, other.components)])

    def __add__(self, other: 'PolyVectorField') -> 'PolyVectorField':
        return PolyVectorField([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: 'PolyVectorField') -> 'PolyVectorField':
        return PolyVectorField([a - b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> 'PolyVectorField':
        return PolyVectorField([-a for a in self.components])

    def scale(self, factor: Union[Rational, Poly]) -> 'PolyVectorField':
        return PolyVectorField([a * factor for a in self.components])

    def is_zero(self) -> bool:
        return all(component.is_zero() for component in self.components)

    def __eq__(self, other):
        if not isinstance(other, PolyVectorField):
            return NotImplemented
        return self.components == other.components

    def evaluate(self, point: Sequence) -> list:
        return [component.evaluate(point) for component in self.components]

    def __repr__(self):
        return "PolyVectorField(" + ", ".join(str(component) for component in self.components) + ")"


def commutator(x: PolyVectorField, y: PolyVectorField) -> PolyVectorField:
    """[X, Y]^i = X(Y^i) - Y(X^i)."""
    return x.commutator(y)


# region Darboux model
def darboux_form_polys(ell: int) -> List[Poly]:
    """Components of dz + 1/2 sum(x_i dy_i - y_i dx_i)."""
    n = 2 * ell + 1
    components = [Poly.zero(n) for _ in range(n)]
    for i in range(ell):
        components[x_index(i, ell)] = Poly.variable(n, y_index(i, ell)) * Fraction(-1, 2)
        components[y_index(i, ell)] = Poly.variable(n, x_index(i, ell)) * Fraction(1, 2)
    components[z_index(ell)] = Poly.constant(n, 1)
    return components


def euler_field(ell: int) -> PolyVectorField:
    n = 2 * ell + 1
    components = [Poly.variable(n, i) for i in range(2 * ell)] + [Poly.zero(n)]
    return PolyVectorField(components)


def reeb_field(ell: int) -> PolyVectorField:
    return PolyVectorField.coordinate(2 * ell + 1, z_index(ell))


def hamiltonian_field(phi: Union[Poly, 'WeightedDensityPoly']) -> PolyVectorField:
    """
    Contact vector field of a Hamiltonian in Darboux coordinates:
    X^{x_i} = -d_{y_i} phi + 1/2 x_i d_z phi, X^{y_i} = d_{x_i} phi + 1/2 y_i d_z phi, X^z = phi - 1/2 E(phi).
    """
    if isinstance(phi, WeightedDensityPoly):
        phi = phi.poly
    ell = phi.ell
    n = phi.nvars
    dz = phi.derivative(z_index(ell))
    components = [Poly.zero(n) for _ in range(n)]
    for i in range(ell):
        x, y = x_index(i, ell), y_index(i, ell)
        components[x] = -phi.derivative(y) + Poly.variable(n, x) * dz * Fraction(1, 2)
        components[y] = phi.derivative(x) + Poly.variable(n, y) * dz * Fraction(1, 2)
    components[z_index(ell)] = phi - euler_field(ell).apply(phi) * Fraction(1, 2)
    return PolyVectorField(components)


def hamiltonian_of(vector_field: PolyVectorField) -> Poly:
    """theta(X) for the Darboux form; zero exactly when X is tangent to the contact distribution."""
    result = Poly.zero(vector_field.nvars)
    for component, form in zip(vector_field.components, darboux_form_polys(vector_field.ell)):
        result = result + component * form
    return result


def contact_condition_residual(vector_field: PolyVectorField) -> List[Poly]:
    """
    Components of L_X theta - 1/(l+1) Div(X) theta for the Darboux form.

    Identically zero exactly when X is a contact vector field.
    """
    ell = vector_field.ell
    theta = darboux_form_polys(ell)
    divergence = vector_field.divergence()
    residual = []
    for i in range(vector_field.nvars):
        lie = vector_field.apply(theta[i])
        for j in range(vector_field.nvars):
            lie = lie + theta[j] * vector_field.components[j].derivative(i)
        residual.append(lie - divergence * theta[i] * Fraction(1, ell + 1))
    return residual


# endregion

@dataclass(frozen=True)
class WeightedDensityPoly:
    """phi * omega^weight with a polynomial coefficient."""
    poly: Poly
    weight: Fraction = field(default=Fraction(0))

    def __post_init__(self):
        object.__setattr__(self, "weight", Fraction(self.weight))

    @property
    def ell(self) -> int:
        return self.poly.ell

    def __add__(self, other: 'WeightedDensityPoly') -> 'WeightedDensityPoly':
        if other.weight != self.weight:
            raise ValueError(f"Densities of weights {self.weight} and {other.weight} cannot be added")
        return WeightedDensityPoly(self.poly + other.poly, self.weight)

    def __sub__(self, other: 'WeightedDensityPoly') -> 'WeightedDensityPoly':
        return self + WeightedDensityPoly(-other.poly, other.weight)

    def scale(self, factor: Rational) -> 'WeightedDensityPoly':
        return WeightedDensityPoly(self.poly * factor, self.weight)

    def __str__(self):
        return f"({self.poly})*vol^({self.weight})"


def hamiltonian_weight(ell: int) -> Fraction:
    return Fraction(-1, ell + 1)


def lie_derivative_density(x: PolyVectorField, density: WeightedDensityPoly) -> WeightedDensityPoly:
    """L_X(phi vol^l) = (X(phi) + l Div(X) phi) vol^l."""
    phi = density.poly
    return WeightedDensityPoly(x.apply(phi) + x.divergence() * phi * density.weight, density.weight)


def poisson_bracket(first: WeightedDensityPoly, second: WeightedDensityPoly) -> WeightedDensityPoly:
    """
    Bracket of a l-density and a m-density, a density of weight l + m + 1/(ell+1):
    sum(f_{x_i} g_{y_i} - g_{x_i} f_{y_i}) + f_z ((ell+1) m g + 1/2 E g) - g_z ((ell+1) l f + 1/2 E f).

    This is the Poisson bracket of the homogeneous functions f t^{-(ell+1) l} and g t^{-(ell+1) m} on the
    symplectization, so on Hamiltonians X_{f, g} = [X_f, X_g].
    """
    if first.poly.nvars != second.poly.nvars:
        raise ValueError(f"Densities in {first.poly.nvars} and {second.poly.nvars} variables cannot be bracketed")
    f, g = first.poly, second.poly
    ell = f.ell
    euler = euler_field(ell)
    half = Fraction(1, 2)
    result = Poly.zero(f.nvars)
    for i in range(ell):
        x, y = x_index(i, ell), y_index(i, ell)
        result = result + f.derivative(x) * g.derivative(y) - g.derivative(x) * f.derivative(y)
    z = z_index(ell)
    result = (result + f.derivative(z) * (g * (second.weight * (ell + 1)) + euler.apply(g) * half)
              - g.derivative(z) * (f * (first.weight * (ell + 1)) + euler.apply(f) * half))
    return WeightedDensityPoly(result, first.weight + second.weight + Fraction(1, ell + 1))


def bracket_field_sign(first: WeightedDensityPoly, second: WeightedDensityPoly) -> Optional[int]:
    """
    The sign s with X_{first, second} = s [X_first, X_second], or None when neither sign fits
    or both sides vanish.
    """
    bracket_field = hamiltonian_field(poisson_bracket(first, second))
    commutator_field = hamiltonian_field(first).commutator(hamiltonian_field(second))
    if bracket_field.is_zero() and commutator_field.is_zero():
        return None
    if bracket_field == commutator_field:
        return 1
    if bracket_field == -commutator_field:
        return -1
    return None


# region operators
def _key(indices: Sequence[int]) -> Tuple[int, ...]:
    return tuple(sorted(indices))


class PolyDiffOp:
    """
    Differential operator sum C_K d^K on densities of a fixed weight, |K| <= 2.

    Second-order coefficients are stored once per unordered index pair, so the symmetric tensor
    is S^{aa} = C_(a,a) and S^{ab} = C_(a,b)/2 for a != b.
    """

    def __init__(self, ell: int, weight: Rational, coefficients: Optional[Dict[Tuple[int, ...], Poly]] = None):
        self.ell = ell
        self.weight = Fraction(weight)
        n = 2 * ell + 1
        clean: Dict[Tuple[int, ...], Poly] = {}
        for key, coefficient in (coefficients or {}).items():
            key = _key(key)
            if any(not 0 <= index < n for index in key):
                raise IndexError(f"Derivative index {key} is out of range for {n} variables")
            clean[key] = clean.get(key, Poly.zero(n)) + coefficient
        for key, coefficient in clean.items():
            if len(key) > 2 and not coefficient.is_zero():
                raise OrderOverflowError(f"Operator term d^{key} has order {len(key)}, orders above 2 are not defined")
        self.coefficients = {key: c for key, c in clean.items() if not c.is_zero()}

    @property
    def nvars(self) -> int:
        return 2 * self.ell + 1

    @property
    def order(self) -> int:
        return max((len(key) for key in self.coefficients), default=0)

    def coefficient(self, *indices: int) -> Poly:
        return self.coefficients.get(_key(indices), Poly.zero(self.nvars))

    def second(self, a: int, b: int) -> Poly:
        """Symmetric principal tensor S^{ab}."""
        c = self.coefficient(a, b)
        return c if a == b else c * Fraction(1, 2)

    def first(self, a: int) -> Poly:
        return self.coefficient(a)

    def zeroth(self) -> Poly:
        return self.coefficient()

    def apply(self, density: Union[Poly, WeightedDensityPoly]) -> Union[Poly, WeightedDensityPoly]:
        phi = density.poly if isinstance(density, WeightedDensityPoly) else density
        result = Poly.zero(self.nvars)
        for key, coefficient in self.coefficients.items():
            derivative = phi
            for index in key:
                derivative = derivative.derivative(index)
            result = result + coefficient * derivative
        if isinstance(density, WeightedDensityPoly):
            if density.weight != self.weight:
                raise ValueError(f"Operator on {self.weight}-densities applied to a {density.weight}-density")
            return WeightedDensityPoly(result, self.weight)
        return result

    def _check(self, other: 'PolyDiffOp'):
        if other.ell != self.ell or other.weight != self.weight:
            raise ValueError(f"Operators on ({self.ell}, {self.weight}) and ({other.ell}, {other.weight}) "
                             f"densities cannot be combined")

    def __add__(self, other: 'PolyDiffOp') -> 'PolyDiffOp':
        self._check(other)
        coefficients = dict(self.coefficients)
        for key, coefficient in other.coefficients.items():
            coefficients[key] = coefficients.get(key, Poly.zero(self.nvars)) + coefficient
        return PolyDiffOp(self.ell, self.weight, coefficients)

    def __neg__(self) -> 'PolyDiffOp':
        return self.scale(-1)

    def __sub__(self, other: 'PolyDiffOp') -> 'PolyDiffOp':
        return self + (-other)

    def scale(self, factor: Rational) -> 'PolyDiffOp':
        return PolyDiffOp(self.ell, self.weight, {key: c * factor for key, c in self.coefficients.items()})

    def __eq__(self, other):
        if not isinstance(other, PolyDiffOp):
            return NotImplemented
        return (self.ell, self.weight, self.coefficients) == (other.ell, other.weight, other.coefficients)

    def __repr__(self):
        body = ", ".join(f"d{list(key)}: {c}" for key, c in sorted(self.coefficients.items()))
        return f"PolyDiffOp(weight={self.weight}, {{{body}}})"


def _leibniz(key: Tuple[int, ...]):
    """Pairs (derivative on the coefficient, derivative left on the function) of d^key(u v)."""
    if len(key) == 0:
        return [((), ())]
    if len(key) == 1:
        return [(key, ()), ((), key)]
    a, b = key
    return [((a, b), ()), ((a,), (b,)), ((b,), (a,)), ((), (a, b))]


def compose_ops(left: PolyDiffOp, right: PolyDiffOp) -> PolyDiffOp:
    """
    The operator left o right.

    Raises:
        OrderOverflowError: when the composition has a nonzero term of order above 2
    """
    left._check(right)
    n = left.nvars
    coefficients: Dict[Tuple[int, ...], Poly] = {}
    for outer, a in left.coefficients.items():
        for inner, b in right.coefficients.items():
            for on_coefficient, on_function in _leibniz(outer):
                derived = b
                for index in on_coefficient:
                    derived = derived.derivative(index)
                if derived.is_zero():
                    continue
                key = _key(on_function + inner)
                coefficients[key] = coefficients.get(key, Poly.zero(n)) + a * derived
    return PolyDiffOp(left.ell, left.weight, coefficients)


def lie_derivative_operator(x: PolyVectorField, weight: Rational) -> PolyDiffOp:
    coefficients = {(a,): component for a, component in enumerate(x.components)}
    coefficients[()] = x.divergence() * Fraction(weight)
    return PolyDiffOp(x.ell, weight, coefficients)


def multiplication_operator(f: Poly, weight: Rational) -> PolyDiffOp:
    return PolyDiffOp(f.ell, weight, {(): f})


def subsymbol_prefactor(ell: int, weight: Rational) -> Fraction:
    return (1 + 2 * Fraction(weight) * (ell + 1)) / Fraction(ell + 2)


def subsymbol_groups(operator: PolyDiffOp) -> Dict[str, Poly]:
    """
    The four coefficient groups of the coordinate subsymbol formula.

    With W = S theta for the Darboux form: ``z`` is d_z W_z, ``x`` and ``y`` sum d_{x_i} W_{x_i}
    and d_{y_i} W_{y_i}, and ``first`` is theta(V) for the first-order coefficients V.
    """
    ell = operator.ell
    n = operator.nvars
    theta = darboux_form_polys(ell)
    w = []
    for a in range(n):
        component = Poly.zero(n)
        for b in range(n):
            if not theta[b].is_zero():
                component = component + operator.second(a, b) * theta[b]
        w.append(component)
    groups = {"z": w[z_index(ell)].derivative(z_index(ell)),
              "x": Poly.zero(n),
              "y": Poly.zero(n),
              "first": Poly.zero(n)}
    for i in range(ell):
        groups["x"] = groups["x"] + w[x_index(i, ell)].derivative(x_index(i, ell))
        groups["y"] = groups["y"] + w[y_index(i, ell)].derivative(y_index(i, ell))
    for a in range(n):
        groups["first"] = groups["first"] + operator.first(a) * theta[a]
    return groups


def subsymbol_from_coefficients(operator: PolyDiffOp) -> WeightedDensityPoly:
    """
    Subsymbol of a second-order operator read off its Darboux coefficients:
    theta(V) - (1 + 2 l (ell+1))/(ell+2) * d_a(S^{ab} theta_b). The zeroth-order part never enters.
    """
    groups = subsymbol_groups(operator)
    prefactor = subsymbol_prefactor(operator.ell, operator.weight)
    result = groups["first"] - (groups["z"] + groups["x"] + groups["y"]) * prefactor
    return WeightedDensityPoly(result, hamiltonian_weight(operator.ell))


@dataclass
class OperatorDecomposition:
    """
    T = L_{X_phi1} o L_{X_phi2} + L_{X_phi3} o L_{Y1} + L_{Y2} o L_{Y3} + L_{X_phi4} + L_{Y4} + F,
    with contact fields X_phi and fields Y_i tangent to the contact distribution.
    """
    ell: int
    weight: Fraction
    phis: List[Poly]
    tangent_fields: List[PolyVectorField]
    multiplier: Poly

    def check_tangency(self):
        for position, y in enumerate(self.tangent_fields, start=1):
            if not hamiltonian_of(y).is_zero():
                raise NonTangentFieldError(f"Field Y{position} is not tangent to the contact distribution: "
                                           f"theta(Y{position}) = {hamiltonian_of(y)}")

    def to_operator(self) -> PolyDiffOp:
        self.check_tangency()
        phi1, phi2, phi3, phi4 = self.phis
        y1, y2, y3, y4 = self.tangent_fields

        def lie(x):
            return lie_derivative_operator(x, self.weight)

        operator = compose_ops(lie(hamiltonian_field(phi1)), lie(hamiltonian_field(phi2)))
        operator = operator + compose_ops(lie(hamiltonian_field(phi3)), lie(y1))
        operator = operator + compose_ops(lie(y2), lie(y3))
        operator = operator + lie(hamiltonian_field(phi4)) + lie(y4)
        return operator + multiplication_operator(self.multiplier, self.weight)


def subsymbol_from_decomposition(decomposition: OperatorDecomposition) -> WeightedDensityPoly:
    """
    1/2 H([X_phi1, X_phi2]) - (ell+1)/(ell+2) (l - 1/2) L_{Y1}(phi3) + 1/2 H([Y2, Y3]) + phi4,
    where H is the Hamiltonian of a field and L_{Y1} acts on phi3 as a -1/(ell+1)-density.

    Raises:
        NonTangentFieldError: when one of the Y_i leaves the contact distribution
    """
    decomposition.check_tangency()
    ell = decomposition.ell
    phi1, phi2, phi3, phi4 = decomposition.phis
    y1, y2, y3, _ = decomposition.tangent_fields
    half = Fraction(1, 2)
    result = hamiltonian_of(hamiltonian_field(phi1).commutator(hamiltonian_field(phi2))) * half
    transported = lie_derivative_density(y1, WeightedDensityPoly(phi3, hamiltonian_weight(ell))).poly
    result = result - transported * (Fraction(ell + 1, ell + 2) * (decomposition.weight - half))
    result = result + hamiltonian_of(y2.commutator(y3)) * half + phi4
    return WeightedDensityPoly(result, hamiltonian_weight(ell))


def random_tangent_field(rng: np.random.Generator, ell: int, degree: int) -> PolyVectorField:
    """Combination of the frame d_{x_i} + 1/2 y_i d_z, d_{y_i} - 1/2 x_i d_z with random polynomial weights."""
    n = 2 * ell + 1
    vector_field = PolyVectorField.zero(n)
    z = z_index(ell)
    for i in range(ell):
        x, y = x_index(i, ell), y_index(i, ell)
        horizontal_x = PolyVectorField.coordinate(n, x) + PolyVectorField.coordinate(n, z).scale(
            Poly.variable(n, y) * Fraction(1, 2))
        horizontal_y = PolyVectorField.coordinate(n, y) - PolyVectorField.coordinate(n, z).scale(
            Poly.variable(n, x) * Fraction(1, 2))
        vector_field = vector_field + horizontal_x.scale(random_poly(rng, n, degree, terms=2))
        vector_field = vector_field + horizontal_y.scale(random_poly(rng, n, degree, terms=2))
    return vector_field


def random_decomposition(rng: np.random.Generator, ell: int, weight: Rational, degree: int = 3) -> OperatorDecomposition:
    n = 2 * ell + 1
    return OperatorDecomposition(ell=ell,
                                 weight=Fraction(weight),
                                 phis=[random_poly(rng, n, degree) for _ in range(4)],
                                 tangent_fields=[random_tangent_field(rng, ell, max(degree - 1, 0)) for _ in range(4)],
                                 multiplier=random_poly(rng, n, degree))

# endregion
