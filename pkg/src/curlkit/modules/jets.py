"""
Order-2 forward-mode differentiation.

A :class:`Jet` carries the value, gradient and Hessian of a chart function at one point.
Every closed-form field in curlkit is a plain Python function of coordinate jets, so
evaluating it on seeded coordinates yields exact first and second derivatives.
"""
import math
from fractions import Fraction
from numbers import Real
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..utilities.errors import DomainError, SingularPointError

Scalar = Union[float, int, Fraction]


class Jet:
    __slots__ = ("value", "gradient", "hessian", "order", "point")

    def __init__(self, value: float, gradient: Sequence[float], hessian: Optional[np.ndarray] = None,
                 order: Optional[int] = None, point: Optional[Tuple[float, ...]] = None):
        self.value = float(value)
        self.gradient = np.asarray(gradient, dtype=float)
        if order is None:
            order = 1 if hessian is None else 2
        if order not in (1, 2):
            raise ValueError(f"Jet order {order} is not defined, use 1 or 2")
        self.order = order
        if order == 2:
            if hessian is None:
                hessian = np.zeros((self.n, self.n))
            upper = np.triu(np.asarray(hessian, dtype=float))
            # mirror the upper triangle, symmetry is exact by construction
            self.hessian = upper + np.triu(upper, 1).T
        else:
            # kept as handed in, never read for order 1
            self.hessian = hessian
        self.point = point

    @classmethod
    def _make(cls, value, gradient, hessian, order, point) -> 'Jet':
        jet = cls.__new__(cls)
        jet.value = value
        jet.gradient = gradient
        jet.hessian = hessian if order == 2 else None
        jet.order = order
        jet.point = point
        return jet

    @property
    def n(self) -> int:
        return self.gradient.shape[0]

    def __repr__(self):
        return f"Jet(value={self.value!r}, gradient={self.gradient.tolist()!r}, order={self.order})"

    # region arithmetic
    def _coerce(self, other) -> 'Jet':
        if isinstance(other, Jet):
            if other.n != self.n:
                raise ValueError(f"Jets over {self.n} and {other.n} variables cannot be combined")
            return other
        if isinstance(other, (Real, Fraction)):
            return constant(float(other), self.n, self.order, self.point)
        return NotImplemented

    def _joint_order(self, other: 'Jet') -> int:
        return min(self.order, other.order)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        order = self._joint_order(other)
        hessian = self.hessian + other.hessian if order == 2 else None
        return Jet._make(self.value + other.value, self.gradient + other.gradient, hessian, order,
                         self.point or other.point)

    __radd__ = __add__

    def __neg__(self):
        hessian = -self.hessian if self.order == 2 else None
        return Jet._make(-self.value, -self.gradient, hessian, self.order, self.point)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (Real, Fraction)) and not isinstance(other, Jet):
            factor = float(other)
            hessian = self.hessian * factor if self.order == 2 else None
            return Jet._make(self.value * factor, self.gradient * factor, hessian, self.order, self.point)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        order = self._joint_order(other)
        gradient = self.value * other.gradient + other.value * self.gradient
        hessian = None
        if order == 2:
            cross = np.outer(self.gradient, other.gradient)
            hessian = self.value * other.hessian + other.value * self.hessian + cross + cross.T
        return Jet._make(self.value * other.value, gradient, hessian, order, self.point or other.point)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (Real, Fraction)) and not isinstance(other, Jet):
            if other == 0:
                raise SingularPointError("Division of a jet by zero", self.point)
            return self * (1.0 / float(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * reciprocal(other)

    def __rtruediv__(self, other):
        return reciprocal(self) * other

    def __pow__(self, exponent):
        if isinstance(exponent, int) or (isinstance(exponent, Fraction) and exponent.denominator == 1):
            return powi(self, int(exponent))
        return power(self, exponent)

    # endregion

    def partial(self, i: int) -> Union['Jet', float]:
        """
        The i-th partial derivative as a jet of one order less.

        Args:
            i: index of the seeded variable

        Returns:
            An order-1 jet for an order-2 input, a float for an order-1 input.
        """
        if not 0 <= i < self.n:
            raise IndexError(f"Variable index {i} is out of range for a jet over {self.n} variables")
        if self.order == 1:
            return float(self.gradient[i])
        return Jet._make(float(self.gradient[i]), self.hessian[i].copy(), None, 1, self.point)

    def truncate(self, order: int) -> Union['Jet', float]:
        if order >= self.order:
            return self
        if order <= 0:
            return self.value
        return Jet._make(self.value, self.gradient, None, 1, self.point)


def constant(value: float, n: int, order: int = 2, point: Optional[Tuple[float, ...]] = None) -> Jet:
    hessian = np.zeros((n, n)) if order == 2 else None
    return Jet._make(float(value), np.zeros(n), hessian, order, point)


def seed_variable(i: int, x: Sequence[float], n: int, order: int = 2) -> Jet:
    """
    The coordinate function x^i as a jet at the point x.

    Args:
        i: coordinate index, 0 <= i < n
        x: the point
        n: chart dimension
        order: 1 or 2

    Returns:
        Jet with value x[i], gradient e_i and zero Hessian.

    Raises:
        IndexError: when i is out of range
    """
    if not 0 <= i < n:
        raise IndexError(f"Variable index {i} is out of range for dimension {n}")
    if len(x) != n:
        raise ValueError(f"Point {tuple(x)} does not have dimension {n}")
    point = tuple(float(coordinate) for coordinate in x)
    gradient = np.zeros(n)
    gradient[i] = 1.0
    return Jet(point[i], gradient, np.zeros((n, n)) if order == 2 else None, order=order, point=point)


def seed_point(x: Sequence[float], order: int = 2) -> List[Jet]:
    n = len(x)
    return [seed_variable(i, x, n, order) for i in range(n)]


def arith(op: str, a, b=None):
    if op == "add":
        return a + b
    elif op == "sub":
        return a - b
    elif op == "mul":
        return a * b
    elif op == "div":
        return a / b
    elif op == "neg":
        return -a
    raise ValueError(f"Operation {op} is not defined")


def _chain(a: Jet, f0: float, f1: float, f2: float) -> Jet:
    gradient = f1 * a.gradient
    hessian = f1 * a.hessian + f2 * np.outer(a.gradient, a.gradient) if a.order == 2 else None
    return Jet._make(f0, gradient, hessian, a.order, a.point)


def reciprocal(a: Jet) -> Jet:
    if a.value == 0.0:
        raise SingularPointError("Division by a jet with zero value", a.point)
    inverse = 1.0 / a.value
    return _chain(a, inverse, -inverse * inverse, 2.0 * inverse ** 3)


def sqrt(a: Jet) -> Jet:
    if a.value <= 0.0:
        raise DomainError(f"sqrt of non-positive value {a.value} is not defined")
    root = math.sqrt(a.value)
    return _chain(a, root, 0.5 / root, -0.25 / (root * a.value))


def sin(a: Jet) -> Jet:
    s, c = math.sin(a.value), math.cos(a.value)
    return _chain(a, s, c, -s)


def cos(a: Jet) -> Jet:
    s, c = math.sin(a.value), math.cos(a.value)
    return _chain(a, c, -s, -c)


def exp(a: Jet) -> Jet:
    e = math.exp(a.value)
    return _chain(a, e, e, e)


def log(a: Jet) -> Jet:
    if a.value <= 0.0:
        raise DomainError(f"log of non-positive value {a.value} is not defined")
    return _chain(a, math.log(a.value), 1.0 / a.value, -1.0 / (a.value * a.value))


def powi(a: Jet, k: int) -> Jet:
    if k == 0:
        return constant(1.0, a.n, a.order, a.point)
    if k < 0:
        return powi(reciprocal(a), -k)
    value = a.value
    return _chain(a, value ** k, k * value ** (k - 1), k * (k - 1) * value ** (k - 2) if k > 1 else 0.0)


def power(a: Jet, r: Scalar) -> Jet:
    r = float(r)
    if a.value <= 0.0:
        raise DomainError(f"power {r} of non-positive value {a.value} is not defined")
    value = a.value
    return _chain(a, value ** r, r * value ** (r - 1.0), r * (r - 1.0) * value ** (r - 2.0))


_ELEMENTARY = {"sqrt": sqrt, "sin": sin, "cos": cos, "exp": exp, "log": log}


def elementary(name: str, a: Jet, k: Optional[int] = None) -> Jet:
    if name == "powi":
        if k is None:
            raise ValueError("powi needs an integer exponent")
        return powi(a, k)
    if name not in _ELEMENTARY:
        raise ValueError(f"Elementary function {name} is not defined")
    return _ELEMENTARY[name](a)


def value_of(item) -> float:
    return item.value if isinstance(item, Jet) else float(item)


def values(array) -> np.ndarray:
    """Float values of a (nested) array of jets or numbers."""
    array = np.asarray(array, dtype=object)
    return np.vectorize(value_of, otypes=[float])(array) if array.size else np.zeros(array.shape)


def gradients(array, n: int) -> np.ndarray:
    """Gradients of an array of jets, stacked on a trailing axis of length n."""
    array = np.asarray(array, dtype=object)
    result = np.zeros(array.shape + (n,))
    for index, item in np.ndenumerate(array):
        if isinstance(item, Jet):
            result[index] = item.gradient
    return result


def hessians(array, n: int) -> np.ndarray:
    """Hessians of an array of order-2 jets, stacked on two trailing axes."""
    array = np.asarray(array, dtype=object)
    result = np.zeros(array.shape + (n, n))
    for index, item in np.ndenumerate(array):
        if isinstance(item, Jet):
            if item.order < 2:
                raise ValueError("Hessian requested from an order-1 jet")
            result[index] = item.hessian
    return result


def jet_order(array) -> int:
    """Smallest order present in an array of jets (0 when it holds plain numbers only)."""
    orders = [item.order for item in np.asarray(array, dtype=object).flat if isinstance(item, Jet)]
    return min(orders) if orders else 0


def assemble(value: np.ndarray, gradient: Optional[np.ndarray] = None, hessian: Optional[np.ndarray] = None,
             point: Optional[Tuple[float, ...]] = None) -> np.ndarray:
    """
    Build an object array of jets from stacked arrays.

    Args:
        value: array of values
        gradient: value.shape + (n,), or None to return plain floats
        hessian: value.shape + (n, n), or None for order-1 jets
        point: base point carried by the jets

    Returns:
        Object array with value's shape.
    """
    value = np.asarray(value, dtype=float)
    if gradient is None:
        return value.copy()
    result = np.empty(value.shape, dtype=object)
    for index in np.ndindex(value.shape):
        if hessian is None:
            result[index] = Jet._make(float(value[index]), np.array(gradient[index], dtype=float), None, 1, point)
        else:
            result[index] = Jet(value[index], gradient[index], hessian[index], order=2, point=point)
    return result
