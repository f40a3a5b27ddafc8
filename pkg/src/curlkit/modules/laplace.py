"""
The generalized Laplace-Beltrami operator on weighted densities and its subsymbol.

An operator T = S^{ab} d_a d_b + V^a d_a + F is sampled at a point together with the first
derivatives of S and V, which is all the coordinate subsymbol formula reads.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np

from . import darboux_poly
from .contact import CHART_CONTACT, ContactFormField, ContactHamiltonian, DensityValue, contact_volume_coeff, darboux_form
from .curl import curl_density
from .darboux_poly import PolyDiffOp
from .geometry import DEFAULT_DET_FLOOR, MetricField, TensorJet, _inverse, christoffel_from_jet, curvature
from .jets import Jet
from ..utilities.errors import DomainError

# sign relating the subsymbol of the Laplacian to the curl: s(Delta) = SUBSYMBOL_SIGN (l+1)/(l+2) (2w-1) A
SUBSYMBOL_SIGN = -1
DARBOUX_TOLERANCE = 1e-12


@dataclass
class OperatorCoeffField:
    """Coefficients of a second-order operator on weight-``weight`` densities sampled at ``point``."""
    second: TensorJet
    first: TensorJet
    zeroth: float
    weight: Fraction
    ell: int
    point: Tuple[float, ...]

    def _check(self, other: 'OperatorCoeffField'):
        if (other.weight, other.ell, other.point) != (self.weight, self.ell, self.point):
            raise ValueError("Operator samples of different weights, dimensions or points cannot be combined")

    def __add__(self, other: 'OperatorCoeffField') -> 'OperatorCoeffField':
        self._check(other)
        return OperatorCoeffField(TensorJet(self.second.value + other.second.value,
                                            self.second.first + other.second.first),
                                  TensorJet(self.first.value + other.first.value, self.first.first + other.first.first),
                                  self.zeroth + other.zeroth, self.weight, self.ell, self.point)

    def scale(self, factor: float) -> 'OperatorCoeffField':
        return OperatorCoeffField(TensorJet(self.second.value * factor, self.second.first * factor),
                                  TensorJet(self.first.value * factor, self.first.first * factor),
                                  self.zeroth * factor, self.weight, self.ell, self.point)

    @staticmethod
    def from_poly_op(operator: PolyDiffOp, p: Sequence[float]) -> 'OperatorCoeffField':
        n = operator.nvars
        point = tuple(float(c) for c in p)
        second = np.zeros((n, n))
        d_second = np.zeros((n, n, n))
        first = np.zeros(n)
        d_first = np.zeros((n, n))
        for a in range(n):
            component = operator.first(a)
            first[a] = component.evaluate(point)
            d_first[a] = [component.derivative(m).evaluate(point) for m in range(n)]
            for b in range(n):
                component = operator.second(a, b)
                second[a, b] = component.evaluate(point)
                d_second[a, b] = [component.derivative(m).evaluate(point) for m in range(n)]
        return OperatorCoeffField(TensorJet(second, d_second), TensorJet(first, d_first),
                                  float(operator.zeroth().evaluate(point)), operator.weight, operator.ell, point)


def curvature_coefficient(n: int, weight: Fraction) -> Fraction:
    """n^2 w (w - 1) / ((n - 1)(n + 2)), the factor of the scalar curvature in the zeroth-order term."""
    weight = Fraction(weight)
    return Fraction(n * n) * weight * (weight - 1) / ((n - 1) * (n + 2))


def laplace_coeffs(g: MetricField, weight, p: Sequence[float], floor: float = DEFAULT_DET_FLOOR) -> OperatorCoeffField:
    """
    Coefficients of the Laplacian on w-densities at p:
    S = g^ij, V^i = -(g^jk Gamma^i_jk + 2 w g^ij Gamma^k_jk), F = n^2 w (w-1) / ((n-1)(n+2)) R.

    The curvature term is carried although the subsymbol never reads it.
    """
    weight = Fraction(weight)
    point = tuple(float(c) for c in p)
    n = g.chart.dim
    tensor = g.evaluate(point, order=2)
    inverse = _inverse(tensor, point, floor)
    connection = christoffel_from_jet(tensor, point, 1, floor)
    gamma, d_gamma = connection.symbols, connection.derivatives
    trace = np.einsum("kjk->j", gamma)
    d_trace = np.einsum("kjkm->jm", d_gamma)
    w = float(weight)
    drift = -(np.einsum("jk,ijk->i", inverse.value, gamma) + 2 * w * np.einsum("ij,j->i", inverse.value, trace))
    d_drift = -(np.einsum("jkm,ijk->im", inverse.first, gamma) + np.einsum("jk,ijkm->im", inverse.value, d_gamma)
                + 2 * w * (np.einsum("ijm,j->im", inverse.first, trace) + np.einsum("ij,jm->im", inverse.value, d_trace)))
    zeroth = 0.0
    coefficient = curvature_coefficient(n, weight)
    if coefficient != 0:
        zeroth = float(coefficient) * curvature(g, point, floor).scalar
    ell = (n - 1) // 2
    return OperatorCoeffField(TensorJet(inverse.value, inverse.first), TensorJet(drift, d_drift), zeroth, weight, ell,
                              point)


def apply_operator(coeffs: OperatorCoeffField, phi: Jet) -> float:
    """T(phi) at the sample point for an order-2 jet of the density coefficient."""
    if phi.order < 2:
        raise ValueError("Applying a second-order operator needs an order-2 jet")
    return float(np.einsum("ab,ab->", coeffs.second.value, phi.hessian)
                 + coeffs.first.value @ phi.gradient + coeffs.zeroth * phi.value)


def _require_darboux(theta: ContactFormField, p: Sequence[float]):
    reference = darboux_form(theta.ell, theta.chart).evaluate(p, order=1)
    actual = theta.evaluate(p, order=1)
    deviation = max(np.max(np.abs(actual.value - reference.value)), np.max(np.abs(actual.first - reference.first)))
    if deviation > DARBOUX_TOLERANCE:
        raise DomainError(f"Chart {theta.chart} is not a Darboux chart for {theta.description}: "
                          f"the form deviates from the Darboux form by {deviation:.3e}")


def subsymbol_numeric(coeffs: OperatorCoeffField, theta: ContactFormField, p: Sequence[float]) -> ContactHamiltonian:
    """
    theta(V) - (1 + 2 w (l+1))/(l+2) d_a(S^{ab} theta_b) in a Darboux chart.

    Raises:
        DomainError: when theta is not the Darboux form of the chart
    """
    _require_darboux(theta, p)
    form = theta.evaluate(p, order=1)
    prefactor = float(darboux_poly.subsymbol_prefactor(coeffs.ell, coeffs.weight))
    # d_a (S^{ab} theta_b), with form.first[b, a] = d_a theta_b
    divergence = (np.einsum("aba,b->", coeffs.second.first, form.value)
                  + np.einsum("ab,ba->", coeffs.second.value, form.first))
    value = float(form.value @ coeffs.first.value - prefactor * divergence)
    density = DensityValue(value, darboux_poly.hamiltonian_weight(coeffs.ell), CHART_CONTACT,
                           contact_volume_coeff(theta, p))
    return ContactHamiltonian(density, coeffs.ell)


def curl_factor(ell: int, weight) -> float:
    return SUBSYMBOL_SIGN * (ell + 1) / (ell + 2) * (2 * float(weight) - 1)


def laplacian_subsymbol_residual(g: MetricField, theta: ContactFormField, weight, p: Sequence[float],
                                 floor: float = DEFAULT_DET_FLOOR) -> float:
    """|s(Delta^w_g) - SUBSYMBOL_SIGN (l+1)/(l+2) (2w - 1) A_g| at p, both in the chart-contact reference."""
    subsymbol = subsymbol_numeric(laplace_coeffs(g, weight, p, floor), theta, p).coefficient
    curl = curl_density(g, None, theta, p, floor).coefficient
    return abs(subsymbol - curl_factor(theta.ell, weight) * curl)


def collected_trace_density(g: MetricField, theta: ContactFormField, weight, p: Sequence[float],
                            floor: float = DEFAULT_DET_FLOOR) -> DensityValue:
    """
    The subsymbol of the Laplacian collected into traces of the connection:
    (1 - P) g^jk Gamma^t_jk theta_t + (2w - P) Gamma^j_ij g^it theta_t - P g^ij d_i theta_j,
    P = (1 + 2w(l+1))/(l+2). Equals SUBSYMBOL_SIGN times the coordinate subsymbol.

    The last term vanishes for the Darboux form and is kept for general forms.
    """
    point = tuple(float(c) for c in p)
    tensor = g.evaluate(point, order=1)
    inverse = _inverse(tensor, point, floor).value
    gamma = christoffel_from_jet(tensor, point, 0, floor).symbols
    form = theta.evaluate(point, order=1)
    ell = theta.ell
    prefactor = float(darboux_poly.subsymbol_prefactor(ell, weight))
    contracted = np.einsum("jk,tjk,t->", inverse, gamma, form.value)
    traced = np.einsum("jij,it,t->", gamma, inverse, form.value)
    divergence = np.einsum("ij,ji->", inverse, form.first)
    value = (1 - prefactor) * contracted + (2 * float(weight) - prefactor) * traced - prefactor * divergence
    return DensityValue(float(value), darboux_poly.hamiltonian_weight(ell), CHART_CONTACT,
                        contact_volume_coeff(theta, point))
