"""
Contact forms, the contact volume and weighted densities at a point.

Density coefficients carry a reference tag: ``chart-contact`` means relative to
|theta ^ (d theta)^l|^weight of the chart's declared form, ``coordinate`` means relative to
|dx^1 ^ ... ^ dx^n|^weight. The two differ by the factor |vol coefficient|^weight.
"""
import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Union

import numpy as np

from . import darboux_poly, jets
from .darboux_poly import Poly, PolyVectorField
from .geometry import Chart, ChartMap, CovectorField, TensorJet
from .jets import Jet
from ..utilities.errors import NonContactPointError

CHART_CONTACT = "chart-contact"
COORDINATE = "coordinate"
REFERENCES = (CHART_CONTACT, COORDINATE)
DEFAULT_CONTACT_FLOOR = 1e-10


class ContactFormField(CovectorField):
    def __init__(self, chart: Chart, components: Callable[[List[Jet]], Sequence], description: str = ""):
        if chart.dim % 2 == 0:
            raise ValueError(f"Contact forms live on odd-dimensional charts, {chart} has dimension {chart.dim}")
        super().__init__(chart, components, description)

    @property
    def ell(self) -> int:
        return self.chart.ell

    def linear_pullback(self, matrix: np.ndarray, chart: Chart, factor: float = 1.0,
                        description: str = "") -> 'ContactFormField':
        """The form (1/factor) D*theta for the linear map D = matrix."""
        matrix = np.asarray(matrix, dtype=float)
        source = self

        def components(coords):
            image = [sum(float(matrix[a, i]) * coords[i] for i in range(len(coords))) for a in range(matrix.shape[0])]
            raw = source.components(image)
            return [sum(float(matrix[a, i]) * raw[a] for a in range(matrix.shape[0]) if matrix[a, i] != 0) / factor
                    for i in range(len(coords))]

        return ContactFormField(chart, components, description or f"linear pullback of {self.description}")


# region forms
def darboux_form(ell: int, chart: Optional[Chart] = None) -> ContactFormField:
    """dz + 1/2 sum(x_i dy_i - y_i dx_i) on the Darboux chart (x_1..x_l, y_1..y_l, z)."""
    chart = chart or Chart(darboux_poly.variable_names(ell))
    return form_from_polys(chart, darboux_poly.darboux_form_polys(ell), "Darboux form")


def form_from_polys(chart: Chart, polys: Sequence[Poly], description: str = "") -> ContactFormField:
    polys = list(polys)
    if len(polys) != chart.dim:
        raise ValueError(f"{len(polys)} components given for a form on {chart}")
    return ContactFormField(chart, lambda coords: [p.evaluate(coords) for p in polys], description)


def scaled_form(theta: ContactFormField, factor: Callable[[List[Jet]], Jet], description: str = "") -> ContactFormField:
    """The form F * theta for a closed-form factor F of the coordinates."""

    def components(coords):
        scale = factor(coords)
        return [scale * component for component in theta.components(coords)]

    return ContactFormField(theta.chart, components, description or f"scaled {theta.description}")


# endregion

def exterior_derivative(theta: CovectorField, p: Sequence[float]) -> np.ndarray:
    """d theta_ij = d_i theta_j - d_j theta_i."""
    first = theta.evaluate(p, order=1).first
    # first[j, i] = d_i theta_j
    return first.T - first


def _volume_from(theta: Sequence, dtheta, ell: int):
    """Coefficient of theta ^ (d theta)^l on dx^1 ^ ... ^ dx^n, generic over floats and jets."""
    if ell == 1:
        return theta[0] * dtheta[1][2] - theta[1] * dtheta[0][2] + theta[2] * dtheta[0][1]
    total = 0.0
    n = 2 * ell + 1
    for permutation in itertools.permutations(range(n)):
        sign = _permutation_sign(permutation)
        term = theta[permutation[0]]
        for m in range(ell):
            term = term * dtheta[permutation[2 * m + 1]][permutation[2 * m + 2]]
        total = term * sign + total
    return total * (0.5 ** ell)


def _permutation_sign(permutation: Sequence[int]) -> int:
    inversions = sum(1 for i in range(len(permutation)) for j in range(i + 1, len(permutation))
                     if permutation[i] > permutation[j])
    return -1 if inversions % 2 else 1


def contact_volume_coeff(theta: ContactFormField, p: Sequence[float]) -> float:
    """
    Coefficient v of vol = theta ^ (d theta)^l relative to dx^1 ^ ... ^ dx^n at p.

    Zero is a legal value; :func:`contact_check` interprets it.
    """
    tensor = theta.evaluate(p, order=1)
    return float(_volume_from(tensor.value, tensor.first.T - tensor.first, theta.ell))


def contact_volume_jet(theta: ContactFormField, p: Sequence[float], tensor: Optional[TensorJet] = None) -> Jet:
    """The volume coefficient as an order-1 jet, from the order-2 jets of theta."""
    tensor = tensor if tensor is not None else theta.evaluate(p, order=2)
    point = tuple(float(c) for c in p)
    components = tensor.jets(point)
    n = len(components)
    dtheta = [[components[j].partial(i) - components[i].partial(j) if i != j else 0.0 for j in range(n)]
              for i in range(n)]
    first_order = [component.truncate(1) for component in components]
    volume = _volume_from(first_order, dtheta, theta.ell)
    if not isinstance(volume, Jet):
        volume = jets.constant(float(volume), n, 1, point)
    return volume


def contact_check(theta: ContactFormField, p: Sequence[float], floor: float = DEFAULT_CONTACT_FLOOR) -> bool:
    return abs(contact_volume_coeff(theta, p)) > floor


@dataclass(frozen=True)
class DensityValue:
    """coefficient * |vol_reference|^weight at one point."""
    coefficient: float
    weight: Fraction
    reference: str = CHART_CONTACT
    reference_volume: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "weight", Fraction(self.weight))
        if self.reference not in REFERENCES:
            raise ValueError(f"Density reference {self.reference} is not defined, choose from {REFERENCES}")
        if self.reference == CHART_CONTACT and self.reference_volume is None:
            raise ValueError("A chart-contact density needs the contact volume coefficient at its point")

    def to_reference(self, reference: str, reference_volume: Optional[float] = None) -> 'DensityValue':
        if reference == self.reference:
            return self
        volume = reference_volume if reference_volume is not None else self.reference_volume
        if volume is None:
            raise ValueError(f"Conversion to {reference} needs the contact volume coefficient")
        factor = abs(volume) ** float(self.weight)
        if reference == COORDINATE:
            return DensityValue(self.coefficient * factor, self.weight, COORDINATE, volume)
        if reference == CHART_CONTACT:
            return DensityValue(self.coefficient / factor, self.weight, CHART_CONTACT, volume)
        raise ValueError(f"Density reference {reference} is not defined, choose from {REFERENCES}")

    def _check(self, other: 'DensityValue'):
        if other.weight != self.weight or other.reference != self.reference:
            raise ValueError(f"Densities ({self.weight}, {self.reference}) and ({other.weight}, {other.reference}) "
                             f"cannot be combined")

    def __add__(self, other: 'DensityValue') -> 'DensityValue':
        self._check(other)
        return replace(self, coefficient=self.coefficient + other.coefficient)

    def __sub__(self, other: 'DensityValue') -> 'DensityValue':
        self._check(other)
        return replace(self, coefficient=self.coefficient - other.coefficient)

    def __mul__(self, other: Union[float, 'DensityValue']) -> 'DensityValue':
        if isinstance(other, DensityValue):
            if other.reference != self.reference:
                raise ValueError(f"Densities with references {self.reference} and {other.reference} cannot be multiplied")
            return replace(self, coefficient=self.coefficient * other.coefficient, weight=self.weight + other.weight)
        return replace(self, coefficient=self.coefficient * float(other))

    __rmul__ = __mul__


@dataclass(frozen=True)
class ContactHamiltonian:
    density: DensityValue
    ell: int

    def __post_init__(self):
        expected = darboux_poly.hamiltonian_weight(self.ell)
        if self.density.weight != expected:
            raise ValueError(f"Contact Hamiltonians have weight {expected}, got {self.density.weight}")

    @property
    def coefficient(self) -> float:
        return self.density.coefficient


def _require_contact(volume: float, p, floor: float):
    if abs(volume) <= floor:
        raise NonContactPointError(volume, p)


def project_pi(vector: Union[Sequence[float], Callable[[Sequence[float]], Sequence[float]]],
               theta: ContactFormField, p: Sequence[float], floor: float = DEFAULT_CONTACT_FLOOR) -> ContactHamiltonian:
    """
    Hamiltonian theta(X) * vol^(-1/(l+1)) of the contact component of X at p.

    Args:
        vector: components of X at p, or a callable returning them for a point
        theta: the chart's contact form
        p: evaluation point
        floor: contact-volume floor

    Raises:
        NonContactPointError: when the contact condition fails at p
    """
    volume = contact_volume_coeff(theta, p)
    _require_contact(volume, p, floor)
    components = vector(p) if callable(vector) else vector
    components = np.asarray([jets.value_of(c) for c in components], dtype=float)
    coefficient = float(np.dot(theta.values(p), components))
    weight = darboux_poly.hamiltonian_weight(theta.ell)
    return ContactHamiltonian(DensityValue(coefficient, weight, CHART_CONTACT, volume), theta.ell)


def darboux_contact_field(phi: Poly) -> PolyVectorField:
    return darboux_poly.hamiltonian_field(phi)


def contact_condition_residual(vector_field: PolyVectorField) -> List[Poly]:
    """Components of L_X theta - 1/(l+1) Div(X) theta for the Darboux form."""
    return darboux_poly.contact_condition_residual(vector_field)


def pullback_form(f: ChartMap, theta: CovectorField, p: Sequence[float]) -> np.ndarray:
    """(f*theta)_i = d_i f^a theta_a(f(p))."""
    image = f.evaluate(p, order=1)
    return image.first.T @ theta.values(image.value)


def flow_contact_defect(f: ChartMap, theta: ContactFormField, p: Sequence[float]) -> float:
    """
    Largest component of (f*theta) ^ theta at p; zero exactly when f*theta is a multiple of theta.
    """
    pulled = pullback_form(f, theta, p)
    own = theta.values(p)
    wedge = np.outer(pulled, own) - np.outer(own, pulled)
    return float(np.max(np.abs(wedge)))
