"""
The contact Riemannian curl A = <g, nabla Theta> of a metric, Killing defects and the projective
cocycle of a diffeomorphism.

With c_j = theta_j |v|^mu (v the contact volume coefficient, mu = -1/(l+1)) the covariant derivative
of the contact tensor in the coordinate reference is d_i c_j - Pi^k_ij c_k. Only the projective
symbols enter, so the result depends on the connection through its projective class alone.
"""
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from . import darboux_poly
from .contact import (CHART_CONTACT, COORDINATE, DEFAULT_CONTACT_FLOOR, ContactFormField, DensityValue,
                      contact_volume_jet)
from .geometry import (DEFAULT_DET_FLOOR, ChartMap, ConnectionField, CovectorField, MetricField, PulledBackMetric,
                       TensorJet, christoffel, metric_inverse, projective_symbols, pullback_connection)
from .jets import Jet
from ..utilities.errors import NonContactPointError


@dataclass
class CurlResult:
    density: DensityValue
    nabla_theta: np.ndarray
    point: Tuple[float, ...]
    orientation: int

    @property
    def coefficient(self) -> float:
        return self.density.coefficient


def nabla_theta(pi: np.ndarray, theta: TensorJet, volume: Jet, ell: int, reference: str = CHART_CONTACT,
                floor: float = DEFAULT_CONTACT_FLOOR, point=None) -> np.ndarray:
    """
    (nabla Theta)_ij = d_i c_j - Pi^k_ij c_k for c_j = theta_j |v|^mu.

    Args:
        pi: projective symbols Pi^k_ij at the point
        theta: components of theta with first derivatives
        volume: contact volume coefficient v as a jet
        ell: half the chart dimension minus one half
        reference: ``chart-contact`` divides out |v|^mu, ``coordinate`` keeps it
        floor: contact-volume floor

    Raises:
        NonContactPointError: when |v| is at or below the floor
    """
    if abs(volume.value) <= floor:
        raise NonContactPointError(volume.value, point)
    mu = -1.0 / (ell + 1)
    # first[j, i] = d_i theta_j
    derivative = theta.first.T + mu * np.outer(volume.gradient, theta.value) / volume.value
    matrix = derivative - np.einsum("kij,k->ij", pi, theta.value)
    if reference == COORDINATE:
        return matrix * abs(volume.value) ** mu
    if reference != CHART_CONTACT:
        raise ValueError(f"Density reference {reference} is not defined")
    return matrix


def curl_density(g_contract: MetricField, gamma_source: Optional[ConnectionField], theta: ContactFormField,
                 p: Sequence[float], det_floor: float = DEFAULT_DET_FLOOR,
                 contact_floor: float = DEFAULT_CONTACT_FLOOR) -> CurlResult:
    """
    A = g^ij (nabla Theta)_ij at p, a density of weight -1/(l+1) in the chart-contact reference.

    ``gamma_source`` supplies the connection; None takes the Levi-Civita connection of
    ``g_contract``, which yields the contact Riemannian curl of that metric.
    """
    point = tuple(float(c) for c in p)
    ell = theta.ell
    n = theta.chart.dim
    if gamma_source is None:
        symbols = christoffel(g_contract, point, order=0, floor=det_floor).symbols
    else:
        symbols = gamma_source.evaluate(point, order=0).symbols
    inverse = metric_inverse(g_contract, point, order=0, floor=det_floor).value
    tensor = theta.evaluate(point, order=2)
    volume = contact_volume_jet(theta, point, tensor)
    matrix = nabla_theta(projective_symbols(symbols, n), tensor, volume, ell, CHART_CONTACT, contact_floor, point)
    coefficient = float(np.einsum("ij,ij->", inverse, matrix))
    density = DensityValue(coefficient, darboux_poly.hamiltonian_weight(ell), CHART_CONTACT, volume.value)
    return CurlResult(density, matrix, point, 1 if volume.value > 0 else -1)


def curl_field(g: MetricField, theta: ContactFormField, points: Iterable[Sequence[float]],
               det_floor: float = DEFAULT_DET_FLOOR, contact_floor: float = DEFAULT_CONTACT_FLOOR) -> pd.DataFrame:
    """Curl coefficients at many points as a table with one row per point."""
    rows = []
    for index, point in enumerate(points):
        result = curl_density(g, None, theta, point, det_floor, contact_floor)
        row = {"index": index}
        row.update({name: coordinate for name, coordinate in zip(theta.chart.names, result.point)})
        row.update({"coefficient": result.coefficient,
                    "weight": str(result.density.weight),
                    "reference": result.density.reference,
                    "orientation": result.orientation})
        rows.append(row)
    columns = ["index", *theta.chart.names, "coefficient", "weight", "reference", "orientation"]
    return pd.DataFrame(rows, columns=columns)


def killing_defect(g: MetricField, beta: CovectorField, p: Sequence[float],
                   det_floor: float = DEFAULT_DET_FLOOR) -> np.ndarray:
    """nabla_i beta_j + nabla_j beta_i; zero exactly when beta is a Killing form at p."""
    symbols = christoffel(g, p, order=0, floor=det_floor).symbols
    covector = beta.evaluate(p, order=1)
    derivative = covector.first.T - np.einsum("kij,k->ij", symbols, covector.value)
    return derivative + derivative.T


def lower_index(g: MetricField, vector: Sequence[float], p: Sequence[float]) -> np.ndarray:
    return g.values(p) @ np.asarray(vector, dtype=float)


def raise_index(g: MetricField, covector: Sequence[float], p: Sequence[float],
                det_floor: float = DEFAULT_DET_FLOOR) -> np.ndarray:
    return metric_inverse(g, p, order=0, floor=det_floor).value @ np.asarray(covector, dtype=float)


def cocycle_T(f: ChartMap, gamma: ConnectionField, p: Sequence[float]) -> np.ndarray:
    """
    f*Pi - Pi at p for a self-map f of the chart; ``gamma`` is any representative of the
    projective class. Vanishes for projective maps.
    """
    n = gamma.chart.dim
    pulled = projective_symbols(pullback_connection(f, gamma, p).symbols, n)
    own = projective_symbols(gamma.evaluate(p, order=0).symbols, n)
    return pulled - own


def density_pullback(f: ChartMap, g: MetricField, theta: ContactFormField, p: Sequence[float],
                     det_floor: float = DEFAULT_DET_FLOOR, contact_floor: float = DEFAULT_CONTACT_FLOOR) -> DensityValue:
    """
    f*A for the curl A of g, expressed in the chart-contact reference at p.

    The coordinate coefficient at f(p) is carried back with |det Df|^weight.
    """
    image = f.evaluate(p, order=1)
    at_image = curl_density(g, None, theta, image.value, det_floor, contact_floor).density
    coordinate = at_image.to_reference(COORDINATE)
    weight = float(coordinate.weight)
    pulled = coordinate.coefficient * abs(float(np.linalg.det(image.first))) ** weight
    volume = contact_volume_jet(theta, p).value
    return DensityValue(pulled, coordinate.weight, COORDINATE, volume).to_reference(CHART_CONTACT)


def equivariance_residual(f: ChartMap, g: MetricField, theta: ContactFormField, p: Sequence[float],
                          det_floor: float = DEFAULT_DET_FLOOR,
                          contact_floor: float = DEFAULT_CONTACT_FLOOR) -> Dict[str, float]:
    """
    Residuals of the two transformation laws of the curl under a self-map f of the chart.

    ``contactomorphism``: |A_{f*g} - f*A_g|, small only when f preserves the contact structure.
    ``cocycle``: |A_{f*g} - <f*g, nabla Theta> + <f*g (x) Theta, f*Pi - Pi>|, an identity for every
    diffeomorphism; the left term runs through the Levi-Civita connection of f*g, the right one
    through the pulled-back connection of g.
    """
    point = tuple(float(c) for c in p)
    pulled_metric = PulledBackMetric(f, g)
    transformed = curl_density(pulled_metric, None, theta, point, det_floor, contact_floor)
    carried = density_pullback(f, g, theta, point, det_floor, contact_floor)

    n = theta.chart.dim
    levi_civita = ConnectionField.levi_civita(g, det_floor)
    own = curl_density(g, None, theta, point, det_floor, contact_floor)
    inverse = metric_inverse(pulled_metric, point, order=0, floor=det_floor).value
    cocycle = cocycle_T(f, levi_civita, point)
    correction = np.einsum("ij,kij,k->", inverse, cocycle, theta.values(point))
    predicted = float(np.einsum("ij,ij->", inverse, own.nabla_theta)) - correction
    return {"contactomorphism": abs(transformed.coefficient - carried.coefficient),
            "cocycle": abs(transformed.coefficient - predicted)}
