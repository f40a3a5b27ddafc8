"""
The unit sphere bundle STM of a 2D Riemannian base, with its Liouville contact form and lifted metric.

STM is parametrized by (x1, x2, u) through y = cos(u) e1 + sin(u) e2, where (e1, e2) is the
Gram-Schmidt frame of the coordinate frame. Every quantity is computed in order-2 jets over the
three bundle coordinates, so the lifted metric comes out with its first derivatives.
"""
import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from . import jets
from .contact import DEFAULT_CONTACT_FLOOR, ContactFormField
from .curl import curl_density
from .geometry import DEFAULT_DET_FLOOR, Chart, MetricField, TensorJet, _check_point, _lift
from .jets import Jet
from ..utilities.errors import DomainError, OrderOverflowError, SingularMetricError

BUNDLE_NAMES = ("x1", "x2", "u")


@dataclass
class BaseGeometry:
    """A 2D Riemannian base given by closed-form metric components."""
    chart: Chart
    metric: MetricField
    description: str = ""

    def __post_init__(self):
        if self.chart.dim != 2:
            raise ValueError(f"Sphere bundles are built over 2D bases, {self.chart} has dimension {self.chart.dim}")
        if self.metric.components is None:
            raise ValueError(f"Base metric {self.metric.description} has no closed-form components")

    def metric_jets(self, coords: Sequence[Jet]) -> List[List[Jet]]:
        """Base metric components as jets over the coordinates the base point jets are seeded in."""
        n = coords[0].n
        order = coords[0].order
        point = coords[0].point
        raw = self.metric.components(list(coords[:2]))
        return [[_lift(raw[min(i, j)][max(i, j)], n, order, point) for j in range(2)] for i in range(2)]


@dataclass
class STMGeometry:
    chart: Chart
    metric: MetricField
    theta: ContactFormField
    base: BaseGeometry


# region frame
def _frame(matrix: List[List[Jet]]) -> Tuple[List[Jet], List[Jet]]:
    g11, g12, g22 = matrix[0][0], matrix[0][1], matrix[1][1]
    schur = g22 - g12 * g12 / g11 if g11.value > 0 else None
    if schur is None or schur.value <= 0:
        raise DomainError(f"Base metric is not positive definite at {g11.point}")
    zero = jets.constant(0.0, g11.n, g11.order, g11.point)
    root = jets.sqrt(schur)
    e1 = [1 / jets.sqrt(g11), zero]
    e2 = [-(g12 / g11) / root, 1 / root]
    return e1, e2


def _fiber(matrix: List[List[Jet]], u: Jet) -> List[Jet]:
    e1, e2 = _frame(matrix)
    c, s = jets.cos(u), jets.sin(u)
    return [c * e1[0] + s * e2[0], c * e1[1] + s * e2[1]]


def orthonormal_frame(base: BaseGeometry, p: Sequence[float], order: int = 2) -> Tuple[List[Jet], List[Jet]]:
    """
    Gram-Schmidt frame of (d_1, d_2) for the base metric at p, as jets over the base coordinates.

    Raises:
        DomainError: when the base metric is not positive definite at p
    """
    coords = jets.seed_point(_check_point(base.chart, p), order)
    return _frame(base.metric_jets(coords))


def fiber_direction(base: BaseGeometry, p: Sequence[float], u: float, order: int = 2) -> List[Jet]:
    """y = cos(u) e1 + sin(u) e2 as jets over (x1, x2, u); g(y, y) = 1 identically."""
    point = _check_point(base.chart, p)
    coords = jets.seed_point((*point, float(u)), order)
    return _fiber(base.metric_jets(coords), coords[2])


# endregion

class LiouvilleForm(ContactFormField):
    """theta_i = g_ij y^j, theta_u = 0; the restriction of the Liouville form to STM."""

    def __init__(self, base: BaseGeometry):
        self.base = base
        super().__init__(Chart(BUNDLE_NAMES), self._components, f"Liouville form over {base.description}")

    def _components(self, coords):
        matrix = self.base.metric_jets(coords)
        y = _fiber(matrix, coords[2])
        return [matrix[0][0] * y[0] + matrix[0][1] * y[1], matrix[0][1] * y[0] + matrix[1][1] * y[1], 0.0]


@dataclass
class _LiftData:
    metric: List[List[Jet]]
    y: List[Jet]
    nabla_y: List[List[Jet]]
    fiber_y: List[Jet]


def _lift_data(base: BaseGeometry, point: Tuple[float, ...]) -> _LiftData:
    """Order-1 jets of g, y, nabla_i y^s = d_i y^s + Gamma^s_ik y^k and d_u y over the bundle chart."""
    coords = jets.seed_point(point, 2)
    matrix = base.metric_jets(coords)
    y = _fiber(matrix, coords[2])
    # dg[a][b][c] = d_c g_ab
    dg = [[[matrix[a][b].partial(c) for c in range(2)] for b in range(2)] for a in range(2)]
    det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[0][1]
    inverse = [[matrix[1][1] / det, -matrix[0][1] / det], [-matrix[0][1] / det, matrix[0][0] / det]]
    gamma = [[[sum(0.5 * inverse[s][l] * (dg[l][k][i] + dg[l][i][k] - dg[i][k][l]) for l in range(2))
               for k in range(2)] for i in range(2)] for s in range(2)]
    derivative = [[y[s].partial(i) for i in range(3)] for s in range(2)]
    nabla_y = [[derivative[s][i] + sum(gamma[s][i][k] * y[k] for k in range(2)) for i in range(2)]
               for s in range(2)]
    first_order = [[matrix[a][b].truncate(1) for b in range(2)] for a in range(2)]
    return _LiftData(first_order, [component.truncate(1) for component in y], nabla_y,
                     [derivative[s][2] for s in range(2)])


def _pair(metric: List[List[Jet]], v: Sequence, w: Sequence):
    return sum(metric[t][s] * v[t] * w[s] for t in range(2) for s in range(2))


class LiftedMetric(MetricField):
    """
    The lifted metric on STM in (x1, x2, u):
    g_ij + g(nabla_i y, nabla_j y), g(d_u y, nabla_i y) and g(d_u y, d_u y).

    Evaluations carry first derivatives at most.
    """

    def __init__(self, base: BaseGeometry):
        super().__init__(Chart(BUNDLE_NAMES), None, f"lifted metric over {base.description}")
        self.base = base

    def evaluate(self, point: Sequence[float], order: int = 1) -> TensorJet:
        if order > 1:
            raise OrderOverflowError(f"The lifted metric carries first derivatives only, order {order} requested")
        point = _check_point(self.chart, point)
        data = _lift_data(self.base, point)
        nabla = [[data.nabla_y[s][i] for s in range(2)] for i in range(2)]
        matrix = np.empty((3, 3), dtype=object)
        for i in range(2):
            for j in range(i, 2):
                matrix[i, j] = matrix[j, i] = data.metric[i][j] + _pair(data.metric, nabla[i], nabla[j])
            matrix[i, 2] = matrix[2, i] = _pair(data.metric, data.fiber_y, nabla[i])
        matrix[2, 2] = _pair(data.metric, data.fiber_y, data.fiber_y)
        tensor = TensorJet.from_jets(matrix, 3)
        if np.min(np.linalg.eigvalsh(tensor.value)) <= 0:
            raise SingularMetricError(float(np.linalg.det(tensor.value)), point)
        return tensor.truncate(order)


def horizontal_lift(base: BaseGeometry, p: Sequence[float], u: float) -> np.ndarray:
    """
    The spray direction (y^1, y^2, du) tangent to STM whose fiber part cancels y^i nabla_i y,
    du = -g(d_u y, y^i nabla_i y) / g(d_u y, d_u y).
    """
    point = (*_check_point(base.chart, p), float(u))
    data = _lift_data(base, point)
    y = [component.value for component in data.y]
    metric = [[entry.value for entry in row] for row in data.metric]
    transported = [sum(y[i] * data.nabla_y[s][i].value for i in range(2)) for s in range(2)]
    fiber = [component.value for component in data.fiber_y]
    rate = -_pair(metric, fiber, transported) / _pair(metric, fiber, fiber)
    return np.array([y[0], y[1], rate])


def stm_geometry(base: BaseGeometry) -> STMGeometry:
    chart = Chart(BUNDLE_NAMES)
    return STMGeometry(chart, LiftedMetric(base), LiouvilleForm(base), base)


def _bundle_point(sample) -> Tuple[float, ...]:
    if len(sample) == 2:
        p, u = sample
        return (*(float(c) for c in p), float(u))
    return tuple(float(c) for c in sample)


def sample_bundle_points(rng: np.random.Generator, count: int, box: float = 1.0) -> List[Tuple[float, ...]]:
    """Base points uniform in [-box, box]^2 with fiber angles uniform in [0, 2 pi)."""
    base = rng.uniform(-box, box, size=(count, 2))
    angles = rng.uniform(0.0, 2 * math.pi, size=count)
    return [(float(x1), float(x2), float(u)) for (x1, x2), u in zip(base, angles)]


def stm_curl_check(base: BaseGeometry, samples: Iterable, det_floor: float = DEFAULT_DET_FLOOR,
                   contact_floor: float = DEFAULT_CONTACT_FLOOR) -> float:
    """
    Largest |A| of the lifted metric and the Liouville form over the samples, each a (p, u) pair
    or an (x1, x2, u) triple. The curl of STM vanishes identically, so this is a residual.
    """
    geometry = stm_geometry(base)
    residual = 0.0
    for sample in samples:
        result = curl_density(geometry.metric, None, geometry.theta, _bundle_point(sample), det_floor, contact_floor)
        residual = max(residual, abs(result.coefficient))
    return residual
