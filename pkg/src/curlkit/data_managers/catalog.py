"""
Closed-form geometries: the flat Darboux model, the round and conformally rescaled metrics of S^3,
the 3D ellipsoid, and sphere bundles over 2D bases.

All 3D entries except the flat model use the chart form theta = dz + x dy - y dx; density
coefficients printed for them are relative to that form.
"""
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..modules.bundle import BaseGeometry, sample_bundle_points, stm_geometry
from ..modules.contact import ContactFormField, darboux_form
from ..modules.geometry import Chart, ChartMap, MetricField
from ..utilities.errors import UnknownGeometryError

CONTACT_NAMES = ("x", "y", "z")
DARBOUX_NAMES = ("x1", "y1", "z")


@dataclass
class ParameterSchema:
    name: str
    default: float
    description: str


@dataclass
class CatalogEntry:
    id: str
    kind: str
    description: str
    parameters: List[ParameterSchema]
    builder: Callable[[Dict[str, float]], 'CatalogGeometry']

    def to_dict(self) -> Dict[str, Any]:
        return {"id": self.id,
                "kind": self.kind,
                "description": self.description,
                "parameters": {p.name: {"default": p.default, "description": p.description} for p in self.parameters}}


@dataclass
class CatalogGeometry:
    id: str
    params: Dict[str, float]
    chart: Chart
    metric: MetricField
    theta: ContactFormField
    description: str
    kind: str = "contact"
    base: Optional[BaseGeometry] = None

    @property
    def is_bundle(self) -> bool:
        return self.base is not None

    def to_dict(self) -> Dict[str, Any]:
        return {"id": self.id,
                "kind": self.kind,
                "params": dict(sorted(self.params.items())),
                "chart": list(self.chart.names),
                "metric": self.metric.description,
                "theta": self.theta.description,
                "description": self.description}


@dataclass
class ReferenceCurl:
    """
    Closed form of the curl at a point: ``display`` is the published polynomial, ``expected`` the
    chart-contact coefficient it predicts once the entry's normalization is applied.
    """
    display: float
    normalization: float
    expected: float


@dataclass
class DarbouxChart:
    """A linear chart map D with D* theta_chart = factor * theta_Darboux, and the pulled-back geometry."""
    chart_map: ChartMap
    metric: MetricField
    theta: ContactFormField
    factor: float


# region metrics
def _sphere_form(chart: Chart) -> ContactFormField:
    return ContactFormField(chart, lambda c: [-c[1], c[0], 1.0], "dz + x dy - y dx")


def _round_components(c):
    x, y, z = c
    factor = 1 / (x * x + y * y + z * z + 1) ** 2
    return [[factor * (y * y + z * z + 1), -factor * x * y, -factor * x * z],
            [-factor * x * y, factor * (x * x + z * z + 1), -factor * y * z],
            [-factor * x * z, -factor * y * z, factor * (x * x + y * y + 1)]]


def round_sphere_metric(chart: Chart) -> MetricField:
    return MetricField(chart, _round_components, "round metric of S^3")


def tabachnikov_metric(chart: Chart, a: float, b: float, c: float) -> MetricField:
    """The round metric times (r^2 + 1) / (x^2/a + y^2/b + z^2/c + 1)."""

    def components(coords):
        x, y, z = coords
        conformal = (x * x + y * y + z * z + 1) / (x * x / a + y * y / b + z * z / c + 1)
        return [[conformal * entry for entry in row] for row in _round_components(coords)]

    return MetricField(chart, components, f"conformal metric of S^3 (a={a}, b={b}, c={c})")


def ellipsoid_metric(chart: Chart, a: float, b: float, c: float) -> MetricField:
    """
    Induced metric of the ellipsoid a^2 v1^2 + b^2 v2^2 + c^2 v3^2 + v4^2 = 1 in central projection.

    The published component formulas are used with the cubed denominator s^3 and with the
    off-diagonal tensor components equal to half the dx dy coefficients.
    """
    a2, b2, c2 = a * a, b * b, c * c

    def components(coords):
        x, y, z = coords
        s = a2 * x * x + b2 * y * y + c2 * z * z + 1
        cube = s * s * s
        xx = ((b2 * y * y + c2 * z * z + 1) ** 2 + a2 * a2 * x * x * (y * y + z * z + 1)) / cube
        yy = ((a2 * x * x + c2 * z * z + 1) ** 2 + b2 * b2 * y * y * (x * x + z * z + 1)) / cube
        zz = ((a2 * x * x + b2 * y * y + 1) ** 2 + c2 * c2 * z * z * (x * x + y * y + 1)) / cube
        xy = -x * y * (a2 * a2 * x * x - a2 * (z * z * (b2 - c2) + b2 - 1) + b2 * (b2 * y * y + c2 * z * z + 1)) / cube
        xz = -x * z * (a2 * a2 * x * x - a2 * (y * y * (c2 - b2) + c2 - 1) + c2 * (b2 * y * y + c2 * z * z + 1)) / cube
        yz = -y * z * (b2 * b2 * y * y - b2 * (x * x * (c2 - a2) + c2 - 1) + c2 * (a2 * x * x + c2 * z * z + 1)) / cube
        return [[xx, xy, xz], [xy, yy, yz], [xz, yz, zz]]

    return MetricField(chart, components, f"ellipsoid metric (a={a}, b={b}, c={c})")


def embedding_metric(chart: Chart, weights: Sequence[float], scale: float = 1.0, description: str = "") -> MetricField:
    """
    Induced Euclidean metric of the quadric sum(m_i v_i^2) + v_{n+1}^2 = 1 in the central-projection
    chart v = (x, 1) / sqrt(s), s = 1 + sum(m_i x_i^2), multiplied by ``scale``:
    g = scale / s (I - x w^T - w x^T + (|x|^2 + 1) w w^T) with w = M x / s.
    """
    weights = [float(m) for m in weights]
    if len(weights) != chart.dim:
        raise ValueError(f"{len(weights)} quadric weights given for the {chart.dim}-dimensional chart {chart}")
    n = chart.dim

    def components(coords):
        s = 1 + sum(m * x * x for m, x in zip(weights, coords))
        r2 = sum(x * x for x in coords)
        w = [m * x / s for m, x in zip(weights, coords)]
        return [[scale * ((1.0 if i == j else 0.0) - coords[i] * w[j] - w[i] * coords[j] + (r2 + 1) * w[i] * w[j]) / s
                 for j in range(n)] for i in range(n)]

    return MetricField(chart, components, description or f"quadric metric with weights {weights}")


def flat_metric(chart: Chart) -> MetricField:
    n = chart.dim
    return MetricField(chart, lambda c: [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)],
                       "flat metric")


# endregion

# region reference curls
def tabachnikov_display(point: Sequence[float], a: float, b: float, c: float) -> float:
    x, y, z = point
    return 2.5 * ((1 / b - 1 / a) * x * y + (1 / c - 1) * z)


def ellipsoid_display(point: Sequence[float], a: float, b: float, c: float) -> float:
    x, y, z = point
    a2, b2, c2 = a * a, b * b, c * c
    return (a2 * a2 * (a2 - b2) * (b2 + 2 * c2 + 2) * x ** 3 * y
            + b2 * b2 * (a2 - b2) * (a2 + 2 * c2 + 2) * x * y ** 3
            + (a2 - b2) * c2 * c2 * (2 + a2 + b2 + c2) * x * y * z * z
            - a2 * a2 * (c2 - 1) * (a2 + 2 * b2 + c2 + 1) * x * x * z
            - b2 * b2 * (c2 - 1) * (2 * a2 + b2 + c2 + 1) * y * y * z
            - c2 * c2 * (c2 - 1) * (2 * a2 + 2 * b2 + 1) * z ** 3
            + (a2 - b2) * (a2 + b2 + 2 * c2 + 1) * x * y
            - (c2 - 1) * (2 * a2 + 2 * b2 + c2) * z)


def ellipsoid_normalization(point: Sequence[float], a: float, b: float, c: float) -> float:
    """s / (2 S2^2) with s = a^2x^2 + b^2y^2 + c^2z^2 + 1 and S2 = a^4x^2 + b^4y^2 + c^4z^2 + 1."""
    x, y, z = point
    s = a ** 2 * x * x + b ** 2 * y * y + c ** 2 * z * z + 1
    s2 = a ** 4 * x * x + b ** 4 * y * y + c ** 4 * z * z + 1
    return s / (2 * s2 * s2)


TABACHNIKOV_NORMALIZATION = -1.0


def reference_curl(geometry: CatalogGeometry, point: Sequence[float]) -> Optional[ReferenceCurl]:
    """Closed form of the curl at ``point`` with the entry's normalization; None when there is none."""
    params = geometry.params
    if geometry.id in ("darboux-flat", "s3-round", "stm-flat", "stm-sphere", "stm-ellipse"):
        # flat, Killing-related or sphere-bundle geometries have vanishing curl
        return ReferenceCurl(0.0, 1.0, 0.0)
    if geometry.id == "s3-tabachnikov":
        display = tabachnikov_display(point, params["a"], params["b"], params["c"])
        return ReferenceCurl(display, TABACHNIKOV_NORMALIZATION, TABACHNIKOV_NORMALIZATION * display)
    if geometry.id == "ellipsoid-3d":
        display = ellipsoid_display(point, params["a"], params["b"], params["c"])
        normalization = ellipsoid_normalization(point, params["a"], params["b"], params["c"])
        return ReferenceCurl(display, normalization, normalization * display)
    return None


# endregion

# region builders
def _build_darboux_flat(params):
    chart = Chart(DARBOUX_NAMES)
    return CatalogGeometry("darboux-flat", params, chart, flat_metric(chart), darboux_form(1, chart),
                           "flat metric on the Darboux chart")


def _build_s3_round(params):
    chart = Chart(CONTACT_NAMES)
    return CatalogGeometry("s3-round", params, chart, round_sphere_metric(chart), _sphere_form(chart),
                           "round S^3 in affine coordinates")


def _build_s3_tabachnikov(params):
    chart = Chart(CONTACT_NAMES)
    return CatalogGeometry("s3-tabachnikov", params, chart,
                           tabachnikov_metric(chart, params["a"], params["b"], params["c"]), _sphere_form(chart),
                           "S^3 with the conformally rescaled metric of the ellipsoid geodesic flow")


def _build_ellipsoid(params):
    chart = Chart(CONTACT_NAMES)
    return CatalogGeometry("ellipsoid-3d", params, chart,
                           ellipsoid_metric(chart, params["a"], params["b"], params["c"]), _sphere_form(chart),
                           "3D ellipsoid with its induced metric")


def _bundle_geometry(geometry_id: str, params: Dict[str, float], base: BaseGeometry) -> CatalogGeometry:
    stm = stm_geometry(base)
    return CatalogGeometry(geometry_id, params, stm.chart, stm.metric, stm.theta,
                           f"unit sphere bundle over the {base.description}", "bundle", base)


def _build_stm_flat(params):
    chart = Chart(("x1", "x2"))
    return _bundle_geometry("stm-flat", params, BaseGeometry(chart, flat_metric(chart), "flat plane"))


def _build_stm_sphere(params):
    chart = Chart(("x1", "x2"))
    radius = params["radius"]
    metric = embedding_metric(chart, (1.0, 1.0), radius * radius, f"round metric of S^2 (r={radius})")
    return _bundle_geometry("stm-sphere", params, BaseGeometry(chart, metric, f"round sphere of radius {radius}"))


def _build_stm_ellipse(params):
    chart = Chart(("x1", "x2"))
    a, b = params["a"], params["b"]
    metric = embedding_metric(chart, (a * a, b * b), 1.0, f"ellipsoid metric (a={a}, b={b})")
    return _bundle_geometry("stm-ellipse", params, BaseGeometry(chart, metric, f"ellipsoid with a={a}, b={b}"))


_ABC = [ParameterSchema("a", 2.0, "first semi-axis parameter"),
        ParameterSchema("b", 3.0, "second semi-axis parameter"),
        ParameterSchema("c", 0.5, "third semi-axis parameter")]

CATALOG: Dict[str, CatalogEntry] = {entry.id: entry for entry in [
    CatalogEntry("darboux-flat", "contact", "Flat metric with the Darboux form dz + 1/2 (x dy - y dx)", [],
                 _build_darboux_flat),
    CatalogEntry("s3-round", "contact", "Round S^3, curl vanishes", [], _build_s3_round),
    CatalogEntry("s3-tabachnikov", "contact", "Conformally rescaled metric on S^3", _ABC, _build_s3_tabachnikov),
    CatalogEntry("ellipsoid-3d", "contact", "3D ellipsoid a^2 v1^2 + b^2 v2^2 + c^2 v3^2 + v4^2 = 1",
                 [ParameterSchema("a", 1.5, "x-axis parameter"), ParameterSchema("b", 0.8, "y-axis parameter"),
                  ParameterSchema("c", 1.2, "z-axis parameter")], _build_ellipsoid),
    CatalogEntry("stm-flat", "bundle", "Unit sphere bundle of the flat plane", [], _build_stm_flat),
    CatalogEntry("stm-sphere", "bundle", "Unit sphere bundle of the round 2-sphere",
                 [ParameterSchema("radius", 1.0, "sphere radius")], _build_stm_sphere),
    CatalogEntry("stm-ellipse", "bundle", "Unit sphere bundle of an ellipsoid a^2 v1^2 + b^2 v2^2 + v3^2 = 1",
                 [ParameterSchema("a", 1.5, "first axis parameter"), ParameterSchema("b", 1.5, "second axis parameter")],
                 _build_stm_ellipse),
]}

# bundle-check accepts the base names as shorthand
BASE_ALIASES = {"flat": "stm-flat", "sphere": "stm-sphere", "ellipse": "stm-ellipse"}


# endregion

def list_geometries() -> List[Dict[str, Any]]:
    return [entry.to_dict() for entry in CATALOG.values()]


def get_entry(geometry_id: str) -> CatalogEntry:
    geometry_id = BASE_ALIASES.get(geometry_id, geometry_id)
    if geometry_id not in CATALOG:
        raise UnknownGeometryError(f"Geometry {geometry_id} is not defined, choose from {sorted(CATALOG)}")
    return CATALOG[geometry_id]


def instantiate(geometry_id: str, params: Optional[Dict[str, float]] = None) -> CatalogGeometry:
    """
    Build a catalog geometry; missing parameters take their defaults.

    Raises:
        UnknownGeometryError: for an id outside the catalog
        ValueError: for unknown or non-positive parameters
    """
    entry = get_entry(geometry_id)
    params = dict(params or {})
    known = {p.name: p.default for p in entry.parameters}
    unknown = set(params) - set(known)
    if unknown:
        raise ValueError(f"Parameter(s) {sorted(unknown)} are not defined for {entry.id}, choose from {sorted(known)}")
    resolved = {name: float(params.get(name, default)) for name, default in known.items()}
    for name, value in resolved.items():
        if not value > 0 or not math.isfinite(value):
            raise ValueError(f"Parameter {name} = {value} of {entry.id} is not positive")
    return entry.builder(resolved)


def darboux_chart(geometry: CatalogGeometry) -> DarbouxChart:
    """
    The linear chart (x1, y1, z) -> entry chart in which the entry's form is a constant multiple of
    the Darboux form; for theta = dz + x dy - y dx this is (x, y, w) -> (x, y, 2w).
    """
    if geometry.is_bundle:
        raise ValueError(f"Geometry {geometry.id} has no linear Darboux chart")
    chart = Chart(DARBOUX_NAMES)
    if geometry.id == "darboux-flat":
        matrix, factor = np.eye(3), 1.0
    else:
        matrix, factor = np.diag([1.0, 1.0, 2.0]), 2.0
    chart_map = ChartMap.linear(matrix, chart, geometry.chart)
    metric = geometry.metric.linear_pullback(matrix, chart, f"{geometry.metric.description} in Darboux coordinates")
    return DarbouxChart(chart_map, metric, darboux_form(1, chart), factor)


def sample_points(geometry: CatalogGeometry, rng: np.random.Generator, count: int, box: float = 1.0,
                  det_floor: float = 1e-8, max_attempts: int = 100) -> List[Tuple[float, ...]]:
    """
    Points uniform in [-box, box]^3 (base box and fiber circle for bundles), rejecting points where
    |det g| falls below ``det_floor``.
    """
    points = []
    attempts = 0
    while len(points) < count:
        attempts += 1
        if attempts > max_attempts * max(count, 1):
            raise ValueError(f"Could not sample {count} regular points of {geometry.id}")
        if geometry.is_bundle:
            candidate = sample_bundle_points(rng, 1, box)[0]
            determinant = np.linalg.det(geometry.base.metric.values(candidate[:2]))
        else:
            candidate = tuple(float(c) for c in rng.uniform(-box, box, size=geometry.chart.dim))
            determinant = np.linalg.det(geometry.metric.values(candidate))
        if abs(determinant) >= det_floor:
            points.append(candidate)
    return points
