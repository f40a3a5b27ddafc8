import math

import numpy as np
import pytest

from curlkit.data_managers.catalog import (darboux_chart, ellipsoid_display, ellipsoid_normalization, reference_curl,
                                           tabachnikov_display)
from curlkit.data_managers.expression_parser import parse_hamiltonian
from curlkit.modules.contact import CHART_CONTACT, ContactFormField
from curlkit.modules.curl import (cocycle_T, curl_density, curl_field, density_pullback, equivariance_residual,
                                  killing_defect)
from curlkit.modules.flows import ContactFlow
from curlkit.modules.geometry import (Chart, ChartMap, ConnectionField, CovectorField, MetricField, connection_perturb,
                                      pullback_symbols_tensor)
from curlkit.utilities.errors import NonContactPointError

import oracles

POINTS = [(0.1, -0.2, 0.3), (-0.4, 0.5, 0.05), (0.7, 0.2, -0.6), (0.0, 0.0, 0.0)]


def _coefficient(geometry, point):
    return curl_density(geometry.metric, None, geometry.theta, point).coefficient


@pytest.mark.parametrize("point", POINTS)
def test_flat_curl_vanishes(flat, point):
    assert _coefficient(flat, point) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("point", POINTS)
def test_round_sphere_curl_vanishes(round_sphere, point):
    assert _coefficient(round_sphere, point) == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("point", POINTS)
def test_tabachnikov_closed_form(tabachnikov, point):
    display = tabachnikov_display(point, 2.0, 3.0, 0.5)
    assert _coefficient(tabachnikov, point) == pytest.approx(-display, rel=1e-8, abs=1e-10)


@pytest.mark.parametrize("point", POINTS)
def test_ellipsoid_closed_form(ellipsoid, point):
    expected = ellipsoid_normalization(point, 1.5, 0.8, 1.2) * ellipsoid_display(point, 1.5, 0.8, 1.2)
    assert _coefficient(ellipsoid, point) == pytest.approx(expected, rel=1e-8, abs=1e-10)
    assert reference_curl(ellipsoid, point).expected == pytest.approx(expected)


@pytest.mark.parametrize("point", POINTS[:3])
def test_conformal_rescaling_of_the_round_sphere(round_sphere, tabachnikov, point):
    # e^{2f} times a metric with vanishing curl has curl e^{-2f} (n - 2/(n+1)) theta(grad f), n = 3
    a, b, c = 2.0, 3.0, 0.5

    def log_factor(coords):
        x, y, z = coords
        return 0.5 * math.log((x * x + y * y + z * z + 1) / (x * x / a + y * y / b + z * z / c + 1))

    gradient = np.linalg.solve(round_sphere.metric.values(point), oracles.gradient(log_factor, point))
    expected = math.exp(-2 * log_factor(point)) * 2.5 * float(round_sphere.theta.values(point) @ gradient)
    assert _coefficient(tabachnikov, point) == pytest.approx(expected, rel=1e-7, abs=1e-9)
    # the displayed closed form carries the opposite sign
    assert expected == pytest.approx(-tabachnikov_display(point, a, b, c), rel=1e-7, abs=1e-9)


@pytest.mark.parametrize("point", POINTS[:3])
def test_curl_matches_difference_oracle(tabachnikov, ellipsoid, point):
    for geometry in (tabachnikov, ellipsoid):
        expected = oracles.curl(geometry.metric.values, geometry.theta.values, point)
        assert _coefficient(geometry, point) == pytest.approx(expected, rel=1e-6, abs=1e-7)


def test_curl_result_carries_density_data(tabachnikov):
    result = curl_density(tabachnikov.metric, None, tabachnikov.theta, (0.1, 0.2, 0.3))
    assert result.density.weight == -0.5
    assert result.density.reference == CHART_CONTACT
    assert result.orientation == 1
    assert result.nabla_theta.shape == (3, 3)
    assert result.point == (0.1, 0.2, 0.3)


def test_curl_depends_on_projective_class_only(tabachnikov):
    levi_civita = ConnectionField.levi_civita(tabachnikov.metric)
    beta = CovectorField(tabachnikov.chart, lambda c: [c[0] * c[1] + 1.0, c[2] - 2.0 * c[0], c[1] * c[1]], "beta")
    shifted = connection_perturb(levi_civita, beta)
    for point in POINTS:
        own = curl_density(tabachnikov.metric, None, tabachnikov.theta, point).coefficient
        perturbed = curl_density(tabachnikov.metric, shifted, tabachnikov.theta, point).coefficient
        assert perturbed == pytest.approx(own, rel=1e-12, abs=1e-12)


def test_degenerate_form_is_rejected(flat):
    chart = flat.chart
    degenerate = ContactFormField(chart, lambda c: [0.0, 0.0, 1.0], "dz")
    with pytest.raises(NonContactPointError):
        curl_density(flat.metric, None, degenerate, (0.1, 0.2, 0.3))


def test_curl_field_frame(ellipsoid):
    frame = curl_field(ellipsoid.metric, ellipsoid.theta, POINTS)
    assert list(frame.columns) == ["index", "x", "y", "z", "coefficient", "weight", "reference", "orientation"]
    assert len(frame) == len(POINTS)
    assert frame["weight"].unique().tolist() == ["-1/2"]
    assert frame.loc[1, "coefficient"] == pytest.approx(_coefficient(ellipsoid, POINTS[1]))


def test_killing_defect(round_sphere, flat):
    metric = round_sphere.metric

    def rotation(c):
        g = metric.components(c)
        return [g[i][0] * -c[1] + g[i][1] * c[0] for i in range(3)]

    killing = CovectorField(round_sphere.chart, rotation, "rotation of the (x, y) plane")
    for point in POINTS:
        np.testing.assert_allclose(killing_defect(metric, killing, point), 0.0, atol=1e-12)

    translation = CovectorField(flat.chart, lambda c: [1.0, 0.0, 0.0], "dx1")
    np.testing.assert_allclose(killing_defect(flat.metric, translation, (0.3, 0.1, 0.2)), 0.0, atol=1e-14)
    shear = CovectorField(flat.chart, lambda c: [0.0, c[0], 0.0], "x1 dy1")
    np.testing.assert_allclose(killing_defect(flat.metric, shear, (0.3, 0.1, 0.2)),
                               [[0, 1, 0], [1, 0, 0], [0, 0, 0]], atol=1e-14)


def test_cocycle_of_affine_map_on_flat_connection():
    chart = Chart(("x", "y", "z"))
    matrix = np.array([[2.0, 1.0, 0.0], [0.0, 1.0, 3.0], [1.0, 0.0, 1.0]])
    affine = ChartMap.linear(matrix, chart, offset=[0.5, -1.0, 2.0])
    flat = ConnectionField.flat(chart)
    np.testing.assert_allclose(cocycle_T(affine, flat, (0.2, 0.3, -0.1)), 0.0, atol=1e-12)
    assert np.all(cocycle_T(ChartMap.identity(chart), flat, (0.2, 0.3, -0.1)) == 0.0)


def test_cocycle_of_projective_map_on_round_sphere(round_sphere):
    # a rotation of the (x, w) plane acts on the affine chart by a fractional linear map
    cosine, sine = math.cos(0.3), math.sin(0.3)

    def components(c):
        denominator = c[0] * sine + cosine
        return [(c[0] * cosine - sine) / denominator, c[1] / denominator, c[2] / denominator]

    rotation = ChartMap(round_sphere.chart, round_sphere.chart, components, "rotation")
    levi_civita = ConnectionField.levi_civita(round_sphere.metric)
    np.testing.assert_allclose(cocycle_T(rotation, levi_civita, (0.1, 0.2, -0.3)), 0.0, atol=1e-10)


def test_cocycle_identity_for_compositions(round_sphere):
    chart = round_sphere.chart
    levi_civita = ConnectionField.levi_civita(round_sphere.metric)
    f = ChartMap(chart, chart, lambda c: [c[0] + 0.1 * c[1] * c[1], c[1] - 0.05 * c[0] * c[2],
                                          c[2] + 0.2 * c[0] * c[0]])
    h = ChartMap(chart, chart, lambda c: [c[0] + 0.03 * c[2] * c[2], c[1] + 0.1 * c[0] * c[1], c[2] - 0.04 * c[1]])
    point = (0.2, -0.1, 0.3)
    composed = cocycle_T(f.compose(h), levi_civita, point)
    outer = pullback_symbols_tensor(h, cocycle_T(f, levi_civita, h.image(point)), point)
    np.testing.assert_allclose(composed, outer + cocycle_T(h, levi_civita, point), atol=1e-9)
    assert np.max(np.abs(cocycle_T(f, levi_civita, point))) > 1e-3


def test_equivariance_under_contact_flow(tabachnikov):
    chart = darboux_chart(tabachnikov)
    flow = ContactFlow(parse_hamiltonian("z^2 + x1*y1 + 1/2*x1^2"), 0.1, 40)
    for point in [(0.1, -0.2, 0.15), (-0.3, 0.1, 0.05)]:
        residuals = equivariance_residual(flow, chart.metric, chart.theta, point)
        assert residuals["contactomorphism"] < 1e-7
        assert residuals["cocycle"] < 1e-8


def test_cocycle_law_holds_for_non_contact_maps(tabachnikov):
    chart = darboux_chart(tabachnikov)
    shear = ChartMap(chart.theta.chart, chart.theta.chart, lambda c: [c[0], c[1], c[2] + 0.5 * c[0] * c[0]], "shear")
    residuals = equivariance_residual(shear, chart.metric, chart.theta, (0.1, -0.2, 0.15))
    assert residuals["cocycle"] < 1e-8
    assert residuals["contactomorphism"] > 1e-6


def test_metric_without_closed_form_cannot_be_pulled_back(flat):
    with pytest.raises(ValueError):
        MetricField(flat.chart).linear_pullback(np.eye(3), flat.chart)


def test_density_pullback_by_the_identity(ellipsoid):
    identity = ChartMap.identity(ellipsoid.chart)
    point = POINTS[0]
    carried = density_pullback(identity, ellipsoid.metric, ellipsoid.theta, point)
    assert carried.reference == CHART_CONTACT
    assert carried.coefficient == pytest.approx(_coefficient(ellipsoid, point), rel=1e-12)
