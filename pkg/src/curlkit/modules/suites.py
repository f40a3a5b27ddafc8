"""
Verification suites: each one checks a transformation law or closed form of the contact curl on
seeded random data and reports the largest residual against its tolerance.

Suites that combine several criteria report residual / tolerance per criterion and pass when the
largest ratio is at most one.
"""
import math
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .bundle import fiber_direction, horizontal_lift
from .curl import cocycle_T, curl_density, equivariance_residual, killing_defect
from .darboux_poly import (WeightedDensityPoly, bracket_field_sign, hamiltonian_field, hamiltonian_weight,
                           poisson_bracket, random_decomposition, random_poly, random_weight,
                           subsymbol_from_coefficients, subsymbol_from_decomposition)
from .contact import flow_contact_defect
from .flows import ContactFlow, observed_order
from .geometry import (Chart, ChartMap, ConnectionField, CovectorField, connection_perturb, projective_symbols,
                       pullback_symbols_tensor)
from .laplace import SUBSYMBOL_SIGN, collected_trace_density, curl_factor, laplace_coeffs, subsymbol_numeric
from ..data_managers.catalog import darboux_chart, instantiate, reference_curl, sample_points
from ..data_managers.datastructures import VerificationReport
from ..data_managers.expression_parser import parse_hamiltonian
from ..utilities.auxiliary_functions import replace_undefined_value
from ..utilities.configuration import Configuration, Tolerances
from ..utilities.errors import CurlkitError
from ..utilities.performance_handling import Performance

CONTACT_GEOMETRIES = ("darboux-flat", "s3-round", "s3-tabachnikov", "ellipsoid-3d")
BUNDLE_GEOMETRIES = ("stm-flat", "stm-sphere", "stm-ellipse")
LAPLACE_WEIGHTS = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3))
FLOW_HAMILTONIAN = "z^2 + x1*y1 + 1/2*x1^2"
ORDER_STEP_SIZES = (1e-2, 5e-3)
STM_INVARIANT_TOLERANCE = 1e-10
# the ratio to a displayed closed form is only read where the display is not close to zero
RATIO_FLOOR = 1e-3
CLOSED_FORM_TRIPLES = 5
ABSOLUTE_STEP_SIZE = 1e-3

THEOREMS = {
    "poisson": "poisson-bracket-of-contact-fields",
    "subsymbol-welldef": "subsymbol-well-defined",
    "projective": "projective-class-invariance",
    "killing": "killing-form-vanishing",
    "curl-examples": "sphere-and-ellipsoid-curls",
    "laplace-441": "laplacian-subsymbol-is-curl",
    "equivariance": "contactomorphism-equivariance",
    "cocycle": "projective-cocycle",
    "stm": "sphere-bundle-curl-vanishes",
    "all": "all",
}
SUITE_NAMES = tuple(THEOREMS)


def _version() -> str:
    from .. import __version__
    return __version__


class _Checks:
    """Accumulator of (label, residual, tolerance) criteria for multi-criterion suites."""

    def __init__(self):
        self.rows: List[Dict] = []

    def add(self, label: str, residual: float, tolerance: float, **extra):
        row = {"check": label, "residual": float(residual), "tolerance": float(tolerance)}
        row.update(extra)
        self.rows.append(row)

    def failure(self, label: str, error: Exception, tolerance: float):
        self.add(label, math.inf, tolerance, error=str(error))

    @property
    def normalized(self) -> float:
        ratios = [0.0]
        for row in self.rows:
            ratios.append(_ratio(row["residual"], row["tolerance"]))
        return max(ratios)

    def summary(self) -> List[Dict]:
        """Largest residual per check label, in first-seen order."""
        summary: Dict[str, Dict] = {}
        for row in self.rows:
            current = summary.get(row["check"])
            if current is None or _ratio(row["residual"], row["tolerance"]) > _ratio(current["residual"],
                                                                                     current["tolerance"]):
                summary[row["check"]] = row
        return list(summary.values())


def _ratio(residual: float, tolerance: float) -> float:
    if tolerance > 0:
        return residual / tolerance
    return 0.0 if residual == 0 else math.inf


def random_covector(rng: np.random.Generator, chart: Chart, spread: float = 1.0) -> CovectorField:
    """A 1-form with affine components beta_i = c_i0 + sum_j c_ij x^j."""
    n = chart.dim
    coefficients = rng.uniform(-spread, spread, size=(n, n + 1)).tolist()

    def components(coords):
        return [sum((coords[j] * row[j + 1] for j in range(n)), row[0]) for row in coefficients]

    return CovectorField(chart, components, "random affine 1-form")


def random_near_identity(rng: np.random.Generator, chart: Chart, scale: float = 0.02) -> ChartMap:
    """x + scale * q(x) with random quadratic q; a diffeomorphism near the origin."""
    n = chart.dim
    polys = [random_poly(rng, n, 2, terms=4, spread=3) for _ in range(n)]

    def components(coords):
        return [coords[a] + polys[a].evaluate(coords) * scale for a in range(n)]

    return ChartMap(chart, chart, components, "random near-identity map")


class VerificationSuites:
    def __init__(self, config: Optional[Configuration] = None):
        self.config = replace_undefined_value(config, Configuration())

    @property
    def tolerances(self) -> Tolerances:
        return self.config.tolerances

    @property
    def version(self) -> str:
        return _version()

    def _report(self, suite: str, seed: int, n_samples: int, max_residual: float, tolerance: float,
                details: Optional[List[Dict]] = None) -> VerificationReport:
        return VerificationReport.build(suite, THEOREMS[suite], seed, n_samples, max_residual, tolerance, details,
                                        self.version)

    def _normalized_report(self, suite: str, seed: int, n_samples: int, checks: _Checks) -> VerificationReport:
        return self._report(suite, seed, n_samples, checks.normalized, 1.0, checks.summary())

    def _points(self, geometry, rng, count: int, box: float = 1.0):
        return sample_points(geometry, rng, count, box)

    # region exact polynomial suites
    @Performance.track()
    def poisson(self, seed: int) -> VerificationReport:
        """
        X_{phi, psi} = s [X_phi, X_psi] with one sign s for all samples, antisymmetry of the bracket, and the
        Jacobi identity with the weight rule on densities of arbitrary weights.
        """
        rng = np.random.default_rng(seed)
        mismatches = 0
        sign = None
        details = []
        samples = 0
        for ell in (1, 2):
            n = 2 * ell + 1
            weight = hamiltonian_weight(ell)
            for index in range(self.config.samples_for("poisson")):
                first = WeightedDensityPoly(random_poly(rng, n, 3), weight)
                second = WeightedDensityPoly(random_poly(rng, n, 3), weight)
                bracket = poisson_bracket(first, second)
                bracket_field = hamiltonian_field(bracket)
                commutator = hamiltonian_field(first).commutator(hamiltonian_field(second))
                samples += 1
                if bracket.poly != -poisson_bracket(second, first).poly:
                    mismatches += 1
                    details.append({"ell": ell, "index": index, "failure": "antisymmetry"})
                if bracket_field.is_zero() and commutator.is_zero():
                    continue
                if sign is None:
                    sign = bracket_field_sign(first, second)
                    if sign is None:
                        mismatches += 1
                        details.append({"ell": ell, "index": index, "failure": "no sign relates the fields"})
                        continue
                expected = commutator if sign == 1 else -commutator
                if bracket_field != expected:
                    mismatches += 1
                    details.append({"ell": ell, "index": index, "failure": "bracket field"})
            # Jacobi and the weight rule on densities of arbitrary weights
            for index in range(self.config.samples_for("poisson")):
                triple = [WeightedDensityPoly(random_poly(rng, n, 3 if ell == 1 else 2, terms=3), random_weight(rng))
                          for _ in range(3)]
                a, b, c = triple
                samples += 1
                if poisson_bracket(a, b).weight != a.weight + b.weight + Fraction(1, ell + 1):
                    mismatches += 1
                    details.append({"ell": ell, "index": index, "failure": "weight"})
                jacobi = (poisson_bracket(a, poisson_bracket(b, c)) + poisson_bracket(b, poisson_bracket(c, a))
                          + poisson_bracket(c, poisson_bracket(a, b)))
                if not jacobi.poly.is_zero():
                    mismatches += 1
                    details.append({"ell": ell, "index": index, "failure": "jacobi"})
        details.insert(0, {"sign": sign})
        return self._report("poisson", seed, samples, mismatches, 0.0, details)

    @Performance.track()
    def subsymbol_welldef(self, seed: int) -> VerificationReport:
        """The subsymbol read off the coefficients agrees with the one read off a decomposition."""
        rng = np.random.default_rng(seed)
        mismatches = 0
        samples = 0
        details = []
        for ell in (1, 2):
            for weight in LAPLACE_WEIGHTS:
                count = max(1, self.config.samples_for("subsymbol-welldef") // len(LAPLACE_WEIGHTS))
                for index in range(count):
                    decomposition = random_decomposition(rng, ell, weight, degree=3 if ell == 1 else 2)
                    from_coefficients = subsymbol_from_coefficients(decomposition.to_operator())
                    from_decomposition = subsymbol_from_decomposition(decomposition)
                    samples += 1
                    if from_coefficients.poly != from_decomposition.poly:
                        mismatches += 1
                        details.append({"ell": ell, "weight": str(weight), "index": index,
                                        "difference": str(from_coefficients.poly - from_decomposition.poly)})
        return self._report("subsymbol-welldef", seed, samples, mismatches, 0.0, details)

    # endregion

    # region curl suites
    @Performance.track()
    def projective(self, seed: int) -> VerificationReport:
        """nabla Theta depends on the connection through its projective class only; Pi is trace-free."""
        rng = np.random.default_rng(seed)
        residual = 0.0
        samples = 0
        details = []
        for geometry_id in CONTACT_GEOMETRIES:
            geometry = instantiate(geometry_id)
            levi_civita = ConnectionField.levi_civita(geometry.metric, self.config.det_floor)
            worst = 0.0
            for point in self._points(geometry, rng, self.config.samples_for("projective")):
                perturbed = connection_perturb(levi_civita, random_covector(rng, geometry.chart))
                original = curl_density(geometry.metric, None, geometry.theta, point, self.config.det_floor,
                                        self.config.contact_floor)
                moved = curl_density(geometry.metric, perturbed, geometry.theta, point, self.config.det_floor,
                                     self.config.contact_floor)
                pi = projective_symbols(perturbed.evaluate(point).symbols, geometry.chart.dim)
                trace = np.einsum("kkj->j", pi)
                worst = max(worst, float(np.max(np.abs(moved.nabla_theta - original.nabla_theta))),
                            float(np.max(np.abs(trace))))
                samples += 1
            details.append({"geometry": geometry_id, "max_residual": worst})
            residual = max(residual, worst)
        return self._report("projective", seed, samples, residual, self.tolerances.exact, details)

    @Performance.track()
    def killing(self, seed: int) -> VerificationReport:
        """The Darboux form is a Killing form of the flat metric and the curl vanishes."""
        rng = np.random.default_rng(seed)
        geometry = instantiate("darboux-flat")
        residual = 0.0
        points = self._points(geometry, rng, self.config.samples_for("killing"))
        for point in points:
            defect = float(np.max(np.abs(killing_defect(geometry.metric, geometry.theta, point))))
            curl = abs(curl_density(geometry.metric, None, geometry.theta, point).coefficient)
            residual = max(residual, defect, curl)
        return self._report("killing", seed, len(points), residual, self.tolerances.exact,
                            [{"geometry": geometry.id, "max_residual": residual}])

    def _closed_form_checks(self, checks: _Checks, geometry, points: Sequence, label: str):
        """
        Pointwise agreement with the catalog's declared normalization of the displayed closed form, then the raw
        ratio coefficient / display: constant to ratio_spread and equal to one to closed_form, or the
        suite fails with the measured constant in its details.
        """
        ratios = []
        for point in points:
            try:
                coefficient = curl_density(geometry.metric, None, geometry.theta, point, self.config.det_floor,
                                           self.config.contact_floor).coefficient
            except CurlkitError as error:
                checks.failure(f"{label} declared normalization", error, self.tolerances.closed_form)
                continue
            reference = reference_curl(geometry, point)
            deviation = abs(coefficient - reference.expected) / max(1.0, abs(reference.expected))
            checks.add(f"{label} declared normalization", deviation, self.tolerances.closed_form,
                       params=geometry.params)
            if abs(reference.display) > RATIO_FLOOR:
                ratios.append(coefficient / reference.display)
        if not ratios:
            checks.add(f"{label} ratio", math.inf, self.tolerances.closed_form, params=geometry.params,
                       error="no sample point with a usable displayed value")
            return
        constant = float(np.median(ratios))
        checks.add(f"{label} ratio spread", max(ratios) - min(ratios), self.tolerances.ratio_spread,
                   params=geometry.params, ratio_min=min(ratios), ratio_max=max(ratios))
        checks.add(f"{label} ratio constant", abs(constant - 1.0), self.tolerances.closed_form,
                   params=geometry.params, constant=constant)

    @Performance.track()
    def curl_examples(self, seed: int) -> VerificationReport:
        """
        Vanishing curl of the round S^3 and of the ellipsoid with a=b=c=1, and the displayed closed forms of the
        conformal and ellipsoid metrics, compared through the raw pointwise ratio.
        """
        rng = np.random.default_rng(seed)
        checks = _Checks()
        samples = 0
        count = self.config.samples_for("curl-examples")

        round_sphere = instantiate("s3-round")
        for point in self._points(round_sphere, rng, 2 * count):
            coefficient = curl_density(round_sphere.metric, None, round_sphere.theta, point).coefficient
            checks.add("s3-round vanishing", abs(coefficient), self.tolerances.curved)
            samples += 1

        for geometry_id in ("s3-tabachnikov", "ellipsoid-3d"):
            for index in range(CLOSED_FORM_TRIPLES):
                a, b, c = (float(v) for v in rng.uniform(0.5, 2.0, size=3))
                geometry = instantiate(geometry_id, {"a": a, "b": b, "c": c})
                points = self._points(geometry, rng, count)
                self._closed_form_checks(checks, geometry, points, geometry_id)
                samples += len(points)

        unit = instantiate("ellipsoid-3d", {"a": 1.0, "b": 1.0, "c": 1.0})
        for point in self._points(unit, rng, count):
            coefficient = curl_density(unit.metric, None, unit.theta, point).coefficient
            checks.add("ellipsoid-3d at a=b=c=1 vanishing", abs(coefficient), self.tolerances.curved)
            samples += 1
        return self._normalized_report("curl-examples", seed, samples, checks)

    @Performance.track()
    def laplace_subsymbol(self, seed: int) -> VerificationReport:
        """s(Delta^w) = SUBSYMBOL_SIGN (l+1)/(l+2) (2w - 1) A, also through the collected trace density."""
        rng = np.random.default_rng(seed)
        checks = _Checks()
        samples = 0
        for geometry_id in CONTACT_GEOMETRIES:
            geometry = instantiate(geometry_id)
            chart = darboux_chart(geometry)
            scale = np.diag([1.0, 1.0, 1.0 / chart.factor])
            for point in self._points(geometry, rng, self.config.samples_for("laplace-441")):
                local = tuple(float(v) for v in scale @ np.asarray(point))
                curl = curl_density(chart.metric, None, chart.theta, local, self.config.det_floor,
                                    self.config.contact_floor).coefficient
                for weight in LAPLACE_WEIGHTS:
                    coeffs = laplace_coeffs(chart.metric, weight, local, self.config.det_floor)
                    subsymbol = subsymbol_numeric(coeffs, chart.theta, local).coefficient
                    checks.add(f"{geometry_id} subsymbol", abs(subsymbol - curl_factor(1, weight) * curl),
                               self.tolerances.curved)
                    if weight == Fraction(1, 2):
                        checks.add(f"{geometry_id} half-density subsymbol", abs(subsymbol), self.tolerances.curved)
                    collected = collected_trace_density(chart.metric, chart.theta, weight, local,
                                                        self.config.det_floor).coefficient
                    checks.add(f"{geometry_id} trace density", abs(collected - SUBSYMBOL_SIGN * subsymbol),
                               self.tolerances.trace_density)
                samples += 1
        return self._normalized_report("laplace-441", seed, samples, checks)

    # endregion

    # region transformation laws
    def _flow(self, steps: Optional[int] = None) -> ContactFlow:
        return ContactFlow(parse_hamiltonian(FLOW_HAMILTONIAN, 1), self.config.flow_time,
                           replace_undefined_value(steps, self.config.flow_steps))

    @Performance.track()
    def equivariance(self, seed: int) -> VerificationReport:
        """
        A_{f*g} = f*A_g for contact flows f, at the configured step and at step 1e-3, with the integrator order
        measured by step refinement.
        """
        rng = np.random.default_rng(seed)
        checks = _Checks()
        geometry = instantiate("s3-tabachnikov")
        chart = darboux_chart(geometry)
        flow = self._flow()
        fine = flow.with_steps(max(1, int(round(abs(self.config.flow_time) / ABSOLUTE_STEP_SIZE))))
        count = self.config.samples_for("equivariance")
        points = [tuple(float(v) for v in rng.uniform(-0.5, 0.5, size=3)) for _ in range(count)]
        for point in points:
            try:
                residuals = equivariance_residual(flow, chart.metric, chart.theta, point, self.config.det_floor,
                                                  self.config.contact_floor)
                fine_residuals = residuals if fine.steps == flow.steps else equivariance_residual(
                    fine, chart.metric, chart.theta, point, self.config.det_floor, self.config.contact_floor)
            except CurlkitError as error:
                checks.failure("contactomorphism", error, self.tolerances.equivariance)
                continue
            checks.add("contactomorphism", residuals["contactomorphism"], self.tolerances.equivariance,
                       step_size=flow.step_size)
            checks.add("contactomorphism at step 1e-3", fine_residuals["contactomorphism"],
                       self.tolerances.equivariance, step_size=fine.step_size)
            checks.add("cocycle identity", residuals["cocycle"], self.tolerances.cocycle_identity)

        step_sizes = list(ORDER_STEP_SIZES)
        defects = []
        for h in step_sizes:
            refined = flow.with_steps(max(1, int(round(abs(self.config.flow_time) / h))))
            defects.append(flow_contact_defect(refined, chart.theta, points[0]))
        order = observed_order(defects, step_sizes)
        checks.add("observed integrator order", self.tolerances.flow_order / order if order > 0 else math.inf, 1.0,
                   order=order if math.isfinite(order) else "inf", defects=defects)
        return self._normalized_report("equivariance", seed, len(points), checks)

    @Performance.track()
    def cocycle(self, seed: int) -> VerificationReport:
        """T(f o h) = h*T(f) + T(h) for diffeomorphisms near the identity."""
        rng = np.random.default_rng(seed)
        geometry = instantiate("s3-round")
        levi_civita = ConnectionField.levi_civita(geometry.metric, self.config.det_floor)
        residual = 0.0
        points = self._points(geometry, rng, self.config.samples_for("cocycle"), box=0.5)
        for point in points:
            f = random_near_identity(rng, geometry.chart)
            h = random_near_identity(rng, geometry.chart)
            composed = cocycle_T(f.compose(h), levi_civita, point)
            inner = cocycle_T(h, levi_civita, point)
            outer = pullback_symbols_tensor(h, cocycle_T(f, levi_civita, h.image(point)), point)
            residual = max(residual, float(np.max(np.abs(composed - outer - inner))))
        return self._report("cocycle", seed, len(points), residual, self.tolerances.cocycle,
                            [{"geometry": geometry.id, "max_residual": residual}])

    # endregion

    @Performance.track()
    def stm(self, seed: int) -> VerificationReport:
        """The curl of the sphere bundle vanishes; g(y, y) = 1 and the Liouville form is one on the spray."""
        rng = np.random.default_rng(seed)
        checks = _Checks()
        samples = 0
        for geometry_id in BUNDLE_GEOMETRIES:
            geometry = instantiate(geometry_id)
            base = geometry.base
            for point in self._points(geometry, rng, self.config.samples_for("stm")):
                try:
                    coefficient = curl_density(geometry.metric, None, geometry.theta, point, self.config.det_floor,
                                               self.config.contact_floor).coefficient
                except CurlkitError as error:
                    checks.failure(f"{geometry_id} curl", error, self.tolerances.stm)
                    continue
                checks.add(f"{geometry_id} curl", abs(coefficient), self.tolerances.stm)
                y = np.array([component.value for component in fiber_direction(base, point[:2], point[2], order=1)])
                metric = base.metric.values(point[:2])
                checks.add(f"{geometry_id} unit fiber", abs(y @ metric @ y - 1.0), STM_INVARIANT_TOLERANCE)
                spray = horizontal_lift(base, point[:2], point[2])
                checks.add(f"{geometry_id} Liouville form on spray",
                           abs(float(geometry.theta.values(point) @ spray) - 1.0), STM_INVARIANT_TOLERANCE)
                samples += 1
        return self._normalized_report("stm", seed, samples, checks)

    def run(self, name: str, seed: Optional[int] = None) -> VerificationReport:
        seed = replace_undefined_value(seed, self.config.seed)
        if name not in SUITE_NAMES:
            raise ValueError(f"Suite {name} is not defined, choose from {list(SUITE_NAMES)}")
        if name == "all":
            return self.run_all(seed)
        return self._suites()[name](seed)

    def _suites(self) -> Dict[str, Callable[[int], VerificationReport]]:
        return {"poisson": self.poisson,
                "subsymbol-welldef": self.subsymbol_welldef,
                "projective": self.projective,
                "killing": self.killing,
                "curl-examples": self.curl_examples,
                "laplace-441": self.laplace_subsymbol,
                "equivariance": self.equivariance,
                "cocycle": self.cocycle,
                "stm": self.stm}

    def run_all(self, seed: int) -> VerificationReport:
        reports = [suite(seed) for suite in self._suites().values()]
        ratio = max(_ratio(report.max_residual, report.tolerance) for report in reports)
        return self._report("all", seed, sum(report.n_samples for report in reports), ratio, 1.0,
                            [report.to_dict() for report in reports])


def run_suite(name: str, seed: Optional[int] = None, tolerances: Optional[Tolerances] = None,
              config: Optional[Configuration] = None) -> VerificationReport:
    """
    Run one suite by name; failures are reported, never raised.

    Args:
        name: one of SUITE_NAMES
        seed: random seed, defaults to the configured one
        tolerances: overrides the configured tolerance table
        config: run configuration, defaults to :class:`Configuration`
    """
    config = replace_undefined_value(config, Configuration())
    if tolerances is not None:
        config = config.with_overrides(tolerances=tolerances.to_dict())
    return VerificationSuites(config).run(name, seed)
