from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..data_managers.catalog import (BASE_ALIASES, CatalogGeometry, darboux_chart, get_entry, instantiate,
                                     list_geometries, reference_curl, sample_points)
from ..data_managers.datastructures import FlowSpec, VerificationReport
from ..data_managers.expression_parser import parse_hamiltonian
from ..modules.bundle import stm_curl_check
from ..modules.contact import darboux_form, flow_contact_defect
from ..modules.curl import curl_density, curl_field
from ..modules.darboux_poly import variable_names
from ..modules.flows import ContactFlow
from ..modules.laplace import collected_trace_density, curl_factor, laplace_coeffs, subsymbol_numeric
from ..modules.suites import THEOREMS, VerificationSuites
from ..utilities.auxiliary_functions import replace_undefined_value
from ..utilities.configuration import Configuration
from ..utilities.performance_handling import Performance


class CurlKit:

    def __init__(self, config: Optional[Configuration] = None):
        """
        Facade over the catalog, the curl evaluation, the Laplacian subsymbol, the sphere bundle check,
        the contact flows and the verification suites.

        Args:
            config: run configuration (seed, sample counts, floors, tolerances), defaults to
                :class:`Configuration`
        """
        self.config = replace_undefined_value(config, Configuration())
        self.suites = VerificationSuites(self.config)

    def _rng(self, seed: Optional[int]) -> np.random.Generator:
        return np.random.default_rng(replace_undefined_value(seed, self.config.seed))

    # region catalog
    @staticmethod
    def catalog_list() -> List[Dict[str, Any]]:
        return list_geometries()

    @staticmethod
    def catalog_show(geometry_id: str) -> Dict[str, Any]:
        entry = get_entry(geometry_id)
        description = entry.to_dict()
        description["instance"] = instantiate(geometry_id).to_dict()
        return description

    # endregion

    # region curl
    def points_for(self, geometry: CatalogGeometry, points: Optional[Sequence[Sequence[float]]] = None,
                   random: Optional[int] = None, seed: Optional[int] = None) -> List[Sequence[float]]:
        """Explicit points win; otherwise ``random`` (default: configured sample count) seeded points."""
        if points is not None:
            return [tuple(float(c) for c in point) for point in points]
        count = replace_undefined_value(random, self.config.samples_for("eval"))
        return sample_points(geometry, self._rng(seed), count)

    @Performance.track("geometry_id")
    def evaluate(self, geometry_id: str, params: Optional[Dict[str, float]] = None,
                 points: Optional[Sequence[Sequence[float]]] = None, random: Optional[int] = None,
                 seed: Optional[int] = None) -> pd.DataFrame:
        """
        Curl coefficients of a catalog geometry, one row per point, with the closed form where the
        catalog has one.
        """
        geometry = instantiate(geometry_id, params)
        sample = self.points_for(geometry, points, random, seed)
        frame = curl_field(geometry.metric, geometry.theta, sample, self.config.det_floor, self.config.contact_floor)
        references = [reference_curl(geometry, point) for point in sample]
        frame["expected"] = [reference.expected if reference is not None else np.nan for reference in references]
        frame.insert(0, "geometry", geometry.id)
        return frame

    @Performance.track("geometry_id")
    def subsymbol(self, geometry_id: str, weight: Fraction, params: Optional[Dict[str, float]] = None,
                  points: Optional[Sequence[Sequence[float]]] = None, random: Optional[int] = None,
                  seed: Optional[int] = None) -> pd.DataFrame:
        """
        Subsymbol of the weight-``weight`` Laplacian against the predicted multiple of the curl, in the
        Darboux chart of the geometry.
        """
        geometry = instantiate(geometry_id, params)
        chart = darboux_chart(geometry)
        scale = np.diag([1.0, 1.0, 1.0 / chart.factor])
        rows = []
        for index, point in enumerate(self.points_for(geometry, points, random, seed)):
            local = tuple(float(v) for v in scale @ np.asarray(point, dtype=float))
            coeffs = laplace_coeffs(chart.metric, weight, local, self.config.det_floor)
            subsymbol = subsymbol_numeric(coeffs, chart.theta, local).coefficient
            collected = collected_trace_density(chart.metric, chart.theta, weight, local,
                                                self.config.det_floor).coefficient
            curl = curl_density(chart.metric, None, chart.theta, local, self.config.det_floor,
                                self.config.contact_floor).coefficient
            predicted = curl_factor(chart.theta.ell, weight) * curl
            rows.append({"index": index, "x1": local[0], "y1": local[1], "z": local[2],
                         "weight": str(weight), "subsymbol": subsymbol, "trace_density": collected,
                         "curl": curl, "predicted": predicted, "residual": abs(subsymbol - predicted)})
        columns = ["index", "x1", "y1", "z", "weight", "subsymbol", "trace_density", "curl", "predicted", "residual"]
        frame = pd.DataFrame(rows, columns=columns)
        frame.insert(0, "geometry", geometry.id)
        return frame

    # endregion

    # region checks
    def verify(self, suite: str, seed: Optional[int] = None) -> VerificationReport:
        return self.suites.run(suite, seed)

    @Performance.track("base")
    def bundle_check(self, base: str, samples: Optional[int] = None, seed: Optional[int] = None) -> VerificationReport:
        """Largest |A| of the unit sphere bundle over ``base`` (flat, sphere, ellipse or an stm-* id)."""
        geometry_id = BASE_ALIASES.get(base, base)
        geometry = instantiate(geometry_id)
        if not geometry.is_bundle:
            raise ValueError(f"Base {base} is not defined, choose from {sorted(BASE_ALIASES)}")
        seed = replace_undefined_value(seed, self.config.seed)
        count = replace_undefined_value(samples, self.config.samples_for("stm"))
        points = sample_points(geometry, self._rng(seed), count)
        residual = stm_curl_check(geometry.base, points, self.config.det_floor, self.config.contact_floor)
        return VerificationReport.build("bundle-check", THEOREMS["stm"], seed, len(points), residual,
                                        self.config.tolerances.stm, [{"geometry": geometry.id}],
                                        self.suites.version)

    @Performance.track()
    def flow(self, spec: FlowSpec, point: Sequence[float]) -> Dict[str, Any]:
        """Image of ``point`` under the time-t contact flow with the first two derivatives of the flow map."""
        flow = ContactFlow(parse_hamiltonian(spec.hamiltonian, spec.ell), spec.time, spec.steps)
        image = flow.evaluate(point, order=2)
        return {"hamiltonian": spec.hamiltonian,
                "time": spec.time,
                "steps": spec.steps,
                "variables": variable_names(spec.ell),
                "point": [float(c) for c in point],
                "image": image.value.tolist(),
                "jacobian": image.first.tolist(),
                "hessian": image.second.tolist(),
                "contact_defect": flow_contact_defect(flow, darboux_form(spec.ell), point)}

    # endregion
