import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import pandas as pd
from tabulate import tabulate

from ..utilities.auxiliary_functions import create_list, format_float, replace_undefined_value


def _clean(value):
    """Round floats recursively so that serialized reports do not depend on the last bits."""
    if isinstance(value, float):
        # JSON has no literal for inf or nan
        return format_float(value) if math.isfinite(value) else str(value)
    if isinstance(value, dict):
        return {str(key): _clean(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(item) for item in value]
    return value


@dataclass
class VerificationReport:
    suite: str
    theorem: str
    seed: int
    n_samples: int
    max_residual: float
    tolerance: float
    passed: bool
    details: List[Dict[str, Any]] = field(default_factory=list)
    version: str = ""

    @staticmethod
    def build(suite: str, theorem: str, seed: int, n_samples: int, max_residual: float, tolerance: float,
              details: Optional[List[Dict[str, Any]]] = None, version: str = "") -> 'VerificationReport':
        """The pass flag is derived, never given: a report passes iff its residual is within tolerance."""
        passed = bool(max_residual <= tolerance)
        return VerificationReport(suite, theorem, seed, n_samples, float(max_residual), float(tolerance), passed,
                                  replace_undefined_value(details, []), version)

    @staticmethod
    def from_dict(obj: Any) -> Optional['VerificationReport']:
        if obj is None:
            return None
        _suite = obj.get("suite")
        _theorem = obj.get("theorem")
        _seed = int(obj.get("seed"))
        _n_samples = int(replace_undefined_value(obj.get("n_samples"), 0))
        _max_residual = float(obj.get("max_residual"))
        _tolerance = float(obj.get("tolerance"))
        _details = replace_undefined_value(obj.get("details"), [])
        _version = replace_undefined_value(obj.get("version"), "")
        return VerificationReport(_suite, _theorem, _seed, _n_samples, _max_residual, _tolerance,
                                  _max_residual <= _tolerance, _details, _version)

    def to_dict(self) -> Dict[str, Any]:
        return _clean({"suite": self.suite,
                       "theorem": self.theorem,
                       "seed": self.seed,
                       "n_samples": self.n_samples,
                       "max_residual": self.max_residual,
                       "tolerance": self.tolerance,
                       "pass": self.passed,
                       "details": self.details,
                       "version": self.version})

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @staticmethod
    def list_from_dict(obj: Any) -> List['VerificationReport']:
        return create_list(VerificationReport, obj)


def reports_to_frame(reports: List[VerificationReport]) -> pd.DataFrame:
    rows = [{"suite": report.suite,
             "theorem": report.theorem,
             "n_samples": report.n_samples,
             "max_residual": report.max_residual,
             "tolerance": report.tolerance,
             "pass": report.passed} for report in reports]
    return pd.DataFrame(rows, columns=["suite", "theorem", "n_samples", "max_residual", "tolerance", "pass"])


def reports_to_table(reports: List[VerificationReport]) -> str:
    return tabulate(reports_to_frame(reports), headers="keys", tablefmt="github", showindex=False,
                    floatfmt=".3e")


@dataclass
class FlowSpec:
    hamiltonian: str
    time: float
    steps: int
    ell: int = 1

    def __post_init__(self):
        if self.steps <= 0:
            raise ValueError(f"Number of steps {self.steps} is not positive")

    @property
    def step_size(self) -> float:
        return self.time / self.steps

    @staticmethod
    def from_dict(obj: Any) -> Optional['FlowSpec']:
        if obj is None:
            return None
        _hamiltonian = obj.get("hamiltonian")
        _time = float(obj.get("time"))
        _steps = int(obj.get("steps"))
        _ell = int(replace_undefined_value(obj.get("ell"), 1))
        return FlowSpec(_hamiltonian, _time, _steps, _ell)
