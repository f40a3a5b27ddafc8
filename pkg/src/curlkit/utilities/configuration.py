import copy
from dataclasses import dataclass, fields, asdict
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from .auxiliary_functions import replace_undefined_value
from .errors import ConfigurationError

# sample count of commands without a suite default
DEFAULT_SAMPLES = 50


@dataclass
class Tolerances:
    exact: float = 1e-12
    curved: float = 1e-9
    closed_form: float = 1e-8
    ratio_spread: float = 1e-7
    stm: float = 1e-8
    cocycle: float = 1e-8
    cocycle_identity: float = 1e-8
    equivariance: float = 1e-7
    trace_density: float = 1e-10
    flow_order: float = 3.8

    @staticmethod
    def from_dict(obj: Optional[Dict[str, Any]]) -> 'Tolerances':
        if obj is None:
            return Tolerances()
        known = {field.name for field in fields(Tolerances)}
        unknown = set(obj) - known
        if unknown:
            raise ConfigurationError(f"Tolerance(s) {sorted(unknown)} are not defined, "
                                     f"choose from {sorted(known)}")
        return Tolerances(**{name: float(value) for name, value in obj.items()})

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass
class SuiteSamples:
    """Default sample counts per verification suite; keys are suite names with '-' read as '_'."""
    poisson: int = 100
    subsymbol_welldef: int = 50
    projective: int = 50
    killing: int = 100
    curl_examples: int = 50
    laplace_441: int = 50
    equivariance: int = 10
    cocycle: int = 20
    stm: int = 50

    @staticmethod
    def from_dict(obj: Optional[Dict[str, Any]]) -> 'SuiteSamples':
        if obj is None:
            return SuiteSamples()
        known = {field.name for field in fields(SuiteSamples)}
        values = {str(name).replace("-", "_"): value for name, value in obj.items()}
        unknown = set(values) - known
        if unknown:
            raise ConfigurationError(f"Suite sample count(s) {sorted(unknown)} are not defined, "
                                     f"choose from {sorted(known)}")
        for name, value in values.items():
            if int(value) < 1:
                raise ConfigurationError(f"Suite sample count {name} must be at least 1, got {value}")
        return SuiteSamples(**{name: int(value) for name, value in values.items()})

    def for_suite(self, name: str) -> Optional[int]:
        return getattr(self, name.replace("-", "_"), None)

    def to_dict(self) -> Dict[str, int]:
        return asdict(self)


class Configuration:
    _keys = ("seed", "samples", "suite_samples", "verbose", "perf_path", "det_floor", "contact_floor", "flow_time",
             "flow_steps", "tolerances")

    def __init__(self, seed: int = 7, samples: Optional[int] = None, verbose: bool = False,
                 perf_path: Optional[str] = None, det_floor: float = 1e-10, contact_floor: float = 1e-10,
                 flow_time: float = 0.1, flow_steps: int = 100, tolerances: Optional[Tolerances] = None,
                 suite_samples: Optional[SuiteSamples] = None):
        self.seed = seed
        # None keeps the per-suite defaults, a number applies to every suite
        self.samples = samples
        self.suite_samples = replace_undefined_value(suite_samples, SuiteSamples())
        self.verbose = verbose
        self.perf_path = perf_path
        self.det_floor = det_floor
        self.contact_floor = contact_floor
        self.flow_time = flow_time
        self.flow_steps = flow_steps
        self.tolerances = replace_undefined_value(tolerances, Tolerances())

    @staticmethod
    def from_dict(config: Optional[Dict[str, Any]]) -> 'Configuration':
        config = replace_undefined_value(config, {})
        unknown = set(config) - set(Configuration._keys)
        if unknown:
            raise ConfigurationError(f"Configuration key(s) {sorted(unknown)} are not defined")
        default = Configuration()
        return Configuration(seed=int(replace_undefined_value(config.get("seed"), default.seed)),
                             samples=None if config.get("samples") is None else int(config["samples"]),
                             verbose=bool(replace_undefined_value(config.get("verbose"), default.verbose)),
                             perf_path=config.get("perf_path"),
                             det_floor=float(replace_undefined_value(config.get("det_floor"), default.det_floor)),
                             contact_floor=float(replace_undefined_value(config.get("contact_floor"),
                                                                         default.contact_floor)),
                             flow_time=float(replace_undefined_value(config.get("flow_time"), default.flow_time)),
                             flow_steps=int(replace_undefined_value(config.get("flow_steps"), default.flow_steps)),
                             tolerances=Tolerances.from_dict(config.get("tolerances")),
                             suite_samples=SuiteSamples.from_dict(config.get("suite_samples")))

    @staticmethod
    def init_conf_with_config_file(path=Path("curlkit.yaml")) -> 'Configuration':
        # JSON config files are valid YAML
        with open(path, "rt", encoding="utf-8") as file:
            config = yaml.safe_load(file)
        if config is not None and not isinstance(config, dict):
            raise ConfigurationError(f"Configuration file {path} does not contain a mapping")
        return Configuration.from_dict(config)

    def with_overrides(self, **flags) -> 'Configuration':
        """
        Return a copy in which every flag that is not None replaces the configured value.

        Args:
            **flags: configuration keys as given on the command line; ``tolerances`` may be a partial dict

        Returns:
            A new Configuration, the receiver is left untouched.
        """
        updated = copy.deepcopy(self)
        for key, value in flags.items():
            if value is None:
                continue
            if key not in Configuration._keys:
                raise ConfigurationError(f"Configuration key {key} is not defined")
            if key == "tolerances":
                merged = updated.tolerances.to_dict()
                merged.update(value)
                value = Tolerances.from_dict(merged)
            elif key == "suite_samples":
                merged = updated.suite_samples.to_dict()
                merged.update({str(name).replace("-", "_"): count for name, count in value.items()})
                value = SuiteSamples.from_dict(merged)
            setattr(updated, key, value)
        return updated

    def samples_for(self, name: str) -> int:
        """The global sample count when one is set, otherwise the default of suite or command ``name``."""
        if self.samples is not None:
            return self.samples
        return replace_undefined_value(self.suite_samples.for_suite(name), DEFAULT_SAMPLES)

    def to_dict(self) -> Dict[str, Any]:
        return {"seed": self.seed,
                "samples": self.samples,
                "suite_samples": self.suite_samples.to_dict(),
                "verbose": self.verbose,
                "perf_path": self.perf_path,
                "det_floor": self.det_floor,
                "contact_floor": self.contact_floor,
                "flow_time": self.flow_time,
                "flow_steps": self.flow_steps,
                "tolerances": self.tolerances.to_dict()}
