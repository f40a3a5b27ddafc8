__version__ = "0.1.0"

from .facades.curl_kit import CurlKit
from .data_managers.catalog import instantiate, list_geometries
from .data_managers.datastructures import FlowSpec, VerificationReport
from .data_managers.expression_parser import parse_hamiltonian
from .modules.curl import curl_density
from .modules.suites import run_suite
from .utilities.configuration import Configuration, Tolerances
from .utilities.performance_handling import Performance

__all__ = ["CurlKit",
           "instantiate",
           "list_geometries",
           "FlowSpec",
           "VerificationReport",
           "parse_hamiltonian",
           "curl_density",
           "run_suite",
           "Configuration",
           "Tolerances",
           "Performance"]
