"""
Console entry point ``curlkit``.

Exit codes: 0 when every requested check passes, 1 when a check fails, 2 on usage or input errors.
"""
import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

import pandas as pd
from tabulate import tabulate

from .data_managers.catalog import BASE_ALIASES, CATALOG
from .data_managers.datastructures import FlowSpec, VerificationReport, reports_to_table
from .facades.curl_kit import CurlKit
from .modules.suites import SUITE_NAMES
from .utilities.auxiliary_functions import parse_params, parse_point, parse_rational
from .utilities.configuration import Configuration
from .utilities.errors import CurlkitError
from .utilities.performance_handling import Performance

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _add_sampling(parser: argparse.ArgumentParser):
    parser.add_argument("--geometry", required=True, choices=sorted(CATALOG), help="catalog geometry id")
    parser.add_argument("--params", default=None, help="geometry parameters, e.g. a=2,b=3,c=0.5")
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--points", type=Path, default=None, help="JSON file with an array of coordinate arrays")
    source.add_argument("--random", type=int, default=None, help="number of seeded random points")
    parser.add_argument("--seed", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="curlkit", description="Contact Riemannian curl of closed-form geometries.")
    parser.add_argument("--config", type=Path, default=None, help="YAML or JSON configuration file")
    parser.add_argument("--format", choices=["json", "table"], default="json", dest="output_format")
    parser.add_argument("--perf", default=None, help="path of the timing CSV")
    parser.add_argument("--verbose", action="store_true", default=None, help="progress bar and timings on stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    catalog = commands.add_parser("catalog", help="list or describe the catalog geometries")
    catalog_commands = catalog.add_subparsers(dest="catalog_command", required=True)
    catalog_commands.add_parser("list")
    show = catalog_commands.add_parser("show")
    show.add_argument("geometry_id")

    evaluate = commands.add_parser("eval", help="curl coefficients at points")
    _add_sampling(evaluate)
    evaluate.add_argument("--out", choices=["json", "csv"], default="json")

    subsymbol = commands.add_parser("subsymbol", help="subsymbol of the weighted Laplacian against the curl")
    _add_sampling(subsymbol)
    subsymbol.add_argument("--lambda", dest="weight", type=parse_rational, required=True, help="density weight p/q")

    verify = commands.add_parser("verify", help="run a verification suite")
    verify.add_argument("--suite", required=True, choices=SUITE_NAMES)
    verify.add_argument("--seed", type=int, default=None)
    verify.add_argument("--samples", type=int, default=None)
    verify.add_argument("--tol", default=None, help="tolerance overrides, e.g. curved=1e-8,exact=1e-11")

    bundle = commands.add_parser("bundle-check", help="curl of the unit sphere bundle of a 2D base")
    bundle.add_argument("--base", required=True, choices=sorted(BASE_ALIASES))
    bundle.add_argument("--samples", type=int, default=None)
    bundle.add_argument("--seed", type=int, default=None)

    flow = commands.add_parser("flow", help="time-t flow of a contact Hamiltonian with its jets")
    flow.add_argument("--hamiltonian", required=True)
    flow.add_argument("--time", type=float, required=True)
    flow.add_argument("--steps", type=int, required=True)
    flow.add_argument("--point", type=parse_point, required=True, help="x1,..,y1,..,z")
    flow.add_argument("--ell", type=int, default=1)
    return parser


def load_configuration(args: argparse.Namespace) -> Configuration:
    config = Configuration() if args.config is None else Configuration.init_conf_with_config_file(args.config)
    tolerances = parse_params(getattr(args, "tol", None)) or None
    return config.with_overrides(seed=getattr(args, "seed", None),
                                 samples=getattr(args, "samples", None),
                                 perf_path=args.perf,
                                 verbose=args.verbose,
                                 tolerances=tolerances)


def _read_points(path: Optional[Path]) -> Optional[List[List[float]]]:
    if path is None:
        return None
    with open(path, "rt", encoding="utf-8") as file:
        points = json.load(file)
    if not isinstance(points, list) or not all(isinstance(point, list) for point in points):
        raise ValueError(f"Points file {path} does not contain an array of coordinate arrays")
    return points


def _emit_frame(frame: pd.DataFrame, output_format: str, out: str = "json"):
    if out == "csv":
        frame.to_csv(sys.stdout, index=False)
    elif output_format == "table":
        print(tabulate(frame, headers="keys", tablefmt="github", showindex=False))
    else:
        print(json.dumps(json.loads(frame.to_json(orient="records")), indent=2))


def _emit_report(report: VerificationReport, output_format: str):
    if output_format == "table":
        print(reports_to_table([report]))
    else:
        print(report.to_json())


def _emit_json(obj):
    print(json.dumps(obj, indent=2))


def run(args: argparse.Namespace, kit: CurlKit) -> int:
    if args.command == "catalog":
        if args.catalog_command == "list":
            if args.output_format == "table":
                rows = [{"id": entry["id"], "kind": entry["kind"], "parameters": ", ".join(entry["parameters"]),
                         "description": entry["description"]} for entry in kit.catalog_list()]
                print(tabulate(rows, headers="keys", tablefmt="github"))
            else:
                _emit_json(kit.catalog_list())
        else:
            _emit_json(kit.catalog_show(args.geometry_id))
        return EXIT_PASS

    if args.command == "eval":
        frame = kit.evaluate(args.geometry, parse_params(args.params), _read_points(args.points), args.random,
                             args.seed)
        _emit_frame(frame, args.output_format, args.out)
        return EXIT_PASS

    if args.command == "subsymbol":
        frame = kit.subsymbol(args.geometry, args.weight, parse_params(args.params), _read_points(args.points),
                              args.random, args.seed)
        _emit_frame(frame, args.output_format)
        passed = frame["residual"].max() <= kit.config.tolerances.curved if not frame.empty else True
        return EXIT_PASS if passed else EXIT_FAIL

    if args.command == "verify":
        report = kit.verify(args.suite, args.seed)
        _emit_report(report, args.output_format)
        return EXIT_PASS if report.passed else EXIT_FAIL

    if args.command == "bundle-check":
        report = kit.bundle_check(args.base, args.samples, args.seed)
        _emit_report(report, args.output_format)
        return EXIT_PASS if report.passed else EXIT_FAIL

    if args.command == "flow":
        result = kit.flow(FlowSpec(args.hamiltonian, args.time, args.steps, args.ell), args.point)
        _emit_json(result)
        return EXIT_PASS

    raise ValueError(f"Command {args.command} is not defined")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_configuration(args)
    except (CurlkitError, ValueError, OSError) as error:
        print(f"curlkit: {error}", file=sys.stderr)
        return EXIT_USAGE

    performance = Performance.set_up_performance(config)
    try:
        code = run(args, CurlKit(config))
    except (CurlkitError, ValueError, OSError) as error:
        print(f"curlkit: {error}", file=sys.stderr)
        code = EXIT_USAGE
    finally:
        performance.finish_and_save()
    return code


if __name__ == "__main__":
    sys.exit(main())
