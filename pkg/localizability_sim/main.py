"""
Main entry point for the localizability simulator.

    python -m localizability_sim.main <command> [options]

Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 soundness or
property violation.
"""

import argparse
import sys
import time
from typing import Callable, List, Optional

from pydantic import ValidationError

from . import config
from .exceptions import LocalizabilityError, RenderError
from .models.network_models import BeaconMode, ExperimentConfig, Placement
from .models.report_models import RunTrace
from .protocols.registry import protocol_names
from .scenarios.scenario_library import build_scenario, scenario_names
from .services import experiment_service, netgen, property_checks
from .services.graph_core import network_from_document
from .services.ground_truth import rr3p_localizable_set
from .utils import output_utils
from .utils.logger import logger
from .utils.render_utils import render_state_map

EXIT_OK, EXIT_IO, EXIT_INPUT, EXIT_UNSOUND = 0, 1, 2, 3


# --- Command Handlers ---


def _load_network(path: str):
    return network_from_document(output_utils.load_network_document(path))


def cmd_generate(args: argparse.Namespace) -> int:
    # hole layouts skip the cell grid
    cfg = ExperimentConfig(
        S=args.S,
        N=args.N,
        B=args.B,
        seed=args.seed,
        placement=Placement.UNIFORM if args.hole else Placement(args.placement),
        beacon_mode=BeaconMode(args.beacon_mode),
    )
    if args.hole:
        hole = (
            netgen.central_disc(cfg, diameter=2.5 * cfg.radius)
            if args.hole == "disc"
            else netgen.central_rect(cfg, width=2.5 * cfg.radius, height=2.0 * cfg.radius)
        )
        cfg = cfg.model_copy(update={"hole": hole})
    net = netgen.generate(cfg)
    return EXIT_OK if output_utils.save_network(net, args.out) else EXIT_IO


def cmd_run(args: argparse.Namespace) -> int:
    net = _load_network(args.net)
    trace = experiment_service.run_protocol(net, args.protocol, budget=args.budget)
    oracle = rr3p_localizable_set(net) if args.check else None
    report = experiment_service.build_report(net, trace, oracle)
    logger.info(f"'{args.protocol}': C={report.C}/{report.S} (L={report.L:.3f}), rounds={report.rounds}")
    saved = output_utils.save_json_to_results(trace, config.TRACE_FILENAME)
    saved = output_utils.save_json_to_results(report, config.REPORT_FILENAME) and saved
    if report.sound is False:
        return EXIT_UNSOUND
    return EXIT_OK if saved else EXIT_IO


def cmd_sweep(args: argparse.Namespace) -> int:
    cells = experiment_service.sweep(args.protocol, args.b, args.n, range(args.seeds))
    header, rows = experiment_service.sweep_table(cells, stats=("mean_L", "min_L", "max_L"))
    return EXIT_OK if output_utils.save_csv_to_results(rows, header, args.out) else EXIT_IO


def cmd_scenario(args: argparse.Namespace) -> int:
    report = experiment_service.run_scenario(args.name, seed=args.seed)
    saved = output_utils.save_json_to_results(report, f"scenario_{args.name}.json")
    if args.render:
        net = build_scenario(args.name, args.seed)
        for protocol, run_report in report.reports.items():
            path = output_utils.results_path(f"scenario_{args.name}_{protocol}.svg")
            render_state_map(net, run_report.final_states, path, title=f"{args.name} / {protocol}")
    if any(r.sound is False for r in report.reports.values()):
        return EXIT_UNSOUND
    return EXIT_OK if saved else EXIT_IO


def cmd_oracle(args: argparse.Namespace) -> int:
    result = rr3p_localizable_set(_load_network(args.net))
    return EXIT_OK if output_utils.save_json_to_results(result, "rr3p_set.json") else EXIT_IO


def cmd_render(args: argparse.Namespace) -> int:
    net = _load_network(args.net)
    with open(args.trace, "r", encoding="utf-8") as f:
        trace = RunTrace.model_validate_json(f.read())
    config.RESULTS_DIR.mkdir(parents=True, exist_ok=True)
    render_state_map(net, trace.final_states, output_utils.results_path(args.out), title=trace.protocol)
    return EXIT_OK


def cmd_energy(args: argparse.Namespace) -> int:
    cfg = ExperimentConfig(N=args.N, B=args.B)
    rows = experiment_service.energy_comparison(cfg, fraction=args.fraction, seeds=range(args.seeds))
    data = {"fraction": args.fraction, "rows": [row.model_dump() for row in rows]}
    return EXIT_OK if output_utils.save_json_to_results(data, "energy.json") else EXIT_IO


def cmd_properties(args: argparse.Namespace) -> int:
    results = property_checks.run_all(scale=args.scale)
    saved = output_utils.save_json_to_results(
        {"results": [r.model_dump() for r in results]}, "properties.json"
    )
    if not all(r.passed for r in results):
        return EXIT_UNSOUND
    return EXIT_OK if saved else EXIT_IO


# --- Argument Parsing ---


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="localizability_sim", description="Localizability detection simulator."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="Generate a network document.")
    gen.add_argument("--S", type=int, default=None)
    gen.add_argument("--N", type=float, default=config.DEFAULT_DENSITY_N)
    gen.add_argument("--B", type=float, default=config.DEFAULT_BEACON_DENSITY)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--placement", choices=[p.value for p in Placement], default=Placement.CELLS.value)
    gen.add_argument(
        "--beacon-mode", choices=[BeaconMode.RANDOM.value, BeaconMode.SKEWED.value], default="random"
    )
    gen.add_argument("--hole", choices=["disc", "rect"], default=None)
    gen.add_argument("--out", default=config.NETWORK_FILENAME)
    gen.set_defaults(handler=cmd_generate)

    run = sub.add_parser("run", help="Run one protocol on a network document.")
    run.add_argument("--protocol", choices=protocol_names(), required=True)
    run.add_argument("--net", required=True)
    run.add_argument("--budget", type=int, default=None)
    run.add_argument("--check", action="store_true", help="Compare against the RR3P oracle.")
    run.set_defaults(handler=cmd_run)

    sw = sub.add_parser("sweep", help="Mean, min and max L over a B x N grid.")
    sw.add_argument("--protocol", choices=protocol_names(), required=True)
    sw.add_argument("--b", type=float, nargs="+", required=True)
    sw.add_argument("--n", type=float, nargs="+", required=True)
    sw.add_argument("--seeds", type=int, default=config.DEFAULT_SEEDS)
    sw.add_argument("--out", default=config.SWEEP_FILENAME)
    sw.set_defaults(handler=cmd_sweep)

    sc = sub.add_parser("scenario", help="Run a built-in scenario with every protocol.")
    sc.add_argument("name", choices=scenario_names())
    sc.add_argument("--seed", type=int, default=None)
    sc.add_argument("--render", action="store_true")
    sc.set_defaults(handler=cmd_scenario)

    orc = sub.add_parser("oracle", help="RR3P localizable set of a network document.")
    orc.add_argument("--net", required=True)
    orc.set_defaults(handler=cmd_oracle)

    ren = sub.add_parser("render", help="SVG state map from a trace.")
    ren.add_argument("--trace", required=True)
    ren.add_argument("--net", required=True)
    ren.add_argument("--out", default=config.STATE_MAP_FILENAME)
    ren.set_defaults(handler=cmd_render)

    en = sub.add_parser("energy", help="Cycles and joules to reach a detection fraction.")
    en.add_argument("--N", type=float, default=2.4)
    en.add_argument("--B", type=float, default=0.05)
    en.add_argument("--seeds", type=int, default=5)
    en.add_argument("--fraction", type=float, default=0.25)
    en.set_defaults(handler=cmd_energy)

    prop = sub.add_parser("properties", help="Run every property suite.")
    prop.add_argument("--scale", type=float, default=1.0)
    prop.set_defaults(handler=cmd_properties)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handler: Callable[[argparse.Namespace], int] = args.handler

    logger.info("=========================================================")
    logger.info(f"    LOCALIZABILITY SIMULATOR - {args.command.upper()} STARTED")
    logger.info("=========================================================")
    start_time = time.time()
    code = EXIT_OK
    try:
        code = handler(args)
    except RenderError as e:
        logger.critical(f"Rendering failed: {e}")
        code = EXIT_IO
    except (LocalizabilityError, ValidationError) as e:
        logger.critical(f"Invalid input: {e}")
        code = EXIT_INPUT
    except OSError as e:
        logger.critical(f"I/O failure: {e}", exc_info=True)
        code = EXIT_IO
    finally:
        duration = time.time() - start_time
        logger.info("=========================================================")
        logger.info(f"    {args.command.upper()} FINISHED in {duration:.2f} seconds (exit {code})")
        logger.info("=========================================================")
    return code


if __name__ == "__main__":
    sys.exit(main())
