"""
Experiment harness: single runs with soundness accounting, B x N sweeps,
energy comparisons and the built-in scenarios.
"""

from concurrent.futures import ProcessPoolExecutor
from itertools import product
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .. import config
from ..exceptions import ConfigurationError, GraphTooLargeError
from ..models.network_models import ExperimentConfig
from ..models.protocol_models import NodeState
from ..models.report_models import (
    EnergyRow,
    LocalizabilitySet,
    RunReport,
    RunTrace,
    ScenarioReport,
    SweepCell,
)
from ..protocols.registry import get_protocol
from ..scenarios.scenario_library import get_scenario
from ..utils.logger import logger
from . import netgen
from .graph_core import NetworkGraph, relocate_nodes
from .ground_truth import rr3p_localizable_set
from .sim_engine import SimulationEngine, convergence_round, localizable_nodes


# --- Single Runs ---


def run_protocol(
    net: NetworkGraph,
    protocol: str,
    budget: Optional[int] = None,
    moves: Optional[Mapping[str, Tuple[float, float]]] = None,
) -> RunTrace:
    """Runs to quiescence; with `moves` (keyed by label) relocates and runs on."""
    engine = SimulationEngine(net, protocol, budget)
    trace = engine.run_until_quiet()
    if moves:
        engine.relocate({net.node_by_label(label): xy for label, xy in moves.items()})
        trace = engine.run_until_quiet()
    return trace


def energy_report(trace: Union[RunTrace, int], T_seconds: float = config.SECONDS_PER_ROUND) -> float:
    """0.06 * P * T joules, P being the run cycles of `trace` or a cycle count."""
    if T_seconds <= 0:
        raise ValueError(f"Seconds per round must be positive, got {T_seconds}.")
    cycles = convergence_round(trace) if isinstance(trace, RunTrace) else int(trace)
    return config.ENERGY_COEFFICIENT * cycles * T_seconds


def build_report(
    net: NetworkGraph,
    trace: RunTrace,
    oracle: Optional[LocalizabilitySet] = None,
    cfg: Optional[ExperimentConfig] = None,
    T_seconds: float = config.SECONDS_PER_ROUND,
    also_allowed: Iterable[int] = (),
) -> RunReport:
    """
    Scores `trace` against `oracle`. `also_allowed` holds nodes that were
    RR3P before a relocation; their marks stay earned after the move.
    """
    found = localizable_nodes(trace)
    violations: List[int] = []
    if oracle is not None:
        allowed = set(oracle.localizable) | set(also_allowed)
        violations = [n for n in found if n not in allowed]
        if violations:
            logger.warning(
                f"[{trace.protocol}] soundness violation: "
                f"{[net.label(n) for n in violations]} are outside the RR3P set."
            )
    return RunReport(
        protocol=trace.protocol,
        config=cfg,
        S=net.size,
        C=len(found),
        L=len(found) / net.size,
        rr3p_size=len(oracle.localizable) if oracle is not None else None,
        rounds=convergence_round(trace),
        converged=trace.converged,
        broadcasts=sum(trace.broadcasts_per_node.values()),
        energy_units=energy_report(trace, T_seconds),
        final_states=trace.final_states,
        sound=not violations if oracle is not None else None,
        violations=violations,
    )


def _fits(protocol: str, size: int) -> bool:
    cap = get_protocol(protocol).max_nodes
    if cap is not None and size > cap:
        logger.warning(f"Skipping '{protocol}': {size} nodes exceed its limit of {cap}.")
        return False
    return True


# --- Sweeps ---


def _cell_config(base: ExperimentConfig, B: float, N: float, seed: int) -> ExperimentConfig:
    return base.model_copy(update={"B": B, "N": N, "seed": seed})


def _sweep_run(job: Tuple[str, ExperimentConfig]) -> float:
    protocol, cfg = job
    net = netgen.generate(cfg)
    trace = run_protocol(net, protocol)
    return len(localizable_nodes(trace)) / net.size


def _check_sweep_grid(B_values: Sequence[float], N_values: Sequence[float], seeds: Sequence[int]) -> None:
    if not seeds:
        raise ConfigurationError("A sweep needs at least one seed.")
    if not B_values or not N_values:
        raise ConfigurationError("A sweep needs at least one B and one N value.")
    for name, values, (low, high) in (
        ("B", B_values, config.SWEEP_B_RANGE),
        ("N", N_values, config.SWEEP_N_RANGE),
    ):
        outside = [v for v in values if not low <= v <= high]
        if outside:
            raise ConfigurationError(f"{name} values {outside} are outside [{low}, {high}].")


def sweep(
    protocol: str,
    B_values: Sequence[float],
    N_values: Sequence[float],
    seeds: Iterable[int],
    base: Optional[ExperimentConfig] = None,
    workers: int = config.SWEEP_WORKERS,
) -> List[SweepCell]:
    """Mean, min and max L per (B, N) cell over `seeds`, in (B, N) order."""
    base = base or ExperimentConfig()
    seeds = list(seeds)
    _check_sweep_grid(B_values, N_values, seeds)
    if not _fits(protocol, base.S):
        return []

    jobs = [
        (protocol, _cell_config(base, B, N, seed))
        for B, N, seed in product(B_values, N_values, seeds)
    ]
    logger.info(f"Sweep '{protocol}': {len(B_values)} x {len(N_values)} cells, {len(seeds)} seeds each.")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(_sweep_run, jobs))
    else:
        values = [_sweep_run(job) for job in jobs]

    cells: List[SweepCell] = []
    per_cell = len(seeds)
    for index, (B, N) in enumerate(product(B_values, N_values)):
        L = np.array(values[index * per_cell : (index + 1) * per_cell])
        cell = SweepCell(
            protocol=protocol,
            B=B,
            N=N,
            runs=per_cell,
            mean_L=float(L.mean()),
            min_L=float(L.min()),
            max_L=float(L.max()),
        )
        logger.info(f"Sweep cell B={B}, N={N}: mean L={cell.mean_L:.3f}")
        cells.append(cell)
    return cells


STAT_SUFFIX = {"mean_L": "", "min_L": " min", "max_L": " max"}


def sweep_table(
    cells: Sequence[SweepCell], stats: Sequence[str] = ("mean_L",)
) -> Tuple[List[str], List[List[object]]]:
    """
    Header and rows with one row per B. Each N gets one column per entry of
    `stats`; the mean column is headed by N alone, the others by "N min" or "N max".
    """
    B_values = sorted({c.B for c in cells})
    N_values = sorted({c.N for c in cells})
    lookup: Dict[Tuple[float, float], SweepCell] = {(c.B, c.N): c for c in cells}
    header = ["B\\N"] + [f"{N:g}{STAT_SUFFIX[stat]}" for N in N_values for stat in stats]
    rows = [
        [f"{B:g}"]
        + [
            round(getattr(lookup[(B, N)], stat), 3) if (B, N) in lookup else ""
            for N in N_values
            for stat in stats
        ]
        for B in B_values
    ]
    return header, rows


# --- Energy ---


def cycles_to_fraction(
    trace: RunTrace, S: int, fraction: float, timeout: int = config.CYCLE_TIMEOUT
) -> int:
    """First round whose localizable share reaches `fraction`, else `timeout`."""
    target = fraction * S
    for round_no, count in enumerate(trace.localizable_by_round):
        if count >= target:
            return round_no
    return timeout


def energy_comparison(
    cfg: ExperimentConfig,
    fraction: float = 0.25,
    protocols: Sequence[str] = ("te", "tp", "we"),
    seeds: Iterable[int] = range(5),
    T_seconds: float = config.SECONDS_PER_ROUND,
) -> List[EnergyRow]:
    seeds = list(seeds)
    networks = [netgen.generate(cfg.model_copy(update={"seed": seed})) for seed in seeds]
    rows = []
    for protocol in protocols:
        if not _fits(protocol, cfg.S):
            continue
        cycles = [
            cycles_to_fraction(run_protocol(net, protocol), net.size, fraction) for net in networks
        ]
        mean_cycles = float(np.mean(cycles))
        rows.append(
            EnergyRow(
                protocol=protocol,
                fraction=fraction,
                runs=len(seeds),
                mean_cycles=mean_cycles,
                mean_joules=config.ENERGY_COEFFICIENT * mean_cycles * T_seconds,
            )
        )
        logger.info(f"Energy '{protocol}': {mean_cycles:.1f} cycles to reach {fraction:.0%}.")
    return rows


# --- Scenarios ---


def run_on_network(
    net: NetworkGraph,
    protocols: Sequence[str],
    with_oracle: bool = True,
    moves: Optional[Mapping[str, Tuple[float, float]]] = None,
) -> Tuple[Optional[LocalizabilitySet], Dict[str, RunReport], List[str]]:
    """
    Runs each protocol on `net`. With `moves` the oracle is taken on the
    moved network.
    """
    final = net
    if moves:
        final = relocate_nodes(net, {net.node_by_label(label): xy for label, xy in moves.items()})
    oracle = None
    before: List[int] = []
    if with_oracle:
        try:
            oracle = rr3p_localizable_set(final)
            if moves:
                before = rr3p_localizable_set(net).localizable
        except GraphTooLargeError as e:
            logger.warning(f"Oracle skipped: {e}")

    reports: Dict[str, RunReport] = {}
    skipped: List[str] = []
    for protocol in protocols:
        if not _fits(protocol, net.size):
            skipped.append(protocol)
            continue
        trace = run_protocol(net, protocol, moves=moves)
        reports[protocol] = build_report(final, trace, oracle, also_allowed=before)
    return oracle, reports, skipped


def run_scenario(name: str, seed: Optional[int] = None, with_oracle: bool = True) -> ScenarioReport:
    scenario = get_scenario(name)
    net = scenario.build() if seed is None else scenario.build(seed)
    logger.info(f"Scenario '{name}': {scenario.description}")
    oracle, reports, skipped = run_on_network(net, scenario.protocols, with_oracle, scenario.moves)
    for protocol, report in reports.items():
        logger.info(f"Scenario '{name}' [{protocol}]: C={report.C}/{report.S}, rounds={report.rounds}")
    return ScenarioReport(
        name=name,
        description=scenario.description,
        labels=dict(net.labels),
        rr3p=oracle.localizable if oracle is not None else None,
        reports=reports,
        skipped=skipped,
    )


def localized_labels(net: NetworkGraph, report: RunReport) -> List[str]:
    """Labels of the non-beacon nodes a run marked localizable."""
    return sorted(
        net.label(n)
        for n, state in report.final_states.items()
        if state is NodeState.LOCALIZABLE and n not in net.beacons
    )
