"""
Randomized property suites for the rigidity kernel, the branch structures
and the protocols. Every check draws from numpy.random.default_rng(seed) and
returns a PropertyResult carrying the first counterexample it met.
"""

from itertools import combinations
from typing import Callable, Iterable, Optional, Sequence

import networkx as nx
import numpy as np

from ..models.network_models import ExperimentConfig, Placement
from ..models.report_models import PropertyResult
from ..utils.logger import logger
from . import netgen
from .graph_core import Branch, attach_closer, random_branch, random_triangle_block
from .ground_truth import rr3p_localizable_set
from .rigidity_oracle import (
    SubsetTable,
    bruteforce_redundantly_rigid,
    bruteforce_rigid,
    is_globally_rigid,
    is_m_circuit,
    is_minimally_rigid,
    pebble_game_rigid,
    vertex_connectivity_at_least,
)
from .sim_engine import localizable_nodes, run

REDUNDANCY_BRUTE_FORCE_MAX = 8


def _tally(name: str, cases: Iterable[object], check: Callable[[object], Optional[str]]) -> PropertyResult:
    count = failures = 0
    first: Optional[str] = None
    for case in cases:
        count += 1
        problem = check(case)
        if problem is not None:
            failures += 1
            first = first or problem
    result = PropertyResult(name=name, cases=count, failures=failures, counterexample=first)
    log = logger.info if result.passed else logger.warning
    log(f"Property '{name}': {count - failures}/{count} cases hold.")
    return result


def _branches(count: int, seed: int, min_steps: int = 1, max_steps: int = 8) -> Iterable[Branch]:
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield random_branch(rng, int(rng.integers(min_steps, max_steps + 1)))


def _random_graphs(count: int, seed: int, max_vertices: int) -> Iterable[nx.Graph]:
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(2, max_vertices + 1))
        p = float(rng.uniform(0.2, 0.8))
        yield nx.gnp_random_graph(n, p, seed=int(rng.integers(2**31)))


# --- Branch Structures ---


def check_extension_minimal_rigidity(count: int = 1000, seed: int = 0) -> PropertyResult:
    """Every prefix of a triangle-extension sequence from K2 is minimally rigid."""
    rng = np.random.default_rng(seed)

    def check(block: Branch) -> Optional[str]:
        prefix = block
        while True:
            g = prefix.to_graph()
            if g.number_of_edges() != 2 * g.number_of_nodes() - 3 or not is_minimally_rigid(g):
                return f"prefix {prefix.members} is not minimally rigid"
            if not prefix.members:
                return None
            prefix = prefix.without_last()

    blocks = (random_triangle_block(rng, int(rng.integers(2, 9))) for _ in range(count))
    return _tally("extension_minimal_rigidity", blocks, check)


def check_branch_no_tight_subset(count: int = 500, seed: int = 0) -> PropertyResult:
    """No proper vertex subset holding both roots and the leaf is tight."""

    def check(branch: Branch) -> Optional[str]:
        g = branch.to_graph()
        table = SubsetTable(g)
        index = {v: i for i, v in enumerate(table.order)}
        required = list(branch.roots) + [branch.leaf]
        holds = np.logical_and.reduce([table.membership[:, index[v]] for v in required])
        proper = table.sizes < g.number_of_nodes()
        tight = np.nonzero(holds & proper & (table.counts == table.bound))[0]
        if tight.size:
            members = [v for i, v in enumerate(table.order) if table.membership[tight[0], i]]
            return f"branch {branch.members}: subset {members} is tight"
        return None

    return _tally("branch_no_tight_subset", _branches(count, seed), check)


def check_two_vertex_cuts(count: int = 500, seed: int = 0) -> PropertyResult:
    """Removing two vertices (not the leaf, at most one root) splits a branch in at most two parts."""

    def check(branch: Branch) -> Optional[str]:
        g = branch.to_graph()
        leaf, roots = branch.leaf, set(branch.roots)
        for t1, t2 in combinations([v for v in g.nodes if v != leaf], 2):
            if t1 in roots and t2 in roots:
                continue
            rest = g.copy()
            rest.remove_nodes_from((t1, t2))
            parts = list(nx.connected_components(rest))
            if len(parts) > 2:
                return f"branch {branch.members}: removing {t1},{t2} leaves {len(parts)} parts"
            if len(parts) == 2:
                leaf_part = next(p for p in parts if leaf in p)
                if leaf_part & (roots - {t1, t2}):
                    return f"branch {branch.members}: removing {t1},{t2} keeps the leaf with a root"
        return None

    return _tally("two_vertex_cuts", _branches(count, seed), check)


def check_closer_global_rigidity(count: int = 500, seed: int = 0) -> PropertyResult:
    """A branch closed by a vertex joined to the leaf and both roots is an M-circuit and globally rigid."""

    def check(branch: Branch) -> Optional[str]:
        g = attach_closer(branch, max(branch.vertices) + 1)
        if not is_m_circuit(g):
            return f"branch {branch.members}: closed graph is not an M-circuit"
        if not vertex_connectivity_at_least(g, 3):
            return f"branch {branch.members}: closed graph is not 3-connected"
        if not is_globally_rigid(g):
            return f"branch {branch.members}: closed graph is not globally rigid"
        return None

    return _tally("closer_global_rigidity", _branches(count, seed), check)


# --- Rigidity Kernel ---


def check_oracle_equivalence(count: int = 500, seed: int = 0, max_vertices: int = 12) -> PropertyResult:
    """Pebble game against subset enumeration: every atlas graph on 2..6 vertices plus random graphs."""

    def check(g: nx.Graph) -> Optional[str]:
        rigid, redundant = pebble_game_rigid(g)
        if rigid != bruteforce_rigid(g):
            return f"rigidity differs on edges {sorted(g.edges)}"
        if g.number_of_nodes() <= REDUNDANCY_BRUTE_FORCE_MAX and redundant != bruteforce_redundantly_rigid(g):
            return f"redundancy differs on edges {sorted(g.edges)}"
        return None

    atlas = (g for g in nx.graph_atlas_g() if 2 <= g.number_of_nodes() <= 6)

    def cases():
        yield from atlas
        yield from _random_graphs(count, seed, max_vertices)

    return _tally("oracle_equivalence", cases(), check)


def check_monotonicity(count: int = 300, seed: int = 0, max_vertices: int = 10) -> PropertyResult:
    """Adding an edge never loses rigidity or global rigidity."""
    rng = np.random.default_rng(seed)

    def check(g: nx.Graph) -> Optional[str]:
        missing = [e for e in combinations(sorted(g.nodes), 2) if not g.has_edge(*e)]
        if not missing:
            return None
        u, v = missing[int(rng.integers(len(missing)))]
        bigger = g.copy()
        bigger.add_edge(u, v)
        if pebble_game_rigid(g)[0] and not pebble_game_rigid(bigger)[0]:
            return f"adding {(u, v)} to {sorted(g.edges)} lost rigidity"
        if is_globally_rigid(g) and not is_globally_rigid(bigger):
            return f"adding {(u, v)} to {sorted(g.edges)} lost global rigidity"
        return None

    return _tally("monotonicity", _random_graphs(count, seed + 1, max_vertices), check)


# --- Protocols ---


def soundness_configs(count: int, seed: int = 0) -> Iterable[ExperimentConfig]:
    """Small uniform networks cycling through B in {0.06, 0.1} and N in {2.4, 3.2}."""
    grid = [(B, N) for B in (0.06, 0.1) for N in (2.4, 3.2)]
    for i in range(count):
        B, N = grid[i % len(grid)]
        yield ExperimentConfig(S=50, N=N, B=B, placement=Placement.UNIFORM, seed=seed + i)


def check_protocol_soundness(
    count: int = 100, seed: int = 0, protocols: Sequence[str] = ("te", "ite", "tp", "we")
) -> PropertyResult:
    """Every protocol's localizable set stays inside the RR3P set; TE sends at most two STATEs per node."""

    def check(cfg: ExperimentConfig) -> Optional[str]:
        net = netgen.generate(cfg)
        allowed = set(rr3p_localizable_set(net).localizable)
        for protocol in protocols:
            trace = run(net, protocol)
            extra = sorted(set(localizable_nodes(trace)) - allowed)
            if extra:
                return f"{protocol} on seed {cfg.seed} (B={cfg.B}, N={cfg.N}) marked {extra}"
            if protocol == "te":
                chatty = [n for n, k in trace.state_messages_per_node.items() if k > 2]
                if chatty:
                    return f"te on seed {cfg.seed}: nodes {chatty} sent more than two STATE messages"
        return None

    return _tally("protocol_soundness", soundness_configs(count, seed), check)


ALL_CHECKS = {
    "extension_minimal_rigidity": check_extension_minimal_rigidity,
    "branch_no_tight_subset": check_branch_no_tight_subset,
    "two_vertex_cuts": check_two_vertex_cuts,
    "closer_global_rigidity": check_closer_global_rigidity,
    "oracle_equivalence": check_oracle_equivalence,
    "monotonicity": check_monotonicity,
    "protocol_soundness": check_protocol_soundness,
}

DEFAULT_COUNTS = {
    "extension_minimal_rigidity": 1000,
    "branch_no_tight_subset": 500,
    "two_vertex_cuts": 500,
    "closer_global_rigidity": 500,
    "oracle_equivalence": 500,
    "monotonicity": 300,
    "protocol_soundness": 100,
}


def run_all(scale: float = 1.0, seed: int = 0):
    """Every suite with its default case count multiplied by `scale`."""
    return [
        ALL_CHECKS[name](count=max(1, int(round(DEFAULT_COUNTS[name] * scale))), seed=seed)
        for name in ALL_CHECKS
    ]
