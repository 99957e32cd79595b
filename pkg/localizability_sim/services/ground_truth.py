"""
Centralized RR3P oracle.

A node counts as localizable when it sits in a redundantly rigid component of
the constraint graph and, inside that component, reaches three distinct
beacons over vertex-disjoint paths. Beacons are always in the set.
"""

from typing import Iterable, List, Optional, Tuple

import networkx as nx

from .. import config
from ..exceptions import GraphTooLargeError, NetworkError
from ..models.report_models import LocalizabilitySet, NodeWitness
from ..utils.logger import logger
from .graph_core import NetworkGraph, points_collinear, to_constraint_graph
from .rigidity_oracle import redundant_edges, rigid_components

_SINK = "beacon-sink"


def redundantly_rigid_components(g: nx.Graph) -> List[List[int]]:
    """
    Maximal redundantly rigid subgraphs, as sorted vertex lists.

    These are the rigid components of the subgraph formed by every edge that
    lies on a circuit. Components may share vertices.
    """
    redundant = redundant_edges(g)
    if not redundant:
        return []
    core = nx.Graph()
    core.add_edges_from(redundant)
    components = [sorted(c) for c in rigid_components(core)]
    return sorted(components)


def three_disjoint_paths_to_beacons(
    g: nx.Graph, node: int, beacons: Iterable[int]
) -> Tuple[bool, Optional[List[List[int]]]]:
    """
    Looks for three vertex-disjoint paths from `node` to three distinct beacons
    of `g`, by unit-capacity max flow towards a super-sink over the beacons.
    """
    targets = sorted(b for b in beacons if b in g)
    if len(targets) < 3:
        raise NetworkError(f"Three disjoint beacon paths need three beacons, got {len(targets)}.")
    if node in targets:
        raise NetworkError(f"Node {node} is itself a beacon.")

    h = g.copy()
    h.add_edges_from((b, _SINK) for b in targets)
    try:
        paths = list(nx.node_disjoint_paths(h, node, _SINK, cutoff=3))
    except nx.NetworkXNoPath:
        return False, None
    if len(paths) < 3:
        return False, None
    return True, [path[:-1] for path in paths[:3]]


def rr3p_localizable_set(net: NetworkGraph) -> LocalizabilitySet:
    if net.size > config.ORACLE_MAX_NODES:
        raise GraphTooLargeError(
            f"RR3P oracle is capped at {config.ORACLE_MAX_NODES} nodes, network has {net.size}."
        )

    beacons = sorted(net.beacons)
    if len(beacons) < 3 or points_collinear([net.positions[b] for b in beacons]):
        logger.warning(f"Degenerate beacon set ({len(beacons)} beacons); RR3P set is the beacons alone.")
        return LocalizabilitySet(localizable=beacons, degenerate=True)

    g = to_constraint_graph(net)
    components = redundantly_rigid_components(g)
    beacon_set = set(beacons)
    witnesses = {}

    for node in net.nodes:
        if node in beacon_set:
            continue
        for index, comp in enumerate(components):
            members = set(comp)
            if node not in members or len(members & beacon_set) < 3:
                continue
            found, paths = three_disjoint_paths_to_beacons(g.subgraph(members), node, members & beacon_set)
            if found:
                witnesses[node] = NodeWitness(
                    node=node,
                    component=index,
                    beacons=[path[-1] for path in paths],
                    paths=paths,
                )
                break

    localizable = sorted(beacon_set | set(witnesses))
    logger.info(
        f"RR3P oracle: {len(localizable)}/{net.size} localizable "
        f"({len(components)} redundantly rigid components)."
    )
    return LocalizabilitySet(localizable=localizable, witnesses=witnesses, components=components)
