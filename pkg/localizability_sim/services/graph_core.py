"""
Geometric graph model shared by the rigidity kernel, the oracle and the simulator.

A NetworkGraph holds node positions, the beacon set and the unit-disk radio
graph. Its constraint graph adds every beacon pair, since beacon locations
are known and their mutual distances are constraints even without a radio link.
Branches are the extension structures grown from a K2 on two roots.
"""

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from .. import config
from ..exceptions import BranchError, NetworkError
from ..models.network_models import HoleSpec, NetworkDocument, NodeRecord, Position
from ..utils.logger import logger

NodeId = int
PointLike = Union[Position, Sequence[float]]
ConstraintGraph = nx.Graph


def _xy(point: PointLike) -> Tuple[float, float]:
    if isinstance(point, Position):
        return point.x, point.y
    return float(point[0]), float(point[1])


# --- Network Graph ---


@dataclass(frozen=True, eq=False)
class NetworkGraph:
    """Immutable network: ground-truth positions, beacons and radio adjacency."""

    positions: Dict[NodeId, Position]
    beacons: FrozenSet[NodeId]
    radius: float
    graph: nx.Graph
    extent: Optional[float] = None
    hole: Optional[HoleSpec] = None
    labels: Dict[NodeId, str] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.positions)

    @property
    def nodes(self) -> List[NodeId]:
        return sorted(self.positions)

    @property
    def radio_edges(self) -> FrozenSet[Tuple[NodeId, NodeId]]:
        return frozenset((min(u, v), max(u, v)) for u, v in self.graph.edges)

    def neighbors(self, node: NodeId) -> List[NodeId]:
        return sorted(self.graph.neighbors(node))

    def distance(self, u: NodeId, v: NodeId) -> float:
        a, b = self.positions[u], self.positions[v]
        return math.hypot(a.x - b.x, a.y - b.y)

    def label(self, node: NodeId) -> str:
        return self.labels.get(node, str(node))

    def node_by_label(self, label: str) -> NodeId:
        for node, name in self.labels.items():
            if name == label:
                return node
        raise KeyError(label)

    def to_document(self) -> NetworkDocument:
        return NetworkDocument(
            radius=self.radius,
            extent=self.extent,
            hole=self.hole,
            nodes=[
                NodeRecord(
                    id=node,
                    x=self.positions[node].x,
                    y=self.positions[node].y,
                    beacon=node in self.beacons,
                    label=self.labels.get(node),
                )
                for node in self.nodes
            ],
        )


def build_network(
    positions: Union[Mapping[NodeId, PointLike], Sequence[PointLike]],
    beacons: Iterable[NodeId],
    radius: float,
    labels: Optional[Mapping[NodeId, str]] = None,
    extent: Optional[float] = None,
    hole: Optional[HoleSpec] = None,
) -> NetworkGraph:
    """
    Builds the unit-disk network: an edge joins i != j iff their distance is
    at most `radius`.
    """
    if isinstance(positions, Mapping):
        items = sorted(positions.items())
    else:
        items = list(enumerate(positions))

    if len(items) < 2:
        raise NetworkError(f"A network needs at least 2 nodes, got {len(items)}.")
    if not radius > 0:
        raise NetworkError(f"Radio radius must be positive, got {radius}.")

    ids = [node for node, _ in items]
    if ids != list(range(len(ids))):
        raise NetworkError("Node ids must be dense and unique, 0..S-1.")

    coords = np.array([_xy(point) for _, point in items], dtype=float)
    if not np.all(np.isfinite(coords)):
        raise NetworkError("Node coordinates must be finite.")

    beacon_set = frozenset(int(b) for b in beacons)
    unknown = sorted(beacon_set - set(ids))
    if unknown:
        raise NetworkError(f"Beacon ids {unknown} are not nodes of the network.")

    diff = coords[:, None, :] - coords[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    rows, cols = np.nonzero(np.triu(dist <= radius, k=1))

    graph = nx.Graph()
    for node in ids:
        graph.add_node(node, pos=(coords[node, 0], coords[node, 1]), beacon=node in beacon_set)
    for u, v in zip(rows.tolist(), cols.tolist()):
        graph.add_edge(u, v, length=float(dist[u, v]))

    logger.debug(
        f"Built network: {len(ids)} nodes, {graph.number_of_edges()} radio edges, "
        f"{len(beacon_set)} beacons, radius {radius} m."
    )
    return NetworkGraph(
        positions={node: Position(x=coords[node, 0], y=coords[node, 1]) for node in ids},
        beacons=beacon_set,
        radius=float(radius),
        graph=graph,
        extent=extent,
        hole=hole,
        labels=dict(labels or {}),
    )


def network_from_document(doc: NetworkDocument) -> NetworkGraph:
    seen = set()
    for record in doc.nodes:
        if record.id in seen:
            raise NetworkError(f"Duplicate node id {record.id} in network document.")
        seen.add(record.id)
    positions = {record.id: (record.x, record.y) for record in doc.nodes}
    beacons = [record.id for record in doc.nodes if record.beacon]
    labels = {record.id: record.label for record in doc.nodes if record.label}
    return build_network(positions, beacons, doc.radius, labels=labels, extent=doc.extent, hole=doc.hole)


def relocate_nodes(net: NetworkGraph, moves: Mapping[NodeId, PointLike]) -> NetworkGraph:
    """The same network with `moves` applied and radio adjacency rebuilt."""
    unknown = sorted(set(moves) - set(net.nodes))
    if unknown:
        raise NetworkError(f"Cannot move unknown nodes {unknown}.")
    positions: Dict[NodeId, PointLike] = dict(net.positions)
    positions.update(moves)
    return build_network(positions, net.beacons, net.radius, labels=net.labels, extent=net.extent, hole=net.hole)


def to_constraint_graph(net: NetworkGraph) -> ConstraintGraph:
    """Radio edges plus every beacon pair, each edge carrying its length."""
    g = nx.Graph()
    g.add_nodes_from(net.nodes)
    for u, v in net.graph.edges:
        g.add_edge(u, v, length=net.distance(u, v))
    for u, v in combinations(sorted(net.beacons), 2):
        g.add_edge(u, v, length=net.distance(u, v))
    return g


# --- Geometry ---


def is_collinear(a: PointLike, b: PointLike, c: PointLike, tol: float = config.COLLINEAR_TOL) -> bool:
    if tol < 0:
        raise ValueError(f"Collinearity tolerance must be non-negative, got {tol}.")
    ax, ay = _xy(a)
    bx, by = _xy(b)
    cx, cy = _xy(c)
    ux, uy = bx - ax, by - ay
    vx, vy = cx - ax, cy - ay
    area2 = abs(ux * vy - uy * vx)
    return area2 < tol * max(1.0, math.hypot(ux, uy) * math.hypot(vx, vy))


def points_collinear(points: Sequence[PointLike], tol: float = config.COLLINEAR_TOL) -> bool:
    """True when every point lies on one line (always true for fewer than 3)."""
    pts = [_xy(p) for p in points]
    if len(pts) < 3:
        return True
    a = pts[0]
    b = max(pts[1:], key=lambda p: math.hypot(p[0] - a[0], p[1] - a[1]))
    if b == a:
        return True
    return all(is_collinear(a, b, c, tol) for c in pts[1:] if c != b)


# --- Branches ---


@dataclass(frozen=True)
class Branch:
    """
    A triangle-extension sequence started from the K2 on `roots`.

    `members` lists (vertex, parents) in extension order, which is always a
    topological order of the parent DAG.
    """

    roots: Tuple[NodeId, NodeId]
    members: Tuple[Tuple[NodeId, Tuple[NodeId, NodeId]], ...] = ()
    levels: Dict[NodeId, int] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.levels:
            levels = {self.roots[0]: 0, self.roots[1]: 0}
            for v, (p1, p2) in self.members:
                levels[v] = 1 + max(levels[p1], levels[p2])
            object.__setattr__(self, "levels", levels)

    @property
    def leaf(self) -> Optional[NodeId]:
        return self.members[-1][0] if self.members else None

    @property
    def vertices(self) -> List[NodeId]:
        return [self.roots[0], self.roots[1]] + [v for v, _ in self.members]

    @property
    def edges(self) -> List[Tuple[NodeId, NodeId]]:
        edges = [self.roots]
        for v, (p1, p2) in self.members:
            edges.append((p1, v))
            edges.append((p2, v))
        return edges

    def parents_of(self, v: NodeId) -> Optional[Tuple[NodeId, NodeId]]:
        for member, parents in self.members:
            if member == v:
                return parents
        return None

    def to_graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g

    def without_last(self) -> "Branch":
        return Branch(self.roots, self.members[:-1])

    def ancestors(self, v: NodeId) -> set:
        """Every vertex reachable from v through parent links, v excluded."""
        parents = dict(self.members)
        seen, stack = set(), list(parents.get(v, ()))
        while stack:
            u = stack.pop()
            if u not in seen:
                seen.add(u)
                stack.extend(parents.get(u, ()))
        return seen

    def restrict_to(self, v: NodeId) -> "Branch":
        """The branch B(v): v, its ancestors and their edges."""
        keep = self.ancestors(v) | {v}
        return Branch(self.roots, tuple(m for m in self.members if m[0] in keep))


def k2_branch(r1: NodeId, r2: NodeId) -> Branch:
    if r1 == r2:
        raise BranchError("The two roots of a branch must differ.")
    return Branch((r1, r2))


def extend(branch: Branch, v: NodeId, r1: NodeId, r2: NodeId) -> Branch:
    present = set(branch.vertices)
    if v in present:
        raise BranchError(f"Vertex {v} is already in the branch.")
    if r1 == r2:
        raise BranchError(f"Extension of {v} needs two distinct parents.")
    missing = [p for p in (r1, r2) if p not in present]
    if missing:
        raise BranchError(f"Parents {missing} of {v} are not in the branch.")
    return Branch(branch.roots, branch.members + ((v, (r1, r2)),))


def attach_closer(branch: Branch, q: NodeId) -> ConstraintGraph:
    """Branch graph plus the closer q joined to the leaf and both roots."""
    if q in set(branch.vertices):
        raise BranchError(f"Closer {q} is already in the branch.")
    if branch.leaf is None:
        raise BranchError("A closer needs a branch with at least one extension.")
    g = branch.to_graph()
    g.add_edges_from([(q, branch.leaf), (q, branch.roots[0]), (q, branch.roots[1])])
    return g


def random_triangle_block(rng: np.random.Generator, steps: int) -> Branch:
    """Roots 0 and 1, then `steps` extensions on uniformly drawn parent pairs."""
    block = k2_branch(0, 1)
    for v in range(2, 2 + steps):
        p1, p2 = rng.choice(v, size=2, replace=False).tolist()
        block = extend(block, v, p1, p2)
    return block


def random_branch(rng: np.random.Generator, steps: int) -> Branch:
    """B(leaf) of a random triangle block; its size is at most steps + 2."""
    block = random_triangle_block(rng, steps)
    if not block.members:
        return block
    return block.restrict_to(block.leaf)
