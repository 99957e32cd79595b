"""
Wheel Extension (WE).

Every node announces its neighbor list, so each node learns the adjacency
among its own neighbors and builds one wheel centred on itself: the first
rim cycle a depth-first walk from its lowest-id neighbor closes, at most
WE_MAX_RIM long. The wheel is rebuilt only when the neighborhood changes.
Whenever the wheel holds three localizable members that are not on one line,
the hub marks the whole wheel localizable.
"""

from typing import Dict, List, Optional, Sequence, Set, Tuple

import networkx as nx

from .. import config
from ..models.protocol_models import BranchTuple, Message, MessageKind, NodeState
from ..services.graph_core import points_collinear
from ..utils.logger import logger
from .base import NodeContext, ProtocolNode

Point = Tuple[float, float]


def first_rim(g: nx.Graph, root: int, max_rim: int) -> Optional[List[int]]:
    """First cycle through `root` closed by a depth-first walk in ascending id order."""
    path = [root]
    on_path = {root}
    frontier = [iter(sorted(g[root]))]
    while frontier:
        step = next((n for n in frontier[-1] if n not in on_path), None)
        if step is None or len(path) >= max_rim:
            frontier.pop()
            on_path.discard(path.pop())
            continue
        path.append(step)
        on_path.add(step)
        if len(path) >= 3 and g.has_edge(step, root):
            return path
        frontier.append(iter(sorted(g[step])))
    return None


class WENode(ProtocolNode):
    name = "we"

    def __init__(self, ctx: NodeContext):
        super().__init__(ctx)
        self.adjacency: Dict[int, Set[int]] = {}
        self.anchors: Dict[int, Point] = dict(ctx.beacon_positions)
        self.marked: Set[int] = set()
        self.rim: Optional[List[int]] = None
        self._stale_rim = False
        self._dirty = False

    def branch_tuple(self) -> BranchTuple:
        if self.state is NodeState.LOCALIZABLE:
            return BranchTuple(
                state=self.state, beacon=self.is_beacon, position=(self.position.x, self.position.y)
            )
        return super().branch_tuple()

    def start(self) -> List[Message]:
        return self.relocation_messages()

    def set_neighbors(self, neighbors: Sequence[int]) -> bool:
        changed = super().set_neighbors(neighbors)
        self._stale_rim = self._stale_rim or changed
        return changed

    def _forget(self, gone: Set[int]) -> None:
        for n in gone:
            self.adjacency.pop(n, None)
            if n not in self.beacon_positions:
                self.anchors.pop(n, None)

    def handle(self, round_no: int, inbox: Sequence[Message]) -> List[Message]:
        out: List[Message] = []
        for msg in inbox:
            if msg.kind is MessageKind.HELLO:
                self.adjacency[msg.sender] = set(msg.neighbors)
                self._stale_rim = True
            if msg.candidate is not None:
                b = msg.candidate.b
                if b.state is NodeState.LOCALIZABLE and b.position is not None:
                    if self.anchors.get(msg.sender) != b.position:
                        self.anchors[msg.sender] = b.position
                        self._dirty = True
            if msg.kind is MessageKind.STATE and self.id in msg.marked:
                if self.state is not NodeState.LOCALIZABLE:
                    self._transition(NodeState.LOCALIZABLE)
                    out.append(self.state_message())

        if self._stale_rim:
            self._stale_rim = False
            self.rim = self._build_rim()
            self._dirty = True
        if self._dirty:
            self._dirty = False
            if self.rim is not None and self._qualifies(self.rim):
                out.extend(self._mark(self.rim))
        return out

    def _is_anchor(self, node: int) -> bool:
        if node == self.id:
            return self.state is NodeState.LOCALIZABLE
        return node in self.anchors

    def _position_of(self, node: int) -> Point:
        if node == self.id:
            return self.position.x, self.position.y
        return self.anchors[node]

    # --- Wheel ---

    def neighbor_graph(self) -> nx.Graph:
        """Graph induced on this node's neighbors by the adjacency they announced."""
        g = nx.Graph()
        g.add_nodes_from(self.neighbors)
        for u in self.neighbors:
            for w in self.adjacency.get(u, ()):
                if w in self.neighbors and w != u:
                    g.add_edge(u, w)
        return g

    def _build_rim(self) -> Optional[List[int]]:
        g = self.neighbor_graph()
        for root in sorted(g.nodes):
            rim = first_rim(g, root, config.WE_MAX_RIM)
            if rim is not None:
                logger.debug(f"[we] hub {self.id}: wheel rim {rim}")
                return rim
        return None

    def _qualifies(self, rim: List[int]) -> bool:
        members = [self.id] + rim
        located = [self._position_of(n) for n in members if self._is_anchor(n)]
        if len(located) < 3 or points_collinear(located):
            return False
        return any(not self._is_anchor(n) and n not in self.marked for n in members)

    def _mark(self, rim: List[int]) -> List[Message]:
        pending = tuple(sorted(n for n in rim if not self._is_anchor(n) and n not in self.marked))
        self.marked.update(pending)
        logger.debug(f"[we] hub {self.id}: wheel {rim} marks {pending}")
        if self.state is not NodeState.LOCALIZABLE:
            self._transition(NodeState.LOCALIZABLE)
        return [self.state_message(marked=pending)]
