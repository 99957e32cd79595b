"""
Shared scaffolding for per-node protocol state machines.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import ClassVar, Dict, List, Optional, Sequence, Set, Tuple

from ..exceptions import LocalizabilityError
from ..models.network_models import Position
from ..models.protocol_models import (
    BranchTuple,
    Message,
    MessageKind,
    NodeState,
    ParentCandidate,
)
from ..utils.logger import logger


@dataclass(frozen=True)
class NodeContext:
    """What a node knows at boot: itself, its radio neighbors and the beacon map."""

    node_id: int
    is_beacon: bool
    position: Position
    neighbors: Tuple[int, ...]
    beacon_positions: Dict[int, Tuple[float, float]]


class ProtocolNode(ABC):
    """
    One node's state machine. The engine calls `start` once at round 0 and
    `handle` every round, in ascending id order, with the messages delivered
    that round (possibly none). Both return the node's broadcasts.
    """

    name: ClassVar[str] = ""
    max_nodes: ClassVar[Optional[int]] = None

    def __init__(self, ctx: NodeContext):
        self.id = ctx.node_id
        self.is_beacon = ctx.is_beacon
        self.position = ctx.position
        self.neighbors = set(ctx.neighbors)
        self.beacon_positions = ctx.beacon_positions
        self.state = NodeState.LOCALIZABLE if ctx.is_beacon else NodeState.FLEXIBLE
        self._transitions: List[Tuple[NodeState, NodeState]] = []

    # --- Engine hooks ---

    def start(self) -> List[Message]:
        if self.is_beacon:
            return [self.state_message()]
        return []

    @abstractmethod
    def handle(self, round_no: int, inbox: Sequence[Message]) -> List[Message]:
        ...

    def drain_transitions(self) -> List[Tuple[NodeState, NodeState]]:
        drained, self._transitions = self._transitions, []
        return drained

    def set_neighbors(self, neighbors: Sequence[int]) -> bool:
        """Installs a new neighbor set after relocation; True when it changed."""
        fresh = set(neighbors)
        changed = fresh != self.neighbors
        gone = self.neighbors - fresh
        self.neighbors = fresh
        if gone:
            self._forget(gone)
        return changed

    def _forget(self, gone: Set[int]) -> None:
        """Drops what was learned from neighbors that are no longer in range."""

    def relocation_messages(self) -> List[Message]:
        return [
            Message(
                kind=MessageKind.HELLO,
                sender=self.id,
                candidate=self.candidate(),
                neighbors=tuple(sorted(self.neighbors)),
            )
        ]

    # --- State ---

    def branch_tuple(self) -> BranchTuple:
        if self.is_beacon:
            return BranchTuple(
                state=NodeState.LOCALIZABLE,
                beacon=True,
                position=(self.position.x, self.position.y),
            )
        return BranchTuple(state=self.state)

    def candidate(self) -> Optional[ParentCandidate]:
        if self.state is NodeState.FLEXIBLE:
            return None
        return ParentCandidate(id=self.id, b=self.branch_tuple())

    def state_message(self, **extra) -> Message:
        return Message(kind=MessageKind.STATE, sender=self.id, candidate=self.candidate(), **extra)

    def snapshot(self) -> Dict[str, object]:
        return {"id": self.id, "beacon": self.is_beacon, "state": self.state.value}

    def _transition(self, new: NodeState) -> None:
        old = self.state
        if new.rank <= old.rank:
            raise LocalizabilityError(f"Node {self.id}: illegal transition {old.value} -> {new.value}.")
        self.state = new
        self._transitions.append((old, new))
        logger.debug(f"[{self.name}] node {self.id}: {old.value} -> {new.value}")
