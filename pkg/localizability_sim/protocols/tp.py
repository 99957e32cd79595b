"""
Trilateration (TP): a node is localizable once it hears three localizable
neighbors whose positions are not all on one line.
"""

from typing import Dict, List, Sequence, Set, Tuple

from ..models.protocol_models import BranchTuple, Message, MessageKind, NodeState
from ..services.graph_core import points_collinear
from .base import NodeContext, ProtocolNode


class TPNode(ProtocolNode):
    name = "tp"

    def __init__(self, ctx: NodeContext):
        super().__init__(ctx)
        self.anchors: Dict[int, Tuple[float, float]] = {}

    def branch_tuple(self) -> BranchTuple:
        if self.state is NodeState.LOCALIZABLE:
            return BranchTuple(
                state=self.state, beacon=self.is_beacon, position=(self.position.x, self.position.y)
            )
        return super().branch_tuple()

    def _forget(self, gone: Set[int]) -> None:
        for n in gone:
            self.anchors.pop(n, None)

    def handle(self, round_no: int, inbox: Sequence[Message]) -> List[Message]:
        for msg in inbox:
            if msg.kind not in (MessageKind.STATE, MessageKind.HELLO) or msg.candidate is None:
                continue
            b = msg.candidate.b
            if b.state is NodeState.LOCALIZABLE and b.position is not None:
                self.anchors[msg.sender] = b.position

        if self.state is NodeState.FLEXIBLE and len(self.anchors) >= 3:
            if not points_collinear(list(self.anchors.values())):
                self._transition(NodeState.LOCALIZABLE)
                return [self.state_message()]
        return []
