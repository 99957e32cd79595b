"""
Pydantic models for the per-node protocol state and the messages nodes exchange.
"""

from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

NodeId = int
NodePair = Tuple[int, int]


class NodeState(str, Enum):
    FLEXIBLE = "flexible"
    RIGID = "rigid"
    LOCALIZABLE = "localizable"

    @property
    def rank(self) -> int:
        return _STATE_RANK[self]


_STATE_RANK = {NodeState.FLEXIBLE: 0, NodeState.RIGID: 1, NodeState.LOCALIZABLE: 2}


def node_pair(a: int, b: int) -> NodePair:
    """Unordered pair in canonical (low, high) form."""
    return (a, b) if a <= b else (b, a)


class BranchTuple(BaseModel):
    """The `b` record a node advertises: its state and where its branch hangs."""

    model_config = ConfigDict(frozen=True)

    state: NodeState = Field(..., description="State of the advertised branch.")
    beacon: bool = Field(False, description="True for beacon advertisements.")
    parents: Optional[NodePair] = Field(None, description="The two extension parents.")
    roots: Optional[NodePair] = Field(None, description="Beacon pair of the block.")
    bridge: Optional[NodePair] = Field(
        None, description="Foreign pair confirmed by a dual-v handshake."
    )
    position: Optional[Tuple[float, float]] = Field(
        None, description="Determined position, when the sender knows it."
    )
    level: Optional[int] = Field(
        None, ge=1, description="Extension depth below the roots; beacons count as 0."
    )


class ParentCandidate(BaseModel):
    """The `p` record: a sender id and the branch tuple it advertises."""

    model_config = ConfigDict(frozen=True)

    id: NodeId = Field(..., description="Sender id.")
    b: BranchTuple = Field(..., description="Advertised branch tuple.")


class MessageKind(str, Enum):
    STATE = "STATE"
    QUERY = "QUERY"
    CONFIRM = "CONFIRM"
    HELLO = "HELLO"


class Message(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: MessageKind = Field(..., description="Message type.")
    sender: NodeId = Field(..., description="Broadcasting node.")
    candidate: Optional[ParentCandidate] = Field(
        None, description="State payload (STATE, and HELLO after relocation)."
    )
    targets: Tuple[int, ...] = Field(
        (), description="Addressees of QUERY and CONFIRM; empty means everyone."
    )
    pair: Optional[NodePair] = Field(None, description="Dual-v pair under test.")
    neighbors: Tuple[int, ...] = Field((), description="HELLO neighbor list.")
    marked: Tuple[int, ...] = Field(
        (), description="Wheel members the sender declares localizable."
    )

    def addressed_to(self, node: NodeId) -> bool:
        return not self.targets or node in self.targets
