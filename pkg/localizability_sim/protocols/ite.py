"""
Iterative Triangle Extension (ITE), the undirected reference protocol.

A node may hang in several triangle blocks at once, one branch per root
pair, and advertises every branch it builds.
"""

from typing import Dict, List, Optional, Sequence, Tuple

from .. import config
from ..models.protocol_models import (
    BranchTuple,
    Message,
    MessageKind,
    NodePair,
    NodeState,
    ParentCandidate,
    node_pair,
)
from ..services.graph_core import is_collinear
from .base import NodeContext, ProtocolNode

HeldKey = Tuple[int, Optional[NodePair]]


class ITENode(ProtocolNode):
    name = "ite"
    max_nodes = config.ITE_MAX_NODES

    def __init__(self, ctx: NodeContext):
        super().__init__(ctx)
        self.branches: Dict[NodePair, BranchTuple] = {}
        self.P: Dict[HeldKey, BranchTuple] = {}

    def snapshot(self) -> Dict[str, object]:
        snap = super().snapshot()
        snap["branches"] = {roots: (b.state.value, b.parents) for roots, b in self.branches.items()}
        return snap

    def candidate(self) -> Optional[ParentCandidate]:
        # a non-beacon advertises each branch separately
        return super().candidate() if self.is_beacon else None

    def _branch_message(self, b: BranchTuple, kind: MessageKind = MessageKind.STATE) -> Message:
        return Message(kind=kind, sender=self.id, candidate=ParentCandidate(id=self.id, b=b))

    def relocation_messages(self) -> List[Message]:
        hello = super().relocation_messages()
        return hello + [self._branch_message(b, MessageKind.HELLO) for b in self.branches.values()]

    def handle(self, round_no: int, inbox: Sequence[Message]) -> List[Message]:
        announce: Dict[NodePair, BranchTuple] = {}
        for msg in inbox:
            if msg.kind in (MessageKind.STATE, MessageKind.HELLO) and msg.candidate is not None:
                self._receive(msg.candidate.id, msg.candidate.b, announce)
        return [self._branch_message(b) for b in announce.values()]

    def _receive(self, sender: int, b: BranchTuple, announce: Dict[NodePair, BranchTuple]) -> None:
        self.P[(sender, b.roots)] = b
        if self.is_beacon:
            return
        for (j, _), bj in list(self.P.items()):
            if j == sender:
                continue
            roots = self._match(sender, b, j, bj)
            if roots is not None and roots not in self.branches:
                self._add_branch(roots, node_pair(sender, j), announce)
        self._detect(sender, b, announce)

    @staticmethod
    def _match(i: int, bi: BranchTuple, j: int, bj: BranchTuple) -> Optional[NodePair]:
        if bi.beacon:
            if bj.beacon:
                return node_pair(i, j)
            if bj.roots and i in bj.roots:
                return bj.roots
            return None
        if bj.state is NodeState.LOCALIZABLE and bi.roots and j in bi.roots:
            return bi.roots
        if bi.roots is not None and bi.roots == bj.roots:
            return bi.roots
        return None

    def _add_branch(self, roots: NodePair, parents: NodePair, announce: Dict[NodePair, BranchTuple]) -> None:
        self.branches[roots] = BranchTuple(state=NodeState.RIGID, parents=parents, roots=roots)
        announce[roots] = self.branches[roots]
        if self.state is NodeState.FLEXIBLE:
            self._transition(NodeState.RIGID)
        for (held, _), tup in list(self.P.items()):
            self._detect(held, tup, announce)

    def _detect(self, n: int, bn: BranchTuple, announce: Dict[NodePair, BranchTuple]) -> None:
        if bn.beacon:
            p = self.beacon_positions
            for roots, branch in list(self.branches.items()):
                if branch.state is NodeState.RIGID and n not in roots:
                    if not is_collinear(p[roots[0]], p[roots[1]], p[n]):
                        self._localize(roots, announce)
            return
        if bn.state is NodeState.LOCALIZABLE and bn.parents and self.id in bn.parents:
            branch = self.branches.get(bn.roots)
            if branch is not None and branch.state is NodeState.RIGID:
                self._localize(bn.roots, announce)

    def _localize(self, roots: NodePair, announce: Dict[NodePair, BranchTuple]) -> None:
        branch = self.branches[roots]
        self.branches[roots] = branch.model_copy(update={"state": NodeState.LOCALIZABLE})
        announce[roots] = self.branches[roots]
        if self.state is not NodeState.LOCALIZABLE:
            self._transition(NodeState.LOCALIZABLE)
