"""
Triangle Extension (TE).

Each node commits to exactly one parent pair. Extension only accepts a pair
where one candidate is a parent of the other (or both are beacons), so every
node hangs in a single directed triangle block. Detection then raises a
branch to localizable when:

* a beacon outside the block's roots, not collinear with them, is heard;
* a localizable node outside the branch, not collinear with the roots, is
  heard; ancestors always sit at a smaller depth, so a node of another block
  or one at least as deep in this block qualifies;
* a localizable child names this node as a parent (or as a bridge end);
* a node of a foreign block is heard next to one of its block mates and one
  of this node's parents confirms it also reaches that foreign pair.
"""

from typing import Dict, List, Optional, Sequence, Set, Tuple

from ..models.protocol_models import (
    BranchTuple,
    Message,
    MessageKind,
    NodePair,
    NodeState,
    node_pair,
)
from ..services.graph_core import is_collinear, points_collinear
from ..utils.logger import logger
from .base import NodeContext, ProtocolNode


def _depth(b: BranchTuple) -> int:
    return 0 if b.beacon else (b.level or 0)


class TENode(ProtocolNode):
    name = "te"

    def __init__(self, ctx: NodeContext):
        super().__init__(ctx)
        self.parents: Optional[NodePair] = None
        self.roots: Optional[NodePair] = None
        self.bridge: Optional[NodePair] = None
        self.level: Optional[int] = None
        self.P: Dict[int, BranchTuple] = {}
        self.attempted: Set[NodePair] = set()
        self.pending_commit = False
        self._announced = self.state if self.is_beacon else NodeState.FLEXIBLE

    def branch_tuple(self) -> BranchTuple:
        if self.is_beacon:
            return super().branch_tuple()
        position = (self.position.x, self.position.y) if self.state is NodeState.LOCALIZABLE else None
        return BranchTuple(
            state=self.state,
            parents=self.parents,
            roots=self.roots,
            bridge=self.bridge,
            position=position,
            level=self.level,
        )

    def _forget(self, gone: Set[int]) -> None:
        for n in gone:
            self.P.pop(n, None)

    def snapshot(self) -> Dict[str, object]:
        snap = super().snapshot()
        snap.update(parents=self.parents, roots=self.roots, bridge=self.bridge, level=self.level)
        return snap

    def handle(self, round_no: int, inbox: Sequence[Message]) -> List[Message]:
        out: List[Message] = []
        if self.pending_commit:
            self.pending_commit = False
            if self.state is NodeState.RIGID:
                self._transition(NodeState.LOCALIZABLE)

        for msg in inbox:
            if msg.kind in (MessageKind.STATE, MessageKind.HELLO):
                if msg.candidate is not None:
                    self._receive(msg.candidate.id, msg.candidate.b, out)
            elif msg.kind is MessageKind.QUERY:
                self._answer_query(msg, out)
            elif msg.kind is MessageKind.CONFIRM:
                if self.id in msg.targets and self.state is NodeState.RIGID:
                    self.bridge = msg.pair
                    self._transition(NodeState.LOCALIZABLE)

        if self.state is not self._announced:
            self._announced = self.state
            out.append(self.state_message())
        return out

    # --- Extension ---

    def _receive(self, sender: int, b: BranchTuple, out: List[Message]) -> None:
        self.P[sender] = b
        if self.is_beacon:
            return
        if self.state is NodeState.FLEXIBLE:
            if self._extend(sender, b):
                for held, tup in list(self.P.items()):
                    self._detect(held, tup, out)
        elif self.state is NodeState.RIGID:
            self._detect(sender, b, out)

    def _extend(self, i: int, bi: BranchTuple) -> bool:
        for j, bj in self.P.items():
            if j == i:
                continue
            roots = self._match(i, bi, j, bj)
            if roots is not None:
                self.parents = node_pair(i, j)
                self.roots = roots
                self.level = max(_depth(bi), _depth(bj)) + 1
                self._transition(NodeState.RIGID)
                return True
        return False

    @staticmethod
    def _match(i: int, bi: BranchTuple, j: int, bj: BranchTuple) -> Optional[NodePair]:
        if bi.beacon:
            if bj.beacon:
                return node_pair(i, j)
            if bj.parents and i in bj.parents:
                return bj.roots
            return None
        if bj.state is NodeState.LOCALIZABLE and bi.parents and j in bi.parents:
            return bi.roots
        if (bj.parents and i in bj.parents) or (bi.parents and j in bi.parents):
            return bi.roots
        return None

    # --- Detection ---

    def _detect(self, n: int, bn: BranchTuple, out: List[Message]) -> None:
        if self.state is not NodeState.RIGID:
            return
        if bn.beacon:
            if n not in self.roots and not self._collinear_with_roots(self.beacon_positions[n]):
                self._transition(NodeState.LOCALIZABLE)
            return
        if bn.state is NodeState.LOCALIZABLE:
            if bn.parents and self.id in bn.parents and bn.roots == self.roots:
                self._transition(NodeState.LOCALIZABLE)
                return
            if bn.bridge and self.id in bn.bridge:
                self._transition(NodeState.LOCALIZABLE)
                return
            if self._outside_branch(n, bn) and not self._collinear_with_roots(bn.position):
                self._transition(NodeState.LOCALIZABLE)
                return
        if bn.roots is not None and bn.roots != self.roots:
            self._dual_v(n, bn, out)

    def _collinear_with_roots(self, point: Tuple[float, float]) -> bool:
        r1, r2 = self.roots
        return is_collinear(self.beacon_positions[r1], self.beacon_positions[r2], point)

    def _outside_branch(self, n: int, bn: BranchTuple) -> bool:
        if bn.position is None or n in self.parents:
            return False
        if bn.roots != self.roots:
            return True
        return bn.level is not None and bn.level >= self.level

    def _dual_v(self, n: int, bn: BranchTuple, out: List[Message]) -> None:
        """Looks for a block mate of `n` among held candidates and asks the parents about the pair."""
        roots = set(self.roots) | set(bn.roots)
        if points_collinear([self.beacon_positions[r] for r in sorted(roots)]):
            return
        for i, bi in self.P.items():
            if i == n:
                continue
            mate_is_parent = bool(bn.parents) and i in bn.parents
            mate_is_child = (
                not bi.beacon and bi.roots == bn.roots and bool(bi.parents) and n in bi.parents
            )
            if not (mate_is_parent or mate_is_child):
                continue
            pair = node_pair(i, n)
            if pair in self.attempted:
                continue
            self.attempted.add(pair)
            logger.debug(f"[te] node {self.id}: dual-v query to {self.parents} about {pair}")
            out.append(
                Message(
                    kind=MessageKind.QUERY,
                    sender=self.id,
                    candidate=self.candidate(),
                    targets=self.parents,
                    pair=pair,
                )
            )
            return

    def _answer_query(self, msg: Message, out: List[Message]) -> None:
        if self.id not in msg.targets or msg.pair is None:
            return
        if not any(member in self.P for member in msg.pair):
            return
        out.append(
            Message(kind=MessageKind.CONFIRM, sender=self.id, targets=(msg.sender,), pair=msg.pair)
        )
        if not self.is_beacon and self.state is NodeState.RIGID:
            self.pending_commit = True
