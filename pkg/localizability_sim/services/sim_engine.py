"""
Deterministic round-based message passing.

Round 0 boots every node. A message emitted in round r reaches the sender's
radio neighbors in round r+1, inboxes ordered by sender id, and handlers run
in ascending node id. A run ends after QUIET_ROUNDS consecutive rounds with
no state change and no message, or when the round budget is spent.
"""

from collections import defaultdict
from typing import Dict, List, Mapping, Optional, Sequence, Type, Union

from .. import config
from ..exceptions import GraphTooLargeError
from ..models.network_models import Position
from ..models.protocol_models import Message, MessageKind, NodeState
from ..models.report_models import RunTrace, StateTransition
from ..protocols.base import NodeContext, ProtocolNode
from ..protocols.registry import get_protocol
from ..utils.logger import logger
from .graph_core import NetworkGraph, relocate_nodes

ProtocolLike = Union[str, Type[ProtocolNode]]
PositionLike = Union[Position, Sequence[float]]


def default_budget(net: NetworkGraph) -> int:
    return config.ROUND_BUDGET_FACTOR * net.size


class SimulationEngine:
    """Drives one protocol over one network, round by round."""

    def __init__(self, net: NetworkGraph, protocol: ProtocolLike, budget: Optional[int] = None):
        cls = get_protocol(protocol) if isinstance(protocol, str) else protocol
        if cls.max_nodes is not None and net.size > cls.max_nodes:
            raise GraphTooLargeError(
                f"Protocol '{cls.name}' is limited to {cls.max_nodes} nodes; network has {net.size}."
            )
        self.net = net
        self.protocol = cls.name
        self.budget = default_budget(net) if budget is None else budget
        self.round = -1
        self.converged = False

        beacon_positions = {b: net.positions[b].as_tuple() for b in sorted(net.beacons)}
        self.nodes: Dict[int, ProtocolNode] = {
            n: cls(
                NodeContext(
                    node_id=n,
                    is_beacon=n in net.beacons,
                    position=net.positions[n],
                    neighbors=tuple(net.neighbors(n)),
                    beacon_positions=beacon_positions,
                )
            )
            for n in net.nodes
        }

        self._outbox: List[Message] = []
        self._broadcasts: Dict[int, int] = {n: 0 for n in net.nodes}
        self._state_messages: Dict[int, int] = {n: 0 for n in net.nodes}
        self._control_messages = 0
        self._transitions: List[StateTransition] = []
        self._localizable_by_round: List[int] = []
        self._relocations: List[int] = []

    # --- Bookkeeping ---

    def _emit(self, messages: Sequence[Message]) -> None:
        for msg in messages:
            self._broadcasts[msg.sender] += 1
            if msg.kind is MessageKind.STATE:
                self._state_messages[msg.sender] += 1
            else:
                self._control_messages += 1
            self._outbox.append(msg)

    def _collect(self, node: ProtocolNode) -> int:
        changes = node.drain_transitions()
        for old, new in changes:
            self._transitions.append(StateTransition(round=self.round, node=node.id, old=old, new=new))
        return len(changes)

    def _close_round(self) -> None:
        self._localizable_by_round.append(
            sum(1 for node in self.nodes.values() if node.state is NodeState.LOCALIZABLE)
        )

    # --- Rounds ---

    def start(self) -> bool:
        """Round 0; returns True when it was quiet."""
        self.round = 0
        changes = 0
        for n in sorted(self.nodes):
            node = self.nodes[n]
            self._emit(node.start())
            changes += self._collect(node)
        self._close_round()
        return changes == 0 and not self._outbox

    def step(self) -> bool:
        """Delivers last round's messages and runs one round; True when it was quiet."""
        self.round += 1
        inboxes: Dict[int, List[Message]] = defaultdict(list)
        delivered = 0
        for msg in sorted(self._outbox, key=lambda m: m.sender):
            for receiver in self.net.neighbors(msg.sender):
                inboxes[receiver].append(msg)
                delivered += 1
        self._outbox = []

        changes = 0
        for n in sorted(self.nodes):
            node = self.nodes[n]
            self._emit(node.handle(self.round, inboxes.get(n, [])))
            changes += self._collect(node)
        self._close_round()
        logger.debug(
            f"[{self.protocol}] round {self.round}: {delivered} deliveries, {changes} transitions, "
            f"{len(self._outbox)} new messages"
        )
        return changes == 0 and not self._outbox

    def run_until_quiet(self) -> RunTrace:
        quiet = 0
        if self.round < 0:
            quiet = 1 if self.start() else 0
        self.converged = False
        while self.round < self.budget:
            quiet = quiet + 1 if self.step() else 0
            if quiet >= config.QUIET_ROUNDS:
                self.converged = True
                break
        if not self.converged:
            logger.warning(f"[{self.protocol}] budget of {self.budget} rounds exhausted before convergence.")
        return self.trace()

    def relocate(self, moves: Mapping[int, PositionLike]) -> int:
        """
        Moves nodes between rounds and rebuilds radio adjacency. Nodes whose
        neighbor set changed queue a HELLO for the next round. Returns the
        number of such nodes.
        """
        self.net = relocate_nodes(self.net, moves)
        changed = 0
        for n in sorted(self.nodes):
            node = self.nodes[n]
            node.position = self.net.positions[n]
            if node.set_neighbors(self.net.neighbors(n)):
                changed += 1
                self._emit(node.relocation_messages())
        self._relocations.append(self.round)
        logger.info(f"[{self.protocol}] relocated {len(moves)} node(s) after round {self.round}; {changed} neighbor sets changed.")
        return changed

    def trace(self) -> RunTrace:
        return RunTrace(
            protocol=self.protocol,
            budget=self.budget,
            rounds_executed=max(self.round, 0),
            converged=self.converged,
            broadcasts_per_node=dict(self._broadcasts),
            state_messages_per_node=dict(self._state_messages),
            control_messages=self._control_messages,
            transitions=list(self._transitions),
            final_states={n: node.state for n, node in sorted(self.nodes.items())},
            localizable_by_round=list(self._localizable_by_round),
            relocations=list(self._relocations),
        )


def run(net: NetworkGraph, protocol: ProtocolLike, budget: Optional[int] = None) -> RunTrace:
    engine = SimulationEngine(net, protocol, budget)
    logger.info(f"Running '{engine.protocol}' on {net.size} nodes ({len(net.beacons)} beacons), budget {engine.budget}.")
    trace = engine.run_until_quiet()
    logger.info(
        f"'{trace.protocol}' finished after {trace.rounds_executed} rounds "
        f"(converged={trace.converged}, {len(trace.transitions)} transitions)."
    )
    return trace


def convergence_round(trace: RunTrace) -> int:
    """Round of the last transition, 0 without any, the budget for truncated runs."""
    if not trace.converged:
        return trace.budget
    if not trace.transitions:
        return 0
    return max(t.round for t in trace.transitions)


def localizable_nodes(trace: RunTrace) -> List[int]:
    return sorted(n for n, s in trace.final_states.items() if s is NodeState.LOCALIZABLE)
