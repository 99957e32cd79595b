import pytest

from localizability_sim.exceptions import GraphTooLargeError
from localizability_sim.models.protocol_models import Message, MessageKind, NodeState
from localizability_sim.protocols.base import ProtocolNode
from localizability_sim.services.graph_core import build_network
from localizability_sim.services.sim_engine import (
    SimulationEngine,
    convergence_round,
    default_budget,
    localizable_nodes,
    run,
)


class EchoNode(ProtocolNode):
    """Says hello once and records who it heard, round by round."""

    name = "echo"

    def __init__(self, ctx):
        super().__init__(ctx)
        self.heard = []

    def start(self):
        return [Message(kind=MessageKind.HELLO, sender=self.id)]

    def handle(self, round_no, inbox):
        self.heard.append((round_no, [m.sender for m in inbox]))
        return []


@pytest.fixture
def line3():
    return build_network([(0, 0), (10, 0), (20, 0)], [0], 15.0)


def test_messages_reach_neighbors_one_round_later():
    net = build_network([(0, 0), (10, 0), (20, 0), (5, 8)], [], 15.0)
    engine = SimulationEngine(net, EchoNode)
    trace = engine.run_until_quiet()
    for n, node in engine.nodes.items():
        round_no, senders = node.heard[0]
        assert round_no == 1
        assert senders == sorted(net.neighbors(n))
        assert all(s == [] for _, s in node.heard[1:])
    assert trace.control_messages == net.size
    assert trace.converged and trace.rounds_executed == 2


def test_single_beacon_never_localizes_anyone(line3):
    trace = run(line3, "te")
    assert trace.converged
    assert trace.rounds_executed == 2
    assert trace.transitions == []
    assert convergence_round(trace) == 0
    assert localizable_nodes(trace) == [0]


def test_closer_converges_in_four_rounds(closer_net):
    trace = run(closer_net, "te")
    assert trace.converged
    assert convergence_round(trace) == 4
    assert localizable_nodes(trace) == list(closer_net.nodes)


def test_truncated_run_reports_its_budget(closer_net):
    trace = run(closer_net, "te", budget=2)
    assert not trace.converged
    assert trace.rounds_executed == 2
    assert convergence_round(trace) == 2


def test_default_budget_is_ten_rounds_per_node(closer_net):
    assert default_budget(closer_net) == 50
    assert run(closer_net, "tp").budget == 50


def test_runs_are_reproducible(closer_net):
    assert run(closer_net, "te").model_dump() == run(closer_net, "te").model_dump()


@pytest.mark.parametrize("protocol", ["te", "ite", "tp", "we"])
def test_transitions_only_move_forward(closer_net, protocol):
    trace = run(closer_net, protocol)
    last = {}
    for t in trace.transitions:
        assert t.new.rank > t.old.rank
        assert last.get(t.node, NodeState.FLEXIBLE) is t.old
        last[t.node] = t.new
    assert len(trace.localizable_by_round) == trace.rounds_executed + 1
    counts = trace.localizable_by_round
    assert counts == sorted(counts)


def test_te_broadcasts_state_at_most_twice(closer_net):
    trace = run(closer_net, "te")
    assert max(trace.state_messages_per_node.values()) <= 2
    assert sum(trace.state_messages_per_node.values()) <= 2 * closer_net.size


def test_ite_refuses_large_networks():
    net = build_network([(10.0 * k, 0.0) for k in range(101)], [0, 1], 15.0)
    with pytest.raises(GraphTooLargeError):
        SimulationEngine(net, "ite")


def test_relocation_rebuilds_adjacency(line3):
    engine = SimulationEngine(line3, "te")
    engine.run_until_quiet()
    quiet_round = engine.round
    changed = engine.relocate({2: (100.0, 0.0)})
    assert changed == 2
    assert engine.nodes[2].position.x == 100.0
    assert engine.net.neighbors(1) == [0]
    trace = engine.run_until_quiet()
    assert trace.relocations == [quiet_round]
    assert trace.control_messages == 2
    assert trace.converged
