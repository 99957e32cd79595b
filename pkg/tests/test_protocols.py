import networkx as nx
import pytest

from localizability_sim.exceptions import LocalizabilityError, UnknownProtocolError
from localizability_sim.models.network_models import Position
from localizability_sim.models.protocol_models import (
    BranchTuple,
    Message,
    MessageKind,
    NodeState,
    ParentCandidate,
)
from localizability_sim.protocols.base import NodeContext
from localizability_sim.protocols.ite import ITENode
from localizability_sim.protocols.registry import get_protocol, protocol_names
from localizability_sim.protocols.te import TENode
from localizability_sim.protocols.tp import TPNode
from localizability_sim.protocols.we import WENode, first_rim
from localizability_sim.scenarios.scenario_library import H, fixture
from localizability_sim.services.sim_engine import SimulationEngine, localizable_nodes, run

BEACONS = {0: (0.0, 0.0), 1: (20.0, 0.0), 2: (30.0, H)}


def _ctx(node_id=5, neighbors=(0, 1, 2), beacon_positions=None):
    return NodeContext(
        node_id=node_id,
        is_beacon=False,
        position=Position(x=10.0, y=H),
        neighbors=tuple(neighbors),
        beacon_positions=beacon_positions or BEACONS,
    )


def _beacon_state(node_id, xy):
    b = BranchTuple(state=NodeState.LOCALIZABLE, beacon=True, position=xy)
    return Message(kind=MessageKind.STATE, sender=node_id, candidate=ParentCandidate(id=node_id, b=b))


def _anchor_state(node_id, xy):
    b = BranchTuple(state=NodeState.LOCALIZABLE, position=xy)
    return Message(kind=MessageKind.STATE, sender=node_id, candidate=ParentCandidate(id=node_id, b=b))


@pytest.fixture
def fan_net():
    # v hears the beacons r1, r2 and q; r1 and q are out of each other's range.
    return fixture(
        [
            ("r1", 0.0, 0.0, True),
            ("r2", 20.0, 0.0, True),
            ("v", 10.0, H, False),
            ("q", 30.0, H, True),
        ]
    )


@pytest.fixture
def hex_wheel():
    rim = [(20.0, 0.0), (10.0, H), (-10.0, H), (-20.0, 0.0), (-10.0, -H), (10.0, -H)]
    rows = [("h", 0.0, 0.0, False)]
    rows += [(f"rim{k}", x, y, k % 2 == 0) for k, (x, y) in enumerate(rim)]
    return fixture(rows)


# --- Registry ---


def test_registry_knows_every_protocol():
    assert protocol_names() == ["te", "ite", "tp", "we"]
    assert get_protocol("te") is TENode
    assert get_protocol("WE") is WENode


def test_unknown_protocol_is_a_key_error():
    with pytest.raises(UnknownProtocolError):
        get_protocol("dv-hop")
    with pytest.raises(KeyError):
        get_protocol("dv-hop")


# --- Base state machine ---


def test_states_never_move_backwards():
    node = TPNode(_ctx())
    with pytest.raises(LocalizabilityError):
        node._transition(NodeState.FLEXIBLE)


def test_beacons_start_localizable_and_announce():
    ctx = NodeContext(0, True, Position(x=0, y=0), (1,), BEACONS)
    node = TENode(ctx)
    assert node.state is NodeState.LOCALIZABLE
    (msg,) = node.start()
    assert msg.kind is MessageKind.STATE
    assert msg.candidate.b.beacon and msg.candidate.b.position == (0.0, 0.0)


# --- TE ---


def test_te_extends_from_two_beacons_then_detects_a_third():
    node = TENode(_ctx())
    out = node.handle(1, [_beacon_state(0, BEACONS[0]), _beacon_state(1, BEACONS[1])])
    assert node.state is NodeState.RIGID
    assert node.parents == (0, 1) and node.roots == (0, 1)
    assert [m.kind for m in out] == [MessageKind.STATE]
    assert node.drain_transitions() == [(NodeState.FLEXIBLE, NodeState.RIGID)]

    out = node.handle(2, [_beacon_state(2, BEACONS[2])])
    assert node.state is NodeState.LOCALIZABLE
    assert len(out) == 1
    assert node.drain_transitions() == [(NodeState.RIGID, NodeState.LOCALIZABLE)]


def test_te_ignores_a_beacon_collinear_with_its_roots():
    beacons = {0: (0.0, 0.0), 1: (20.0, 0.0), 2: (40.0, 0.0)}
    node = TENode(_ctx(beacon_positions=beacons))
    node.handle(1, [_beacon_state(b, xy) for b, xy in beacons.items()])
    assert node.state is NodeState.RIGID


def test_te_localizes_next_to_three_beacons(fan_net):
    trace = run(fan_net, "te")
    v = fan_net.node_by_label("v")
    assert localizable_nodes(trace) == [0, 1, 2, 3]
    assert [(t.node, t.round, t.new) for t in trace.transitions] == [
        (v, 1, NodeState.RIGID),
        (v, 1, NodeState.LOCALIZABLE),
    ]


def _te_state(node_id, **fields):
    b = BranchTuple(**fields)
    return Message(kind=MessageKind.STATE, sender=node_id, candidate=ParentCandidate(id=node_id, b=b))


def _te_at_depth_two():
    node = TENode(_ctx(neighbors=(0, 3, 4, 6, 7)))
    node.handle(1, [_beacon_state(0, BEACONS[0])])
    node.handle(2, [_te_state(3, state=NodeState.RIGID, parents=(0, 1), roots=(0, 1), level=1)])
    assert node.state is NodeState.RIGID
    assert node.parents == (0, 3) and node.level == 2
    return node


def test_te_trusts_a_localizable_node_at_least_as_deep():
    node = _te_at_depth_two()
    node.handle(3, [_te_state(6, state=NodeState.LOCALIZABLE, parents=(0, 3), roots=(0, 1), level=2, position=(10.0, -H))])
    assert node.state is NodeState.LOCALIZABLE


def test_te_does_not_trust_a_shallower_node_of_its_own_block():
    node = _te_at_depth_two()
    node.handle(3, [_te_state(4, state=NodeState.LOCALIZABLE, parents=(0, 1), roots=(0, 1), level=1, position=(10.0, -H))])
    assert node.state is NodeState.RIGID


def test_te_trusts_a_localizable_node_of_another_block():
    node = _te_at_depth_two()
    foreign = _te_state(7, state=NodeState.LOCALIZABLE, parents=(1, 2), roots=(1, 2), level=1, position=(10.0, -H))
    node.handle(3, [foreign])
    assert node.state is NodeState.LOCALIZABLE


def test_te_needs_the_helper_off_the_root_line():
    node = _te_at_depth_two()
    node.handle(3, [_te_state(7, state=NodeState.LOCALIZABLE, roots=(1, 2), level=1, position=(40.0, 0.0))])
    assert node.state is NodeState.RIGID


def test_te_localizable_tuple_carries_position_and_depth():
    node = _te_at_depth_two()
    assert node.branch_tuple().position is None
    node.handle(3, [_beacon_state(2, BEACONS[2])])
    b = node.branch_tuple()
    assert b.position == (10.0, H) and b.level == 2


def test_te_forgets_candidates_that_moved_away():
    node = _te_at_depth_two()
    assert node.set_neighbors([0, 4])
    assert set(node.P) == {0}


# --- ITE ---


def test_ite_localizes_next_to_three_beacons(fan_net):
    trace = run(fan_net, "ite")
    assert trace.final_states[fan_net.node_by_label("v")] is NodeState.LOCALIZABLE


def test_ite_non_beacons_advertise_branches_not_a_single_candidate():
    node = ITENode(_ctx())
    node.handle(1, [_beacon_state(0, BEACONS[0]), _beacon_state(1, BEACONS[1])])
    assert node.candidate() is None
    assert (0, 1) in node.branches


# --- TP ---


def test_tp_needs_three_non_collinear_anchors():
    node = TPNode(_ctx())
    node.handle(1, [_anchor_state(k, (10.0 * k, 0.0)) for k in range(3)])
    assert node.state is NodeState.FLEXIBLE
    out = node.handle(2, [_anchor_state(7, (10.0, 10.0))])
    assert node.state is NodeState.LOCALIZABLE
    assert out[0].candidate.b.position == (10.0, H)


def test_tp_ignores_rigid_neighbors():
    node = TPNode(_ctx())
    rigid = BranchTuple(state=NodeState.RIGID)
    inbox = [
        Message(kind=MessageKind.STATE, sender=k, candidate=ParentCandidate(id=k, b=rigid))
        for k in range(3)
    ]
    node.handle(1, inbox)
    assert node.anchors == {}


def test_tp_forgets_anchors_that_moved_away():
    node = TPNode(_ctx(neighbors=(0, 1, 2, 7)))
    node.handle(1, [_anchor_state(k, (10.0 * k, 0.0)) for k in (0, 1, 7)])
    node.set_neighbors([0, 1, 2])
    assert set(node.anchors) == {0, 1}


# --- WE ---


def test_we_learns_its_neighborhood_from_hello(hex_wheel):
    engine = SimulationEngine(hex_wheel, "we")
    engine.run_until_quiet()
    hub = engine.nodes[hex_wheel.node_by_label("h")]
    assert nx.is_isomorphic(hub.neighbor_graph(), nx.cycle_graph(6))


def test_we_marks_a_whole_wheel(hex_wheel):
    trace = run(hex_wheel, "we")
    assert localizable_nodes(trace) == list(hex_wheel.nodes)


def test_we_needs_a_rim_cycle(fan_net):
    # v hears three beacons but r1 and q are not adjacent, so no wheel closes.
    trace = run(fan_net, "we")
    assert trace.final_states[fan_net.node_by_label("v")] is NodeState.FLEXIBLE


def test_star_hub_is_trilaterated_but_not_wheeled():
    star = fixture(
        [
            ("hub", 0.0, 0.0, False),
            ("e", 20.0, 0.0, True),
            ("n", 0.0, 20.0, True),
            ("w", -20.0, 0.0, True),
            ("s", 0.0, -20.0, False),
        ]
    )
    assert run(star, "we").final_states[0] is NodeState.FLEXIBLE
    assert run(star, "tp").final_states[0] is NodeState.LOCALIZABLE


def _hello(sender, neighbors):
    return Message(kind=MessageKind.HELLO, sender=sender, neighbors=tuple(neighbors))


def test_first_rim_walks_in_id_order_and_respects_the_cap():
    assert first_rim(nx.complete_graph(4), 0, 6) == [0, 1, 2]
    assert first_rim(nx.cycle_graph(6), 0, 6) == [0, 1, 2, 3, 4, 5]
    assert first_rim(nx.cycle_graph(6), 0, 5) is None
    assert first_rim(nx.path_graph(5), 0, 6) is None


def test_we_hub_only_checks_the_wheel_it_built():
    # Rims 0-1-2 and 3-4-5 both close around the hub; the walk settles on the first.
    anchors = {3: (0.0, 0.0), 4: (20.0, 0.0), 5: (10.0, 15.0)}
    node = WENode(_ctx(node_id=9, neighbors=range(6), beacon_positions=anchors))
    node.handle(1, [_hello(0, (1, 2, 9)), _hello(1, (0, 2, 9)), _hello(2, (0, 1, 9)),
                    _hello(3, (4, 5, 9)), _hello(4, (3, 5, 9)), _hello(5, (3, 4, 9))])
    assert node.rim == [0, 1, 2]
    assert node.state is NodeState.FLEXIBLE


def test_we_forgets_departed_neighbors_but_not_beacons():
    node = WENode(_ctx(neighbors=(0, 1, 7)))
    node.handle(1, [_hello(7, (0, 5)), _anchor_state(7, (40.0, 40.0)), _hello(0, (5, 7))])
    assert 7 in node.anchors and 7 in node.adjacency
    node.set_neighbors([0, 1])
    assert 7 not in node.anchors and 7 not in node.adjacency
    assert set(BEACONS) <= set(node.anchors)
