from collections import defaultdict

import numpy as np
import pytest

from localizability_sim.exceptions import UnknownScenarioError
from localizability_sim.models.protocol_models import NodeState
from localizability_sim.scenarios.scenario_library import (
    SCENARIOS,
    build_scenario,
    get_scenario,
    scenario_names,
)
from localizability_sim.services.experiment_service import run_protocol, run_scenario
from localizability_sim.services.sim_engine import convergence_round, localizable_nodes

HAND_BUILT = ["closer", "gap", "border", "gc_ring", "dual_v", "chain", "exp1", "exp2"]

EXPECTATIONS = [
    (name, protocol, labels)
    for name, scenario in SCENARIOS.items()
    if not scenario.statistical and name != "sparse4"
    for protocol, labels in scenario.expected.items()
]


def _localized(net, trace):
    return {net.label(n) for n in localizable_nodes(trace) if n not in net.beacons}


def _rounds_by_label(net, trace, state):
    rounds = {}
    for t in trace.transitions:
        if t.new is state:
            rounds[net.label(t.node)] = t.round
    return rounds


def _grouped(rounds):
    groups = defaultdict(set)
    for label, r in rounds.items():
        groups[r].add(label)
    return [groups[r] for r in sorted(groups)]


def test_catalogue_lists_every_scenario():
    assert set(scenario_names()) == {
        "gap", "border", "gc_ring", "dual_v", "chain", "closer", "sparse4",
        "hole_T0", "hole_T1", "hole_T2", "exp1", "exp2",
    }


def test_unknown_scenario_name_is_rejected():
    with pytest.raises(UnknownScenarioError):
        get_scenario("Gap")


@pytest.mark.parametrize("name, protocol, labels", EXPECTATIONS)
def test_scenario_outcome_is_frozen(name, protocol, labels):
    scenario = get_scenario(name)
    net = build_scenario(name)
    trace = run_protocol(net, protocol, moves=scenario.moves)
    assert _localized(net, trace) == set(labels)


def test_closer_converges_in_four_rounds():
    net = build_scenario("closer")
    assert convergence_round(run_protocol(net, "te")) == 4


def test_chain_localizes_back_from_the_closer():
    net = build_scenario("chain")
    trace = run_protocol(net, "te")
    blue = _rounds_by_label(net, trace, NodeState.LOCALIZABLE)
    assert blue == {"v7": 6, "v6": 7, "v5": 7, "v4": 8, "v3": 8, "v1": 9}
    assert trace.final_states[net.node_by_label("v2")] is NodeState.RIGID


def test_dual_v_needs_a_handshake():
    net = build_scenario("dual_v")
    trace = run_protocol(net, "te")
    assert trace.control_messages > 0
    blue = _rounds_by_label(net, trace, NodeState.LOCALIZABLE)
    assert max(blue.values()) <= 7


def test_exp1_rigid_and_localizable_orders():
    net = build_scenario("exp1")
    trace = run_protocol(net, "te")
    yellow = _grouped(_rounds_by_label(net, trace, NodeState.RIGID))
    blue = _grouped(_rounds_by_label(net, trace, NodeState.LOCALIZABLE))
    assert yellow == [{"3", "C"}, {"4", "B"}, {"5"}, {"6"}, {"7"}, {"8"}, {"9"}]
    assert blue == [{"9"}, {"8", "7"}, {"6", "5"}, {"4", "3"}]
    for label in ("B", "C"):
        assert trace.final_states[net.node_by_label(label)] is NodeState.RIGID


def test_exp2_joins_blocks_after_the_move():
    scenario = get_scenario("exp2")
    net = build_scenario("exp2")
    trace = run_protocol(net, "te", moves=scenario.moves)
    (t0,) = trace.relocations
    assert t0 == 8
    blue = _rounds_by_label(net, trace, NodeState.LOCALIZABLE)
    assert all(r > t0 for r in blue.values())
    assert _grouped({label: r - t0 for label, r in blue.items()}) == [
        {"D", "E"},
        {"B", "C", "5", "7"},
        {"4", "6"},
        {"3"},
    ]
    assert blue["E"] == t0 + 3
    assert trace.final_states[net.node_by_label("8")] is NodeState.RIGID


def test_sparse_beacons_defeat_tp_and_we_but_not_te():
    net = build_scenario("sparse4")
    assert len(net.beacons) == 4
    assert len(_localized(net, run_protocol(net, "te"))) >= 1
    assert _localized(net, run_protocol(net, "tp")) == set()
    assert _localized(net, run_protocol(net, "we")) == set()


@pytest.mark.parametrize("name", HAND_BUILT)
def test_hand_built_scenarios_are_sound(name):
    report = run_scenario(name)
    assert report.rr3p is not None
    assert report.reports
    for protocol, run_report in report.reports.items():
        assert run_report.sound, f"{name}/{protocol}: {run_report.violations}"
        assert run_report.C <= run_report.rr3p_size


@pytest.mark.slow
@pytest.mark.parametrize("name", ["hole_T0", "hole_T1", "hole_T2"])
def test_hole_networks_order_te_over_we_over_tp(name):
    L = defaultdict(list)
    for seed in range(1, 6):
        net = build_scenario(name, seed)
        for protocol in ("te", "we", "tp"):
            L[protocol].append(len(localizable_nodes(run_protocol(net, protocol))) / net.size)
    assert np.mean(L["te"]) > np.mean(L["we"]) > np.mean(L["tp"])


@pytest.mark.slow
def test_hole_t0_gaps_are_wide():
    L = defaultdict(list)
    for seed in range(1, 6):
        net = build_scenario("hole_T0", seed)
        for protocol in ("te", "we", "tp"):
            L[protocol].append(len(localizable_nodes(run_protocol(net, protocol))) / net.size)
    te, we, tp = (float(np.mean(L[p])) for p in ("te", "we", "tp"))
    assert te - we >= 0.10
    assert we - tp >= 0.10


@pytest.mark.slow
def test_sparse4_is_sound_against_the_oracle():
    report = run_scenario("sparse4")
    assert all(r.sound for r in report.reports.values())
