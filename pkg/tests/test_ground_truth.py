import networkx as nx
import pytest

from localizability_sim.exceptions import GraphTooLargeError, NetworkError
from localizability_sim.scenarios.scenario_library import build_scenario
from localizability_sim.services.graph_core import build_network, to_constraint_graph
from localizability_sim.services.ground_truth import (
    redundantly_rigid_components,
    rr3p_localizable_set,
    three_disjoint_paths_to_beacons,
)


@pytest.fixture
def square_net():
    # K4 in radio range; three beacons, node 3 unknown.
    return build_network([(0, 0), (10, 0), (0, 10), (10, 10)], [0, 1, 2], 20.0)


def test_components_of_k4_and_two_k4s(k4):
    assert redundantly_rigid_components(k4) == [[0, 1, 2, 3]]
    g = nx.complete_graph(4)
    g.add_edges_from(nx.complete_graph([3, 4, 5, 6]).edges)
    assert redundantly_rigid_components(g) == [[0, 1, 2, 3], [3, 4, 5, 6]]


def test_trees_have_no_redundant_component():
    assert redundantly_rigid_components(nx.balanced_tree(2, 3)) == []


def test_three_paths_next_to_three_beacons(k4):
    found, paths = three_disjoint_paths_to_beacons(k4, 3, [0, 1, 2])
    assert found
    assert sorted(p[-1] for p in paths) == [0, 1, 2]
    assert all(p[0] == 3 for p in paths)


def test_paths_are_vertex_disjoint_apart_from_the_start():
    g = nx.Graph([(9, 4), (9, 5), (9, 6), (4, 0), (5, 1), (6, 2), (4, 5)])
    found, paths = three_disjoint_paths_to_beacons(g, 9, [0, 1, 2])
    assert found
    inner = [v for p in paths for v in p[1:]]
    assert len(inner) == len(set(inner))


def test_cut_vertex_blocks_three_paths():
    g = nx.Graph([(9, 4), (4, 0), (4, 1), (4, 2)])
    assert three_disjoint_paths_to_beacons(g, 9, [0, 1, 2]) == (False, None)


def test_path_search_rejects_bad_arguments(k4):
    with pytest.raises(NetworkError):
        three_disjoint_paths_to_beacons(k4, 3, [0, 1])
    with pytest.raises(NetworkError):
        three_disjoint_paths_to_beacons(k4, 0, [0, 1, 2])


def test_k4_with_three_beacons_is_fully_localizable(square_net):
    result = rr3p_localizable_set(square_net)
    assert result.localizable == [0, 1, 2, 3]
    assert not result.degenerate
    witness = result.witnesses[3]
    assert sorted(witness.beacons) == [0, 1, 2]


def test_collinear_beacons_are_degenerate():
    net = build_network([(0, 0), (10, 0), (20, 0), (10, 10)], [0, 1, 2], 30.0)
    result = rr3p_localizable_set(net)
    assert result.degenerate
    assert result.localizable == [0, 1, 2]


def test_two_beacons_are_degenerate(square_net):
    net = build_network([p.as_tuple() for p in square_net.positions.values()], [0, 1], 20.0)
    assert rr3p_localizable_set(net).localizable == [0, 1]


def test_closer_network_is_entirely_localizable(closer_net):
    assert rr3p_localizable_set(closer_net).localizable == list(closer_net.nodes)


def test_witness_paths_use_constraint_edges():
    net = build_scenario("gap")
    g = to_constraint_graph(net)
    result = rr3p_localizable_set(net)
    for witness in result.witnesses.values():
        for path in witness.paths:
            assert all(g.has_edge(a, b) for a, b in zip(path, path[1:]))


@pytest.mark.parametrize("name, labels", [("gap", {"A", "B", "C"}), ("border", {"A", "B"})])
def test_oracle_reaches_nodes_trilateration_misses(name, labels):
    net = build_scenario(name)
    localizable = {net.label(n) for n in rr3p_localizable_set(net).localizable}
    assert labels <= localizable


def test_oracle_refuses_huge_networks(monkeypatch, square_net):
    from localizability_sim import config

    monkeypatch.setattr(config, "ORACLE_MAX_NODES", 3)
    with pytest.raises(GraphTooLargeError):
        rr3p_localizable_set(square_net)
