import networkx as nx
import pytest

from localizability_sim import config as sim_config
from localizability_sim.scenarios.scenario_library import build_scenario


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="Run the statistical suites."
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: statistical suite, runs only with --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def results_dir(tmp_path, monkeypatch):
    """Redirects every saved artifact into a temporary directory."""
    monkeypatch.setattr(sim_config, "RESULTS_DIR", tmp_path)
    return tmp_path


@pytest.fixture
def k4():
    return nx.complete_graph(4)


@pytest.fixture
def closer_net():
    return build_scenario("closer")
