import pytest

from localizability_sim.services import property_checks


@pytest.mark.parametrize(
    "check, count",
    [
        (property_checks.check_extension_minimal_rigidity, 60),
        (property_checks.check_branch_no_tight_subset, 40),
        (property_checks.check_two_vertex_cuts, 40),
        (property_checks.check_closer_global_rigidity, 40),
        (property_checks.check_monotonicity, 30),
    ],
)
def test_reduced_suite_holds(check, count):
    result = check(count=count, seed=11)
    assert result.passed, result.counterexample
    assert result.cases == count


def test_oracle_equivalence_covers_every_small_graph():
    result = property_checks.check_oracle_equivalence(count=20, seed=11)
    assert result.passed, result.counterexample
    # the atlas part alone contributes every graph on 2 to 6 vertices
    assert result.cases > 200


def test_protocols_are_sound_on_a_few_networks():
    result = property_checks.check_protocol_soundness(count=4, seed=11)
    assert result.passed, result.counterexample
    assert result.cases == 4


def test_soundness_configs_cycle_the_grid():
    cfgs = list(property_checks.soundness_configs(4, seed=3))
    assert [(c.B, c.N) for c in cfgs] == [(0.06, 2.4), (0.06, 3.2), (0.1, 2.4), (0.1, 3.2)]
    assert [c.seed for c in cfgs] == [3, 4, 5, 6]
    assert all(c.S == 50 for c in cfgs)


def test_run_all_scales_counts():
    results = property_checks.run_all(scale=0.01, seed=2)
    assert len(results) == len(property_checks.ALL_CHECKS)
    assert results[0].cases == 10
    assert all(r.passed for r in results)


@pytest.mark.slow
@pytest.mark.parametrize("name", list(property_checks.ALL_CHECKS))
def test_full_size_suite_holds(name):
    result = property_checks.ALL_CHECKS[name]()
    assert result.passed, result.counterexample
    assert result.cases >= property_checks.DEFAULT_COUNTS[name]
