from statistics import mean, median

import pytest

from src.models.exceptions import GenerationFailure, InfeasibleDegrees, InfeasiblePartition
from src.models.lfr_models import GenerationReport, LfrParams
from src.tools.edge_list import write_edge_list, write_partition
from src.tools.powerlaw import STAGE_DEGREES, solve_lower_bound, substream, truncated_mean
from src.workflows.graph_core import validate
from src.workflows.lfr_generator import (
    generate, generation_report, internal_degrees, sample_community_sizes, sample_powerlaw_degrees,
)

SMALL = LfrParams(n=200, gamma=2.5, mu=0.3, average_degree=8, max_degree=20,
                  min_community=20, max_community=50, seed=1)
DEFAULTS = LfrParams()


def test_default_parameters():
    assert (DEFAULTS.n, DEFAULTS.tau1, DEFAULTS.tau2, DEFAULTS.mu) == (1000, 2.5, 2.0, 0.5)
    assert (DEFAULTS.average_degree, DEFAULTS.max_degree) == (20, 50)
    assert (DEFAULTS.min_community, DEFAULTS.max_community) == (20, 100)


def test_params_validation():
    with pytest.raises(ValueError):
        LfrParams(mu=1.0)
    with pytest.raises(ValueError):
        LfrParams(gamma=1.0)
    with pytest.raises(ValueError):
        LfrParams(min_community=50, max_community=20)


def test_fingerprint_tracks_every_field():
    assert DEFAULTS.fingerprint() == LfrParams().fingerprint()
    assert DEFAULTS.fingerprint() != DEFAULTS.with_seed(1).fingerprint()
    assert DEFAULTS.fingerprint() != DEFAULTS.model_copy(update={"mu": 0.6}).fingerprint()


def test_lower_bound_solver_hits_target_mean():
    k_min = solve_lower_bound(2.5, 20.0, 50)
    assert truncated_mean(2.5, k_min, 50.0) == pytest.approx(20.0, abs=1e-5)


def test_degree_sum_even_and_capped():
    for seed in range(20):
        degrees = sample_powerlaw_degrees(DEFAULTS.with_seed(seed))
        assert len(degrees) == 1000
        assert sum(degrees) % 2 == 0
        assert min(degrees) >= 1
        assert max(degrees) <= 50


def test_degrees_collapse_when_mean_equals_cap():
    params = LfrParams(n=100, average_degree=30, max_degree=30, min_community=20, max_community=50)
    assert sample_powerlaw_degrees(params) == [30] * 100


def test_infeasible_degrees():
    params = LfrParams(average_degree=60, max_degree=50)
    with pytest.raises(InfeasibleDegrees) as info:
        sample_powerlaw_degrees(params)
    assert info.value.stage == "degrees"
    assert info.value.exit_code == 3


def test_degrees_use_their_own_substream():
    params = DEFAULTS.with_seed(9)
    assert sample_powerlaw_degrees(params) == sample_powerlaw_degrees(params, substream(9, STAGE_DEGREES))


def test_empirical_mean_degree():
    means = [mean(sample_powerlaw_degrees(DEFAULTS.with_seed(seed))) for seed in range(100)]
    assert abs(mean(means) - 20) <= 1
    assert all(abs(m - 20) <= 2.5 for m in means)


def test_forced_community_sizes():
    params = LfrParams(n=40, min_community=20, max_community=20, average_degree=5, max_degree=10)
    assert sample_community_sizes(params) == [20, 20]


def test_single_community_fits():
    params = LfrParams(n=30, min_community=20, max_community=100, average_degree=5, max_degree=10)
    assert sample_community_sizes(params) == [30]


def test_infeasible_partition():
    params = LfrParams(n=10, min_community=20, max_community=100, average_degree=5, max_degree=9)
    with pytest.raises(InfeasiblePartition) as info:
        sample_community_sizes(params)
    assert info.value.stage == "community_sizes"


def test_community_sizes_at_full_scale():
    for seed in range(100):
        sizes = sample_community_sizes(DEFAULTS.with_seed(seed))
        assert sum(sizes) == 1000
        assert all(20 <= s <= 100 for s in sizes)


def test_internal_degree_rounds_half_up():
    assert internal_degrees([1, 3, 5, 20, 7], 0.5) == [1, 2, 3, 10, 4]
    assert internal_degrees([10], 0.25) == [8]


def test_generate_small_graph():
    graph, truth = generate(SMALL)
    validate(graph)
    assert graph.n == 200
    assert max(graph.degree) <= SMALL.max_degree
    assert graph.degree == tuple(sample_powerlaw_degrees(SMALL))
    assert sum(truth.community_sizes) == 200
    assert all(20 <= s <= 50 for s in truth.community_sizes)
    assert sorted(truth.partition().sizes()) == sorted(truth.community_sizes)


def test_generate_is_deterministic():
    first_graph, first_truth = generate(SMALL)
    second_graph, second_truth = generate(SMALL)
    assert write_edge_list(first_graph) == write_edge_list(second_graph)
    assert write_partition(first_truth.partition()) == write_partition(second_truth.partition())
    other, _ = generate(SMALL.with_seed(2))
    assert write_edge_list(other) != write_edge_list(first_graph)


def test_generate_propagates_infeasible_parameters():
    with pytest.raises(GenerationFailure):
        generate(LfrParams(n=10, min_community=20, max_community=100, average_degree=5, max_degree=9))


def test_generation_report(tmp_path):
    graph, truth = generate(SMALL)
    report = generation_report(SMALL, graph, truth)
    assert report.seed == 1
    assert report.max_degree <= 20
    assert report.mean_degree == pytest.approx(2 * graph.edge_count / 200)
    assert report.connected == (report.components == 1)
    membership = truth.membership
    errors = [
        abs(sum(membership[w] != membership[v] for w in graph.adjacency[v]) / graph.degree[v] - SMALL.mu)
        for v in range(graph.n) if graph.degree[v]
    ]
    assert report.mean_abs_mixing_error == pytest.approx(mean(errors))
    assert report.mean_abs_mixing_error >= abs(report.mean_mixing - SMALL.mu) - 1e-12
    text = report.to_text()
    assert "seed=1\n" in text
    assert f"connected={'yes' if report.connected else 'no'}" in text
    reread = GenerationReport.from_text(text)
    assert reread.fingerprint == SMALL.fingerprint()
    assert reread.mean_mixing == pytest.approx(report.mean_mixing, abs=1e-6)


@pytest.mark.slow
def test_full_scale_mixing():
    medians, means = [], []
    for seed in range(25):
        params = DEFAULTS.with_seed(seed)
        graph, truth = generate(params)
        report = generation_report(params, graph, truth)
        assert max(graph.degree) <= 50
        assert all(20 <= s <= 100 for s in truth.community_sizes)
        assert report.mean_abs_mixing_error <= 0.05
        medians.append(report.median_mixing)
        means.append(report.mean_mixing)
    assert abs(median(medians) - 0.5) <= 0.05
    assert abs(mean(means) - 0.5) <= 0.05
