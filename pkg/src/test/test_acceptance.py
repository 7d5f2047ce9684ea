"""Desk-scale replication: 25 graphs of 1000 vertices, every r and R of the desk grid.

Takes tens of minutes; enabled with FLATMOD_RUN_ACCEPTANCE=1.
"""

import os
import warnings

import pytest

from src.models.experiment_models import ExperimentConfig
from src.workflows.sweep import best_parameters, run_sweep

pytestmark = [
    pytest.mark.acceptance,
    pytest.mark.skipif(os.getenv("FLATMOD_RUN_ACCEPTANCE") != "1", reason="set FLATMOD_RUN_ACCEPTANCE=1"),
]

WORKERS = int(os.getenv("FLATMOD_WORKERS", "4"))


def best_by_variant(result):
    return {(r.gamma, r.mu, r.variant): r for r in best_parameters(result.summary)}


@pytest.fixture(scope="module")
def desk_sweep(tmp_path_factory):
    config = ExperimentConfig(gammas=[2.5, 3.5], output_dir=tmp_path_factory.mktemp("desk"), parallelism=WORKERS)
    return best_by_variant(run_sweep(config))


def test_flat_beats_standard(desk_sweep):
    standard = desk_sweep[(2.5, 0.5, "standard")]
    flat = desk_sweep[(2.5, 0.5, "flat")]
    print(f"standard r={standard.param_label} median={standard.median:.4f}; "
          f"flat R={flat.param_label} median={flat.median:.4f}")
    assert flat.median - standard.median >= 0.02


def test_higher_degree_exponent_is_harder(desk_sweep):
    assert desk_sweep[(2.5, 0.5, "standard")].median > desk_sweep[(3.5, 0.5, "standard")].median


def test_low_high_pairs_improve(desk_sweep):
    standard = desk_sweep[(2.5, 0.5, "standard")]
    flat = desk_sweep[(2.5, 0.5, "flat")]
    assert flat.lowhigh_median - standard.lowhigh_median >= 0.02


def test_best_parameters_are_plausible(desk_sweep):
    standard = desk_sweep[(2.5, 0.5, "standard")]
    flat = desk_sweep[(2.5, 0.5, "flat")]
    print(f"best r={standard.param_label} (grid 0.30..0.50), best R={flat.param_label} (grid 80..120)")
    if standard.param in (30, 50) or flat.param in (80, 120):
        warnings.warn(f"best parameter on the edge of the desk grid: r={standard.param_label}, R={flat.param_label}")


def test_hard_mixing_level(tmp_path):
    config = ExperimentConfig(mus=[0.6], seeds="0..14", output_dir=tmp_path, parallelism=WORKERS)
    best = best_by_variant(run_sweep(config))
    assert best[(2.5, 0.6, "flat")].median - best[(2.5, 0.6, "standard")].median >= 0.04
