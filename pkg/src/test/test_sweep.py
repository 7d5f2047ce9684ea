import csv
import io

import pytest

from conftest import SMALL_LFR
from src.models.exceptions import EmptyInput
from src.models.experiment_models import CellResult, SummaryRow
from src.workflows.sweep import (
    PER_SEED_HEADER, SKIPPED_HEADER, best_parameters, open_ledger, quartiles, run_sweep, summarise,
)

OUTPUTS = ("per_seed.csv", "summary.csv", "best_params.csv", "skipped_seeds.csv")


def read_outputs(folder):
    return {name: (folder / name).read_text(encoding="utf-8") for name in OUTPUTS}


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_quartiles():
    assert quartiles([5, 1, 4, 2, 3]) == (2, 3, 4)
    assert quartiles([7]) == (7, 7, 7)
    assert quartiles(list(range(1001))) == (250, 500, 750)
    assert quartiles([0.1, 0.9, 0.5, 0.3]) == (0.1, 0.3, 0.5)
    with pytest.raises(EmptyInput):
        quartiles([])


def summary_row(variant, param, median, gamma=2.5, mu=0.5):
    return SummaryRow(gamma, mu, variant, param, 3, median, median, median, 0.0, 0.0, 0.0)


def test_best_parameters_prefers_median_then_smaller_param():
    summary = [
        summary_row("standard", 40, 0.70),
        summary_row("standard", 35, 0.70),
        summary_row("standard", 45, 0.65),
        summary_row("flat", 100, 0.72),
        summary_row("flat", 98, 0.71),
        summary_row("flat", 90, 0.60, mu=0.6),
    ]
    best = {(r.mu, r.variant): r.param for r in best_parameters(summary)}
    assert best == {(0.5, "standard"): 35, (0.5, "flat"): 100, (0.6, "flat"): 90}


def test_summarise_groups_and_orders():
    cells = [
        CellResult(2.5, 0.5, seed, "standard", 40, mcc_all=value, mcc_lowhigh=value / 2)
        for seed, value in enumerate([0.2, 0.8, 0.5, 0.4, 0.9])
    ]
    (row,) = summarise(cells)
    assert row.samples == 5
    assert (row.q1, row.median, row.q3) == (0.4, 0.5, 0.8)
    assert (row.lowhigh_q1, row.lowhigh_median, row.lowhigh_q3) == (0.2, 0.25, 0.4)


def test_small_sweep_outputs(small_config):
    config = small_config()
    result = run_sweep(config)
    assert len(result.cells) == 3 * 4
    assert result.skipped == []

    out = config.output_dir
    files = read_outputs(out)
    per_seed = rows(files["per_seed.csv"])
    assert files["per_seed.csv"].splitlines()[0] == ",".join(PER_SEED_HEADER)
    assert [(r["seed"], r["variant"], r["param"]) for r in per_seed[:4]] == [
        ("0", "flat", "10"), ("0", "flat", "20"), ("0", "standard", "0.50"), ("0", "standard", "1.00"),
    ]
    for r in per_seed:
        assert -1.0 <= float(r["mcc_all"]) <= 1.0

    summary = rows(files["summary.csv"])
    assert len(summary) == 4
    for r in summary:
        sample = [p["mcc_all"] for p in per_seed if (p["variant"], p["param"]) == (r["variant"], r["param"])]
        assert r["samples"] == "3"
        assert r["median"] in sample
        assert float(r["q1"]) <= float(r["median"]) <= float(r["q3"])

    best = rows(files["best_params.csv"])
    assert sorted(r["variant"] for r in best) == ["flat", "standard"]
    assert files["skipped_seeds.csv"] == ",".join(SKIPPED_HEADER) + "\n"
    assert (out / "metrics.prom").exists()
    assert (out / "ledger.sqlite3").exists()
    assert (out / "graphs" / "gamma2.5_mu0.3" / "seed0.edges").exists()


def test_rerun_is_byte_identical_and_does_no_new_work(small_config):
    config = small_config()
    run_sweep(config)
    first = read_outputs(config.output_dir)
    second_result = run_sweep(config)
    assert read_outputs(config.output_dir) == first
    assert len(second_result.cells) == 12


def test_resume_matches_a_single_run(small_config, tmp_path):
    partial = small_config(seeds="0..1")
    run_sweep(partial)
    resumed = small_config()
    run_sweep(resumed)

    fresh = small_config(output_dir=tmp_path / "fresh")
    run_sweep(fresh)
    assert read_outputs(resumed.output_dir) == read_outputs(fresh.output_dir)


def test_changed_cuts_rerun_the_cells(small_config):
    run_sweep(small_config())
    other = small_config(low_cut=3, high_cut=9)
    result = run_sweep(other)
    assert len(result.cells) == 12
    assert all((c.low_cut, c.high_cut) == (3, 9) for c in result.cells)


def test_changed_generator_settings_are_not_reused(small_config, tmp_path):
    run_sweep(small_config())
    denser = small_config(lfr={**SMALL_LFR, "average_degree": 8})
    assert denser.lfr_fingerprint != small_config().lfr_fingerprint
    resumed = run_sweep(denser)
    assert all(c.lfr_fingerprint == denser.lfr_fingerprint for c in resumed.cells)

    fresh = small_config(lfr={**SMALL_LFR, "average_degree": 8}, output_dir=tmp_path / "fresh")
    run_sweep(fresh)
    assert read_outputs(denser.output_dir) == read_outputs(fresh.output_dir)
    ledger = open_ledger(denser.output_dir)
    assert resumed.cells
    assert len(ledger.load_cells(lfr_fingerprint=denser.lfr_fingerprint)) == len(resumed.cells)
    assert len(ledger.load_cells(lfr_fingerprint=small_config().lfr_fingerprint)) == 12


def test_failed_generation_skips_the_seed(small_config):
    config = small_config(lfr={"n": 10, "min_community": 20, "max_community": 100}, seeds="0..1")
    result = run_sweep(config)
    assert result.cells == []
    assert [s.seed for s in result.skipped] == [0, 1]
    assert all(s.stage == "community_sizes" for s in result.skipped)
    skipped = rows((config.output_dir / "skipped_seeds.csv").read_text(encoding="utf-8"))
    assert [r["seed"] for r in skipped] == ["0", "1"]

    again = run_sweep(config)
    assert [s.seed for s in again.skipped] == [0, 1]
    assert len(open_ledger(config.output_dir).load_skipped()) == 2


def test_skipped_seeds_stay_with_their_generator_settings(small_config):
    run_sweep(small_config(lfr={"n": 10, "min_community": 20, "max_community": 100}, seeds="0..1"))
    result = run_sweep(small_config(seeds="0..1"))
    assert result.skipped == []
    assert len(result.cells) == 2 * 4


@pytest.mark.slow
def test_worker_count_does_not_change_outputs(small_config, tmp_path):
    serial = small_config(output_dir=tmp_path / "serial")
    parallel = small_config(output_dir=tmp_path / "parallel", parallelism=2)
    run_sweep(serial)
    run_sweep(parallel)
    assert read_outputs(serial.output_dir) == read_outputs(parallel.output_dir)
