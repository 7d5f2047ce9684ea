"""OVERVIEW:
Sweep orchestration: generate benchmark graphs, climb under every r and R,
score the result against the planted partition, keep everything in the ledger.

Flow of `run_sweep(config)`:
1. Ask the ledger which (γ, μ, seed, variant, param) cells already exist
   for the same generator template and low/high cuts, and which seeds were
   skipped before under that template.
2. Generate the graph of every seed that still has work (one task per seed,
   in parallel). A GenerationFailure skips the seed: it is logged, counted
   and recorded, never retried on later runs.
3. Run the missing cells (one task per climb, in parallel). Cells are sorted
   by seed so a worker's in-memory graph cache stays warm.
4. Write per_seed.csv, summary.csv, best_params.csv and skipped_seeds.csv
   from the ledger, sorted, so the files do not depend on worker count,
   completion order or how many runs it took to fill the ledger.
"""

import csv
import io
import logging
import multiprocessing as mp
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, TypeVar, Union

from src.cli.config import database_url
from src.cli.monitoring import RunLogger, record_climb, record_generation_failure, setup_logging, write_metrics
from src.database.connection import DatabaseManager
from src.memory.graph_cache import GraphCache
from src.models.exceptions import EmptyInput, GenerationFailure
from src.models.experiment_models import (
    CellResult, ExperimentConfig, SkippedSeed, SummaryRow, SweepResult, format_number,
)
from src.models.graph_models import Graph
from src.models.lfr_models import GroundTruth, LfrParams
from src.models.score_models import FlatVariant, StandardVariant
from src.workflows.evaluation import low_high_mcc, pair_confusion
from src.workflows.greedy_cluster import GreedyResult, greedy_cluster

logger = logging.getLogger(__name__)

T = TypeVar("T")

PER_SEED_HEADER = ["gamma", "mu", "seed", "variant", "param", "mcc_all", "mcc_lowhigh"]
SUMMARY_HEADER = ["gamma", "mu", "variant", "param", "samples", "q1", "median", "q3",
                  "lowhigh_q1", "lowhigh_median", "lowhigh_q3"]
BEST_HEADER = ["gamma", "mu", "variant", "param", "q1", "median", "q3"]
SKIPPED_HEADER = ["gamma", "mu", "seed", "stage", "reason"]

LEDGER_BATCH = 200


def quartiles(samples: Sequence[T]) -> Tuple[T, T, T]:
    """Order statistics at floor((m−1)/4), floor((m−1)/2), floor(3(m−1)/4); no interpolation"""
    if not samples:
        raise EmptyInput("quartiles of an empty sample")
    ordered = sorted(samples)
    m = len(ordered)
    return ordered[(m - 1) // 4], ordered[(m - 1) // 2], ordered[3 * (m - 1) // 4]


def make_variant(kind: str, param: int) -> Union[StandardVariant, FlatVariant]:
    if kind == "standard":
        return StandardVariant(r_percent=param)
    return FlatVariant(R=param)


def evaluate_cell(graph: Graph, truth: GroundTruth, params: LfrParams, kind: str, param: int,
                  low_cut: int, high_cut: int) -> Tuple[CellResult, GreedyResult]:
    """One climb on one benchmark graph, scored against the planted partition"""
    variant = make_variant(kind, param)
    result = greedy_cluster(graph, variant)
    planted = truth.partition()
    cell = CellResult(
        gamma=params.tau1,
        mu=params.mu,
        seed=params.seed,
        variant=kind,
        param=param,
        mcc_all=pair_confusion(planted, result.partition).mcc(),
        mcc_lowhigh=low_high_mcc(planted, result.partition, graph, low_cut, high_cut),
        low_cut=low_cut,
        high_cut=high_cut,
        cluster_count=result.partition.cluster_count,
        merges=result.merges,
        score_num=result.final_score.numerator,
        score_den=result.final_score.denominator,
        duration_ms=result.duration_ms,
        lfr_fingerprint=params.template_fingerprint(),
    )
    return cell, result


# ---------------------------
# Worker side
# ---------------------------
_worker_cache: Optional[GraphCache] = None


def _init_worker(cache_root: str) -> None:
    global _worker_cache
    _worker_cache = GraphCache(cache_root)
    setup_logging()


def _cache(cache_root: str) -> GraphCache:
    global _worker_cache
    if _worker_cache is None or str(_worker_cache.root) != cache_root:
        _worker_cache = GraphCache(cache_root)
    return _worker_cache


@dataclass(frozen=True)
class SeedTask:
    cache_root: str
    params: LfrParams


@dataclass(frozen=True)
class CellTask:
    cache_root: str
    params: LfrParams
    variant: str
    param: int
    low_cut: int
    high_cut: int


def prepare_seed(task: SeedTask) -> Optional[SkippedSeed]:
    """Generate (or find cached) the graph of one seed; a failure becomes a SkippedSeed"""
    params = task.params
    try:
        _cache(task.cache_root).get(params)
    except GenerationFailure as e:
        RunLogger(params.tau1, params.mu, params.seed, name=__name__).warning(
            "graph generation failed, skipping seed", stage=e.stage, reason=str(e)
        )
        return SkippedSeed(params.tau1, params.mu, params.seed, e.stage, str(e), params.template_fingerprint())
    return None


def run_cell(task: CellTask) -> CellResult:
    params = task.params
    graph, truth, _ = _cache(task.cache_root).get(params)
    cell, _ = evaluate_cell(graph, truth, params, task.variant, task.param, task.low_cut, task.high_cut)
    RunLogger(params.tau1, params.mu, params.seed, name=__name__).for_cell(task.variant, cell.param_label).debug(
        "climb finished", mcc_all=round(cell.mcc_all, 6), merges=cell.merges, duration_ms=cell.duration_ms
    )
    return cell


def _execute(function, tasks: List, workers: int, cache_root: str, chunksize: int = 1) -> Iterator:
    """Map in order; in-process for one worker, spawn-context pool otherwise"""
    if workers <= 1 or len(tasks) <= 1:
        for task in tasks:
            yield function(task)
        return
    ctx = mp.get_context("spawn")
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx,
                             initializer=_init_worker, initargs=(cache_root,)) as pool:
        yield from pool.map(function, tasks, chunksize=chunksize)


# ---------------------------
# Orchestrator side
# ---------------------------
def _cells_in(config: ExperimentConfig, cells: Iterable[CellResult], match_cuts: bool = True) -> List[CellResult]:
    """Ledger rows that belong to this config's template and grid (and cuts, unless match_cuts is off)"""
    gammas, mus, seeds = set(config.gammas), set(config.mus), set(config.seeds)
    params = {(v.kind, v.param) for v in config.variants()}
    template = config.lfr_fingerprint
    return sorted(
        c for c in cells
        if c.gamma in gammas and c.mu in mus and c.seed in seeds
        and c.lfr_fingerprint == template
        and (c.variant, c.param) in params
        and (not match_cuts or (c.low_cut, c.high_cut) == (config.low_cut, config.high_cut))
    )


def ledger_cells(config: ExperimentConfig, db: DatabaseManager, match_cuts: bool = True) -> List[CellResult]:
    return _cells_in(
        config, db.load_cells(config.gammas, config.mus, config.seeds, config.lfr_fingerprint), match_cuts
    )


def ledger_skipped(config: ExperimentConfig, db: DatabaseManager) -> List[SkippedSeed]:
    gammas, mus, seeds = set(config.gammas), set(config.mus), set(config.seeds)
    return sorted(
        s for s in db.load_skipped(config.lfr_fingerprint)
        if s.gamma in gammas and s.mu in mus and s.seed in seeds
    )


def summarise(cells: Iterable[CellResult]) -> List[SummaryRow]:
    groups: Dict[Tuple[float, float, str, int], List[CellResult]] = {}
    for cell in cells:
        groups.setdefault((cell.gamma, cell.mu, cell.variant, cell.param), []).append(cell)
    rows = []
    for (gamma, mu, variant, param), members in sorted(groups.items()):
        q1, med, q3 = quartiles([c.mcc_all for c in members])
        lq1, lmed, lq3 = quartiles([c.mcc_lowhigh for c in members])
        rows.append(SummaryRow(gamma, mu, variant, param, len(members), q1, med, q3, lq1, lmed, lq3))
    return rows


def best_parameters(summary: Iterable[SummaryRow]) -> List[SummaryRow]:
    """Per (γ, μ, variant) the row with the greatest median MCC; ties go to the smaller parameter"""
    best: Dict[Tuple[float, float, str], SummaryRow] = {}
    for row in summary:
        key = (row.gamma, row.mu, row.variant)
        current = best.get(key)
        if current is None or row.median > current.median or \
                (row.median == current.median and row.param < current.param):
            best[key] = row
    return [best[key] for key in sorted(best)]


def fmt_mcc(value: float) -> str:
    return f"{value:.6f}"


def csv_text(header: List[str], rows: Iterable[List]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return out.getvalue()


def per_seed_csv(cells: Iterable[CellResult]) -> str:
    return csv_text(PER_SEED_HEADER, (
        [format_number(c.gamma), format_number(c.mu), c.seed, c.variant, c.param_label,
         fmt_mcc(c.mcc_all), fmt_mcc(c.mcc_lowhigh)]
        for c in sorted(cells)
    ))


def summary_csv(summary: Iterable[SummaryRow]) -> str:
    return csv_text(SUMMARY_HEADER, (
        [format_number(r.gamma), format_number(r.mu), r.variant, r.param_label, r.samples,
         fmt_mcc(r.q1), fmt_mcc(r.median), fmt_mcc(r.q3), fmt_mcc(r.lowhigh_q1), fmt_mcc(r.lowhigh_median), fmt_mcc(r.lowhigh_q3)]
        for r in summary
    ))


def best_params_csv(best: Iterable[SummaryRow]) -> str:
    return csv_text(BEST_HEADER, (
        [format_number(r.gamma), format_number(r.mu), r.variant, r.param_label, fmt_mcc(r.q1), fmt_mcc(r.median), fmt_mcc(r.q3)]
        for r in best
    ))


def skipped_csv(skipped: Iterable[SkippedSeed]) -> str:
    return csv_text(SKIPPED_HEADER, (
        [format_number(s.gamma), format_number(s.mu), s.seed, s.stage, s.reason] for s in sorted(skipped)
    ))


def open_ledger(output_dir: Union[str, Path]) -> DatabaseManager:
    return DatabaseManager(database_url(output_dir))


def run_sweep(config: ExperimentConfig, db: Optional[DatabaseManager] = None) -> SweepResult:
    """Fill the ledger for every cell of `config` and write the sweep CSVs"""
    output_dir = Path(config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    cache_root = str(output_dir / "graphs")
    db = db or open_ledger(output_dir)

    variants = [(v.kind, v.param) for v in config.variants()]
    done = {c.key for c in ledger_cells(config, db)}
    skipped_before = {(s.gamma, s.mu, s.seed) for s in ledger_skipped(config, db)}

    pending: Dict[Tuple[float, float, int], List[Tuple[str, int]]] = {}
    for gamma in config.gammas:
        for mu in config.mus:
            for seed in config.seeds:
                if (gamma, mu, seed) in skipped_before:
                    continue
                missing = [(k, p) for k, p in variants if (gamma, mu, seed, k, p) not in done]
                if missing:
                    pending[(gamma, mu, seed)] = missing
    logger.info(
        "sweep planned",
        extra={"seeds": len(pending), "cells": sum(len(m) for m in pending.values()),
               "cells_done": len(done), "workers": config.parallelism},
    )

    # graphs first, one task per seed
    seed_tasks = [SeedTask(cache_root, config.params_for(g, m, s)) for g, m, s in sorted(pending)]
    for task, skipped in zip(seed_tasks, _execute(prepare_seed, seed_tasks, config.parallelism, cache_root)):
        if skipped is None:
            continue
        key = (skipped.gamma, skipped.mu, skipped.seed)
        db.save_skipped(skipped)
        record_generation_failure(skipped.stage, len(pending.pop(key)))

    # then climbs, one task per cell
    cell_tasks = [
        CellTask(cache_root, config.params_for(g, m, s), kind, param, config.low_cut, config.high_cut)
        for (g, m, s), missing in sorted(pending.items())
        for kind, param in missing
    ]
    chunk = max(1, len(variants) // max(1, config.parallelism))
    batch: List[CellResult] = []
    for cell in _execute(run_cell, cell_tasks, config.parallelism, cache_root, chunksize=chunk):
        record_climb(cell.variant, cell.merges, cell.duration_ms)
        batch.append(cell)
        if len(batch) >= LEDGER_BATCH:
            db.save_cells(batch)
            batch = []
    if batch:
        db.save_cells(batch)

    return write_sweep_files(config, db)


def write_sweep_files(config: ExperimentConfig, db: DatabaseManager) -> SweepResult:
    output_dir = Path(config.output_dir)
    cells = ledger_cells(config, db)
    skipped = ledger_skipped(config, db)
    summary = summarise(cells)

    (output_dir / "per_seed.csv").write_text(per_seed_csv(cells), encoding="utf-8")
    (output_dir / "summary.csv").write_text(summary_csv(summary), encoding="utf-8")
    (output_dir / "best_params.csv").write_text(best_params_csv(best_parameters(summary)), encoding="utf-8")
    (output_dir / "skipped_seeds.csv").write_text(skipped_csv(skipped), encoding="utf-8")
    write_metrics(output_dir)

    logger.info("sweep written", extra={"cells": len(cells), "skipped": len(skipped), "out": str(output_dir)})
    return SweepResult(cells=cells, summary=summary, skipped=skipped, output_dir=output_dir)
