"""OVERVIEW:
Tables and figures built from a filled results ledger.

report_tables
    table1.csv  best-parameter global MCC per (γ, μ, variant)
    table2.csv  the low/high restricted MCC at those same parameters
    table3.csv  both pair sets for the hard mixing level (μ = 0.6 by default)
    The best parameter maximises the median global MCC, ties going to the
    smaller parameter. Only ledger rows of the config's generator template,
    γ / μ lists, seeds and r / R grids count, so table1 agrees with the
    best_params.csv the sweep wrote. Restricted values stored in the ledger
    are reused when their cuts match the requested ones; otherwise the climbs
    at the chosen parameters are rerun on the cached graphs.

report_figures
    sweep curves (median with quartile band) against r and against R,
    a per-seed standard-vs-flat scatter at the best parameters, and bucket
    heatmaps (SVG + CSV) for the seeds realising the q1 / median / q3 of the
    standard climb.
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from src.memory.graph_cache import GraphCache
from src.models.exceptions import MissingResults
from src.models.experiment_models import CellResult, ExperimentConfig, SummaryRow, format_number
from src.workflows import figures
from src.workflows.evaluation import bucket_mcc_matrix, degree_buckets
from src.workflows.sweep import (
    best_parameters, csv_text, fmt_mcc, evaluate_cell, ledger_cells, open_ledger, quartiles, summarise,
)

logger = logging.getLogger(__name__)

TABLE_HEADER = ["gamma", "mu", "variant", "param", "q1", "median", "q3"]
TABLE2_HEADER = ["gamma", "mu", "variant", "param", "low_cut", "high_cut", "q1", "median", "q3"]
TABLE3_HEADER = ["pairs", "gamma", "variant", "param", "q1", "median", "q3"]

GroupKey = Tuple[float, float, str, int]


def _load(config: ExperimentConfig, db=None) -> List[CellResult]:
    db = db or open_ledger(config.output_dir)
    cells = ledger_cells(config, db, match_cuts=False)
    if not cells:
        raise MissingResults(f"no sweep results for this configuration under {config.output_dir}; run `sweep` first")
    return cells


def _group(cells: Sequence[CellResult]) -> Dict[GroupKey, List[CellResult]]:
    groups: Dict[GroupKey, List[CellResult]] = {}
    for cell in cells:
        groups.setdefault((cell.gamma, cell.mu, cell.variant, cell.param), []).append(cell)
    for members in groups.values():
        members.sort()
    return groups


def _lowhigh_values(config: ExperimentConfig, members: List[CellResult], low_cut: int, high_cut: int,
                    cache: GraphCache) -> List[float]:
    values = []
    for cell in members:
        if (cell.low_cut, cell.high_cut) == (low_cut, high_cut):
            values.append(cell.mcc_lowhigh)
            continue
        params = config.params_for(cell.gamma, cell.mu, cell.seed)
        graph, truth, _ = cache.get(params)
        rerun, _ = evaluate_cell(graph, truth, params, cell.variant, cell.param, low_cut, high_cut)
        values.append(rerun.mcc_lowhigh)
    return values


def report_tables(config: ExperimentConfig, low_cut: Optional[int] = None, high_cut: Optional[int] = None,
                  hard_mu: float = 0.6, db=None) -> Dict[str, Path]:
    """Write table1/2/3.csv under config.output_dir and return their paths"""
    low_cut = config.low_cut if low_cut is None else low_cut
    high_cut = config.high_cut if high_cut is None else high_cut
    cells = _load(config, db)
    groups = _group(cells)
    best = best_parameters(summarise(cells))
    cache = GraphCache(Path(config.output_dir) / "graphs")

    table1, table2, table3 = [], [], []
    for row in best:
        members = groups[(row.gamma, row.mu, row.variant, row.param)]
        q1, med, q3 = quartiles([c.mcc_all for c in members])
        lq1, lmed, lq3 = quartiles(_lowhigh_values(config, members, low_cut, high_cut, cache))
        gamma, mu = format_number(row.gamma), format_number(row.mu)
        table1.append([gamma, mu, row.variant, row.param_label, fmt_mcc(q1), fmt_mcc(med), fmt_mcc(q3)])
        table2.append([gamma, mu, row.variant, row.param_label, low_cut, high_cut, fmt_mcc(lq1), fmt_mcc(lmed), fmt_mcc(lq3)])
        if row.mu == hard_mu:
            table3.append(["all", gamma, row.variant, row.param_label, fmt_mcc(q1), fmt_mcc(med), fmt_mcc(q3)])
            table3.append(["lowhigh", gamma, row.variant, row.param_label, fmt_mcc(lq1), fmt_mcc(lmed), fmt_mcc(lq3)])
    if not table3:
        logger.info("no results at the hard mixing level, table3 has no rows", extra={"mu": hard_mu})
    table3.sort(key=lambda r: (r[0], float(r[1]), r[2]))

    out = Path(config.output_dir)
    paths = {
        "table1": out / "table1.csv",
        "table2": out / "table2.csv",
        "table3": out / "table3.csv",
    }
    paths["table1"].write_text(csv_text(TABLE_HEADER, table1), encoding="utf-8")
    paths["table2"].write_text(csv_text(TABLE2_HEADER, table2), encoding="utf-8")
    paths["table3"].write_text(csv_text(TABLE3_HEADER, table3), encoding="utf-8")
    logger.info("tables written", extra={"rows": len(table1), "out": str(out)})
    return paths


def quartile_seeds(members: Sequence[CellResult]) -> List[Tuple[str, int]]:
    """(label, seed) for q1 / median / q3: the smallest seed whose MCC equals that order statistic"""
    values = quartiles([c.mcc_all for c in members])
    chosen = []
    for label, value in zip(("q1", "median", "q3"), values):
        seed = min(c.seed for c in members if c.mcc_all == value)
        chosen.append((label, seed))
    return chosen


def _curves(out: Path, summary: List[SummaryRow]) -> List[Path]:
    series: Dict[Tuple[float, float, str], List[SummaryRow]] = {}
    for row in summary:
        series.setdefault((row.gamma, row.mu, row.variant), []).append(row)
    written = []
    for (gamma, mu, variant), rows in sorted(series.items()):
        rows.sort(key=lambda r: r.param)
        xs = [r.param / 100 if variant == "standard" else r.param for r in rows]
        name = f"sweep_{variant}_gamma{format_number(gamma)}_mu{format_number(mu)}.svg"
        written.append(figures.sweep_curve_svg(
            out / name, xs, [r.q1 for r in rows], [r.median for r in rows], [r.q3 for r in rows],
            xlabel="resolution r" if variant == "standard" else "penalty multiplier R",
            title=f"{variant}, γ = {format_number(gamma)}, μ = {format_number(mu)}",
        ))
    return written


def report_figures(config: ExperimentConfig, db=None) -> List[Path]:
    """Write every SVG (and heatmap CSV) under <output_dir>/figures"""
    cells = _load(config, db)
    groups = _group(cells)
    summary = summarise(cells)
    best = {(r.gamma, r.mu, r.variant): r for r in best_parameters(summary)}
    out = Path(config.output_dir) / "figures"
    cache = GraphCache(Path(config.output_dir) / "graphs")

    written = _curves(out, summary)
    for gamma, mu in sorted({(g, m) for g, m, _ in best}):
        tag = f"gamma{format_number(gamma)}_mu{format_number(mu)}"
        standard = best.get((gamma, mu, "standard"))
        flat = best.get((gamma, mu, "flat"))

        if standard is not None and flat is not None:
            x_cells = {c.seed: c for c in groups[(gamma, mu, "standard", standard.param)]}
            y_cells = {c.seed: c for c in groups[(gamma, mu, "flat", flat.param)]}
            seeds = sorted(set(x_cells) & set(y_cells))
            written.append(figures.scatter_svg(
                out / f"scatter_{tag}.svg",
                [x_cells[s].mcc_all for s in seeds], [y_cells[s].mcc_all for s in seeds],
                xlabel=f"MCC, modularity r = {standard.param_label}",
                ylabel=f"MCC, flat modularity R = {flat.param_label}",
                title=f"γ = {format_number(gamma)}, μ = {format_number(mu)}",
            ))

        if standard is None:
            continue
        for label, seed in quartile_seeds(groups[(gamma, mu, "standard", standard.param)]):
            params = config.params_for(gamma, mu, seed)
            graph, truth, _ = cache.get(params)
            buckets = degree_buckets(graph, config.bucket_cap)
            for row in (standard, flat):
                if row is None:
                    continue
                _, climb = evaluate_cell(graph, truth, params, row.variant, row.param,
                                         config.low_cut, config.high_cut)
                matrix = bucket_mcc_matrix(truth.partition(), climb.partition, graph, buckets)
                stem = f"heatmap_{row.variant}_{tag}_{label}_seed{seed}"
                written.append(figures.bucket_heatmap_svg(
                    out / f"{stem}.svg", matrix,
                    title=f"{row.variant} {row.param_label}, seed {seed} ({label})",
                ))
                csv_path = out / f"{stem}.csv"
                csv_path.write_text(matrix.to_csv(), encoding="utf-8")
                written.append(csv_path)
    logger.info("figures written", extra={"files": len(written), "out": str(out)})
    return written
