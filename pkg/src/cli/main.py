""" OVERVIEW:
Command-line entry point of flatmod.

Subcommands:
    generate → build one LFR-style benchmark graph (edges, membership, report)
    cluster  → greedy climb on an edge-list file under modularity (--r) or flat modularity (--R)
    eval     → pair confusion + MCC of a found partition against a planted one;
               with --graph also the low/high restricted MCC and the degree-bucket matrix
    sweep    → generate graphs, climb under every r and R, write per-seed and summary CSVs
    report   → best-parameter tables and SVG figures from a finished sweep

Every subcommand takes --config <file> (JSON or key=value) plus the shared flag
overrides --gamma, --mu, --seed/--seeds, --variant, --r, --R and --out.
Exit codes: 0 success, 1 usage / configuration, 2 bad data, 3 generation failure.
Results go to stdout; logs go to stderr.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from src.cli.config import load_config
from src.cli.monitoring import setup_logging
from src.memory.graph_cache import GraphCache
from src.models.exceptions import ConfigError, FlatmodError
from src.models.experiment_models import ExperimentConfig
from src.models.score_models import FlatVariant, StandardVariant, format_resolution
from src.tools.edge_list import (
    load_edge_list_file, load_partition_file, load_trace, read_text,
    write_id_map, write_partition, write_text, write_trace,
)
from src.workflows.evaluation import (
    bucket_mcc_matrix, degree_buckets, low_high_predicate, pair_confusion, restricted_confusion,
)
from src.workflows.greedy_cluster import greedy_cluster, replay_trace
from src.workflows.reports import report_figures, report_tables
from src.workflows.sweep import run_sweep

logger = logging.getLogger(__name__)


class UsageParser(argparse.ArgumentParser):
    """argparse that reports usage errors as ConfigError (exit 1) instead of exiting with 2"""

    def error(self, message: str):
        raise ConfigError(f"{self.prog}: {message}")


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON or key=value config file")
    parser.add_argument("--out", help="output directory (or file prefix for cluster)")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING, ...")


def _shared(parser: argparse.ArgumentParser, grids: bool = True) -> None:
    parser.add_argument("--gamma", help="degree exponent(s), comma separated for sweeps")
    parser.add_argument("--mu", help="mixing parameter(s), comma separated for sweeps")
    seeds = parser.add_mutually_exclusive_group()
    seeds.add_argument("--seed", help="one seed")
    seeds.add_argument("--seeds", help="seed range a..b (inclusive) or comma list")
    parser.add_argument("--n", type=int, help="vertex count")
    parser.add_argument("--variant", choices=["standard", "flat"], help="restrict to one score")
    if grids:
        parser.add_argument("--r", help="resolution grid, comma separated")
        parser.add_argument("--R", help="penalty grid, comma separated")


def build_parser() -> UsageParser:
    parser = UsageParser(prog="flatmod", description="Greedy modularity vs flat modularity toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=UsageParser)

    generate = sub.add_parser("generate", help="build one benchmark graph")
    _common(generate)
    _shared(generate)

    cluster = sub.add_parser("cluster", help="greedy climb on an edge list")
    _common(cluster)
    _shared(cluster, grids=False)
    cluster.add_argument("graph", help="edge-list file")
    cluster.add_argument("--r", help="resolution for the standard variant (two decimals)")
    cluster.add_argument("--R", help="penalty multiplier for the flat variant")
    cluster.add_argument("--remap", action="store_true", help="accept sparse vertex ids and remap them")
    cluster.add_argument("--replay", help="re-apply a merge trace file instead of climbing")

    evaluate = sub.add_parser("eval", help="MCC of a found partition against the truth")
    _common(evaluate)
    _shared(evaluate)
    evaluate.add_argument("truth", help="membership file of the planted partition")
    evaluate.add_argument("found", help="membership file of the found partition")
    evaluate.add_argument("--graph", help="edge-list file; enables the degree-restricted outputs")
    evaluate.add_argument("--low-cut", type=int)
    evaluate.add_argument("--high-cut", type=int)
    evaluate.add_argument("--bucket-cap", type=int)

    sweep = sub.add_parser("sweep", help="run the r / R sweep")
    _common(sweep)
    _shared(sweep)
    sweep.add_argument("--workers", type=int, help="worker processes")
    sweep.add_argument("--full-scale", action="store_true", help="1001 seeds and full grids (slow)")

    report = sub.add_parser("report", help="tables and figures from a finished sweep")
    _common(report)
    _shared(report)
    report.add_argument("--low-cut", type=int)
    report.add_argument("--high-cut", type=int)
    report.add_argument("--hard-mu", type=float, default=0.6, help="mixing level for table3")
    report.add_argument("--no-figures", action="store_true")
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    values: Dict[str, Any] = {}
    for flag, key in (("gamma", "gammas"), ("mu", "mus"), ("n", "n"), ("out", "output_dir"),
                      ("workers", "parallelism"), ("r", "r_grid"), ("R", "R_grid"),
                      ("low_cut", "low_cut"), ("high_cut", "high_cut"), ("bucket_cap", "bucket_cap"),
                      ("variant", "variant")):
        value = getattr(args, flag, None)
        if value is not None:
            values[key] = value
    seeds = getattr(args, "seeds", None) or getattr(args, "seed", None)
    if seeds is not None:
        values["seeds"] = seeds
    if getattr(args, "full_scale", False):
        values["full_scale"] = True
    return values


def _config(args: argparse.Namespace) -> ExperimentConfig:
    return load_config(args.config, _overrides(args))


def cmd_generate(args: argparse.Namespace) -> int:
    config = _config(args)
    params = config.params_for(config.gammas[0], config.mus[0], config.seeds[0])
    cache = GraphCache(config.output_dir)
    _, _, report = cache.get(params)
    for kind, path in cache.paths(params).items():
        print(f"{kind}: {path}")
    print(report.to_text(), end="")
    return 0


def _cluster_variant(args: argparse.Namespace):
    """--variant / --r / --R, falling back to the first grid value of --config, then r = 1"""
    if args.config and args.r is None and args.R is None:
        config = load_config(args.config)
        if args.variant == "flat" and config.R_grid:
            args.R = str(config.R_grid[0])
        elif args.variant != "flat" and config.r_grid:
            args.r = format_resolution(config.r_grid[0])
    kind = args.variant or ("flat" if args.R is not None and args.r is None else "standard")
    if kind == "standard":
        if args.R is not None:
            raise ConfigError("--R belongs to the flat variant")
        return StandardVariant.of(args.r if args.r is not None else "1")
    if args.r is not None:
        raise ConfigError("--r belongs to the standard variant")
    if args.R is None:
        raise ConfigError("the flat variant needs --R")
    return FlatVariant.of(args.R)


def cmd_cluster(args: argparse.Namespace) -> int:
    graph = load_edge_list_file(args.graph, remap=args.remap)
    prefix = Path(args.out) if args.out else Path(args.graph).with_suffix("")

    if args.replay:
        variant, trace = load_trace(read_text(args.replay))
        partition = replay_trace(graph, trace, variant)
        write_text(f"{prefix}.membership", write_partition(partition))
        print(f"clusters={partition.cluster_count} merges={len(trace)}")
        return 0

    variant = _cluster_variant(args)
    result = greedy_cluster(graph, variant)
    write_text(f"{prefix}.membership", write_partition(result.partition))
    write_text(f"{prefix}.trace", write_trace(result.trace, variant))
    if graph.original_ids is not None:
        write_text(f"{prefix}.idmap", write_id_map(graph))
    print(
        f"variant={variant.kind} param={variant.param_label} clusters={result.partition.cluster_count} "
        f"merges={result.merges} score={result.final_score.value:.6f} "
        f"score_exact={result.final_score.numerator}/{result.final_score.denominator}"
    )
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    config = _config(args)
    truth = load_partition_file(args.truth)
    found = load_partition_file(args.found, n=truth.n)
    confusion = pair_confusion(truth, found)
    print(f"tp={confusion.tp} fp={confusion.fp} fn={confusion.fn} tn={confusion.tn} mcc={confusion.mcc():.6f}")
    if not args.graph:
        return 0

    graph = load_edge_list_file(args.graph)
    low_cut, high_cut = config.low_cut, config.high_cut
    restricted = restricted_confusion(truth, found, graph, low_high_predicate(low_cut, high_cut))
    print(
        f"lowhigh(<= {low_cut}, >= {high_cut}): tp={restricted.tp} fp={restricted.fp} "
        f"fn={restricted.fn} tn={restricted.tn} mcc={restricted.mcc():.6f}"
    )
    matrix = bucket_mcc_matrix(truth, found, graph, degree_buckets(graph, config.bucket_cap))
    if args.out:
        path = write_text(Path(args.out) / "bucket_matrix.csv", matrix.to_csv())
        print(f"bucket matrix: {path}")
    else:
        print(matrix.to_csv(), end="")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    result = run_sweep(_config(args))
    print(f"cells={len(result.cells)} skipped_seeds={len(result.skipped)}")
    for name in ("per_seed.csv", "summary.csv", "best_params.csv", "skipped_seeds.csv"):
        print(result.output_dir / name)
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    config = _config(args)
    for path in report_tables(config, args.low_cut, args.high_cut, hard_mu=args.hard_mu).values():
        print(path)
    if not args.no_figures:
        for path in report_figures(config):
            print(path)
    return 0


COMMANDS = {
    "generate": cmd_generate,
    "cluster": cmd_cluster,
    "eval": cmd_eval,
    "sweep": cmd_sweep,
    "report": cmd_report,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ConfigError as e:
        parser.print_usage(sys.stderr)
        print(str(e), file=sys.stderr)
        return e.exit_code

    setup_logging(level=args.log_level)
    try:
        return COMMANDS[args.command](args)
    except FlatmodError as e:
        logger.error(str(e), exc_info=True, extra={"command": args.command, "exit_code": e.exit_code})
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
