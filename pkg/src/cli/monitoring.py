"""OVERVIEW:
Logging and metrics for flatmod runs.

🧾 Logging:
    One root handler on stderr. Records are JSON (python-json-logger) by
    default, with any `extra={...}` context merged into the object;
    FLATMOD_LOG_FORMAT=text switches to a plain one-line format.

📊 Metrics (Prometheus):
    Counters / histograms in a private registry. A sweep updates them from
    worker results and dumps them to <output_dir>/metrics.prom, ready for a
    node-exporter textfile collector.

| Metric                                   | Type      | Tracks                                   |
| ---------------------------------------- | --------- | ---------------------------------------- |
| `flatmod_climbs_total{variant}`          | Counter   | greedy climbs finished                   |
| `flatmod_merges_total{variant}`          | Counter   | merges taken across all climbs           |
| `flatmod_climb_duration_seconds{variant}`| Histogram | wall time of one climb                   |
| `flatmod_generation_failures_total{stage}`| Counter  | benchmark graphs the generator gave up on |
| `flatmod_cells_skipped_total`            | Counter   | sweep cells skipped with their seed       |
"""

import logging
import sys
from pathlib import Path
from typing import Optional, Union

from prometheus_client import CollectorRegistry, Counter, Histogram, write_to_textfile
from pythonjsonlogger.json import JsonFormatter

from src.cli.config import log_format, log_level

REGISTRY = CollectorRegistry()

CLIMB_COUNT = Counter(
    "flatmod_climbs_total",
    "Greedy climbs finished",
    ["variant"],
    registry=REGISTRY,
)

MERGE_COUNT = Counter(
    "flatmod_merges_total",
    "Merges taken by greedy climbs",
    ["variant"],
    registry=REGISTRY,
)

CLIMB_DURATION = Histogram(
    "flatmod_climb_duration_seconds",
    "Greedy climb duration",
    ["variant"],
    registry=REGISTRY,
)

GENERATION_FAILURES = Counter(
    "flatmod_generation_failures_total",
    "Benchmark graphs that could not be generated",
    ["stage"],
    registry=REGISTRY,
)

CELLS_SKIPPED = Counter(
    "flatmod_cells_skipped_total",
    "Sweep cells skipped because their graph could not be generated",
    registry=REGISTRY,
)

JSON_FIELDS = "{asctime}{levelname}{name}{message}{module}{funcName}{lineno}"
TEXT_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"


def setup_logging(level: Optional[str] = None, fmt: Optional[str] = None) -> logging.Logger:
    """Configure the root logger once per process (workers call it too)"""
    logger = logging.getLogger()
    logger.setLevel(level or log_level())
    logger.handlers = []

    # stdout is reserved for command results
    handler = logging.StreamHandler(sys.stderr)
    if (fmt or log_format()) == "text":
        handler.setFormatter(logging.Formatter(TEXT_FORMAT))
    else:
        handler.setFormatter(
            JsonFormatter(
                JSON_FIELDS,
                style="{",
                rename_fields={
                    "asctime": "timestamp",
                    "levelname": "level",
                    "name": "logger",
                    "funcName": "function",
                    "lineno": "line",
                },
            )
        )
    logger.addHandler(handler)

    # Reduce noise from some libraries
    logging.getLogger("matplotlib").setLevel(logging.WARNING)
    logging.getLogger("sqlalchemy.engine").setLevel(logging.WARNING)
    return logger


def record_climb(variant: str, merges: int, duration_ms: int) -> None:
    CLIMB_COUNT.labels(variant=variant).inc()
    MERGE_COUNT.labels(variant=variant).inc(merges)
    CLIMB_DURATION.labels(variant=variant).observe(duration_ms / 1000)


def record_generation_failure(stage: str, cells: int) -> None:
    GENERATION_FAILURES.labels(stage=stage).inc()
    CELLS_SKIPPED.inc(cells)


def write_metrics(output_dir: Union[str, Path]) -> Path:
    path = Path(output_dir) / "metrics.prom"
    path.parent.mkdir(parents=True, exist_ok=True)
    write_to_textfile(str(path), REGISTRY)
    return path


class RunLogger:
    """Context logger for sweep work.

    Every record carries gamma, mu and seed, plus variant / param when the
    work is one climb.
    """

    def __init__(self, gamma: float, mu: float, seed: int, variant: Optional[str] = None,
                 param: Optional[str] = None, name: str = __name__):
        self.logger = logging.getLogger(name)
        self.context = {"gamma": gamma, "mu": mu, "seed": seed}
        if variant is not None:
            self.context["variant"] = variant
        if param is not None:
            self.context["param"] = param

    def for_cell(self, variant: str, param: str) -> "RunLogger":
        return RunLogger(self.context["gamma"], self.context["mu"], self.context["seed"],
                         variant, param, self.logger.name)

    def debug(self, message: str, **kwargs):
        self.logger.debug(message, extra={**self.context, **kwargs})

    def info(self, message: str, **kwargs):
        """Log info with context"""
        self.logger.info(message, extra={**self.context, **kwargs})

    def warning(self, message: str, **kwargs):
        self.logger.warning(message, extra={**self.context, **kwargs})

    def error(self, message: str, **kwargs):
        """Log error with context"""
        self.logger.error(message, extra={**self.context, **kwargs})
