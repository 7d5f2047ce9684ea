"""OVERVIEW:
Schemas for sweep experiments.

- ExperimentConfig → what to sweep: LFR template, γ and μ lists, seeds, r and R grids
- CellResult       → one climb on one graph (one row of the per-seed CSV)
- SummaryRow       → order-statistic summary of one (γ, μ, variant, param) sample
- SkippedSeed      → a seed whose graph could not be generated
- SweepResult      → everything a sweep produced, sorted

Desk-scale defaults: γ 2.5, μ 0.5, 25 seeds, r 0.30..0.50 step 0.01,
R 80..120 step 2. `full_scale_grid()` widens this to seeds 0..1000, r 0.00..1.00,
R 0..200 step 2 and γ 2.5 / 3.0 / 3.5.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.models.exceptions import ConfigError
from src.models.lfr_models import LfrParams
from src.models.score_models import (
    FlatVariant, StandardVariant, format_resolution, parse_resolution, variant_from,
)


def parse_seed_range(value: Union[str, int, List[Any]]) -> List[int]:
    """'0..24' (inclusive), '7', 7 or a list of ints"""
    if isinstance(value, int):
        return [value]
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    text = str(value).strip()
    if ".." in text:
        first, last = text.split("..", 1)
        try:
            a, b = int(first), int(last)
        except ValueError as e:
            raise ConfigError(f"seed range {text!r} is not 'a..b'") from e
        if b < a:
            raise ConfigError(f"seed range {text!r} is empty")
        return list(range(a, b + 1))
    if "," in text:
        return [int(part) for part in text.split(",") if part.strip()]
    try:
        return [int(text)]
    except ValueError as e:
        raise ConfigError(f"seed {text!r} is not an integer") from e


def _split(value: Any) -> Any:
    if isinstance(value, str):
        return [part.strip() for part in value.split(",") if part.strip()]
    return value


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    lfr: LfrParams = Field(default_factory=LfrParams, description="Generator template; seed and γ/μ are overridden per cell")
    gammas: List[float] = Field(default_factory=lambda: [2.5], description="Degree exponents to sweep")
    mus: List[float] = Field(default_factory=lambda: [0.5], description="Mixing parameters to sweep")
    seeds: List[int] = Field(default_factory=lambda: list(range(25)), description="Generator seeds")
    r_grid: List[int] = Field(default_factory=lambda: list(range(30, 51)), description="Resolutions as integer percents")
    R_grid: List[int] = Field(default_factory=lambda: list(range(80, 121, 2)), description="Flat penalty multipliers")
    output_dir: Path = Field(Path("results"), description="Where CSV / SVG / cache / ledger go")
    parallelism: int = Field(1, ge=1, description="Worker processes")
    low_cut: int = Field(20, ge=0, description="Low-degree cut for the restricted MCC")
    high_cut: int = Field(40, ge=0, description="High-degree cut for the restricted MCC")
    bucket_cap: int = Field(100, ge=1, description="Vertices per degree bucket in heatmaps")
    full_scale: bool = Field(False, description="Full 1001-seed grid; slow")
    variant: Optional[Literal["standard", "flat"]] = Field(None, description="Sweep and report one score only")

    @field_validator("gammas", "mus", mode="before")
    @classmethod
    def _floats(cls, value: Any) -> Any:
        return _split(value)

    @field_validator("seeds", mode="before")
    @classmethod
    def _seeds(cls, value: Any) -> List[int]:
        return parse_seed_range(value)

    @field_validator("r_grid", mode="before")
    @classmethod
    def _resolutions(cls, value: Any) -> List[int]:
        """Input values are resolutions (0.39), stored as percents (39)"""
        values = _split(value)
        if not isinstance(values, (list, tuple)):
            values = [values]
        return [parse_resolution(v) for v in values]

    @field_validator("R_grid", mode="before")
    @classmethod
    def _penalties(cls, value: Any) -> Any:
        values = _split(value)
        if not isinstance(values, (list, tuple)):
            values = [values]
        return [FlatVariant.of(v).R for v in values]

    @model_validator(mode="after")
    def _check(self) -> "ExperimentConfig":
        if not self.gammas or not self.mus:
            raise ValueError("gammas and mus must be non-empty")
        if not self.seeds:
            raise ValueError("seeds must be non-empty")
        if any(s < 0 for s in self.seeds):
            raise ValueError("seeds must be non-negative")
        if not self.r_grid and not self.R_grid:
            raise ValueError("at least one of r_grid / R_grid must be non-empty")
        if self.variant == "standard" and not self.r_grid:
            raise ValueError("variant standard needs a non-empty r_grid")
        if self.variant == "flat" and not self.R_grid:
            raise ValueError("variant flat needs a non-empty R_grid")
        if any(not 0 < mu < 1 for mu in self.mus):
            raise ValueError("every mu must lie in (0, 1)")
        if any(gamma <= 1 for gamma in self.gammas):
            raise ValueError("every gamma must be > 1")
        return self

    @classmethod
    def full_scale_grid(cls, **overrides: Any) -> "ExperimentConfig":
        base = dict(
            gammas=[2.5, 3.0, 3.5],
            seeds=list(range(1001)),
            r_grid=[format_resolution(p) for p in range(0, 101)],
            R_grid=list(range(0, 201, 2)),
            full_scale=True,
        )
        base.update(overrides)
        return cls(**base)

    def variants(self) -> List[Union[StandardVariant, FlatVariant]]:
        standard = [] if self.variant == "flat" else [StandardVariant(r_percent=p) for p in sorted(set(self.r_grid))]
        flat = [] if self.variant == "standard" else [FlatVariant(R=R) for R in sorted(set(self.R_grid))]
        return standard + flat

    def params_for(self, gamma: float, mu: float, seed: int) -> LfrParams:
        return self.lfr.model_copy(update={"tau1": gamma, "mu": mu, "seed": seed})

    @property
    def lfr_fingerprint(self) -> str:
        return self.lfr.template_fingerprint()


def format_number(value: float) -> str:
    """γ / μ as written in file names and CSVs: 2.5, 3, 0.45"""
    return f"{value:g}"


def param_label(variant: str, param: int) -> str:
    return format_resolution(param) if variant == "standard" else str(param)


def parse_param(variant: str, label: str) -> int:
    return variant_from(variant, label).param


@dataclass(frozen=True, order=True)
class CellResult:
    """Sort order (γ, μ, seed, variant, param) is the CSV order"""
    gamma: float
    mu: float
    seed: int
    variant: str
    param: int
    mcc_all: float = field(compare=False)
    mcc_lowhigh: float = field(compare=False)
    low_cut: int = field(default=20, compare=False)
    high_cut: int = field(default=40, compare=False)
    cluster_count: int = field(default=0, compare=False)
    merges: int = field(default=0, compare=False)
    score_num: int = field(default=0, compare=False)
    score_den: int = field(default=1, compare=False)
    duration_ms: int = field(default=0, compare=False)
    lfr_fingerprint: str = field(default="", compare=False)

    @property
    def key(self) -> Tuple[float, float, int, str, int]:
        return self.gamma, self.mu, self.seed, self.variant, self.param

    @property
    def param_label(self) -> str:
        return param_label(self.variant, self.param)


@dataclass(frozen=True)
class SummaryRow:
    gamma: float
    mu: float
    variant: str
    param: int
    samples: int
    q1: float
    median: float
    q3: float
    lowhigh_q1: float
    lowhigh_median: float
    lowhigh_q3: float

    @property
    def param_label(self) -> str:
        return param_label(self.variant, self.param)


@dataclass(frozen=True, order=True)
class SkippedSeed:
    gamma: float
    mu: float
    seed: int
    stage: str = field(compare=False)
    reason: str = field(compare=False)
    lfr_fingerprint: str = field(default="", compare=False)


@dataclass
class SweepResult:
    cells: List[CellResult]
    summary: List[SummaryRow]
    skipped: List[SkippedSeed]
    output_dir: Path
