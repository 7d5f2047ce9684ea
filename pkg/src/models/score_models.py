"""OVERVIEW:
Schemas for the two scores the greedy climb can optimise.

- StandardVariant → resolution modularity Q_r, r = p/100 with p in 0..100
- FlatVariant     → flat modularity Q♭_R, R a non-negative integer
- ScaledScore     → exact integer carrier for a score (numerator / denominator)
- MergeRecord     → one step of a greedy trace

The variants are pydantic models joined into a discriminated union on `kind`,
so a variant read from JSON config or a trace header validates the same way
as one built in code.
"""

from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter

from src.models.exceptions import ConfigError

RESOLUTION_SCALE = 100


def parse_resolution(value: Union[str, float, int, Decimal]) -> int:
    """Turn '0.39' / 0.39 / Decimal('0.39') into the integer percent 39.

    Anything that is not exactly representable with two decimal digits in
    [0, 1] is rejected.
    """
    try:
        dec = Decimal(str(value)).normalize()
    except InvalidOperation as e:
        raise ConfigError(f"resolution {value!r} is not a number") from e
    scaled = dec * RESOLUTION_SCALE
    if scaled != scaled.to_integral_value():
        raise ConfigError(f"resolution {value!r} has more than two decimal digits")
    percent = int(scaled)
    if not 0 <= percent <= RESOLUTION_SCALE:
        raise ConfigError(f"resolution {value!r} outside [0, 1]")
    return percent


def format_resolution(percent: int) -> str:
    return f"{percent // RESOLUTION_SCALE}.{percent % RESOLUTION_SCALE:02d}"


class StandardVariant(BaseModel):
    """Q_r = (1/2L) ΣΣ C_vw (r·A_vw − k_v k_w / 2L)"""
    model_config = ConfigDict(frozen=True)

    kind: Literal["standard"] = "standard"
    r_percent: int = Field(ge=0, le=RESOLUTION_SCALE, description="Resolution r as an integer percent (r = r_percent/100)")

    @classmethod
    def of(cls, r: Union[str, float, int, Decimal]) -> "StandardVariant":
        return cls(r_percent=parse_resolution(r))

    @property
    def param(self) -> int:
        return self.r_percent

    @property
    def param_label(self) -> str:
        return format_resolution(self.r_percent)

    @property
    def r(self) -> Fraction:
        return Fraction(self.r_percent, RESOLUTION_SCALE)


class FlatVariant(BaseModel):
    """Q♭_R = (1/2L) ΣΣ C_vw (A_vw − R / 2L)"""
    model_config = ConfigDict(frozen=True)

    kind: Literal["flat"] = "flat"
    R: int = Field(ge=0, description="Penalty multiplier R (sweeps use even integers 0..200)")

    @classmethod
    def of(cls, R: Union[str, int]) -> "FlatVariant":
        try:
            value = int(str(R))
        except ValueError as e:
            raise ConfigError(f"penalty multiplier {R!r} is not an integer") from e
        if value < 0:
            raise ConfigError(f"penalty multiplier {R!r} is negative")
        return cls(R=value)

    @property
    def param(self) -> int:
        return self.R

    @property
    def param_label(self) -> str:
        return str(self.R)


ScoreVariant = Annotated[Union[StandardVariant, FlatVariant], Field(discriminator="kind")]
score_variant_adapter = TypeAdapter(ScoreVariant)


def variant_from(kind: str, param: Union[str, int, float]) -> Union[StandardVariant, FlatVariant]:
    """Build a variant from its CLI / CSV spelling ('standard', '0.39') or ('flat', '98')"""
    if kind == "standard":
        return StandardVariant.of(param)
    if kind == "flat":
        return FlatVariant.of(param)
    raise ConfigError(f"unknown variant {kind!r} (expected standard|flat)")


@dataclass(frozen=True)
class ScaledScore:
    """Exact score = numerator / denominator.

    Standard scores use denominator 100·(2L)², flat scores (2L)², so two
    scores of the same variant on the same graph are compared by numerator.
    """
    numerator: int
    denominator: int

    @property
    def value(self) -> float:
        return self.numerator / self.denominator

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __sub__(self, other: "ScaledScore") -> "ScaledScore":
        if self.denominator != other.denominator:
            raise ValueError("scores with different denominators")
        return ScaledScore(self.numerator - other.numerator, self.denominator)

    def __add__(self, other: "ScaledScore") -> "ScaledScore":
        if self.denominator != other.denominator:
            raise ValueError("scores with different denominators")
        return ScaledScore(self.numerator + other.numerator, self.denominator)


@dataclass(frozen=True)
class MergeRecord:
    """Clusters i < j merged at `step` (1-based); the merged cluster keeps id i"""
    step: int
    i: int
    j: int
    delta_num: int
    delta_den: int
