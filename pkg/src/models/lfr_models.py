"""OVERVIEW:
Schemas for the LFR-style benchmark generator.

- LfrParams        → everything that determines a generated graph (seed included)
- GroundTruth      → the planted communities
- GenerationReport → realised statistics written next to every generated graph

The defaults reproduce the benchmark setting of the study: 1000 vertices,
degree exponent 2.5, community-size exponent 2, mixing 0.5, mean degree 20,
degree cap 50, community sizes 20..100.
"""

import hashlib
from dataclasses import dataclass
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.models.graph_models import Partition


class LfrParams(BaseModel):
    """Generator parameters.

    Feasibility against n (can n be split into community sizes, can the
    target mean be reached under the degree cap) is checked by the samplers,
    which raise InfeasiblePartition / InfeasibleDegrees, not here.
    """
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    n: int = Field(1000, ge=1, description="Vertex count")
    tau1: float = Field(2.5, gt=1, alias="gamma", description="Degree power-law exponent γ")
    tau2: float = Field(2.0, gt=1, description="Community-size power-law exponent")
    mu: float = Field(0.5, gt=0, lt=1, description="Mixing parameter: target external fraction of each vertex's edges")
    average_degree: float = Field(20, gt=0, description="Target mean degree")
    max_degree: int = Field(50, ge=1, description="Hard degree cap")
    min_community: int = Field(20, ge=1, description="Smallest community size")
    max_community: int = Field(100, ge=1, description="Largest community size")
    seed: int = Field(0, ge=0, lt=2 ** 64, description="64-bit PRNG seed")

    @model_validator(mode="after")
    def _check_bounds(self) -> "LfrParams":
        if self.min_community > self.max_community:
            raise ValueError(f"min_community {self.min_community} > max_community {self.max_community}")
        return self

    def with_seed(self, seed: int) -> "LfrParams":
        return self.model_copy(update={"seed": seed})

    def fingerprint(self) -> str:
        """Stable hash of every field; cache entries are keyed by it"""
        payload = self.model_dump_json(by_alias=False)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]

    def template_fingerprint(self) -> str:
        """Hash of every field except seed, γ and μ; the ledger keys sweep rows by it"""
        payload = self.model_dump_json(by_alias=False, exclude={"seed", "tau1", "mu"})
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class GroundTruth:
    membership: Tuple[int, ...]
    community_sizes: Tuple[int, ...]

    def partition(self) -> Partition:
        return Partition.from_assignment(self.membership)


class GenerationReport(BaseModel):
    seed: int
    n: int
    edge_count: int
    mean_degree: float
    min_degree: int
    max_degree: int
    mean_mixing: float = Field(description="Mean over vertices of external degree / degree")
    median_mixing: float
    mean_abs_mixing_error: float = Field(description="Mean over vertices of |external degree / degree − μ|")
    community_count: int
    min_community_size: int
    max_community_size: int
    components: int
    connected: bool
    fingerprint: str

    def to_text(self) -> str:
        lines = []
        for key, value in self.model_dump().items():
            if isinstance(value, bool):
                value = "yes" if value else "no"
            elif isinstance(value, float):
                value = f"{value:.6f}"
            lines.append(f"{key}={value}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "GenerationReport":
        data = {}
        for line in text.splitlines():
            if "=" in line:
                key, value = line.split("=", 1)
                data[key.strip()] = value.strip()
        if "connected" in data:
            data["connected"] = data["connected"] == "yes"
        return cls(**data)
