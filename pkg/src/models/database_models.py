"""OVERVIEW:
Tables of the results ledger (SQLAlchemy ORM).

- CellResultDB  → one greedy climb on one benchmark graph, keyed by (generator template, γ, μ, seed, variant, param)
- SkippedSeedDB → a (generator template, γ, μ, seed) whose graph the generator could not build

The ledger is what makes sweeps resumable: a rerun asks it which cells exist
and computes only the rest. CSVs are always rebuilt from it. The generator
template is part of every key, so changing n, degrees or community bounds
never reuses old rows.
"""

from sqlalchemy import BigInteger, Column, DateTime, Float, Integer, String, Text
from sqlalchemy.orm import declarative_base
from sqlalchemy.sql import func

from src.models.experiment_models import CellResult

Base = declarative_base()


# ---------------------------
# Cell results
# ---------------------------
class CellResultDB(Base):
    """One row per climb; param is the integer percent (standard) or R (flat)"""
    __tablename__ = "cell_results"

    # Primary identifiers
    lfr_fingerprint = Column(String(16), primary_key=True, default="")
    gamma = Column(Float, primary_key=True)
    mu = Column(Float, primary_key=True)
    seed = Column(BigInteger, primary_key=True)
    variant = Column(String(16), primary_key=True)
    param = Column(Integer, primary_key=True)

    # Agreement with the planted partition
    mcc_all = Column(Float, nullable=False)
    mcc_lowhigh = Column(Float, nullable=False)
    low_cut = Column(Integer, nullable=False)
    high_cut = Column(Integer, nullable=False)

    # Climb outcome; scores as exact numerator / denominator strings (they outgrow 64 bits)
    cluster_count = Column(Integer)
    merges = Column(Integer)
    score_num = Column(Text)
    score_den = Column(Text)
    duration_ms = Column(Integer)

    created_at = Column(DateTime, default=func.now())

    @classmethod
    def from_result(cls, cell: CellResult) -> "CellResultDB":
        return cls(
            gamma=cell.gamma, mu=cell.mu, seed=cell.seed, variant=cell.variant, param=cell.param,
            mcc_all=cell.mcc_all, mcc_lowhigh=cell.mcc_lowhigh,
            low_cut=cell.low_cut, high_cut=cell.high_cut,
            cluster_count=cell.cluster_count, merges=cell.merges,
            score_num=str(cell.score_num), score_den=str(cell.score_den),
            duration_ms=cell.duration_ms,
            lfr_fingerprint=cell.lfr_fingerprint,
        )

    def to_result(self) -> CellResult:
        return CellResult(
            gamma=self.gamma, mu=self.mu, seed=self.seed, variant=self.variant, param=self.param,
            mcc_all=self.mcc_all, mcc_lowhigh=self.mcc_lowhigh,
            low_cut=self.low_cut, high_cut=self.high_cut,
            cluster_count=self.cluster_count or 0, merges=self.merges or 0,
            score_num=int(self.score_num or 0), score_den=int(self.score_den or 1),
            duration_ms=self.duration_ms or 0,
            lfr_fingerprint=self.lfr_fingerprint or "",
        )


# ---------------------------
# Skipped seeds
# ---------------------------
class SkippedSeedDB(Base):
    __tablename__ = "skipped_seeds"

    lfr_fingerprint = Column(String(16), primary_key=True, default="")
    gamma = Column(Float, primary_key=True)
    mu = Column(Float, primary_key=True)
    seed = Column(BigInteger, primary_key=True)
    stage = Column(String(32), nullable=False)
    reason = Column(Text, nullable=False)
    created_at = Column(DateTime, default=func.now())
