"""OVERVIEW
Connects flatmod to its results ledger and manages database sessions.

This file:
- Takes the database URL from FLATMOD_DATABASE_URL, else a SQLite file in the output directory
- Creates the engine and the tables
- Provides sessions that:
    - Automatically commit changes
    - Roll back on errors
    - Always close connections properly
- Reads and writes sweep cells and skipped seeds
"""

import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Generator, Iterable, List, Optional

from sqlalchemy import create_engine, event, select
from sqlalchemy.orm import Session, sessionmaker

from src.models.database_models import Base, CellResultDB, SkippedSeedDB
from src.models.experiment_models import CellResult, SkippedSeed

logger = logging.getLogger(__name__)


def _sqlite_pragmas(dbapi_connection, _record):
    cursor = dbapi_connection.cursor()
    cursor.execute("PRAGMA journal_mode=WAL")
    cursor.execute("PRAGMA synchronous=NORMAL")
    cursor.close()


class DatabaseManager:
    """Owns the engine for one ledger.

    Only the sweep orchestrator writes; worker processes never open the
    ledger, so SQLite's single-writer rule is never an issue.
    """

    def __init__(self, database_url: str):
        self.database_url = database_url
        if database_url.startswith("sqlite:///"):
            Path(database_url[len("sqlite:///"):]).parent.mkdir(parents=True, exist_ok=True)
        self.engine = create_engine(database_url, echo=False, future=True)
        if self.engine.dialect.name == "sqlite":
            event.listen(self.engine, "connect", _sqlite_pragmas)
        Base.metadata.create_all(self.engine)
        self.SessionLocal = sessionmaker(bind=self.engine, expire_on_commit=False)

    @contextmanager
    def get_session(self) -> Generator[Session, None, None]:
        """Context manager for database sessions with automatic cleanup"""
        session = self.SessionLocal()
        try:
            yield session
            session.commit()
        except Exception:
            session.rollback()
            raise
        finally:
            session.close()

    def dispose(self) -> None:
        self.engine.dispose()

    def save_cells(self, cells: Iterable[CellResult]) -> int:
        count = 0
        with self.get_session() as session:
            for cell in cells:
                session.merge(CellResultDB.from_result(cell))
                count += 1
        return count

    def save_skipped(self, skipped: SkippedSeed) -> None:
        with self.get_session() as session:
            session.merge(SkippedSeedDB(
                gamma=skipped.gamma, mu=skipped.mu, seed=skipped.seed,
                stage=skipped.stage, reason=skipped.reason, lfr_fingerprint=skipped.lfr_fingerprint,
            ))

    def load_cells(self, gammas: Optional[Iterable[float]] = None, mus: Optional[Iterable[float]] = None,
                   seeds: Optional[Iterable[int]] = None, lfr_fingerprint: Optional[str] = None) -> List[CellResult]:
        query = select(CellResultDB)
        if lfr_fingerprint is not None:
            query = query.where(CellResultDB.lfr_fingerprint == lfr_fingerprint)
        if gammas is not None:
            query = query.where(CellResultDB.gamma.in_(list(gammas)))
        if mus is not None:
            query = query.where(CellResultDB.mu.in_(list(mus)))
        if seeds is not None:
            query = query.where(CellResultDB.seed.in_(list(seeds)))
        with self.get_session() as session:
            rows = session.execute(query).scalars().all()
            return sorted(row.to_result() for row in rows)

    def load_skipped(self, lfr_fingerprint: Optional[str] = None) -> List[SkippedSeed]:
        query = select(SkippedSeedDB)
        if lfr_fingerprint is not None:
            query = query.where(SkippedSeedDB.lfr_fingerprint == lfr_fingerprint)
        with self.get_session() as session:
            rows = session.execute(query).scalars().all()
            return sorted(
                SkippedSeed(row.gamma, row.mu, row.seed, row.stage, row.reason, row.lfr_fingerprint or "")
                for row in rows
            )
