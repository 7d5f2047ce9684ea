import logging
import random

import pytest

from src.models.graph_models import Graph, Partition
from src.workflows.graph_core import build_graph

BARBELL_EDGES = [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)]


@pytest.fixture
def triangle() -> Graph:
    return build_graph(3, [(0, 1), (0, 2), (1, 2)])


@pytest.fixture
def barbell() -> Graph:
    """Two triangles {0,1,2} and {3,4,5} joined by the bridge 2-3"""
    return build_graph(6, BARBELL_EDGES)


@pytest.fixture
def four_cycle() -> Graph:
    return build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


@pytest.fixture
def two_triangles() -> Partition:
    return Partition.from_clusters(6, [[0, 1, 2], [3, 4, 5]])


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    """Erdős–Rényi G(n, p) with at least one edge"""
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    if not edges:
        edges = [(0, 1)]
    return build_graph(n, edges)


def random_partition(rng: random.Random, n: int, k: int) -> Partition:
    return Partition.from_assignment([rng.randrange(k) for _ in range(n)])


SMALL_LFR = {"n": 80, "average_degree": 6, "max_degree": 12, "min_community": 10, "max_community": 30}


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch):
    for name in ("FLATMOD_DATABASE_URL", "FLATMOD_OUTPUT_DIR", "FLATMOD_WORKERS"):
        monkeypatch.delenv(name, raising=False)
    root = logging.getLogger()
    level = root.level
    yield
    # the CLI installs its own stderr handler; drop it before capture streams close
    root.handlers = [h for h in root.handlers if type(h) is not logging.StreamHandler]
    root.setLevel(level)


@pytest.fixture
def small_config(tmp_path):
    """Factory for a sweep small enough to run in a couple of seconds"""
    from src.models.experiment_models import ExperimentConfig

    def make(**overrides) -> ExperimentConfig:
        values = dict(
            lfr=SMALL_LFR,
            gammas=[2.5],
            mus=[0.3],
            seeds="0..2",
            r_grid="0.50,1.00",
            R_grid="10,20",
            low_cut=4,
            high_cut=8,
            bucket_cap=20,
            output_dir=tmp_path / "results",
        )
        values.update(overrides)
        return ExperimentConfig(**values)

    return make
