"""OVERVIEW:
Caches generated benchmark graphs so a sweep builds each (γ, μ, seed) graph once.

- On disk: <root>/gamma<γ>_mu<μ>/seed<s>.edges / .membership / .report
- In memory: a small LRU dict in front of the disk copy, so a worker running
  consecutive cells of one graph parses its files once

An entry is trusted only when its report's fingerprint matches the
fingerprint of the requested LfrParams; anything else (missing files, a
different generator template, a truncated write) is regenerated.
"""

import logging
from collections import OrderedDict
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

from src.models.exceptions import FlatmodError
from src.models.experiment_models import format_number
from src.models.graph_models import Graph
from src.models.lfr_models import GenerationReport, GroundTruth, LfrParams
from src.tools.edge_list import load_edge_list, load_partition, write_edge_list, write_partition
from src.workflows.lfr_generator import generate, generation_report

logger = logging.getLogger(__name__)

CachedGraph = Tuple[Graph, GroundTruth, GenerationReport]


class GraphCache:

    def __init__(self, root: Union[str, Path], max_entries: int = 8):
        self.root = Path(root)
        self.max_entries = max_entries
        self.memory_cache: "OrderedDict[str, CachedGraph]" = OrderedDict()

    def paths(self, params: LfrParams) -> Dict[str, Path]:
        folder = self.root / f"gamma{format_number(params.tau1)}_mu{format_number(params.mu)}"
        stem = f"seed{params.seed}"
        return {
            "edges": folder / f"{stem}.edges",
            "membership": folder / f"{stem}.membership",
            "report": folder / f"{stem}.report",
        }

    def _load(self, params: LfrParams) -> Optional[CachedGraph]:
        paths = self.paths(params)
        if not all(path.exists() for path in paths.values()):
            return None
        try:
            report = GenerationReport.from_text(paths["report"].read_text(encoding="utf-8"))
            if report.fingerprint != params.fingerprint():
                logger.info("cached graph has a different fingerprint, regenerating",
                            extra={"seed": params.seed, "path": str(paths["report"])})
                return None
            graph = load_edge_list(paths["edges"].read_text(encoding="utf-8"))
            membership = load_partition(paths["membership"].read_text(encoding="utf-8"), n=params.n)
        except (FlatmodError, ValueError) as e:
            logger.warning("unreadable cache entry, regenerating",
                           extra={"seed": params.seed, "error": str(e)})
            return None
        if graph.n != params.n:
            return None
        sizes = tuple(sorted(membership.sizes(), reverse=True))
        return graph, GroundTruth(membership=membership.assignment, community_sizes=sizes), report

    def _store(self, params: LfrParams, entry: CachedGraph) -> None:
        graph, truth, report = entry
        paths = self.paths(params)
        paths["edges"].parent.mkdir(parents=True, exist_ok=True)
        paths["edges"].write_text(write_edge_list(graph), encoding="utf-8")
        paths["membership"].write_text(write_partition(truth.partition()), encoding="utf-8")
        # report last: its presence marks a complete entry
        paths["report"].write_text(report.to_text(), encoding="utf-8")

    def get(self, params: LfrParams) -> CachedGraph:
        """Return (graph, truth, report) for params, generating and storing on a miss.

        GenerationFailure from the generator propagates.
        """
        key = params.fingerprint()
        if key in self.memory_cache:
            self.memory_cache.move_to_end(key)
            return self.memory_cache[key]
        entry = self._load(params)
        if entry is None:
            graph, truth = generate(params)
            entry = (graph, truth, generation_report(params, graph, truth))
            self._store(params, entry)
            logger.debug("generated benchmark graph",
                         extra={"seed": params.seed, "edges": graph.edge_count})
        self.memory_cache[key] = entry
        while len(self.memory_cache) > self.max_entries:
            self.memory_cache.popitem(last=False)
        return entry

    def clear_cache(self) -> None:
        self.memory_cache.clear()
