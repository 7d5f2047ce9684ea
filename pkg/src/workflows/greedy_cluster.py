"""OVERVIEW:
Greedy agglomerative climb ("Greedy Modularity") for either score variant.

1. Start with every vertex in its own cluster.
2. Among all pairs of clusters joined by at least one edge, take the merge
   with the largest exact Δ; ties go to the pair with the smaller lower id,
   then the smaller upper id (ids as currently labelled, a merged cluster
   keeps the smaller parent id).
3. Stop as soon as the best Δ is ≤ 0: only strict improvements are taken.

Pairs with no connecting edge are never candidates; their Δ is pure penalty
and therefore negative under both variants.
"""

import logging
import time
from dataclasses import dataclass
from typing import List, Optional, Sequence

from src.models.exceptions import TraceMismatch
from src.models.graph_models import Graph, Partition
from src.models.score_models import MergeRecord, ScaledScore
from src.workflows.graph_core import require_edges
from src.workflows.merge_state import MergeState, Variant
from src.workflows.scoring import score

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GreedyResult:
    partition: Partition
    trace: List[MergeRecord]
    initial_score: ScaledScore
    final_score: ScaledScore
    duration_ms: int

    @property
    def merges(self) -> int:
        return len(self.trace)


def greedy_cluster(g: Graph, variant: Variant) -> GreedyResult:
    """Run the climb on g under `variant` and return the partition plus merge trace"""
    require_edges(g)
    started = time.perf_counter()

    state = MergeState(g, variant)
    initial = score(g, Partition.singletons(g.n), variant)
    running = initial.numerator
    trace: List[MergeRecord] = []

    while True:
        best = state.pop_best()
        if best is None:
            break
        delta, lo, hi = best
        if delta <= 0:
            break
        state.merge(lo, hi)
        running += delta
        trace.append(MergeRecord(len(trace) + 1, lo, hi, delta, state.denominator))

    partition = state.partition()
    final = ScaledScore(running, state.denominator)
    duration_ms = int((time.perf_counter() - started) * 1000)
    logger.debug(
        "greedy climb finished",
        extra={
            "variant": variant.kind,
            "param": variant.param_label,
            "merges": len(trace),
            "clusters": partition.cluster_count,
            "duration_ms": duration_ms,
        },
    )
    return GreedyResult(partition, trace, initial, final, duration_ms)


def replay_trace(g: Graph, trace: Sequence[MergeRecord], variant: Optional[Variant] = None) -> Partition:
    """Re-apply a merge trace from singletons.

    Every step must name two live clusters with i < j. When the variant is
    known, each recorded Δ is checked against the recomputed one as well.
    """
    live = set(range(g.n))
    state = MergeState(g, variant) if variant is not None else None
    labels = list(range(g.n))
    members = [[v] for v in range(g.n)]

    for record in trace:
        i, j = record.i, record.j
        if i >= j or i not in live or j not in live:
            raise TraceMismatch(f"step {record.step}: clusters ({i}, {j}) are not two live clusters with i < j")
        if state is not None:
            expected = state.delta_num(i, j)
            if (expected, state.denominator) != (record.delta_num, record.delta_den):
                raise TraceMismatch(
                    f"step {record.step}: recorded delta {record.delta_num}/{record.delta_den}"
                    f" but recomputed {expected}/{state.denominator}"
                )
            state.merge(i, j)
        for v in members[j]:
            labels[v] = i
        members[i].extend(members[j])
        members[j] = []
        live.discard(j)

    return Partition.from_assignment(labels)
