"""OVERVIEW:
Per-cluster bookkeeping for the greedy agglomerative climb.

MergeState keeps, for every live cluster c:
- degree_sum[c]  → a_c, sum of member degrees
- size[c]        → n_c, member count
- inter_edges[c] → {d: e_cd} for every cluster d joined to c by at least one edge
plus a lazily-invalidated max-heap of merge candidates.

Cluster ids start as vertex ids; a merge keeps the smaller of the two ids.
Heap entries are (-delta_num, lo, hi, version_lo, version_hi); an entry is
stale once either cluster died or changed version, and stale entries are
dropped when they surface. Deltas are exact integers over one denominator
per climb, so heap order is the total order (Δ desc, lo asc, hi asc).
"""

import heapq
from typing import Dict, Iterator, List, Optional, Set, Tuple, Union

from src.models.exceptions import UnknownCluster
from src.models.graph_models import Graph, Partition
from src.models.score_models import FlatVariant, StandardVariant

Variant = Union[StandardVariant, FlatVariant]


def delta_coefficients(variant: Variant, two_l: int) -> Tuple[int, int, int, bool]:
    """(bonus, penalty, denominator, uses_sizes) with Δ_num = bonus·e_ij − penalty·x_i·x_j.

    Standard: Δ = 2r·e/(2L) − 2·a_i·a_j/(2L)²   scaled by 100·(2L)²
    Flat:     Δ = 2·e/(2L)  − 2R·n_i·n_j/(2L)²  scaled by (2L)²
    """
    if isinstance(variant, StandardVariant):
        return 2 * variant.r_percent * two_l, 200, 100 * two_l * two_l, False
    if isinstance(variant, FlatVariant):
        return 2 * two_l, 2 * variant.R, two_l * two_l, True
    raise TypeError(f"unsupported score variant {variant!r}")


class MergeState:

    def __init__(self, g: Graph, variant: Variant, partition: Optional[Partition] = None):
        """Aggregate g under `partition` (singletons when omitted) and seed the candidate heap"""
        self.graph = g
        self.variant = variant
        self.two_l = 2 * g.edge_count
        self.bonus, self.penalty, self.denominator, self.uses_sizes = delta_coefficients(variant, self.two_l)

        if partition is None:
            labels = list(range(g.n))
            count = g.n
        else:
            labels = list(partition.assignment)
            count = partition.cluster_count

        self.degree_sum: List[int] = [0] * count
        self.size: List[int] = [0] * count
        self.members: List[List[int]] = [[] for _ in range(count)]
        self.inter_edges: List[Dict[int, int]] = [{} for _ in range(count)]
        self.internal_edges: List[int] = [0] * count
        self.version: List[int] = [0] * count

        for v, c in enumerate(labels):
            self.degree_sum[c] += g.degree[v]
            self.size[c] += 1
            self.members[c].append(v)
        for u, v in g.edges:
            cu, cv = labels[u], labels[v]
            if cu == cv:
                self.internal_edges[cu] += 1
            else:
                self.inter_edges[cu][cv] = self.inter_edges[cu].get(cv, 0) + 1
                self.inter_edges[cv][cu] = self.inter_edges[cv].get(cu, 0) + 1

        self.live: Set[int] = {c for c in range(count) if self.size[c] > 0}
        self.candidates: List[Tuple[int, int, int, int, int]] = []
        for c in sorted(self.live):
            for d, e in self.inter_edges[c].items():
                if c < d:
                    self._push(c, d, e)
        heapq.heapify(self.candidates)

    def _weight(self, c: int) -> int:
        return self.size[c] if self.uses_sizes else self.degree_sum[c]

    def delta_num(self, i: int, j: int) -> int:
        e = self.inter_edges[i].get(j, 0)
        return self.bonus * e - self.penalty * self._weight(i) * self._weight(j)

    def _push(self, i: int, j: int, e: int) -> None:
        lo, hi = (i, j) if i < j else (j, i)
        num = self.bonus * e - self.penalty * self._weight(lo) * self._weight(hi)
        self.candidates.append((-num, lo, hi, self.version[lo], self.version[hi]))

    def require_live(self, *clusters: int) -> None:
        for c in clusters:
            if c not in self.live:
                raise UnknownCluster(f"cluster {c} is not live")

    def pop_best(self) -> Optional[Tuple[int, int, int]]:
        """Remove and return the best valid candidate as (delta_num, lo, hi), or None"""
        heap = self.candidates
        while heap:
            neg, lo, hi, ver_lo, ver_hi = heapq.heappop(heap)
            if (lo in self.live and hi in self.live
                    and self.version[lo] == ver_lo and self.version[hi] == ver_hi):
                return -neg, lo, hi
        return None

    def peek_best(self) -> Optional[Tuple[int, int, int]]:
        best = self.pop_best()
        if best is not None:
            num, lo, hi = best
            heapq.heappush(self.candidates, (-num, lo, hi, self.version[lo], self.version[hi]))
        return best

    def merge(self, i: int, j: int) -> int:
        """Fold clusters i and j together; the survivor keeps min(i, j). Returns the survivor."""
        if i == j:
            raise UnknownCluster(f"cannot merge cluster {i} with itself")
        self.require_live(i, j)
        keep, gone = (i, j) if i < j else (j, i)

        keep_adj = self.inter_edges[keep]
        gone_adj = self.inter_edges[gone]
        joining = keep_adj.pop(gone, 0)
        gone_adj.pop(keep, None)
        for k, e in gone_adj.items():
            keep_adj[k] = keep_adj.get(k, 0) + e
            k_adj = self.inter_edges[k]
            del k_adj[gone]
            k_adj[keep] = keep_adj[k]
        self.inter_edges[gone] = {}

        self.internal_edges[keep] += self.internal_edges[gone] + joining
        self.degree_sum[keep] += self.degree_sum[gone]
        self.size[keep] += self.size[gone]
        self.members[keep].extend(self.members[gone])
        self.members[gone] = []
        self.degree_sum[gone] = 0
        self.size[gone] = 0
        self.internal_edges[gone] = 0
        self.live.discard(gone)
        self.version[keep] += 1
        self.version[gone] += 1

        for k, e in keep_adj.items():
            lo, hi = (keep, k) if keep < k else (k, keep)
            num = self.bonus * e - self.penalty * self._weight(lo) * self._weight(hi)
            heapq.heappush(self.candidates, (-num, lo, hi, self.version[lo], self.version[hi]))
        return keep

    def connected_pairs(self) -> Iterator[Tuple[int, int]]:
        for c in sorted(self.live):
            for d in sorted(self.inter_edges[c]):
                if c < d:
                    yield c, d

    def labels(self) -> List[int]:
        labels = [0] * self.graph.n
        for c in self.live:
            for v in self.members[c]:
                labels[v] = c
        return labels

    def partition(self) -> Partition:
        """Current clustering with dense ids ordered by smallest member vertex"""
        return Partition.from_assignment(self.labels())
