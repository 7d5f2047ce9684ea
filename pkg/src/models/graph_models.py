"""OVERVIEW:
Core data shapes shared by every flatmod workflow.

- Graph      → undirected simple graph with dense vertex ids 0..n-1
- Partition  → vertex → cluster assignment (the C matrix of modularity)

Both are frozen dataclasses: once built they are safe to hand to any number of
readers (worker processes, report code) without copying. They are plain
dataclasses rather than pydantic models because they hold thousands of
integers and sit on the hot path of the greedy climb.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Edge = Tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph.

    edges are canonical (u < v) and sorted; adjacency[v] is the ascending
    neighbour list of v; degree[v] = len(adjacency[v]).
    original_ids is set only when a file with sparse ids was remapped:
    original_ids[v] is the id the vertex had in the source file.
    """
    n: int
    edges: Tuple[Edge, ...]
    adjacency: Tuple[Tuple[int, ...], ...]
    degree: Tuple[int, ...]
    original_ids: Optional[Tuple[int, ...]] = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge],
                   original_ids: Optional[Sequence[int]] = None) -> "Graph":
        """Build adjacency and degrees from an edge iterable (no checks, see graph_core.validate)"""
        canonical = sorted((u, v) if u < v else (v, u) for u, v in edges)
        neighbours: List[List[int]] = [[] for _ in range(n)]
        for u, v in canonical:
            neighbours[u].append(v)
            neighbours[v].append(u)
        adjacency = tuple(tuple(sorted(adj)) for adj in neighbours)
        return cls(
            n=n,
            edges=tuple(canonical),
            adjacency=adjacency,
            degree=tuple(len(adj) for adj in adjacency),
            original_ids=tuple(original_ids) if original_ids is not None else None,
        )

    @property
    def edge_count(self) -> int:
        """L"""
        return len(self.edges)

    @property
    def avg_degree(self) -> Fraction:
        """k̂ = 2L / n, kept exact"""
        if self.n == 0:
            return Fraction(0)
        return Fraction(2 * self.edge_count, self.n)

    def has_edge(self, u: int, v: int) -> bool:
        adj = self.adjacency[u]
        return v in adj


@dataclass(frozen=True)
class Partition:
    """Vertex → cluster assignment with dense cluster ids in [0, cluster_count)"""
    assignment: Tuple[int, ...]
    cluster_count: int = field(default=-1)

    def __post_init__(self):
        count = (max(self.assignment) + 1) if self.assignment else 0
        if self.cluster_count == -1:
            object.__setattr__(self, "cluster_count", count)
        if any(c < 0 for c in self.assignment):
            raise ValueError("cluster ids must be non-negative")
        if len(set(self.assignment)) != self.cluster_count or count != self.cluster_count:
            raise ValueError(
                f"cluster ids must be dense in [0, {self.cluster_count}); got {count} labels"
            )

    @classmethod
    def from_assignment(cls, labels: Sequence[int]) -> "Partition":
        """Relabel arbitrary cluster labels to dense ids ordered by smallest member vertex"""
        relabel: Dict[int, int] = {}
        dense = []
        for label in labels:
            if label not in relabel:
                relabel[label] = len(relabel)
            dense.append(relabel[label])
        return cls(assignment=tuple(dense), cluster_count=len(relabel))

    @classmethod
    def from_clusters(cls, n: int, clusters: Iterable[Iterable[int]]) -> "Partition":
        labels = [-1] * n
        for cid, members in enumerate(clusters):
            for v in members:
                labels[v] = cid
        if any(label < 0 for label in labels):
            raise ValueError("clusters do not cover every vertex")
        return cls.from_assignment(labels)

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(assignment=tuple(range(n)), cluster_count=n)

    @classmethod
    def single_cluster(cls, n: int) -> "Partition":
        return cls(assignment=(0,) * n, cluster_count=1 if n else 0)

    @property
    def n(self) -> int:
        return len(self.assignment)

    def clusters(self) -> List[List[int]]:
        members: List[List[int]] = [[] for _ in range(self.cluster_count)]
        for v, c in enumerate(self.assignment):
            members[c].append(v)
        return members

    def sizes(self) -> List[int]:
        sizes = [0] * self.cluster_count
        for c in self.assignment:
            sizes[c] += 1
        return sizes
