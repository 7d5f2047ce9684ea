"""OVERVIEW:
Graph construction and validation.

Every Graph that reaches the scoring or clustering code has passed through
`validate`, which checks the simple-graph invariants:
- no self-loops, no duplicate edges
- symmetric, ascending adjacency lists
- degree[v] = |adj(v)| and Σ degree = 2L
"""

import logging
from typing import Iterable, Optional, Sequence

from src.models.exceptions import EmptyGraph, ValidationError
from src.models.graph_models import Edge, Graph

logger = logging.getLogger(__name__)


def validate(g: Graph) -> None:
    """Raise ValidationError describing the first broken invariant; return None when g is ok"""
    if len(g.adjacency) != g.n or len(g.degree) != g.n:
        raise ValidationError(
            f"adjacency/degree arrays have {len(g.adjacency)}/{len(g.degree)} entries for n={g.n}"
        )

    seen = set()
    for u, v in g.edges:
        if u == v:
            raise ValidationError(f"self-loop at vertex {u}")
        if not (0 <= u < g.n and 0 <= v < g.n):
            raise ValidationError(f"edge ({u}, {v}) names a vertex outside [0, {g.n})")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise ValidationError(f"duplicate edge {key}")
        seen.add(key)

    half_edges = 0
    for v, adj in enumerate(g.adjacency):
        if g.degree[v] != len(adj):
            raise ValidationError(f"degree[{v}]={g.degree[v]} but adjacency has {len(adj)} entries")
        for prev, w in zip(adj, adj[1:]):
            if w <= prev:
                raise ValidationError(f"adjacency of {v} is not strictly ascending")
        for w in adj:
            if w == v:
                raise ValidationError(f"self-loop at vertex {v}")
            if not 0 <= w < g.n:
                raise ValidationError(f"adjacency of {v} names vertex {w} outside [0, {g.n})")
            if v not in g.adjacency[w]:
                raise ValidationError(f"adjacency is not symmetric: {w} in adj({v}) but {v} not in adj({w})")
            if v < w and (v, w) not in seen:
                raise ValidationError(f"adjacency pair ({v}, {w}) missing from edge list")
        half_edges += len(adj)

    if half_edges != 2 * g.edge_count:
        raise ValidationError(f"sum of degrees {half_edges} != 2L = {2 * g.edge_count}")


def build_graph(n: int, edges: Iterable[Edge], original_ids: Optional[Sequence[int]] = None,
                allow_empty: bool = False) -> Graph:
    """Construct and validate a Graph; L = 0 raises EmptyGraph unless allow_empty"""
    g = Graph.from_edges(n, edges, original_ids=original_ids)
    validate(g)
    if g.edge_count == 0 and not allow_empty:
        raise EmptyGraph("graph has no edges; scores divide by 2L")
    return g


def require_edges(g: Graph) -> None:
    if g.edge_count == 0:
        raise EmptyGraph("graph has no edges; scores divide by 2L")
