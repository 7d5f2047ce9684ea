"""OVERVIEW:
LFR-style benchmark graphs with planted communities.

Pipeline (each stage on its own random substream, see tools/powerlaw.py):
1. degrees          → truncated power law (exponent tau1) on [k_min, max_degree],
                      k_min solved so the mean hits average_degree
2. community sizes  → truncated power law (exponent tau2) on [min_community, max_community],
                      summing exactly to n
3. assignment       → vertex v gets internal degree round_half_up((1 − mu)·k_v) and is
                      placed in a community strictly larger than that
4. internal wiring  → stub matching inside each community, conflicts rewired by edge swaps
5. external wiring  → stub matching across the whole graph, rejecting self-loops,
                      duplicates and same-community pairs, conflicts rewired likewise

Degree sequences are realised exactly, so the degree cap always holds.
Each stage gets RETRY_BUDGET attempts before GenerationFailure.
"""

import logging
import math
from fractions import Fraction
from statistics import median
from typing import Dict, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

from src.models.exceptions import GenerationFailure, InfeasibleDegrees, InfeasiblePartition
from src.models.graph_models import Edge, Graph
from src.models.lfr_models import GenerationReport, GroundTruth, LfrParams
from src.tools.powerlaw import (
    STAGE_ASSIGNMENT, STAGE_COMMUNITY_SIZES, STAGE_DEGREES, STAGE_EXTERNAL,
    STAGE_INTERNAL, composition_bounds, sample_integers,
    solve_lower_bound, substream, truncated_mean,
)
from src.workflows.graph_core import build_graph

logger = logging.getLogger(__name__)

RETRY_BUDGET = 100
SWAP_TRIES = 1000


def sample_powerlaw_degrees(params: LfrParams, rng: Optional[np.random.Generator] = None) -> List[int]:
    """n degrees from P(k) ∝ k^(-tau1) on [k_min, max_degree] with mean ≈ average_degree; sum is even"""
    if rng is None:
        rng = substream(params.seed, STAGE_DEGREES)
    k_max = params.max_degree
    target = float(params.average_degree)
    if target > k_max:
        raise InfeasibleDegrees(f"average degree {target} exceeds max degree {k_max}")
    floor_mean = truncated_mean(params.tau1, 1.0, float(k_max))
    if target < floor_mean:
        raise InfeasibleDegrees(
            f"average degree {target} below the smallest reachable mean {floor_mean:.4f} for tau1={params.tau1}"
        )

    k_min = solve_lower_bound(params.tau1, target, k_max)
    degrees = sample_integers(rng, params.tau1, k_min, k_max, params.n, floor_value=1).tolist()

    if sum(degrees) % 2:
        index = int(rng.integers(params.n))
        for _ in range(RETRY_BUDGET):
            candidate = int(sample_integers(rng, params.tau1, k_min, k_max, 1, floor_value=1)[0])
            if candidate % 2 != degrees[index] % 2:
                degrees[index] = candidate
                break
        else:
            # every redraw had the same parity (collapsed distribution)
            degrees[index] += -1 if degrees[index] > 1 else 1
    logger.debug("sampled degrees", extra={"seed": params.seed, "k_min": round(k_min, 4)})
    return degrees


def sample_community_sizes(params: LfrParams, rng: Optional[np.random.Generator] = None) -> List[int]:
    """Community sizes in [min_community, max_community] summing exactly to n"""
    lo, hi, n = params.min_community, params.max_community, params.n
    fewest, most = composition_bounds(n, lo, hi)
    if fewest > most:
        raise InfeasiblePartition(f"n={n} cannot be split into communities of size {lo}..{hi}")

    for attempt in range(RETRY_BUDGET):
        stream = rng if (rng is not None and attempt == 0) else substream(params.seed, STAGE_COMMUNITY_SIZES, attempt)
        sizes: List[int] = []
        total = 0
        while total < n:
            size = int(sample_integers(stream, params.tau2, lo, hi, 1, floor_value=lo)[0])
            sizes.append(size)
            total += size
        overshoot = total - n
        slack = sum(s - lo for s in sizes)
        if overshoot > slack:
            continue
        while overshoot:
            largest = max(range(len(sizes)), key=lambda i: (sizes[i], -i))
            sizes[largest] -= 1
            overshoot -= 1
        return sizes
    raise InfeasiblePartition(f"could not split n={n} into sizes {lo}..{hi} after {RETRY_BUDGET} attempts")


def internal_degrees(degrees: Sequence[int], mu: float) -> List[int]:
    """round_half_up((1 − mu)·k) per vertex, computed exactly"""
    keep = 1 - Fraction(str(mu))
    return [math.floor(keep * k + Fraction(1, 2)) for k in degrees]


def _assign(params: LfrParams, k_in: Sequence[int], sizes: Sequence[int], round_: int) -> List[int]:
    """Place vertices (largest internal degree first) into communities with room and size > k_in"""
    n = params.n
    sizes_arr = np.asarray(sizes, dtype=np.int64)
    for attempt in range(RETRY_BUDGET):
        rng = substream(params.seed, STAGE_ASSIGNMENT, round_, attempt)
        free = sizes_arr.copy()
        tie_break = rng.permutation(n)
        order = sorted(range(n), key=lambda v: (-k_in[v], int(tie_break[v])))
        membership = [-1] * n
        for v in order:
            eligible = np.flatnonzero((free > 0) & (sizes_arr > k_in[v]))
            if eligible.size == 0:
                break
            weights = free[eligible] / free[eligible].sum()
            community = int(eligible[rng.choice(eligible.size, p=weights)])
            membership[v] = community
            free[community] -= 1
        else:
            return membership
        logger.debug("assignment attempt failed", extra={"seed": params.seed, "attempt": attempt})
    raise GenerationFailure(
        f"no community assignment fits internal degrees after {RETRY_BUDGET} attempts", stage="assignment"
    )


class _EdgePool:
    """Edge set with O(1) add / remove / uniform random pick"""

    def __init__(self):
        self.items: List[Edge] = []
        self.index: Dict[Edge, int] = {}

    def __len__(self):
        return len(self.items)

    def __contains__(self, edge: Edge) -> bool:
        return edge in self.index

    def add(self, edge: Edge) -> None:
        self.index[edge] = len(self.items)
        self.items.append(edge)

    def remove(self, edge: Edge) -> None:
        position = self.index.pop(edge)
        last = self.items.pop()
        if position < len(self.items):
            self.items[position] = last
            self.index[last] = position

    def pick(self, rng: np.random.Generator) -> Edge:
        return self.items[int(rng.integers(len(self.items)))]


def _key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def _wire(stubs: List[int], rng: np.random.Generator, pool: _EdgePool, existing: Set[Edge],
          allowed) -> bool:
    """Stub-match `stubs` into `pool`, then rewire rejected pairs by swapping with pooled edges.

    `existing` holds edges from earlier stages that must not be duplicated;
    `allowed(u, v)` rejects pairs the stage may not create. Returns False when
    some conflict could not be rewired.
    """
    shuffled = [stubs[i] for i in rng.permutation(len(stubs))]
    rejected: List[Tuple[int, int]] = []
    for a, b in zip(shuffled[0::2], shuffled[1::2]):
        edge = _key(a, b)
        if a != b and allowed(a, b) and edge not in pool and edge not in existing:
            pool.add(edge)
        else:
            rejected.append((a, b))

    def usable(x: int, y: int, new: Edge) -> bool:
        return x != y and allowed(x, y) and new not in pool and new not in existing

    for u, v in rejected:
        for _ in range(SWAP_TRIES):
            if not pool:
                return False
            x, y = pool.pick(rng)
            if rng.random() < 0.5:
                x, y = y, x
            first, second = _key(u, x), _key(v, y)
            if first == second or not usable(u, x, first) or not usable(v, y, second):
                continue
            pool.remove(_key(x, y))
            pool.add(first)
            pool.add(second)
            break
        else:
            return False
    return True


def _wire_internal(params: LfrParams, membership: Sequence[int], k_in: List[int], round_: int,
                   community_count: int) -> List[Edge]:
    members: List[List[int]] = [[] for _ in range(community_count)]
    for v, c in enumerate(membership):
        members[c].append(v)

    edges: List[Edge] = []
    for c, group in enumerate(members):
        if sum(k_in[v] for v in group) % 2:
            top = max(group, key=lambda v: (k_in[v], -v))
            k_in[top] -= 1
        sequence = [k_in[v] for v in group]
        if not nx.is_graphical(sequence):
            raise GenerationFailure(f"internal degree sequence of community {c} is not graphical", stage="internal")
        stubs = [v for v in group for _ in range(k_in[v])]
        for attempt in range(RETRY_BUDGET):
            pool = _EdgePool()
            if _wire(stubs, substream(params.seed, STAGE_INTERNAL, round_, c, attempt), pool, set(), lambda a, b: True):
                edges.extend(pool.items)
                break
        else:
            raise GenerationFailure(f"community {c} could not be wired after {RETRY_BUDGET} attempts", stage="internal")
    return edges


def _wire_external(params: LfrParams, membership: Sequence[int], degrees: Sequence[int],
                   k_in: Sequence[int], internal: List[Edge]) -> List[Edge]:
    stubs = [v for v in range(params.n) for _ in range(degrees[v] - k_in[v])]
    existing = set(internal)

    def across(a: int, b: int) -> bool:
        return membership[a] != membership[b]

    for attempt in range(RETRY_BUDGET):
        pool = _EdgePool()
        if _wire(stubs, substream(params.seed, STAGE_EXTERNAL, attempt), pool, existing, across):
            return list(pool.items)
        logger.debug("external wiring attempt failed", extra={"seed": params.seed, "attempt": attempt})
    raise GenerationFailure(f"external edges could not be wired after {RETRY_BUDGET} attempts", stage="external")


def generate(params: LfrParams) -> Tuple[Graph, GroundTruth]:
    """Build one benchmark graph; a pure function of params (seed included)"""
    degrees = sample_powerlaw_degrees(params, substream(params.seed, STAGE_DEGREES))
    sizes = sample_community_sizes(params, substream(params.seed, STAGE_COMMUNITY_SIZES, 0))
    k_in = internal_degrees(degrees, params.mu)

    # no community can hold this many internal neighbours; the excess becomes external
    largest = max(sizes)
    for v, k in enumerate(k_in):
        if k >= largest:
            k_in[v] = largest - 1

    failure: Optional[GenerationFailure] = None
    for round_ in range(RETRY_BUDGET):
        membership = _assign(params, k_in, sizes, round_)
        trial_k_in = list(k_in)
        try:
            internal = _wire_internal(params, membership, trial_k_in, round_, len(sizes))
        except GenerationFailure as exc:
            if exc.stage != "internal":
                raise
            failure = exc
            logger.debug("internal wiring failed, reassigning", extra={"seed": params.seed, "round": round_})
            continue
        break
    else:
        raise failure

    external = _wire_external(params, membership, degrees, trial_k_in, internal)
    graph = build_graph(params.n, internal + external)
    truth = GroundTruth(membership=tuple(membership), community_sizes=tuple(sizes))
    return graph, truth


def generation_report(params: LfrParams, graph: Graph, truth: GroundTruth) -> GenerationReport:
    membership = truth.membership
    fractions = []
    for v in range(graph.n):
        if graph.degree[v] == 0:
            continue
        external = sum(1 for w in graph.adjacency[v] if membership[w] != membership[v])
        fractions.append(external / graph.degree[v])
    nx_graph = nx.Graph()
    nx_graph.add_nodes_from(range(graph.n))
    nx_graph.add_edges_from(graph.edges)
    components = nx.number_connected_components(nx_graph)
    return GenerationReport(
        seed=params.seed,
        n=graph.n,
        edge_count=graph.edge_count,
        mean_degree=2 * graph.edge_count / graph.n,
        min_degree=min(graph.degree),
        max_degree=max(graph.degree),
        mean_mixing=sum(fractions) / len(fractions) if fractions else 0.0,
        median_mixing=median(fractions) if fractions else 0.0,
        mean_abs_mixing_error=sum(abs(f - params.mu) for f in fractions) / len(fractions) if fractions else 0.0,
        community_count=len(truth.community_sizes),
        min_community_size=min(truth.community_sizes),
        max_community_size=max(truth.community_sizes),
        components=components,
        connected=components == 1,
        fingerprint=params.fingerprint(),
    )
