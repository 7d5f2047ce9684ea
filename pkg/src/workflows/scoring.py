"""OVERVIEW:
Exact evaluation of the two partition scores and of merge deltas.

Standard (resolution) modularity
    Q_r  = (1/2L) Σ_v Σ_w C_vw (r·A_vw − k_v k_w / 2L)
         = Σ_c [ r·2m_c/(2L) − a_c²/(2L)² ]
Flat modularity
    Q♭_R = (1/2L) Σ_v Σ_w C_vw (A_vw − R / 2L)
         = Σ_c [ 2m_c/(2L) − R·n_c²/(2L)² ]

where m_c is the internal edge count of cluster c, a_c its degree sum and
n_c its size. The double sums run over ordered pairs including v = w, so the
diagonal penalty terms are part of the score.

Everything is integer arithmetic: standard scores are scaled by 100·(2L)²
(r = p/100), flat scores by (2L)². Floats only appear in ScaledScore.value.

Averaging the null model over all graphs with L edges instead of over the
degree-preserving ones gives a flat penalty k̂²/(2L) per pair; adding a
resolution r and dividing through by r gives penalty (k̂²/r)/(2L). Both rank
partitions exactly as Q♭_R with R = k̂²/r does, see `flat_penalty_for`.
"""

from decimal import Decimal
from fractions import Fraction
from typing import List, Tuple, Union

from src.models.exceptions import UnknownCluster
from src.models.graph_models import Graph, Partition
from src.models.score_models import FlatVariant, ScaledScore, StandardVariant, parse_resolution
from src.workflows.graph_core import require_edges
from src.workflows.merge_state import MergeState, Variant, delta_coefficients


def cluster_aggregates(g: Graph, p: Partition) -> Tuple[List[int], List[int], List[int]]:
    """Return (internal edge counts m_c, degree sums a_c, sizes n_c) per cluster"""
    if p.n != g.n:
        raise ValueError(f"partition covers {p.n} vertices, graph has {g.n}")
    internal = [0] * p.cluster_count
    degree_sum = [0] * p.cluster_count
    sizes = [0] * p.cluster_count
    assignment = p.assignment
    for v, c in enumerate(assignment):
        degree_sum[c] += g.degree[v]
        sizes[c] += 1
    for u, v in g.edges:
        if assignment[u] == assignment[v]:
            internal[assignment[u]] += 1
    return internal, degree_sum, sizes


def modularity(g: Graph, p: Partition, r: Union[str, float, int, Decimal] = 1) -> ScaledScore:
    """Q_r as an exact ScaledScore over 100·(2L)²; r=1 is plain modularity"""
    require_edges(g)
    percent = parse_resolution(r)
    two_l = 2 * g.edge_count
    internal, degree_sum, _ = cluster_aggregates(g, p)
    numerator = sum(percent * 2 * m * two_l - 100 * a * a for m, a in zip(internal, degree_sum))
    return ScaledScore(numerator, 100 * two_l * two_l)


def flat_modularity(g: Graph, p: Partition, R: int) -> ScaledScore:
    """Q♭_R as an exact ScaledScore over (2L)²"""
    require_edges(g)
    two_l = 2 * g.edge_count
    internal, _, sizes = cluster_aggregates(g, p)
    numerator = sum(2 * m * two_l - R * s * s for m, s in zip(internal, sizes))
    return ScaledScore(numerator, two_l * two_l)


def score(g: Graph, p: Partition, variant: Variant) -> ScaledScore:
    if isinstance(variant, StandardVariant):
        return modularity(g, p, variant.param_label)
    if isinstance(variant, FlatVariant):
        return flat_modularity(g, p, variant.R)
    raise TypeError(f"unsupported score variant {variant!r}")


def merge_delta(state: MergeState, i: int, j: int, variant: Variant) -> ScaledScore:
    """Exact change of the score when clusters i and j of `state` are merged.

    Standard: 2·r·e_ij/(2L) − 2·a_i·a_j/(2L)²  over 100·(2L)²
    Flat:     2·e_ij/(2L)   − 2·R·n_i·n_j/(2L)² over (2L)²
    """
    if i == j:
        raise UnknownCluster(f"merge needs two distinct clusters, got {i} twice")
    state.require_live(i, j)
    bonus, penalty, denominator, uses_sizes = delta_coefficients(variant, state.two_l)
    weights = state.size if uses_sizes else state.degree_sum
    e = state.inter_edges[i].get(j, 0)
    return ScaledScore(bonus * e - penalty * weights[i] * weights[j], denominator)


def flat_penalty_for(avg_degree: Union[Fraction, int], r: Union[str, float, int, Decimal] = 1) -> Fraction:
    """Penalty multiplier R = k̂²/r at which the averaged flat form ranks partitions like Q♭_R"""
    percent = parse_resolution(r)
    if percent == 0:
        raise ValueError("r must be positive")
    k_hat = Fraction(avg_degree)
    return k_hat * k_hat * 100 / percent
