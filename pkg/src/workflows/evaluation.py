"""OVERVIEW:
Pairwise agreement between a planted clustering and a found one.

Every unordered vertex pair is labelled "together" or "apart" by each
clustering; the 2×2 confusion over those labels is summarised by the
Matthews correlation coefficient. The global confusion comes from the
contingency table in O(n + #cells); restricted confusions (pairs selected by
their endpoint degrees, or by degree bucket) are counted over explicit pair
arrays with numpy.

Predicates passed to `restricted_confusion` receive numpy arrays of degrees
and must work elementwise, e.g. ``lambda du, dv: (du <= 20) & (dv >= 40)``.
A pair {u, v} qualifies when predicate(deg u, deg v) or predicate(deg v, deg u).
"""

import logging
from collections import Counter
from typing import Callable, Dict, Iterator, List, Tuple

import numpy as np

from src.models.eval_models import BucketMatrix, DegreeBucket, DegreeBuckets, PairConfusion
from src.models.exceptions import VertexSetMismatch
from src.models.graph_models import Graph, Partition

logger = logging.getLogger(__name__)

DegreePredicate = Callable[[np.ndarray, np.ndarray], np.ndarray]

PAIR_CHUNK = 1 << 21


def _choose2(k: int) -> int:
    return k * (k - 1) // 2


def _check_cover(truth: Partition, found: Partition, n: int) -> None:
    if truth.n != n or found.n != n:
        raise VertexSetMismatch(f"partitions cover {truth.n} and {found.n} vertices, expected {n}")


def pair_confusion(truth: Partition, found: Partition) -> PairConfusion:
    """Confusion over all C(n, 2) pairs via the contingency table"""
    if truth.n != found.n:
        raise VertexSetMismatch(f"truth covers {truth.n} vertices, found covers {found.n}")
    cells = Counter(zip(truth.assignment, found.assignment))
    tp = sum(_choose2(count) for count in cells.values())
    together_true = sum(_choose2(size) for size in truth.sizes())
    together_found = sum(_choose2(size) for size in found.sizes())
    fp = together_found - tp
    fn = together_true - tp
    tn = _choose2(truth.n) - tp - fp - fn
    return PairConfusion(tp, fp, fn, tn)


def mcc(c: PairConfusion) -> float:
    return c.mcc()


def degree_buckets(g: Graph, cap: int = 100) -> DegreeBuckets:
    """Split vertices by ascending degree, closing a bucket before it would exceed `cap`.

    A single degree class larger than cap becomes one oversized bucket.
    """
    if cap < 1:
        raise ValueError("bucket cap must be >= 1")
    by_degree: Dict[int, List[int]] = {}
    for v, k in enumerate(g.degree):
        by_degree.setdefault(k, []).append(v)

    buckets: List[DegreeBucket] = []
    lo = hi = None
    current: List[int] = []
    for k in sorted(by_degree):
        members = by_degree[k]
        if current and len(current) + len(members) > cap:
            buckets.append(DegreeBucket(lo, hi, tuple(current)))
            current = []
        if not current:
            lo = k
        hi = k
        current.extend(members)
    if current:
        buckets.append(DegreeBucket(lo, hi, tuple(current)))
    return DegreeBuckets(tuple(buckets), cap)


def _pair_chunks(n: int, max_pairs: int = PAIR_CHUNK) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """All pairs u < v as (iu, iv) arrays, a block of whole rows at a time"""
    start = 0
    while start < n - 1:
        stop, count = start, 0
        while stop < n - 1 and (count == 0 or count + (n - 1 - stop) <= max_pairs):
            count += n - 1 - stop
            stop += 1
        rows = np.arange(start, stop, dtype=np.int64)
        lengths = n - 1 - rows
        iu = np.repeat(rows, lengths)
        row_start = np.repeat(np.cumsum(lengths) - lengths, lengths)
        iv = iu + 1 + (np.arange(count, dtype=np.int64) - row_start)
        yield iu, iv
        start = stop


def _outcome(truth: np.ndarray, found: np.ndarray, iu: np.ndarray, iv: np.ndarray) -> np.ndarray:
    """0 = tp, 1 = fp, 2 = fn, 3 = tn per pair"""
    same_truth = truth[iu] == truth[iv]
    same_found = found[iu] == found[iv]
    return np.where(same_truth, np.where(same_found, 0, 2), np.where(same_found, 1, 3))


def restricted_confusion(truth: Partition, found: Partition, g: Graph, predicate: DegreePredicate) -> PairConfusion:
    """Confusion over exactly the unordered pairs whose endpoint degrees satisfy `predicate`"""
    _check_cover(truth, found, g.n)
    degree = np.asarray(g.degree, dtype=np.int64)
    t = np.asarray(truth.assignment, dtype=np.int64)
    f = np.asarray(found.assignment, dtype=np.int64)
    counts = np.zeros(4, dtype=np.int64)
    for iu, iv in _pair_chunks(g.n):
        du, dv = degree[iu], degree[iv]
        mask = np.broadcast_to(np.asarray(predicate(du, dv), dtype=bool), du.shape) | \
            np.broadcast_to(np.asarray(predicate(dv, du), dtype=bool), du.shape)
        if not mask.any():
            continue
        counts += np.bincount(_outcome(t, f, iu[mask], iv[mask]), minlength=4)
    return PairConfusion(*(int(x) for x in counts))


def low_high_predicate(low_cut: int = 20, high_cut: int = 40) -> DegreePredicate:
    """One endpoint of degree <= low_cut, the other >= high_cut"""
    def predicate(du: np.ndarray, dv: np.ndarray) -> np.ndarray:
        return (du <= low_cut) & (dv >= high_cut)
    return predicate


def low_high_mcc(truth: Partition, found: Partition, g: Graph, low_cut: int = 20, high_cut: int = 40) -> float:
    return restricted_confusion(truth, found, g, low_high_predicate(low_cut, high_cut)).mcc()


def bucket_mcc_matrix(truth: Partition, found: Partition, g: Graph, buckets: DegreeBuckets) -> BucketMatrix:
    """One confusion per bucket pair (i >= j): pairs with an endpoint in each bucket"""
    _check_cover(truth, found, g.n)
    count = len(buckets)
    bucket = np.asarray(buckets.bucket_of(g.n), dtype=np.int64)
    if (bucket < 0).any():
        raise VertexSetMismatch("buckets do not cover every vertex of the graph")
    t = np.asarray(truth.assignment, dtype=np.int64)
    f = np.asarray(found.assignment, dtype=np.int64)

    cell_count = count * (count + 1) // 2
    totals = np.zeros(cell_count * 4, dtype=np.int64)
    for iu, iv in _pair_chunks(g.n):
        bu, bv = bucket[iu], bucket[iv]
        hi = np.maximum(bu, bv)
        lo = np.minimum(bu, bv)
        cell = hi * (hi + 1) // 2 + lo
        totals += np.bincount(cell * 4 + _outcome(t, f, iu, iv), minlength=cell_count * 4)

    cells: Dict[Tuple[int, int], PairConfusion] = {}
    for i in range(count):
        for j in range(i + 1):
            base = (i * (i + 1) // 2 + j) * 4
            cells[(i, j)] = PairConfusion(*(int(x) for x in totals[base:base + 4]))
    logger.debug("bucket matrix computed", extra={"buckets": count, "vertices": g.n})
    return BucketMatrix(buckets, cells)
