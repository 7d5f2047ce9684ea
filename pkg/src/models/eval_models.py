"""OVERVIEW:
Result shapes of the pair-agreement evaluation.

- PairConfusion → 2×2 confusion over unordered vertex pairs
                  (tp: together in both, fp: together only in the found clustering,
                   fn: together only in the truth, tn: apart in both)
- DegreeBucket / DegreeBuckets → consecutive degree ranges holding about `cap` vertices
- BucketMatrix  → lower-triangular grid of confusions, one per bucket pair
"""

import csv
import io
import math
from dataclasses import dataclass
from typing import Dict, Iterator, List, Tuple


@dataclass(frozen=True)
class PairConfusion:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def __add__(self, other: "PairConfusion") -> "PairConfusion":
        return PairConfusion(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn, self.tn + other.tn)

    def swapped(self) -> "PairConfusion":
        """Confusion with the roles of truth and found exchanged"""
        return PairConfusion(self.tp, self.fn, self.fp, self.tn)

    @property
    def degenerate(self) -> bool:
        """True when a marginal is zero and the MCC is undefined"""
        tp, fp, fn, tn = self.tp, self.fp, self.fn, self.tn
        return (tp + fp) == 0 or (tp + fn) == 0 or (tn + fp) == 0 or (tn + fn) == 0

    def mcc(self) -> float:
        """Matthews correlation; 0 for degenerate confusions"""
        if self.degenerate:
            return 0.0
        tp, fp, fn, tn = self.tp, self.fp, self.fn, self.tn
        numerator = tp * tn - fp * fn
        value = numerator / math.sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn))
        return max(-1.0, min(1.0, value))


@dataclass(frozen=True)
class DegreeBucket:
    lo: int
    hi: int
    vertices: Tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class DegreeBuckets:
    """Buckets in ascending degree order; they partition the vertex set"""
    buckets: Tuple[DegreeBucket, ...]
    cap: int

    def __len__(self) -> int:
        return len(self.buckets)

    def __iter__(self) -> Iterator[DegreeBucket]:
        return iter(self.buckets)

    def __getitem__(self, index: int) -> DegreeBucket:
        return self.buckets[index]

    def bucket_of(self, n: int) -> List[int]:
        """bucket index of every vertex 0..n-1"""
        index = [-1] * n
        for b, bucket in enumerate(self.buckets):
            for v in bucket.vertices:
                index[v] = b
        return index


CSV_HEADER = ["bucket_i_lo", "bucket_i_hi", "bucket_j_lo", "bucket_j_hi", "pair_count", "mcc"]


@dataclass(frozen=True)
class BucketMatrix:
    buckets: DegreeBuckets
    cells: Dict[Tuple[int, int], PairConfusion]

    def confusion(self, i: int, j: int) -> PairConfusion:
        if i < j:
            i, j = j, i
        return self.cells.get((i, j), PairConfusion())

    def mcc(self, i: int, j: int) -> float:
        return self.confusion(i, j).mcc()

    def pair_count(self, i: int, j: int) -> int:
        return self.confusion(i, j).total

    def rows(self) -> Iterator[Tuple[int, int]]:
        """(i, j) with i >= j, row by row"""
        for i in range(len(self.buckets)):
            for j in range(i + 1):
                yield i, j

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for i, j in self.rows():
            bi, bj = self.buckets[i], self.buckets[j]
            writer.writerow([bi.lo, bi.hi, bj.lo, bj.hi, self.pair_count(i, j), f"{self.mcc(i, j):.6f}"])
        return out.getvalue()
