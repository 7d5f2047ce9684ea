import itertools
import random

import numpy as np
import pytest

from conftest import random_graph, random_partition
from src.models.eval_models import CSV_HEADER, PairConfusion
from src.models.exceptions import VertexSetMismatch
from src.models.graph_models import Graph, Partition
from src.workflows.evaluation import (
    bucket_mcc_matrix, degree_buckets, low_high_mcc, low_high_predicate, mcc, pair_confusion,
    restricted_confusion,
)


def brute_confusion(truth, found, pairs):
    tp = fp = fn = tn = 0
    for u, v in pairs:
        same_t = truth.assignment[u] == truth.assignment[v]
        same_f = found.assignment[u] == found.assignment[v]
        if same_t and same_f:
            tp += 1
        elif same_f:
            fp += 1
        elif same_t:
            fn += 1
        else:
            tn += 1
    return PairConfusion(tp, fp, fn, tn)


def degree_only_graph(degrees):
    """Stand-in graph carrying just a degree sequence, for bucketing"""
    n = len(degrees)
    return Graph(n=n, edges=(), adjacency=((),) * n, degree=tuple(degrees))


def test_worked_example():
    truth = Partition.from_clusters(6, [[0, 1, 2], [3, 4, 5]])
    found = Partition.from_clusters(6, [[0, 1], [2, 3, 4, 5]])
    confusion = pair_confusion(truth, found)
    assert confusion == PairConfusion(tp=4, fp=3, fn=2, tn=6)
    assert mcc(confusion) == pytest.approx(0.327327, abs=1e-6)
    assert mcc(confusion) == pytest.approx(18 / 3024 ** 0.5)


def test_identical_and_singleton_partitions():
    truth = Partition.from_clusters(6, [[0, 1, 2], [3, 4, 5]])
    same = pair_confusion(truth, truth)
    assert same.fp == same.fn == 0
    assert same.mcc() == 1.0
    singles = pair_confusion(truth, Partition.singletons(6))
    assert singles.tp == singles.fp == 0
    assert singles.degenerate
    assert singles.mcc() == 0.0


def test_vertex_set_mismatch():
    with pytest.raises(VertexSetMismatch):
        pair_confusion(Partition.singletons(4), Partition.singletons(5))


def test_pair_confusion_matches_brute_force_and_is_symmetric():
    rng = random.Random(12)
    for _ in range(50):
        n = rng.randint(2, 12)
        truth = random_partition(rng, n, rng.randint(1, n))
        found = random_partition(rng, n, rng.randint(1, n))
        confusion = pair_confusion(truth, found)
        assert confusion == brute_confusion(truth, found, itertools.combinations(range(n), 2))
        assert confusion.total == n * (n - 1) // 2
        assert pair_confusion(found, truth) == confusion.swapped()
        assert pair_confusion(found, truth).mcc() == pytest.approx(confusion.mcc())
        assert -1.0 <= confusion.mcc() <= 1.0


def test_degree_buckets_rule():
    g = degree_only_graph([1] * 60 + [2] * 50 + [3] * 30)
    buckets = degree_buckets(g, cap=100)
    assert [(b.lo, b.hi, b.size) for b in buckets] == [(1, 1, 60), (2, 3, 80)]
    assert sorted(v for b in buckets for v in b.vertices) == list(range(140))


def test_oversized_degree_class_is_one_bucket():
    buckets = degree_buckets(degree_only_graph([5] * 150), cap=100)
    assert [(b.lo, b.hi, b.size) for b in buckets] == [(5, 5, 150)]


def test_bucket_cap_must_be_positive(barbell):
    with pytest.raises(ValueError):
        degree_buckets(barbell, cap=0)


def test_always_true_predicate_equals_global():
    rng = random.Random(1)
    g = random_graph(rng, 30, 0.2)
    truth = random_partition(rng, 30, 4)
    found = random_partition(rng, 30, 6)
    restricted = restricted_confusion(truth, found, g, lambda du, dv: np.ones_like(du, dtype=bool))
    assert restricted == pair_confusion(truth, found)


def test_barbell_high_degree_pair(barbell, two_triangles):
    confusion = restricted_confusion(two_triangles, two_triangles, barbell, lambda du, dv: (du >= 3) & (dv >= 3))
    assert confusion == PairConfusion(tp=0, fp=0, fn=0, tn=1)
    assert confusion.degenerate
    assert confusion.mcc() == 0.0


def test_empty_qualifying_set(barbell, two_triangles):
    confusion = restricted_confusion(two_triangles, two_triangles, barbell, low_high_predicate(1, 40))
    assert confusion == PairConfusion()
    assert low_high_mcc(two_triangles, two_triangles, barbell, 1, 40) == 0.0


def test_low_high_matches_brute_force():
    rng = random.Random(21)
    for _ in range(20):
        n = rng.randint(5, 20)
        g = random_graph(rng, n, 0.3)
        truth = random_partition(rng, n, 3)
        found = random_partition(rng, n, 4)
        low, high = 2, 5
        pairs = [(u, v) for u, v in itertools.combinations(range(n), 2)
                 if (g.degree[u] <= low and g.degree[v] >= high) or (g.degree[v] <= low and g.degree[u] >= high)]
        expected = brute_confusion(truth, found, pairs)
        assert restricted_confusion(truth, found, g, low_high_predicate(low, high)) == expected


def test_bucket_matrix_matches_brute_force():
    rng = random.Random(33)
    for _ in range(10):
        n = rng.randint(8, 20)
        g = random_graph(rng, n, 0.3)
        truth = random_partition(rng, n, 3)
        found = random_partition(rng, n, 3)
        buckets = degree_buckets(g, cap=max(1, n // 3))
        matrix = bucket_mcc_matrix(truth, found, g, buckets)
        of = buckets.bucket_of(n)
        total = PairConfusion()
        for i, j in matrix.rows():
            pairs = [(u, v) for u, v in itertools.combinations(range(n), 2)
                     if {of[u], of[v]} == {i, j}]
            assert matrix.confusion(i, j) == brute_confusion(truth, found, pairs)
            assert matrix.confusion(j, i) == matrix.confusion(i, j)
            total = total + matrix.confusion(i, j)
        assert total == pair_confusion(truth, found)


def test_single_bucket_equals_global():
    rng = random.Random(5)
    g = random_graph(rng, 25, 0.2)
    truth = random_partition(rng, 25, 3)
    found = random_partition(rng, 25, 5)
    matrix = bucket_mcc_matrix(truth, found, g, degree_buckets(g, cap=1000))
    assert list(matrix.rows()) == [(0, 0)]
    assert matrix.mcc(0, 0) == pytest.approx(pair_confusion(truth, found).mcc())


def test_perfect_agreement_cells_are_one():
    rng = random.Random(6)
    g = random_graph(rng, 40, 0.15)
    truth = random_partition(rng, 40, 4)
    matrix = bucket_mcc_matrix(truth, truth, g, degree_buckets(g, cap=10))
    for i, j in matrix.rows():
        confusion = matrix.confusion(i, j)
        if not confusion.degenerate:
            assert confusion.mcc() == pytest.approx(1.0)


def test_bucket_csv(barbell, two_triangles):
    matrix = bucket_mcc_matrix(two_triangles, two_triangles, barbell, degree_buckets(barbell, cap=4))
    lines = matrix.to_csv().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    # buckets: degree 2 (four vertices), degree 3 (two vertices)
    assert lines[1:] == [
        "2,2,2,2,6,1.000000",
        "3,3,2,2,8,1.000000",
        "3,3,3,3,1,0.000000",
    ]
