from fractions import Fraction

import pytest

from src.models.exceptions import EmptyGraph, ParseError, ValidationError
from src.models.graph_models import Graph
from src.tools.edge_list import load_edge_list, write_edge_list, write_id_map
from src.workflows.graph_core import build_graph, validate


def test_load_triangle():
    g = load_edge_list("0 1\n0 2\n1 2")
    assert g.n == 3
    assert g.edge_count == 3
    assert g.degree == (2, 2, 2)
    assert g.avg_degree == Fraction(2)


def test_load_barbell(barbell):
    text = "0 1\n0 2\n1 2\n3 4\n3 5\n4 5\n2 3\n"
    g = load_edge_list(text)
    assert g.n == 6
    assert g.edge_count == 7
    assert g.degree == (2, 2, 3, 3, 2, 2)
    assert sum(g.degree) == 2 * g.edge_count
    assert g == barbell


def test_adjacency_sorted_and_symmetric(barbell):
    for v, adj in enumerate(barbell.adjacency):
        assert list(adj) == sorted(adj)
        for w in adj:
            assert v in barbell.adjacency[w]


def test_self_loop_rejected():
    with pytest.raises(ValidationError, match="self-loop"):
        load_edge_list("0 0")


def test_duplicate_edge_rejected_in_either_orientation():
    with pytest.raises(ValidationError, match="duplicate"):
        load_edge_list("0 1\n1 2\n1 0\n")


def test_parse_error_reports_line_number():
    with pytest.raises(ParseError) as info:
        load_edge_list("# comment\n0 1\n1 x\n")
    assert info.value.line_number == 3
    assert "line 3" in str(info.value)


def test_three_fields_is_a_parse_error():
    with pytest.raises(ParseError):
        load_edge_list("0 1 2\n")


def test_negative_id_is_a_parse_error():
    with pytest.raises(ParseError):
        load_edge_list("0 -1\n")


def test_empty_graph():
    with pytest.raises(EmptyGraph):
        load_edge_list("# only a comment\n\n")


def test_header_overrides_vertex_count():
    g = load_edge_list("# n=5\n0 1\n1 2\n")
    assert g.n == 5
    assert g.degree == (1, 2, 1, 0, 0)


def test_header_smaller_than_ids_rejected():
    with pytest.raises(ValidationError):
        load_edge_list("# n=2\n0 1\n1 2\n")


def test_remap_sparse_ids():
    g = load_edge_list("10 30\n30 70\n", remap=True)
    assert g.n == 3
    assert g.edges == ((0, 1), (1, 2))
    assert g.original_ids == (10, 30, 70)
    assert write_id_map(g) == "0 10\n1 30\n2 70\n"


def test_canonical_round_trip():
    g = load_edge_list("# n=7\n2 1\n0 1\n\n# note\n5 3\n")
    text = write_edge_list(g)
    assert text == "# n=7\n0 1\n1 2\n3 5\n"
    assert load_edge_list(text) == g
    assert write_edge_list(load_edge_list(text)) == text


def test_validate_accepts_loaded_graphs(triangle, barbell):
    validate(triangle)
    validate(barbell)


def test_validate_rejects_asymmetric_adjacency():
    g = Graph(n=3, edges=((0, 1),), adjacency=((1,), (0, 2), ()), degree=(1, 2, 0))
    with pytest.raises(ValidationError):
        validate(g)


def test_validate_rejects_wrong_degree():
    g = Graph(n=2, edges=((0, 1),), adjacency=((1,), (0,)), degree=(1, 2))
    with pytest.raises(ValidationError, match="degree"):
        validate(g)


def test_build_graph_allow_empty():
    g = build_graph(4, [], allow_empty=True)
    assert g.edge_count == 0
    with pytest.raises(EmptyGraph):
        build_graph(4, [])
