from __future__ import annotations

import math
from fractions import Fraction

import networkx as nx
import pytest
from networkx.algorithms import isomorphism

from threshold_audit.errors import GraphTooLarge, NoEmbedding, NotATree, TrivialFamily
from threshold_audit.graphs import (
    GraphSpec,
    automorphism_count,
    containment_family,
    edge_slot,
    expectation_threshold,
    graph_cover_report,
    iter_embeddings,
    max_density,
    q_of_graph,
    slot_pair,
    tree_threshold_bracket,
)
from threshold_audit.measure import critical_probability

TRIANGLE = GraphSpec.from_edges(3, [(0, 1), (1, 2), (0, 2)])
SINGLE_EDGE = GraphSpec.from_edges(2, [(0, 1)])
MATCHING = GraphSpec.from_edges(4, [(0, 1), (2, 3)])
PATH3 = GraphSpec.path(3)


def to_networkx(graph: GraphSpec) -> nx.Graph:
    result = nx.Graph()
    result.add_nodes_from(range(graph.v))
    result.add_edges_from(graph.edges)
    return result


SAMPLE_GRAPHS = [
    TRIANGLE,
    MATCHING,
    PATH3,
    GraphSpec.cycle(5),
    GraphSpec.star(5),
    GraphSpec.complete(4),
    GraphSpec.from_edges(4, [(0, 1), (1, 2), (0, 2)]),
    GraphSpec.from_edges(6, [(0, 1), (1, 2), (2, 3), (1, 4)]),
]


@pytest.mark.parametrize("graph", SAMPLE_GRAPHS)
def test_automorphism_count_matches_networkx(graph):
    nx_graph = to_networkx(graph)
    expected = sum(1 for _ in isomorphism.GraphMatcher(nx_graph, nx_graph).isomorphisms_iter())
    assert automorphism_count(graph) == expected


@pytest.mark.parametrize("pattern", [TRIANGLE, PATH3, MATCHING, GraphSpec.cycle(4)])
def test_embeddings_match_networkx_monomorphisms(pattern):
    host = GraphSpec.from_edges(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (5, 2)])
    matcher = isomorphism.GraphMatcher(to_networkx(host), to_networkx(pattern))
    expected = sum(1 for _ in matcher.subgraph_monomorphisms_iter())
    assert sum(1 for _ in iter_embeddings(pattern, host)) == expected


def test_expectation_threshold_anchors():
    padded_triangle = GraphSpec(4, TRIANGLE.edges)
    report = expectation_threshold(padded_triangle)
    assert report.p_e == pytest.approx(4 ** (-1 / 3), abs=1e-9)
    assert len(report.binding_subgraph) == 3
    assert expectation_threshold(MATCHING).p_e == pytest.approx(3**-0.5, abs=1e-9)
    assert report.as_dict()["p_E"] == report.p_e


def test_max_density():
    assert max_density(TRIANGLE).density == Fraction(1)
    assert max_density(GraphSpec.complete(4)).density == Fraction(3, 2)
    pendant = GraphSpec.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    assert max_density(pendant).density == Fraction(1)
    assert max_density(TRIANGLE).threshold_exponent == pytest.approx(-1.0)


def test_edge_slots_enumerate_pairs():
    n = 6
    slots = [edge_slot(i, j, n) for i in range(n) for j in range(i + 1, n)]
    assert slots == list(range(math.comb(n, 2)))
    assert all(slot_pair(edge_slot(i, j, n), n) == (i, j) for i in range(n) for j in range(i + 1, n))
    assert edge_slot(3, 1, n) == edge_slot(1, 3, n)


def test_containment_families():
    assert len(containment_family(SINGLE_EDGE, 4)) == 6
    triangles = containment_family(TRIANGLE, 4)
    assert len(triangles) == 4
    assert all(mask.bit_count() == 3 for mask in triangles.minimal_sets)
    assert len(containment_family(MATCHING, 4)) == 3
    with pytest.raises(NoEmbedding):
        containment_family(GraphSpec.complete(5), 4)
    with pytest.raises(TrivialFamily):
        containment_family(GraphSpec(3, ()), 4)
    with pytest.raises(GraphTooLarge):
        containment_family(SINGLE_EDGE, 12)


def test_single_edge_critical_probability_closed_form():
    family = containment_family(SINGLE_EDGE, 5)
    assert critical_probability(family) == pytest.approx(1 - 2 ** (-1 / 10), abs=1e-9)


@pytest.mark.parametrize("graph", [SINGLE_EDGE, MATCHING, PATH3, TRIANGLE])
@pytest.mark.parametrize("n", [4, 5, 6])
def test_cover_threshold_at_least_half_expectation_threshold(graph, n):
    if graph.v > n:
        pytest.skip("pattern does not fit")
    report = graph_cover_report(graph, n, 1e-9)
    assert report.q >= report.p_e / 2 - 1e-6
    assert report.half_bound_holds


def test_graph_cover_of_single_edge():
    # F is "some edge present": cover by all C(n,2) singletons.
    assert q_of_graph(SINGLE_EDGE, 4) == pytest.approx(1 / 12, abs=1e-8)


def test_tree_bracket():
    bracket = tree_threshold_bracket(GraphSpec.star(5), 100, 0.5, 2.0)
    base = max(math.log(100) / 100, 4 / 100)
    assert bracket.base == pytest.approx(base)
    assert (bracket.lower, bracket.upper) == pytest.approx((0.5 * base, 2 * base))
    assert bracket.max_degree == 4
    with pytest.raises(NotATree):
        tree_threshold_bracket(GraphSpec.cycle(4), 100)


@pytest.mark.parametrize("graph", SAMPLE_GRAPHS)
def test_automorphism_count_divides_factorial(graph):
    assert math.factorial(graph.v) % automorphism_count(graph) == 0


@pytest.mark.parametrize("graph", [TRIANGLE, MATCHING, PATH3, GraphSpec.cycle(4)])
def test_expectation_threshold_constraints(graph):
    report = expectation_threshold(graph)
    for item in report.constraints:
        sub = GraphSpec(graph.v, item.edges)
        assert item.copies * automorphism_count(sub) == math.factorial(graph.v)
    # Dropping constraints can only lower the binding bound.
    constraints = report.constraints
    for size in range(1, len(constraints) + 1):
        restricted = constraints[:size]
        assert max(item.bound for item in restricted) <= report.p_e


@pytest.mark.parametrize("graph", [SINGLE_EDGE, MATCHING, PATH3, TRIANGLE])
@pytest.mark.parametrize("n", [4, 5])
def test_cover_threshold_below_containment_critical_probability(graph, n):
    q = q_of_graph(graph, n)
    assert q <= critical_probability(containment_family(graph, n)) + 1e-6
