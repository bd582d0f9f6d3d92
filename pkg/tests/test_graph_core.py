import networkx as nx
import pytest

from prismext.exceptions import GraphFormatError, PreconditionError, UnreachableError
from prismext.models.graph import Graph
from prismext.models.outcome import EdgeClass, SearchBudget
from prismext.services.graph_core import (
    always_extendable_class,
    build_complete,
    build_complete_bipartite,
    build_cycle,
    build_hypercube,
    build_path,
    build_star,
    build_tree_from_pruefer,
    cartesian_product,
    chromatic_index,
    edge_distance,
    find_triangle,
    graph_descriptor,
    is_connected,
    is_forest,
    is_regular,
    is_triangle_free,
    max_degree,
    prism,
    recognize_prism,
)


# Builders
def test_build_cycle_4():
    g = build_cycle(4)
    assert g.vertex_count == 4
    assert g.edges == ((0, 1), (0, 3), (1, 2), (2, 3))


def test_k22_is_c4():
    assert nx.is_isomorphic(build_complete_bipartite(2, 2).to_networkx(), build_cycle(4).to_networkx())


def test_hypercube_3():
    q3 = build_hypercube(3)
    assert (q3.vertex_count, q3.edge_count) == (8, 12)
    assert is_regular(q3) and q3.max_degree == 3


def test_star_and_path():
    assert build_star(3).edges == ((0, 1), (0, 2), (0, 3))
    assert build_path(1).edge_count == 0


def test_pruefer_tree():
    t = build_tree_from_pruefer([3, 3, 3])
    assert t.vertex_count == 5
    assert t.degree(3) == 4
    assert build_tree_from_pruefer([]).edges == ((0, 1),)


@pytest.mark.parametrize("build, arg", [(build_cycle, 2), (build_path, 0), (build_complete, 0), (build_hypercube, -1)])
def test_builders_reject_bad_parameters(build, arg):
    with pytest.raises(GraphFormatError):
        build(arg)


def test_graph_rejects_unsorted_edges():
    with pytest.raises(ValueError):
        Graph(vertex_count=3, edges=((1, 2), (0, 1)))
    with pytest.raises(ValueError):
        Graph(vertex_count=2, edges=((1, 0),))


def test_edge_id_unknown_edge():
    with pytest.raises(KeyError):
        build_path(3).edge_id(0, 2)


# Products
def test_product_k2_k2_is_c4():
    p = cartesian_product(build_path(2), build_path(2))
    assert nx.is_isomorphic(p.to_networkx(), build_cycle(4).to_networkx())


def test_product_p3_k2():
    p = cartesian_product(build_path(3), build_path(2))
    assert (p.vertex_count, p.edge_count) == (6, 7)


def test_product_c3_k2():
    p = cartesian_product(build_cycle(3), build_path(2))
    assert (p.vertex_count, p.edge_count) == (6, 9)
    assert is_regular(p) and p.max_degree == 3
    assert not is_triangle_free(p)


def test_prism_of_k2():
    d = prism(build_path(2))
    assert nx.is_isomorphic(d.product.to_networkx(), build_cycle(4).to_networkx())
    assert len(d.matching_edges) == 2
    assert all(len(half) == 1 for half in d.copy_edges)


def test_prism_of_c5_counts():
    d = prism(build_cycle(5))
    assert d.product.edge_count == 15
    assert len(d.matching_edges) == 5
    assert len(d.copy_edges[0]) == len(d.copy_edges[1]) == 5


def test_prism_of_q3_is_q4():
    d = prism(build_hypercube(3))
    assert nx.is_isomorphic(d.product.to_networkx(), build_hypercube(4).to_networkx())


def test_prism_matches_cartesian_product():
    g = build_complete(4)
    assert prism(g).product == cartesian_product(build_path(2), g)


def test_prism_correspondence():
    g = build_cycle(5)
    d = prism(g)
    for e, (u, v) in enumerate(g.edges):
        first, second = d.copy_edges[0][e], d.copy_edges[1][e]
        assert d.product.edges[second] == (u + 5, v + 5)
        assert d.corresponding(first) == second
        assert d.role(first).copy == 1 and d.role(second).copy == 2
    for v, e in enumerate(d.matching_edges):
        assert d.role(e).in_matching
        assert d.corresponding(e) is None
        assert d.base_vertex(d.vertex(v, 2)) == (v, 2)


def test_recognize_prism():
    d = prism(build_star(3))
    assert recognize_prism(d.product) == d
    assert recognize_prism(build_cycle(6)) is None
    assert recognize_prism(build_path(3)) is None


# Predicates
def test_predicates():
    assert is_triangle_free(build_cycle(4))
    assert not is_triangle_free(build_complete(4))
    assert max_degree(build_complete_bipartite(3, 3)) == 3
    assert is_connected(build_cycle(5))
    assert not is_connected(Graph(vertex_count=3, edges=((0, 1),)))
    assert is_forest(build_star(4)) and not is_forest(build_cycle(3))
    assert find_triangle(build_complete(4)) == (0, 1, 2)
    assert find_triangle(build_cycle(4)) is None


def test_edge_distance_on_path():
    p = build_path(4)
    e1, e2, e3 = p.edge_id(0, 1), p.edge_id(1, 2), p.edge_id(2, 3)
    assert edge_distance(p, e1, e2) == 0
    assert edge_distance(p, e1, e3) == 1
    assert edge_distance(p, e3, e1) == 1


def test_edge_distance_opposite_edges_c6():
    c6 = build_cycle(6)
    assert edge_distance(c6, c6.edge_id(0, 1), c6.edge_id(3, 4)) == 2


def test_edge_distance_unreachable():
    g = Graph(vertex_count=4, edges=((0, 1), (2, 3)))
    with pytest.raises(UnreachableError):
        edge_distance(g, 0, 1)


def test_graph_descriptor_is_stable():
    assert graph_descriptor(build_cycle(5)) == graph_descriptor(build_cycle(5))
    assert graph_descriptor(build_cycle(5)).startswith("n5-m5-")
    assert graph_descriptor(build_cycle(5)) != graph_descriptor(build_path(5))


# Chromatic index
@pytest.mark.parametrize(
    "g, edge_class, index",
    [
        (build_cycle(4), EdgeClass.CLASS1, 2),
        (build_cycle(5), EdgeClass.CLASS2, 3),
        (build_complete(4), EdgeClass.CLASS1, 3),
        (build_complete(5), EdgeClass.CLASS2, 5),
    ],
)
def test_chromatic_index(g, edge_class, index):
    result = chromatic_index(g)
    assert result.edge_class is edge_class
    assert result.index == index
    if edge_class is EdgeClass.CLASS1:
        assert result.witness is not None and result.witness.is_total


def test_chromatic_index_unknown_on_tiny_budget():
    result = chromatic_index(build_complete(7), SearchBudget(max_nodes=1))
    assert result.edge_class is EdgeClass.UNKNOWN
    assert result.index is None


# Always extendable class
@pytest.mark.parametrize("g, expected", [(build_star(5), True), (build_cycle(7), True), (build_path(4), False)])
def test_always_extendable_class(g, expected):
    assert always_extendable_class(g) is expected


def test_always_extendable_class_rejects_disconnected():
    with pytest.raises(PreconditionError):
        always_extendable_class(Graph(vertex_count=4, edges=((0, 1), (2, 3))))
