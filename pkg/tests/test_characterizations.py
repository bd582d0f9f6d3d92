from itertools import combinations

import networkx as nx
import pytest

from prismext.exceptions import PreconditionError
from prismext.models.coloring import PartialEdgeColoring
from prismext.models.graph import Graph
from prismext.models.report import ConditionKind, EnumerationMode
from prismext.services.characterizations import (
    ah_bipartite_condition,
    complete_even_condition,
    complete_odd_condition,
    detect_condition,
    tree_condition,
    witness_holds,
)
from prismext.services.fixtures import path_condition_instance
from prismext.services.graph_core import (
    build_complete,
    build_complete_bipartite,
    build_cycle,
    build_path,
    from_networkx,
)
from prismext.services.oracle import enumerate_precolorings, extend_exhaustive

SPIDER = Graph(vertex_count=7, edges=((0, 1), (0, 2), (0, 3), (1, 4), (2, 5), (3, 6)))


def _coloring(g, palette, pairs):
    return PartialEdgeColoring(graph=g, palette=palette, assignment={g.edge_id(u, v): c for (u, v), c in pairs.items()})


def _forests(max_vertices):
    """Деревья и леса из двух деревьев не более чем на max_vertices вершинах."""
    trees = {n: [from_networkx(t) for t in nx.nonisomorphic_trees(n)] for n in range(2, max_vertices + 1)}
    for n in range(2, max_vertices + 1):
        yield from trees[n]
    for a, b in combinations(range(2, max_vertices + 1), 2):
        if a + b <= max_vertices:
            for left in trees[a]:
                for right in trees[b]:
                    union = nx.disjoint_union(left.to_networkx(), right.to_networkx())
                    yield from_networkx(union)


# Trees
def test_path_end_edges_odd_distance():
    report = tree_condition(build_path(4), path_condition_instance())
    assert report.condition is ConditionKind.C4
    assert report.witness["distance"] == 1
    assert witness_holds(report, path_condition_instance())


def test_spider_c3():
    c = _coloring(SPIDER, 3, {(1, 4): 1, (2, 5): 1, (3, 6): 1})
    report = tree_condition(SPIDER, c)
    assert report.condition is ConditionKind.C3
    assert report.witness == {"vertex": 0, "color": 1}
    assert witness_holds(report, c)


def test_single_edge_on_path_is_fine():
    assert tree_condition(build_path(4), _coloring(build_path(4), 2, {(1, 2): 1})).condition is ConditionKind.NONE


def test_tree_condition_rejects():
    with pytest.raises(PreconditionError):
        tree_condition(build_cycle(4), PartialEdgeColoring.empty(build_cycle(4), 2))
    with pytest.raises(PreconditionError):
        tree_condition(build_path(4), PartialEdgeColoring.empty(build_path(4), 3))
    with pytest.raises(PreconditionError):
        tree_condition(build_path(2), PartialEdgeColoring.empty(build_path(2), 1))


def _check_tree_equivalence(forests):
    for f in forests:
        delta = f.max_degree
        if delta < 2 or f.edge_count < delta:
            continue
        for c in enumerate_precolorings(f, delta, delta):
            report = tree_condition(f, c)
            assert report.fired == (not extend_exhaustive(c).is_extended), (f.edges, c.assignment)
            assert witness_holds(report, c)


def test_tree_condition_matches_oracle_small():
    _check_tree_equivalence(_forests(5))


@pytest.mark.slow
def test_tree_condition_matches_oracle_six_vertices():
    _check_tree_equivalence(_forests(6))


# Complete bipartite
def test_ah_a_on_k22():
    g = build_complete_bipartite(2, 2)
    c = _coloring(g, 2, {(0, 3): 1, (1, 2): 2})
    report = ah_bipartite_condition(2, c)
    assert report.condition is ConditionKind.AH_A
    assert report.witness["edge"] == [0, 2]
    assert witness_holds(report, c)


def test_ah_b_on_k33():
    g = build_complete_bipartite(3, 3)
    c = _coloring(g, 3, {(1, 4): 1, (2, 5): 1, (0, 3): 2})
    report = ah_bipartite_condition(3, c)
    assert report.condition is ConditionKind.AH_B
    assert report.witness == {"vertex": 0, "color": 1}
    assert witness_holds(report, c)
    assert not extend_exhaustive(c).is_extended


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ah_empty(n):
    g = build_complete_bipartite(n, n)
    assert ah_bipartite_condition(n, PartialEdgeColoring.empty(g, n)).condition is ConditionKind.NONE


def _check_ah_equivalence(n):
    g = build_complete_bipartite(n, n)
    for j in range(n + 1):
        for c in enumerate_precolorings(g, n, j):
            report = ah_bipartite_condition(n, c)
            assert report.fired == (not extend_exhaustive(c).is_extended), c.assignment
            assert witness_holds(report, c)


def test_ah_matches_oracle_k22():
    _check_ah_equivalence(2)


@pytest.mark.slow
def test_ah_matches_oracle_k33():
    _check_ah_equivalence(3)


# Complete graphs
def test_complete_even_k4():
    g = build_complete(4)
    c = _coloring(g, 3, {(0, 1): 1, (2, 3): 2})
    report = complete_even_condition(2, c)
    assert report.condition is ConditionKind.COMPLETE_EVEN
    assert witness_holds(report, c)


def test_complete_odd_k5():
    g = build_complete(5)
    c = _coloring(g, 5, {(3, 4): 4, (0, 1): 1, (0, 2): 2, (1, 2): 3})
    report = complete_odd_condition(3, c)
    assert report.condition is ConditionKind.COMPLETE_ODD
    assert report.witness["triangle"] == [0, 1, 2]
    assert witness_holds(report, c)
    assert not extend_exhaustive(c).is_extended


def test_complete_even_k6_single_color_matching():
    g = build_complete(6)
    c = _coloring(g, 5, {(0, 1): 1, (2, 3): 1, (4, 5): 1})
    assert complete_even_condition(3, c).condition is ConditionKind.NONE
    assert extend_exhaustive(c).is_extended


def test_complete_even_matches_oracle_k4():
    g = build_complete(4)
    for j in range(3):
        for c in enumerate_precolorings(g, 3, j):
            report = complete_even_condition(2, c)
            assert report.fired == (not extend_exhaustive(c).is_extended), c.assignment


@pytest.mark.slow
def test_complete_odd_matches_oracle_k5():
    g = build_complete(5)
    for j in range(4):
        for c in enumerate_precolorings(g, 5, j):
            assert complete_odd_condition(3, c).fired == (not extend_exhaustive(c).is_extended)
    for c in enumerate_precolorings(g, 5, 4, EnumerationMode.sample(seed=42, count=10_000)):
        assert complete_odd_condition(3, c).fired == (not extend_exhaustive(c).is_extended)


@pytest.mark.slow
def test_complete_even_matches_oracle_k6_sampled():
    g = build_complete(6)
    for j in range(4):
        for c in enumerate_precolorings(g, 5, j, EnumerationMode.sample(seed=42, count=2_000)):
            assert complete_even_condition(3, c).fired == (not extend_exhaustive(c).is_extended)


# Dispatch
def test_detect_condition():
    assert detect_condition(build_path(4), path_condition_instance()).condition is ConditionKind.C4
    g = build_complete(4)
    assert detect_condition(g, _coloring(g, 3, {(0, 1): 1, (2, 3): 2})).condition is ConditionKind.COMPLETE_EVEN
    with pytest.raises(PreconditionError):
        detect_condition(build_cycle(5), PartialEdgeColoring.empty(build_cycle(5), 3))
