"""
Точные условия нерасширяемости: для лесов (C1)-(C4), для K_{n,n}
(условия Андерсена-Хилтона (a)/(b)) и для полных графов.

Проверки не утверждают расширяемость сами по себе: отсутствие условия
означает расширяемость только в пределах предусловий соответствующих
расширителей, и это сверяется с оракулом в тестах.
"""

from collections import Counter
from itertools import combinations
from typing import Any, Dict, List, Optional, Set

from prismext.exceptions import ColoringFormatError, GraphMismatchError, PreconditionError, UnreachableError
from prismext.models.coloring import PartialEdgeColoring
from prismext.models.graph import Graph
from prismext.models.report import ConditionKind, ConditionReport
from prismext.services.coloring_core import colors_at, edges_are_independent, find_conflict
from prismext.services.graph_core import build_complete, build_complete_bipartite, edge_distance, is_forest

Witness = Optional[Dict[str, Any]]


def _check_input(g: Graph, c: PartialEdgeColoring, palette: int, max_colored: int) -> None:
    if c.graph != g:
        raise GraphMismatchError("раскраска задана не на проверяемом графе")
    if c.palette != palette:
        raise PreconditionError(f"палитра {c.palette}, требуется {palette}")
    conflict = find_conflict(c)
    if conflict is not None:
        raise ColoringFormatError(f"раскраска неправильная в вершине {conflict[0]}")
    if c.colored_count > max_colored:
        raise PreconditionError(f"окрашено {c.colored_count} рёбер, допускается не более {max_colored}")


def _uncolored_at(c: PartialEdgeColoring, v: int) -> List[int]:
    return [e for e in c.graph.incident[v] if e not in c.assignment]


# Trees
def _tree_c1(c: PartialEdgeColoring, delta: int) -> Witness:
    g = c.graph
    for e, (u, v) in enumerate(g.edges):
        if e in c.assignment:
            continue
        at_u, at_v = colors_at(c, u), colors_at(c, v)
        if len(at_u | at_v) == delta:
            return {"edge": [u, v], "colors_u": sorted(at_u), "colors_v": sorted(at_v)}
    return None


def _tree_c2(c: PartialEdgeColoring, delta: int) -> Witness:
    g = c.graph
    for u in range(g.vertex_count):
        if g.degree(u) != delta:
            continue
        open_edges = _uncolored_at(c, u)
        if not 1 <= len(open_edges) < delta:
            continue
        at_u = colors_at(c, u)
        ends = [g.other_end(e, u) for e in open_edges]
        for color in range(1, delta + 1):
            if color in at_u:
                continue
            if all(color in colors_at(c, v) for v in ends):
                return {"vertex": u, "color": color, "neighbors": ends, "colors_u": sorted(at_u)}
    return None


def _tree_c3(c: PartialEdgeColoring, delta: int) -> Witness:
    g = c.graph
    for u in range(g.vertex_count):
        if g.degree(u) != delta or colors_at(c, u):
            continue
        ends = list(g.adjacency[u])
        for color in range(1, delta + 1):
            if all(color in colors_at(c, v) for v in ends):
                return {"vertex": u, "color": color}
    return None


def _tree_c4(c: PartialEdgeColoring, delta: int) -> Witness:
    if delta != 2:
        return None
    g = c.graph
    for e, f in combinations(sorted(c.assignment), 2):
        try:
            d = edge_distance(g, e, f)
        except UnreachableError:
            continue
        same = c.assignment[e] == c.assignment[f]
        if (d % 2 == 0 and same) or (d % 2 == 1 and not same):
            return {
                "edges": [list(g.edges[e]), list(g.edges[f])],
                "distance": d,
                "colors": [c.assignment[e], c.assignment[f]],
            }
    return None


def tree_condition(t: Graph, c: PartialEdgeColoring) -> ConditionReport:
    """Первое выполненное условие в порядке C1, C2, C3, C4 или None."""
    if not is_forest(t):
        raise PreconditionError("tree_condition: граф не является лесом")
    delta = t.max_degree
    if delta < 2:
        raise PreconditionError("tree_condition: требуется Δ >= 2")
    _check_input(t, c, delta, delta)

    checks = (
        (ConditionKind.C1, _tree_c1),
        (ConditionKind.C2, _tree_c2),
        (ConditionKind.C3, _tree_c3),
        (ConditionKind.C4, _tree_c4),
    )
    for kind, check in checks:
        witness = check(c, delta)
        if witness is not None:
            return ConditionReport(condition=kind, witness=witness)
    return ConditionReport.none()


# Complete bipartite
def ah_bipartite_condition(n: int, c: PartialEdgeColoring) -> ConditionReport:
    if n < 1:
        raise PreconditionError("K_n,n требует n >= 1")
    g = build_complete_bipartite(n, n)
    _check_input(g, c, n, n)

    for e, (u, v) in enumerate(g.edges):
        if e in c.assignment:
            continue
        seen = colors_at(c, u) | colors_at(c, v)
        if len(seen) >= n:
            return ConditionReport(condition=ConditionKind.AH_A, witness={"edge": [u, v], "colors": sorted(seen)})

    for v in range(g.vertex_count):
        at_v = colors_at(c, v)
        ends = [g.other_end(e, v) for e in _uncolored_at(c, v)]
        for color in range(1, n + 1):
            if color in at_v:
                continue
            if all(color in colors_at(c, w) for w in ends):
                return ConditionReport(condition=ConditionKind.AH_B, witness={"vertex": v, "color": color})
    return ConditionReport.none()


# Complete graphs
def complete_even_condition(n: int, c: PartialEdgeColoring) -> ConditionReport:
    """K_{2n}, палитра 2n-1: паросочетание из n-1 рёбер цвета c и одного ребра цвета c' != c."""
    if n < 2:
        raise PreconditionError("K_2n требует n >= 2")
    g = build_complete(2 * n)
    _check_input(g, c, 2 * n - 1, n)

    edges = sorted(c.assignment)
    if len(edges) != n or not edges_are_independent(g, edges):
        return ConditionReport.none()
    counts = Counter(c.assignment[e] for e in edges)
    if len(counts) != 2:
        return ConditionReport.none()
    if n == 2:
        main, odd = c.assignment[edges[0]], c.assignment[edges[1]]
    else:
        (main, main_count), (odd, odd_count) = counts.most_common()
        if main_count != n - 1 or odd_count != 1:
            return ConditionReport.none()
    odd_edge = next(e for e in edges if c.assignment[e] == odd)
    return ConditionReport(
        condition=ConditionKind.COMPLETE_EVEN,
        witness={
            "matching": [list(g.edges[e]) for e in edges if e != odd_edge],
            "color": main,
            "odd_edge": list(g.edges[odd_edge]),
            "odd_color": odd,
        },
    )


def complete_odd_condition(n: int, c: PartialEdgeColoring) -> ConditionReport:
    """
    K_{2n-1}, палитра 2n-1: n-2 независимых ребра цвета c и непересекающийся
    с ними треугольник в трёх разных цветах, отличных от c.
    """
    if n < 2:
        raise PreconditionError("K_{2n-1} требует n >= 2")
    g = build_complete(2 * n - 1)
    _check_input(g, c, 2 * n - 1, n + 1)

    edges = sorted(c.assignment)
    if len(edges) != n + 1:
        return ConditionReport.none()
    for tri in combinations(edges, 3):
        vertices: Set[int] = set()
        for e in tri:
            vertices.update(g.edges[e])
        if len(vertices) != 3:
            continue
        rest = [e for e in edges if e not in tri]
        if not edges_are_independent(g, rest):
            continue
        if any(x in vertices for e in rest for x in g.edges[e]):
            continue
        tri_colors = {c.assignment[e] for e in tri}
        rest_colors = {c.assignment[e] for e in rest}
        if rest_colors:
            if len(rest_colors) != 1 or rest_colors & tri_colors:
                continue
            main = next(iter(rest_colors))
        else:
            spare = [x for x in range(1, c.palette + 1) if x not in tri_colors]
            if not spare:
                continue
            main = spare[0]
        return ConditionReport(
            condition=ConditionKind.COMPLETE_ODD,
            witness={
                "matching": [list(g.edges[e]) for e in rest],
                "color": main,
                "triangle": sorted(vertices),
                "triangle_colors": [c.assignment[e] for e in tri],
            },
        )
    return ConditionReport.none()


# Witness re-check
def witness_holds(report: ConditionReport, c: PartialEdgeColoring) -> bool:
    """Повторно проверяет формулировку условия на свидетеле."""
    g = c.graph
    w = report.witness
    kind = report.condition
    if kind is ConditionKind.NONE:
        return True

    if kind in (ConditionKind.C1, ConditionKind.AH_A):
        u, v = w["edge"]
        if c.color(g.edge_id(u, v)) is not None:
            return False
        needed = c.palette
        return len(colors_at(c, u) | colors_at(c, v)) >= needed

    if kind is ConditionKind.C2:
        u, color = w["vertex"], w["color"]
        open_edges = _uncolored_at(c, u)
        return (
            g.degree(u) == c.palette
            and 1 <= len(open_edges) < c.palette
            and color not in colors_at(c, u)
            and all(color in colors_at(c, g.other_end(e, u)) for e in open_edges)
        )

    if kind is ConditionKind.C3:
        u, color = w["vertex"], w["color"]
        return (
            g.degree(u) == c.palette
            and not colors_at(c, u)
            and all(color in colors_at(c, v) for v in g.adjacency[u])
        )

    if kind is ConditionKind.C4:
        (a, b), (x, y) = w["edges"]
        e, f = g.edge_id(a, b), g.edge_id(x, y)
        if c.color(e) is None or c.color(f) is None:
            return False
        d = edge_distance(g, e, f)
        same = c.color(e) == c.color(f)
        return d == w["distance"] and ((d % 2 == 0 and same) or (d % 2 == 1 and not same))

    if kind is ConditionKind.AH_B:
        v, color = w["vertex"], w["color"]
        return color not in colors_at(c, v) and all(
            color in colors_at(c, g.other_end(e, v)) for e in _uncolored_at(c, v)
        )

    if kind is ConditionKind.COMPLETE_EVEN:
        matching = [g.edge_id(*pair) for pair in w["matching"]]
        odd = g.edge_id(*w["odd_edge"])
        every = matching + [odd]
        return (
            sorted(every) == sorted(c.assignment)
            and edges_are_independent(g, every)
            and all(c.color(e) == w["color"] for e in matching)
            and c.color(odd) == w["odd_color"] != w["color"]
        )

    if kind is ConditionKind.COMPLETE_ODD:
        matching = [g.edge_id(*pair) for pair in w["matching"]]
        a, b, x = w["triangle"]
        tri = [g.edge_id(a, b), g.edge_id(a, x), g.edge_id(b, x)]
        tri_colors = {c.color(e) for e in tri}
        return (
            sorted(matching + tri) == sorted(c.assignment)
            and edges_are_independent(g, matching)
            and not any(v in (a, b, x) for e in matching for v in g.edges[e])
            and len(tri_colors) == 3
            and w["color"] not in tri_colors
            and all(c.color(e) == w["color"] for e in matching)
        )
    return False


# Dispatch
def detect_condition(g: Graph, c: PartialEdgeColoring) -> ConditionReport:
    """Условие по виду графа: лес, K_n,n или полный граф в стандартной нумерации."""
    n = g.vertex_count
    if is_forest(g):
        return tree_condition(g, c)
    if n % 2 == 0 and g == build_complete_bipartite(n // 2, n // 2):
        return ah_bipartite_condition(n // 2, c)
    if g == build_complete(n):
        if n % 2 == 0:
            return complete_even_condition(n // 2, c)
        return complete_odd_condition((n + 1) // 2, c)
    raise PreconditionError("условие известно только для лесов, K_n,n и полных графов")
