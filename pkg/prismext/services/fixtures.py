"""
Отрицательные примеры: раскраски, которые не продолжаются.
"""

from itertools import combinations
from typing import Optional

from prismext.exceptions import PreconditionError
from prismext.models.coloring import PartialEdgeColoring
from prismext.models.graph import Graph
from prismext.services.graph_core import build_complete, build_cycle, build_path, prism


def odd_cycle_corresponding_pair(n: int) -> PartialEdgeColoring:
    """C_{2n+1}□K₂: соответствующие рёбра копий цветов 1 и 2, палитра 3 (все рёбра M должны быть 3)."""
    if n < 1:
        raise PreconditionError("n >= 1")
    d = prism(build_cycle(2 * n + 1))
    return PartialEdgeColoring(
        graph=d.product,
        palette=3,
        assignment={d.copy_edges[0][0]: 1, d.copy_edges[1][0]: 2},
    )


def odd_cycle_four_edges(n: int) -> PartialEdgeColoring:
    """C_{2n+1}□K₂: смежные рёбра копии 1 цветов 1, 2 и соответствующие рёбра копии 2 цветов 3, 4."""
    if n < 1:
        raise PreconditionError("n >= 1")
    base = build_cycle(2 * n + 1)
    d = prism(base)
    first, second = base.edge_id(0, 1), base.edge_id(1, 2)
    return PartialEdgeColoring(
        graph=d.product,
        palette=4,
        assignment={
            d.copy_edges[0][first]: 1,
            d.copy_edges[0][second]: 2,
            d.copy_edges[1][first]: 3,
            d.copy_edges[1][second]: 4,
        },
    )


def complete_odd_two_edges(n: int) -> PartialEdgeColoring:
    """K_{2n-1}□K₂, палитра 2n-1: ребро (0, 1) цвета 1 в копии 1 и цвета 2 в копии 2."""
    if n < 2:
        raise PreconditionError("n >= 2")
    m = 2 * n - 1
    base = build_complete(m)
    d = prism(base)
    e = base.edge_id(0, 1)
    return PartialEdgeColoring(
        graph=d.product,
        palette=m,
        assignment={d.copy_edges[0][e]: 1, d.copy_edges[1][e]: 2},
    )


def path_condition_instance() -> PartialEdgeColoring:
    """P₄, концевые рёбра цветов 1 и 2 на нечётном расстоянии, палитра 2."""
    p = build_path(4)
    return PartialEdgeColoring(graph=p, palette=2, assignment={p.edge_id(0, 1): 1, p.edge_id(2, 3): 2})


def subcubic_triangle_witness(g: Graph) -> Optional[PartialEdgeColoring]:
    """
    Треугольник xyz с deg(x) = 3: третье ребро при x цвета 2, ребро yz цвета 1,
    палитра 3. Тогда xy и xz оба обязаны получить цвет 3.
    """
    for a, b, c in combinations(range(g.vertex_count), 3):
        if not (g.has_edge(a, b) and g.has_edge(a, c) and g.has_edge(b, c)):
            continue
        for x, y, z in ((a, b, c), (b, a, c), (c, a, b)):
            if g.degree(x) != 3:
                continue
            outside = next(w for w in g.adjacency[x] if w not in (y, z))
            return PartialEdgeColoring(
                graph=g,
                palette=3,
                assignment={g.edge_id(x, outside): 2, g.edge_id(min(y, z), max(y, z)): 1},
            )
    return None
