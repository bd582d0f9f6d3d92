"""
Построители семейств графов, декартово произведение, разложение призмы
G□K₂ и структурные предикаты.

Нумерация вершин:
  - P_n: 0..n-1, рёбра (i, i+1);
  - C_n: как P_n плюс ребро (0, n-1);
  - K_{1,n}: центр 0, листья 1..n;
  - K_{m,n}: левая доля 0..m-1, правая m..m+n-1;
  - Q_d: вершины - битовые маски, x ~ x ^ (1 << i);
  - G□H: вершина (u, v) получает номер u·|V(H)| + v (построчно).
"""

import hashlib
import logging
from itertools import combinations
from typing import Optional, Sequence

import networkx as nx

from prismext.exceptions import GraphFormatError, PreconditionError, UnreachableError
from prismext.models.coloring import PartialEdgeColoring
from prismext.models.graph import Graph, PrismDecomposition
from prismext.models.outcome import ChromaticIndexResult, EdgeClass, OutcomeStatus, SearchBudget
from prismext.services.oracle import extend_exhaustive

logger = logging.getLogger(__name__)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise GraphFormatError(message)


# Builders
def build_path(n: int) -> Graph:
    _require(n >= 1, f"P_n требует n >= 1, получено {n}")
    return Graph(vertex_count=n, edges=tuple((i, i + 1) for i in range(n - 1)))


def build_cycle(n: int) -> Graph:
    _require(n >= 3, f"C_n требует n >= 3, получено {n}")
    pairs = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
    return Graph.from_pairs(n, pairs)


def build_star(n: int) -> Graph:
    _require(n >= 1, f"K_1,n требует n >= 1, получено {n}")
    return Graph(vertex_count=n + 1, edges=tuple((0, i) for i in range(1, n + 1)))


def build_complete(n: int) -> Graph:
    _require(n >= 1, f"K_n требует n >= 1, получено {n}")
    return Graph(vertex_count=n, edges=tuple(combinations(range(n), 2)))


def build_complete_bipartite(m: int, n: int) -> Graph:
    _require(m >= 1 and n >= 1, f"K_m,n требует m, n >= 1, получено {m}, {n}")
    return Graph(
        vertex_count=m + n,
        edges=tuple((u, m + v) for u in range(m) for v in range(n)),
    )


def build_hypercube(d: int) -> Graph:
    _require(d >= 0, f"Q_d требует d >= 0, получено {d}")
    size = 1 << d
    pairs = [(x, x ^ (1 << i)) for x in range(size) for i in range(d) if x < x ^ (1 << i)]
    return Graph.from_pairs(size, pairs)


def build_tree_from_pruefer(seq: Sequence[int]) -> Graph:
    """Дерево на len(seq)+2 вершинах по коду Прюфера (пустой код - K₂)."""
    n = len(seq) + 2
    for x in seq:
        _require(0 <= x < n, f"элемент кода Прюфера {x} вне диапазона 0..{n - 1}")
    if not seq:
        return build_path(2)
    tree = nx.from_prufer_sequence(list(seq))
    return Graph.from_pairs(n, tree.edges())


def from_networkx(g: nx.Graph) -> Graph:
    """Перенумеровывает вершины в порядке сортировки меток."""
    order = {node: i for i, node in enumerate(sorted(g.nodes()))}
    return Graph.from_pairs(len(order), ((order[u], order[v]) for u, v in g.edges()))


# Products
def cartesian_product(g: Graph, h: Graph) -> Graph:
    _require(g.vertex_count > 0 and h.vertex_count > 0, "оба сомножителя должны быть непустыми")
    nh = h.vertex_count
    pairs = []
    for u in range(g.vertex_count):
        pairs.extend((u * nh + a, u * nh + b) for a, b in h.edges)
    for a, b in g.edges:
        pairs.extend((a * nh + v, b * nh + v) for v in range(nh))
    return Graph.from_pairs(g.vertex_count * nh, pairs)


def prism(g: Graph) -> PrismDecomposition:
    """G□K₂ = cartesian_product(K₂, G): копия i занимает вершины (i-1)·n .. i·n-1."""
    _require(g.vertex_count > 0, "граф должен быть непустым")
    n = g.vertex_count
    product = cartesian_product(build_path(2), g)
    copy1 = tuple(product.edge_id(u, v) for u, v in g.edges)
    copy2 = tuple(product.edge_id(u + n, v + n) for u, v in g.edges)
    matching = tuple(product.edge_id(v, v + n) for v in range(n))
    return PrismDecomposition(
        base=g,
        product=product,
        base_vertex_count=n,
        copy_edges=(copy1, copy2),
        matching_edges=matching,
    )


def recognize_prism(g: Graph) -> Optional[PrismDecomposition]:
    """Распознаёт призму в документированной нумерации (база - вершины 0..n-1)."""
    if g.vertex_count == 0 or g.vertex_count % 2:
        return None
    n = g.vertex_count // 2
    base = Graph(vertex_count=n, edges=tuple(e for e in g.edges if e[1] < n))
    decomposition = prism(base)
    if decomposition.product.edges != g.edges:
        return None
    return decomposition


# Predicates
def max_degree(g: Graph) -> int:
    return g.max_degree


def is_triangle_free(g: Graph) -> bool:
    return sum(nx.triangles(g.to_networkx()).values()) == 0


def is_regular(g: Graph) -> bool:
    if g.vertex_count == 0:
        return True
    return nx.is_regular(g.to_networkx())


def is_connected(g: Graph) -> bool:
    if g.vertex_count == 0:
        return False
    return nx.is_connected(g.to_networkx())


def is_forest(g: Graph) -> bool:
    if g.vertex_count == 0:
        return True
    return nx.is_forest(g.to_networkx())


def is_tree(g: Graph) -> bool:
    return g.vertex_count > 0 and nx.is_tree(g.to_networkx())


def find_triangle(g: Graph) -> Optional[tuple]:
    """Первый треугольник (a, b, c), a < b < c, в каноническом порядке или None."""
    for a, b in g.edges:
        common = set(g.adjacency[a]) & set(g.adjacency[b])
        above = sorted(c for c in common if c > b)
        if above:
            return (a, b, above[0])
    return None


def edge_distance(g: Graph, e: int, f: int) -> int:
    """
    Число рёбер кратчайшего пути между концом e и концом f.
    Смежные рёбра находятся на расстоянии 0.
    """
    m = g.edge_count
    if not (0 <= e < m and 0 <= f < m):
        raise GraphFormatError(f"EdgeId вне диапазона 0..{m - 1}")
    if e == f:
        raise GraphFormatError("edge_distance требует различные рёбра")
    lengths = nx.multi_source_dijkstra_path_length(g.to_networkx(), set(g.edges[e]))
    reachable = [lengths[x] for x in g.edges[f] if x in lengths]
    if not reachable:
        raise UnreachableError(f"рёбра {g.edges[e]} и {g.edges[f]} лежат в разных компонентах")
    return int(min(reachable))


def graph_descriptor(g: Graph) -> str:
    """Короткое устойчивое имя графа для отчётов."""
    digest = hashlib.sha1(repr(g.edges).encode("ascii")).hexdigest()[:10]
    return f"n{g.vertex_count}-m{g.edge_count}-{digest}"


# Chromatic index
def chromatic_index(g: Graph, budget: Optional[SearchBudget] = None) -> ChromaticIndexResult:
    """Класс 1 тогда и только тогда, когда оракул находит правильную Δ-раскраску."""
    delta = g.max_degree
    if g.edge_count == 0:
        return ChromaticIndexResult(edge_class=EdgeClass.CLASS1, max_degree=0, index=0)

    outcome = extend_exhaustive(PartialEdgeColoring.empty(g, delta), budget)
    if outcome.status is OutcomeStatus.EXTENDED:
        return ChromaticIndexResult(
            edge_class=EdgeClass.CLASS1, max_degree=delta, index=delta, witness=outcome.coloring
        )
    if outcome.status is OutcomeStatus.NOT_EXTENDABLE:
        return ChromaticIndexResult(edge_class=EdgeClass.CLASS2, max_degree=delta, index=delta + 1)

    logger.info("chi': бюджет исчерпан, nodes=%d", outcome.nodes)
    return ChromaticIndexResult(edge_class=EdgeClass.UNKNOWN, max_degree=delta)


def chromatic_index_value(g: Graph, budget: Optional[SearchBudget] = None) -> int:
    """χ'(g) или PreconditionError, если класс не определён в пределах бюджета."""
    result = chromatic_index(g, budget)
    if result.index is None:
        raise PreconditionError("не удалось определить хроматический индекс в пределах бюджета")
    return result.index


def always_extendable_class(g: Graph) -> bool:
    """Звезда K_1,n (n >= 1) или нечётный цикл."""
    if not is_connected(g) or g.edge_count == 0:
        raise PreconditionError("требуется связный граф хотя бы с одним ребром")
    m = g.edge_count
    degrees = sorted(g.degree(v) for v in range(g.vertex_count))
    if g.vertex_count == m + 1 and degrees[-1] == m:
        return True
    return g.vertex_count == m and m % 2 == 1 and all(d == 2 for d in degrees)
