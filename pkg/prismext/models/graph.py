from functools import cached_property
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, model_validator


Edge = Tuple[int, int]


class Graph(BaseModel):
    """
    Простой неориентированный граф с каноническим порядком рёбер.

    EdgeId i - индекс i-го ребра в лексикографическом порядке (u, v), u < v.
    Этот порядок используется для всех детерминированных выборов.
    """

    model_config = ConfigDict(frozen=True)

    vertex_count: int = Field(..., ge=0, description="Число вершин")
    edges: Tuple[Edge, ...] = Field((), description="Рёбра (u, v), u < v, по возрастанию")

    @model_validator(mode="after")
    def _check_edges(self) -> "Graph":
        prev: Optional[Edge] = None
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"петля в вершине {u}")
            if u > v:
                raise ValueError(f"ребро ({u}, {v}): требуется u < v")
            if u < 0 or v >= self.vertex_count:
                raise ValueError(f"ребро ({u}, {v}): вершина вне диапазона 0..{self.vertex_count - 1}")
            if prev is not None and (u, v) <= prev:
                raise ValueError(f"ребро ({u}, {v}): рёбра должны строго возрастать")
            prev = (u, v)
        return self

    @classmethod
    def from_pairs(cls, vertex_count: int, pairs: Iterable[Edge]) -> "Graph":
        """Собирает граф из пар в любом порядке (ориентация и порядок нормализуются)."""
        normalized = sorted((min(u, v), max(u, v)) for u, v in pairs)
        return cls(vertex_count=vertex_count, edges=tuple(normalized))

    # Derived structure
    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_index(self) -> Dict[Edge, int]:
        return {edge: i for i, edge in enumerate(self.edges)}

    @cached_property
    def incident(self) -> Tuple[Tuple[int, ...], ...]:
        """Для каждой вершины - инцидентные EdgeId по возрастанию."""
        buckets: List[List[int]] = [[] for _ in range(self.vertex_count)]
        for i, (u, v) in enumerate(self.edges):
            buckets[u].append(i)
            buckets[v].append(i)
        return tuple(tuple(b) for b in buckets)

    @cached_property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        """Отсортированные списки соседей."""
        buckets: List[List[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges:
            buckets[u].append(v)
            buckets[v].append(u)
        return tuple(tuple(sorted(b)) for b in buckets)

    @cached_property
    def edge_neighbors(self) -> Tuple[Tuple[int, ...], ...]:
        """Для каждого ребра - смежные с ним рёбра (общая вершина)."""
        result = []
        for i, (u, v) in enumerate(self.edges):
            around = set(self.incident[u]) | set(self.incident[v])
            around.discard(i)
            result.append(tuple(sorted(around)))
        return tuple(result)

    def degree(self, v: int) -> int:
        return len(self.incident[v])

    @property
    def max_degree(self) -> int:
        return max((len(b) for b in self.incident), default=0)

    def edge_id(self, u: int, v: int) -> int:
        key = (min(u, v), max(u, v))
        try:
            return self.edge_index[key]
        except KeyError:
            raise KeyError(f"ребра {key} нет в графе") from None

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edge_index

    def other_end(self, edge_id: int, v: int) -> int:
        u, w = self.edges[edge_id]
        return w if u == v else u

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.vertex_count))
        g.add_edges_from(self.edges)
        return g


class EdgeRole(NamedTuple):
    """Роль ребра призмы: ребро копии (copy = 1 или 2) или ребро паросочетания M (copy = 0)."""

    copy: int
    base: int

    @property
    def in_matching(self) -> bool:
        return self.copy == 0


class PrismDecomposition(BaseModel):
    """
    Разложение G□K₂ на копии G₁, G₂ и совершенное паросочетание M.

    Копия 1 занимает вершины 0..n-1, копия 2 - вершины n..2n-1,
    ребро M с индексом v соединяет v и n+v.
    copy_edges[i][e] - EdgeId произведения для базового ребра e в копии i+1,
    поэтому соответствие рёбер копий позиционное.
    """

    model_config = ConfigDict(frozen=True)

    base: Graph
    product: Graph
    base_vertex_count: int
    copy_edges: Tuple[Tuple[int, ...], Tuple[int, ...]]
    matching_edges: Tuple[int, ...]

    @model_validator(mode="after")
    def _check_shape(self) -> "PrismDecomposition":
        n = self.base_vertex_count
        if self.product.vertex_count != 2 * n:
            raise ValueError("произведение должно иметь 2n вершин")
        if len(self.matching_edges) != n:
            raise ValueError("M должно содержать n рёбер")
        for half in self.copy_edges:
            if len(half) != self.base.edge_count:
                raise ValueError("копии должны содержать все рёбра базы")
        for v, e in enumerate(self.matching_edges):
            if self.product.edges[e] != (v, n + v):
                raise ValueError(f"ребро M {e} не соединяет {v} и {n + v}")
        return self

    def vertex(self, v: int, copy: int) -> int:
        """VertexId произведения для базовой вершины v в копии copy ∈ {1, 2}."""
        if copy not in (1, 2):
            raise ValueError(f"номер копии {copy} вне {{1, 2}}")
        return v + (copy - 1) * self.base_vertex_count

    def base_vertex(self, x: int) -> Tuple[int, int]:
        n = self.base_vertex_count
        return (x, 1) if x < n else (x - n, 2)

    @cached_property
    def roles(self) -> Tuple[EdgeRole, ...]:
        roles: List[Optional[EdgeRole]] = [None] * self.product.edge_count
        for copy in (1, 2):
            for base_edge, e in enumerate(self.copy_edges[copy - 1]):
                roles[e] = EdgeRole(copy, base_edge)
        for v, e in enumerate(self.matching_edges):
            roles[e] = EdgeRole(0, v)
        return tuple(roles)  # type: ignore[arg-type]

    def role(self, e: int) -> EdgeRole:
        return self.roles[e]

    def corresponding(self, e: int) -> Optional[int]:
        """Соответствующее ребро другой копии (None для рёбер M)."""
        role = self.roles[e]
        if role.in_matching:
            return None
        return self.copy_edges[2 - role.copy][role.base]
