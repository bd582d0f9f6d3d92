from typing import Dict, Iterable, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from prismext.models.graph import Graph


class PartialEdgeColoring(BaseModel):
    """
    Частичная раскраска рёбер: палитра 1..palette и отображение EdgeId -> цвет.

    Неокрашенное ребро отсутствует в assignment (цвет 0 не используется).
    Правильность (разные цвета у смежных рёбер) проверяется отдельно,
    см. services.coloring_core.is_proper.
    """

    model_config = ConfigDict(frozen=True)

    graph: Graph
    palette: int = Field(..., ge=1, description="Число цветов t")
    assignment: Dict[int, int] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_assignment(self) -> "PartialEdgeColoring":
        m = self.graph.edge_count
        for e, c in self.assignment.items():
            if not 0 <= e < m:
                raise ValueError(f"EdgeId {e} вне диапазона 0..{m - 1}")
            if not 1 <= c <= self.palette:
                raise ValueError(f"ребро {self.graph.edges[e]}: цвет {c} вне палитры 1..{self.palette}")
        return self

    @classmethod
    def trusted(cls, graph: Graph, palette: int, assignment: Dict[int, int]) -> "PartialEdgeColoring":
        """Конструктор без валидации для горячих путей (данные уже проверены)."""
        return cls.model_construct(graph=graph, palette=palette, assignment=assignment)

    @classmethod
    def empty(cls, graph: Graph, palette: int) -> "PartialEdgeColoring":
        return cls(graph=graph, palette=palette)

    def color(self, e: int) -> Optional[int]:
        return self.assignment.get(e)

    @property
    def colored_count(self) -> int:
        return len(self.assignment)

    @property
    def is_total(self) -> bool:
        return len(self.assignment) == self.graph.edge_count

    def triples(self) -> Tuple[Tuple[int, int, int], ...]:
        """(u, v, c) в каноническом порядке рёбер - для отчётов и форматов."""
        return tuple(
            (*self.graph.edges[e], self.assignment[e]) for e in sorted(self.assignment)
        )


class ColorPermutation(BaseModel):
    """Биекция на 1..t: mapping[c - 1] = π(c)."""

    model_config = ConfigDict(frozen=True)

    mapping: Tuple[int, ...]

    @field_validator("mapping")
    @classmethod
    def _check_bijection(cls, v: Tuple[int, ...]) -> Tuple[int, ...]:
        if sorted(v) != list(range(1, len(v) + 1)):
            raise ValueError("mapping не является перестановкой 1..t")
        return v

    @classmethod
    def identity(cls, size: int) -> "ColorPermutation":
        return cls(mapping=tuple(range(1, size + 1)))

    @classmethod
    def from_pairs(cls, size: int, pairs: Iterable[Tuple[int, int]]) -> "ColorPermutation":
        mapping = list(range(1, size + 1))
        for old, new in pairs:
            mapping[old - 1] = new
        return cls(mapping=tuple(mapping))

    @property
    def size(self) -> int:
        return len(self.mapping)

    def __call__(self, color: int) -> int:
        return self.mapping[color - 1]

    def inverse(self) -> "ColorPermutation":
        inv = [0] * len(self.mapping)
        for old, new in enumerate(self.mapping, start=1):
            inv[new - 1] = old
        return ColorPermutation(mapping=tuple(inv))
