"""
Текстовый и JSON-форматы графов и частичных раскрасок.

Граф:      "n m", затем m строк "u v" (u < v, по возрастанию);
           JSON {"n": int, "edges": [[u, v], ...]}.
Раскраска: "t k", затем k строк "u v c";
           JSON {"t": int, "edges": [[u, v, c], ...]}.
"""

import json
import logging
from pathlib import Path
from typing import List, Optional, Tuple, Union

from pydantic import BaseModel, Field, ValidationError

from prismext.exceptions import ColoringFormatError, GraphFormatError
from prismext.models.coloring import PartialEdgeColoring
from prismext.models.graph import Graph
from prismext.services.coloring_core import find_conflict

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class GraphPayload(BaseModel):
    n: int = Field(..., ge=0)
    edges: List[Tuple[int, int]] = Field(default_factory=list)


class ColoringPayload(BaseModel):
    t: int = Field(..., ge=1)
    edges: List[Tuple[int, int, int]] = Field(default_factory=list)


def _first_error(exc: ValidationError) -> str:
    err = exc.errors()[0]
    return err.get("msg", str(exc)).removeprefix("Value error, ")


def _rows(text: str) -> List[Tuple[int, List[int]]]:
    """Непустые строки как (номер строки, числа)."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append((lineno, [int(x) for x in line.split()]))
        except ValueError:
            raise ValueError(f"строка {lineno}: ожидались целые числа") from None
    return rows


def _looks_like_json(text: str) -> bool:
    return text.lstrip().startswith("{")


# Graphs
def graph_from_payload(payload: GraphPayload) -> Graph:
    try:
        return Graph(vertex_count=payload.n, edges=tuple(tuple(e) for e in payload.edges))
    except ValidationError as exc:
        raise GraphFormatError(_first_error(exc)) from None


def read_graph(text: str, as_json: Optional[bool] = None) -> Graph:
    """as_json=None - формат определяется по первому символу."""
    if as_json if as_json is not None else _looks_like_json(text):
        try:
            payload = GraphPayload.model_validate_json(text)
        except ValidationError as exc:
            raise GraphFormatError(f"JSON графа: {_first_error(exc)}") from None
        return graph_from_payload(payload)

    try:
        rows = _rows(text)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None
    if not rows or len(rows[0][1]) != 2:
        raise GraphFormatError("первая строка должна содержать 'n m'")
    n, m = rows[0][1]
    body = rows[1:]
    if len(body) != m:
        raise GraphFormatError(f"заявлено {m} рёбер, найдено {len(body)}")
    edges = []
    for lineno, values in body:
        if len(values) != 2:
            raise GraphFormatError(f"строка {lineno}: ожидалось 'u v'")
        edges.append(tuple(values))
    try:
        return Graph(vertex_count=n, edges=tuple(edges))
    except ValidationError as exc:
        raise GraphFormatError(_first_error(exc)) from None


def write_graph(g: Graph, as_json: bool = False) -> str:
    if as_json:
        return json.dumps({"n": g.vertex_count, "edges": [list(e) for e in g.edges]})
    lines = [f"{g.vertex_count} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


# Colorings
def _build_coloring(g: Graph, t: int, triples: List[Tuple[int, int, int]]) -> PartialEdgeColoring:
    assignment = {}
    for u, v, color in triples:
        if not g.has_edge(u, v):
            raise ColoringFormatError(f"ребра ({u}, {v}) нет в графе")
        e = g.edge_id(u, v)
        if e in assignment:
            raise ColoringFormatError(f"ребро ({u}, {v}) окрашено дважды")
        assignment[e] = color
    try:
        c = PartialEdgeColoring(graph=g, palette=t, assignment=assignment)
    except ValidationError as exc:
        raise ColoringFormatError(_first_error(exc)) from None
    conflict = find_conflict(c)
    if conflict is not None:
        v, color = conflict
        raise ColoringFormatError(f"раскраска неправильная: цвет {color} дважды в вершине {v}")
    return c


def coloring_from_payload(payload: ColoringPayload, g: Graph) -> PartialEdgeColoring:
    return _build_coloring(g, payload.t, [tuple(e) for e in payload.edges])


def read_coloring(text: str, g: Graph, as_json: Optional[bool] = None) -> PartialEdgeColoring:
    if as_json if as_json is not None else _looks_like_json(text):
        try:
            payload = ColoringPayload.model_validate_json(text)
        except ValidationError as exc:
            raise ColoringFormatError(f"JSON раскраски: {_first_error(exc)}") from None
        return coloring_from_payload(payload, g)

    try:
        rows = _rows(text)
    except ValueError as exc:
        raise ColoringFormatError(str(exc)) from None
    if not rows or len(rows[0][1]) != 2:
        raise ColoringFormatError("первая строка должна содержать 't k'")
    t, k = rows[0][1]
    body = rows[1:]
    if len(body) != k:
        raise ColoringFormatError(f"заявлено {k} окрашенных рёбер, найдено {len(body)}")
    triples = []
    for lineno, values in body:
        if len(values) != 3:
            raise ColoringFormatError(f"строка {lineno}: ожидалось 'u v c'")
        triples.append(tuple(values))
    return _build_coloring(g, t, triples)


def write_coloring(c: PartialEdgeColoring, as_json: bool = False) -> str:
    triples = c.triples()
    if as_json:
        return json.dumps({"t": c.palette, "edges": [list(x) for x in triples]})
    lines = [f"{c.palette} {len(triples)}"]
    lines.extend(f"{u} {v} {color}" for u, v, color in triples)
    return "\n".join(lines) + "\n"


# Files
def load_graph(path: PathLike) -> Graph:
    text = Path(path).read_text(encoding="utf-8")
    logger.debug("Чтение графа из %s", path)
    return read_graph(text, as_json=Path(path).suffix == ".json")


def load_coloring(path: PathLike, g: Graph, palette: Optional[int] = None) -> PartialEdgeColoring:
    """palette заменяет палитру из файла; цвета должны в неё помещаться."""
    text = Path(path).read_text(encoding="utf-8")
    logger.debug("Чтение раскраски из %s", path)
    c = read_coloring(text, g, as_json=Path(path).suffix == ".json")
    if palette is None or palette == c.palette:
        return c
    return _build_coloring(g, palette, list(c.triples()))
