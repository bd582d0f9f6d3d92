from typing import Dict, Iterable, List, Mapping, Optional, Set, Tuple

from prismext.exceptions import GraphMismatchError, PreconditionError
from prismext.models.coloring import ColorPermutation, PartialEdgeColoring
from prismext.models.graph import Graph


def is_proper(c: PartialEdgeColoring) -> bool:
    return find_conflict(c) is None


def find_conflict(c: PartialEdgeColoring) -> Optional[Tuple[int, int]]:
    """Первая вершина с повтором цвета: (вершина, цвет) или None."""
    g = c.graph
    for v in range(g.vertex_count):
        seen: Set[int] = set()
        for e in g.incident[v]:
            color = c.assignment.get(e)
            if color is None:
                continue
            if color in seen:
                return v, color
            seen.add(color)
    return None


def colors_at(c: PartialEdgeColoring, v: int) -> Set[int]:
    return {c.assignment[e] for e in c.graph.incident[v] if e in c.assignment}


def missing_colors(c: PartialEdgeColoring, v: int) -> Set[int]:
    return set(range(1, c.palette + 1)) - colors_at(c, v)


def precolored_edges(c: PartialEdgeColoring) -> List[int]:
    return sorted(c.assignment)


def is_independent(c: PartialEdgeColoring) -> bool:
    """Окрашенные рёбра попарно не смежны."""
    covered: Set[int] = set()
    for e in c.assignment:
        u, v = c.graph.edges[e]
        if u in covered or v in covered:
            return False
        covered.update((u, v))
    return True


def edges_are_independent(g: Graph, edges: Iterable[int]) -> bool:
    covered: Set[int] = set()
    for e in edges:
        u, v = g.edges[e]
        if u in covered or v in covered:
            return False
        covered.update((u, v))
    return True


def apply_permutation(c: PartialEdgeColoring, perm: ColorPermutation) -> PartialEdgeColoring:
    if perm.size != c.palette:
        raise PreconditionError(f"перестановка на {perm.size} цветах, палитра {c.palette}")
    return PartialEdgeColoring.trusted(
        c.graph, c.palette, {e: perm(color) for e, color in c.assignment.items()}
    )


def normalize_colors(c: PartialEdgeColoring, r: int) -> Tuple[PartialEdgeColoring, ColorPermutation]:
    """
    Переименовывает цвета так, чтобы использованные попали в 1..r
    в порядке первого появления по каноническому порядку рёбер;
    неиспользованные цвета идут следом по возрастанию.
    """
    if r > c.palette:
        raise PreconditionError(f"r = {r} больше палитры {c.palette}")
    order: List[int] = []
    for e in sorted(c.assignment):
        color = c.assignment[e]
        if color not in order:
            order.append(color)
    if len(order) > r:
        raise PreconditionError(f"использовано {len(order)} цветов, больше чем r = {r}")
    rest = [color for color in range(1, c.palette + 1) if color not in order]
    perm = ColorPermutation.from_pairs(
        c.palette, ((old, new) for new, old in enumerate(order + rest, start=1))
    )
    return apply_permutation(c, perm), perm


def agrees_with(full: PartialEdgeColoring, pre: PartialEdgeColoring) -> bool:
    if full.graph != pre.graph:
        raise GraphMismatchError("раскраски заданы на разных графах")
    if not full.is_total:
        return False
    return all(full.assignment.get(e) == color for e, color in pre.assignment.items())


def restrict(c: PartialEdgeColoring, edges: Iterable[int]) -> PartialEdgeColoring:
    keep = set(edges)
    return PartialEdgeColoring.trusted(
        c.graph, c.palette, {e: color for e, color in c.assignment.items() if e in keep}
    )


def with_assignment(c: PartialEdgeColoring, extra: Mapping[int, int], palette: Optional[int] = None) -> PartialEdgeColoring:
    merged: Dict[int, int] = dict(c.assignment)
    merged.update(extra)
    return PartialEdgeColoring(graph=c.graph, palette=palette or c.palette, assignment=merged)


def is_valid_extension(full: PartialEdgeColoring, pre: PartialEdgeColoring) -> bool:
    """Полная, правильная и согласованная с pre раскраска."""
    in_palette = all(1 <= color <= pre.palette for color in full.assignment.values())
    return in_palette and is_proper(full) and agrees_with(full, pre)
