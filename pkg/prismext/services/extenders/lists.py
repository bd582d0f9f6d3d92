"""
Списочная раскраска рёбер путей и циклов.

list_color_path: путь, где у одного ребра список размера >= 1, у остальных >= 2;
раскраска обходом от ребра с коротким списком.
list_color_cycle: цикл, где все списки размера >= 2 и не все совпадают;
соседние рёбра с разными списками сводят задачу к пути.
"""

import logging
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence

from prismext.exceptions import PreconditionError, ProofStepError
from prismext.models.graph import Graph

logger = logging.getLogger(__name__)

ListAssignment = Mapping[int, Iterable[int]]


# Edge orders
def _edge_subgraph_degrees(g: Graph) -> Dict[int, int]:
    degrees: Dict[int, int] = {}
    for u, v in g.edges:
        degrees[u] = degrees.get(u, 0) + 1
        degrees[v] = degrees.get(v, 0) + 1
    return degrees


def _walk(g: Graph, start: int, first_edge: Optional[int] = None) -> List[int]:
    order: List[int] = []
    used = set()
    v = start
    e = first_edge
    while True:
        if e is None:
            free = [f for f in g.incident[v] if f not in used]
            if not free:
                return order
            e = free[0]
        order.append(e)
        used.add(e)
        v = g.other_end(e, v)
        e = None
        if len(used) == g.edge_count:
            return order


def path_order(p: Graph) -> List[int]:
    """Рёбра пути по ходу от меньшего из концов."""
    degrees = _edge_subgraph_degrees(p)
    ends = sorted(v for v, d in degrees.items() if d == 1)
    if p.edge_count == 0 or len(ends) != 2 or any(d > 2 for d in degrees.values()):
        raise PreconditionError("граф не является путём")
    order = _walk(p, ends[0])
    if len(order) != p.edge_count:
        raise PreconditionError("граф не является путём")
    return order


def cycle_order(cy: Graph) -> List[int]:
    """Рёбра цикла по ходу, начиная с ребра 0 от его меньшего конца."""
    degrees = _edge_subgraph_degrees(cy)
    if cy.edge_count < 3 or any(d != 2 for d in degrees.values()):
        raise PreconditionError("граф не является циклом")
    order = _walk(cy, cy.edges[0][0], first_edge=0)
    if len(order) != cy.edge_count:
        raise PreconditionError("граф не является циклом")
    return order


# Sequence solvers
def _sweep(lists: Sequence[FrozenSet[int]], start: int) -> List[int]:
    colors = [0] * len(lists)
    colors[start] = min(lists[start])
    for i in range(start + 1, len(lists)):
        colors[i] = min(lists[i] - {colors[i - 1]})
    for i in range(start - 1, -1, -1):
        colors[i] = min(lists[i] - {colors[i + 1]})
    return colors


def _cycle_direct_pair(lists: Sequence[FrozenSet[int]]) -> Optional[tuple]:
    """(i, j, цвет): соседние позиции, цвет из списка i, которого нет в списке j."""
    size = len(lists)
    for i in range(size):
        j = (i + 1) % size
        diff = lists[i] - lists[j]
        if diff:
            return i, j, min(diff)
        diff = lists[j] - lists[i]
        if diff:
            return j, i, min(diff)
    return None


def _cycle_direct(lists: Sequence[FrozenSet[int]]) -> List[int]:
    size = len(lists)
    pair = _cycle_direct_pair(lists)
    if pair is None:
        raise PreconditionError("все списки цикла совпадают")
    i, j, color = pair
    # путь от соседа i, не равного j, до j
    step = 1 if (i + 1) % size != j else -1
    positions = [(i + step * s) % size for s in range(1, size)]
    seq = [lists[p] - {color} if p == positions[0] else lists[p] for p in positions]
    colors = _sweep(seq, 0)
    result = [0] * size
    result[i] = color
    for p, c in zip(positions, colors):
        result[p] = c
    return result


# Graph-level API
def _lists_in_order(order: Sequence[int], lists: ListAssignment) -> List[FrozenSet[int]]:
    missing = [e for e in order if e not in lists]
    if missing:
        raise PreconditionError(f"нет списков для рёбер {missing}")
    return [frozenset(lists[e]) for e in order]


def list_color_path(p: Graph, lists: ListAssignment, designated: Optional[int] = None) -> Dict[int, int]:
    """
    Раскраска пути из списков обходом от ребра с коротким списком
    (наименьший доступный цвет на каждом шаге).
    """
    order = path_order(p)
    seq = _lists_in_order(order, lists)
    if any(not lst for lst in seq):
        raise PreconditionError("пустой список")
    if designated is not None:
        if designated not in order:
            raise PreconditionError(f"ребро {designated} не принадлежит пути")
        start = order.index(designated)
        if any(len(lst) < 2 for k, lst in enumerate(seq) if k != start):
            raise PreconditionError("кроме выделенного ребра списки должны иметь размер >= 2")
    else:
        short = [i for i, lst in enumerate(seq) if len(lst) < 2]
        if len(short) > 1:
            raise PreconditionError("списки размера < 2 у нескольких рёбер")
        start = short[0] if short else 0
    colors = _sweep(seq, start)
    return dict(zip(order, colors))


def list_color_cycle(cy: Graph, lists: ListAssignment) -> Dict[int, int]:
    order = cycle_order(cy)
    seq = _lists_in_order(order, lists)
    if any(len(lst) < 2 for lst in seq):
        raise PreconditionError("все списки цикла должны иметь размер >= 2")
    colors = _cycle_direct(seq)
    for k in range(len(order)):
        if colors[k] == colors[(k + 1) % len(order)] or colors[k] not in seq[k]:
            raise ProofStepError("раскраска цикла из списков неправильная")
    return dict(zip(order, colors))
