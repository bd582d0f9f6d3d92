"""
Призмы над циклами: C_{2n}□K₂ с палитрой 3 и C_{2n+1}□K₂ с палитрой 4.

Копии раскрашиваются по спискам цветов (пути и циклы). Окрашенные рёбра копии
разрезают цикл на пути (list_color_path), копия без окрашенных рёбер
раскрашивается как цикл (list_color_cycle). Списки строятся по случаю
доказательства: палитра случая без цветов окрашенных соседних рёбер.
"""

import logging
from itertools import permutations
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from prismext.exceptions import PreconditionError, ProofStepError
from prismext.models.coloring import PartialEdgeColoring
from prismext.models.outcome import ExtensionOutcome, ExtensionTrace, SearchBudget
from prismext.services.extenders.common import PrismWork, Strategy, proper_on
from prismext.services.extenders.lists import cycle_order, list_color_cycle, list_color_path
from prismext.services.graph_core import build_cycle, build_path, prism

logger = logging.getLogger(__name__)

Lists = Dict[int, Set[int]]


# List coloring of one copy
def _arcs(order: Sequence[int], fixed: Mapping[int, int]) -> List[List[int]]:
    """Максимальные участки неокрашенных рёбер между окрашенными, по ходу цикла."""
    size = len(order)
    anchor = next(k for k in range(size) if order[k] in fixed)
    arcs: List[List[int]] = []
    arc: List[int] = []
    for s in range(1, size + 1):
        e = order[(anchor + s) % size]
        if e in fixed:
            if arc:
                arcs.append(arc)
            arc = []
        else:
            arc.append(e)
    return arcs


def _color_copy(
    work: PrismWork, attempt: ExtensionTrace, copy: int, fixed: Mapping[int, int], allowed: Mapping[int, Set[int]]
) -> Dict[int, int]:
    """
    Продолжение раскраски копии: список ребра - allowed без цветов окрашенных
    соседей. Без окрашенных рёбер и при различных списках - списки на цикле;
    если все списки совпадают, первое ребро получает наименьший цвет.
    """
    cycle = work.base
    order = cycle_order(cycle)
    fixed = dict(fixed)
    if not proper_on(cycle, fixed):
        raise ProofStepError(f"копия {copy + 1}: окрашенные рёбра конфликтуют")
    try:
        if not fixed:
            lists = {e: set(allowed[e]) for e in order}
            if len({frozenset(lst) for lst in lists.values()}) > 1:
                result = list_color_cycle(cycle, lists)
                attempt.add(f"копия {copy + 1}: списки на цикле", assign=work.copy_assign(copy + 1, result))
                return result
            fixed = {order[0]: min(lists[order[0]])}
        result = dict(fixed)
        for arc in _arcs(order, fixed):
            lists = {}
            for i, e in enumerate(arc):
                lists[i] = set(allowed[e]) - {fixed[f] for f in cycle.edge_neighbors[e] if f in fixed}
            short = [i for i, lst in lists.items() if len(lst) < 2]
            colors = list_color_path(build_path(len(arc) + 1), lists, designated=short[0] if short else None)
            result.update({arc[i]: color for i, color in colors.items()})
    except PreconditionError as exc:
        raise ProofStepError(f"копия {copy + 1}: {exc}") from exc
    attempt.add(f"копия {copy + 1}: списки на пути", assign=work.copy_assign(copy + 1, result))
    return result


def _alternate(work: PrismWork, colors: Tuple[int, int], start: Optional[int] = None) -> Dict[int, int]:
    """Чётный цикл в два цвета; ребро start получает colors[0]."""
    order = cycle_order(work.base)
    first = 0 if start is None else order.index(start)
    return {order[(first + s) % len(order)]: colors[s % 2] for s in range(len(order))}


def _lists(work: PrismWork, palette: Iterable[int], matching: Optional[Mapping[int, int]] = None) -> Lists:
    """palette без цветов окрашенных рёбер M в концах ребра."""
    matching = work.matching_fixed if matching is None else matching
    colors = set(palette)
    return {
        e: colors - {matching[x] for x in (u, v) if x in matching} for e, (u, v) in enumerate(work.base.edges)
    }


def _assemble(
    work: PrismWork,
    attempt: ExtensionTrace,
    copies: Tuple[Dict[int, int], Dict[int, int]],
    matching: Optional[Dict[int, int]] = None,
) -> ExtensionTrace:
    filled = work.fill_matching(copies, dict(work.matching_fixed if matching is None else matching))
    if filled is None:
        raise ProofStepError("рёбрам M не хватает цвета")
    attempt.add("M: недостающие цвета", assign=work.matching_assign(filled))
    return attempt


def _mirror(work: PrismWork, source: int, allowed: Lists, matching: Optional[Dict[int, int]] = None) -> ExtensionTrace:
    """Копия source из списков, другая копия по соответствию."""
    attempt = ExtensionTrace(route=work.route)
    coloring = _color_copy(work, attempt, source, work.copy_fixed[source], allowed)
    other = 1 - source
    if any(coloring[e] != color for e, color in work.copy_fixed[other].items()):
        raise ProofStepError("раскраска копии не продолжает другую копию")
    attempt.add(f"копия {other + 1} по соответствию", assign=work.copy_assign(other + 1, coloring))
    return _assemble(work, attempt, (coloring, coloring), matching)


def _independent(work: PrismWork, allowed: Lists) -> ExtensionTrace:
    attempt = ExtensionTrace(route=work.route)
    first = _color_copy(work, attempt, 0, work.copy_fixed[0], allowed)
    second = _color_copy(work, attempt, 1, work.copy_fixed[1], allowed)
    return _assemble(work, attempt, (first, second))


# Even cycles
def _even_alternating_copies(work: PrismWork) -> ExtensionTrace:
    attempt = ExtensionTrace(route=work.route)
    copies = []
    for i in (0, 1):
        ((g, p),) = work.copy_fixed[i].items()
        coloring = _alternate(work, (p, 3 - p), start=g)
        attempt.add(f"копия {i + 1} в цветах 1, 2", assign=work.copy_assign(i + 1, coloring))
        copies.append(coloring)
    return _assemble(work, attempt, (copies[0], copies[1]))


def _even_same_color(work: PrismWork, a: int) -> ExtensionTrace:
    attempt = ExtensionTrace(route=work.route)
    other = sorted({1, 2, 3} - {a})
    coloring = _alternate(work, (other[0], other[1]))
    attempt.add(f"копии в цветах {other}", assign=work.copy_assign(1, coloring))
    attempt.add("копия 2 по соответствию", assign=work.copy_assign(2, coloring))
    return _assemble(work, attempt, (coloring, coloring))


def _even_adjacent_pair(work: PrismWork, v: int, w: int) -> ExtensionTrace:
    """Рёбра M в смежных вершинах v, w разных цветов a, b: vw = третий цвет, второе ребро у w = a."""
    a, b = work.matching_fixed[v], work.matching_fixed[w]
    (t,) = {1, 2, 3} - {a, b}
    vw = work.base.edge_id(v, w)
    (beyond,) = [e for e in work.base.incident[w] if e != vw]
    attempt = ExtensionTrace(route=work.route)
    coloring = _color_copy(work, attempt, 0, {vw: t, beyond: a}, _lists(work, (1, 2, 3)))
    attempt.add("копия 2 по соответствию", assign=work.copy_assign(2, coloring))
    return _assemble(work, attempt, (coloring, coloring))


def _even_plan(work: PrismWork) -> Iterator[Tuple[str, Strategy]]:
    m = work.matching_fixed
    first, second = work.copies_used()
    if not m:
        if first and second:
            work.enter("нет окрашенных рёбер M, по ребру в каждой копии")
            yield "копии в цветах 1, 2, M цветом 3", lambda: _even_alternating_copies(work)
        else:
            work.enter("нет окрашенных рёбер M, окрашена не более чем одна копия")
            yield "копия из списков {1,2,3}, вторая по соответствию", (
                lambda: _mirror(work, work.single_source(), _lists(work, (1, 2, 3)))
            )
        return

    if len(m) == 1:
        ((v, a),) = m.items()
        if a in work.copy_colors():
            work.enter(f"одно ребро M и ребро копии одного цвета {a}")
            allowed = {e: {1, 2, 3} - {a} for e in range(work.base.edge_count)}
            yield f"копия в цветах без {a}, вторая по соответствию", (
                lambda: _mirror(work, work.single_source(), allowed)
            )
        else:
            work.enter("одно ребро M, цвета окрашенных рёбер различны")
            yield "копия из списков, вторая по соответствию", (
                lambda: _mirror(work, work.single_source(), _lists(work, (1, 2, 3)))
            )
        return

    (v, a), (w, b) = sorted(m.items())
    if a == b:
        work.enter(f"два ребра M одного цвета {a}")
        yield "копии чередованием двух других цветов", lambda: _even_same_color(work, a)
    elif not work.base.has_edge(v, w):
        work.enter("два ребра M разных цветов на расстоянии не меньше 2")
        yield "списки на цикле, вторая копия по соответствию", lambda: _mirror(work, 0, _lists(work, (1, 2, 3)))
    else:
        work.enter("два ребра M разных цветов на расстоянии 1")
        yield "ребро между ними третьим цветом, списки на пути", lambda: _even_adjacent_pair(work, v, w)


def extend_even_cycle_prism(
    n: int, c: PartialEdgeColoring, budget: Optional[SearchBudget] = None
) -> Tuple[ExtensionOutcome, ExtensionTrace]:
    if n < 2:
        raise PreconditionError("C_2n требует n >= 2")
    work = PrismWork("even-cycle", prism(build_cycle(2 * n)), c, 3, None, budget, normalize=2)
    work.require_at_most(2)
    return work.run(_even_plan(work))


# Odd cycles
def _triangle_colorings(work: PrismWork, copy: int, allowed: Set[int]) -> List[Dict[int, int]]:
    """Правильные раскраски копии-треугольника: окрашенные рёбра сохраняются, остальные из allowed."""
    fixed = work.copy_fixed[copy]
    exclusions = work.matching_exclusions()
    result = []
    for colors in permutations(range(1, work.palette + 1), 3):
        assign = dict(zip(range(3), colors))
        if any(assign[e] != color for e, color in fixed.items()):
            continue
        if any(assign[e] not in allowed for e in assign if e not in fixed):
            continue
        if any(assign[e] in exclusions.get(x, ()) for e, pair in enumerate(work.base.edges) for x in pair):
            continue
        if proper_on(work.base, assign):
            result.append(assign)
    return result


def _triangle_palettes(work: PrismWork) -> List[Set[int]]:
    """Цвета неокрашенных рёбер копий треугольника по расположению e₁ (копия 1), ребра M и e₃ (копия 2)."""
    ((v, a),) = work.matching_fixed.items()
    ((g1, p),) = work.copy_fixed[0].items()
    ((g3, q),) = work.copy_fixed[1].items()
    near1 = v in work.base.edges[g1]
    near3 = v in work.base.edges[g3]
    everything = {1, 2, 3, 4}
    if near1 and near3:
        return [everything - {a}]
    if near1 or near3:
        near, far = (p, q) if near1 else (q, p)
        if far == a:
            return [{near, a, x} for x in sorted(everything - {near, a})]
        return [everything - {a}]
    used = {p, q, a}
    if len(used) <= 2:
        return [everything - used]
    return [everything - {a}]


def _triangle(work: PrismWork, palettes: List[Set[int]]) -> Optional[ExtensionTrace]:
    for allowed in palettes:
        for first in _triangle_colorings(work, 0, allowed):
            for second in _triangle_colorings(work, 1, allowed):
                matching = work.fill_matching((first, second), dict(work.matching_fixed))
                if matching is None:
                    continue
                attempt = ExtensionTrace(route=work.route)
                attempt.add("копия 1", assign=work.copy_assign(1, first), colors=sorted(allowed))
                attempt.add("копия 2", assign=work.copy_assign(2, second), colors=sorted(allowed))
                attempt.add("M: недостающие цвета", assign=work.matching_assign(matching))
                return attempt
    return None


def _odd_plan(work: PrismWork, n: int) -> Iterator[Tuple[str, Strategy]]:
    m = work.matching_fixed
    first, second = work.copies_used()
    if not m:
        if first and second:
            work.enter("нет окрашенных рёбер M, окрашены обе копии")
            yield "копии из списков {1,2,3}, M цветом 4", lambda: _independent(work, _lists(work, (1, 2, 3)))
        else:
            work.enter("нет окрашенных рёбер M, окрашена не более чем одна копия")
            yield "копия из списков {1,2,3}, вторая по соответствию", (
                lambda: _mirror(work, work.single_source(), _lists(work, (1, 2, 3)))
            )
        return

    if len(m) == 1:
        if not (first and second):
            work.enter("одно ребро M, окрашена не более чем одна копия")
            yield "копия из списков {1,2,3,4}, вторая по соответствию", (
                lambda: _mirror(work, work.single_source(), _lists(work, (1, 2, 3, 4)))
            )
        elif n == 1:
            work.enter("одно ребро M и по ребру в копиях треугольника")
            yield "копии треугольника в цветах случая", lambda: _triangle(work, _triangle_palettes(work))
        else:
            work.enter("одно ребро M и по ребру в каждой копии")
            yield "копии из списков {1,2,3}, M цветом 4", lambda: _independent(work, _lists(work, (1, 2, 3)))
        return

    if len(m) == 2:
        work.enter("два ребра M")
        yield "копия из списков {1,2,3,4}, вторая по соответствию", (
            lambda: _mirror(work, work.single_source(), _lists(work, (1, 2, 3, 4)))
        )
        return

    colors = work.matching_colors()
    if len(colors) == 1:
        work.enter(f"три ребра M одного цвета {colors[0]}")
        yield "копии без цвета M", lambda: _mirror(work, 0, _lists(work, (1, 2, 3, 4)))
    else:
        work.enter("три ребра M разных цветов: сначала M")
        full = {v: m.get(v, 4) for v in range(work.n)}
        yield "остальные рёбра M цветом 4, списки на цикле", (
            lambda: _mirror(work, 0, _lists(work, (1, 2, 3, 4), full), full)
        )


def extend_odd_cycle_prism(
    n: int, c: PartialEdgeColoring, budget: Optional[SearchBudget] = None
) -> Tuple[ExtensionOutcome, ExtensionTrace]:
    if n < 1:
        raise PreconditionError("C_{2n+1} требует n >= 1")
    work = PrismWork("odd-cycle", prism(build_cycle(2 * n + 1)), c, 4, None, budget, normalize=3)
    work.require_at_most(3)
    return work.run(_odd_plan(work, n))
