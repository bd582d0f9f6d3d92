"""
Призмы над субкубическими графами класса 1: не более трёх окрашенных
рёбер, палитра 4. Гипотеза: каждая раскраска не более двух рёбер
базы продолжается до 3-раскраски; из неё следует, что база без треугольников
при вершине степени 3.

Копии раскрашиваются тремя цветами решателем базы; гипотеза гарантирует,
что ограничения, которые ставит разбор случаев, выполнимы.
"""

import logging
from collections import Counter
from itertools import permutations, product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from prismext.exceptions import PreconditionError
from prismext.models.coloring import PartialEdgeColoring
from prismext.models.graph import Graph
from prismext.models.outcome import EdgeClass, ExtensionOutcome, ExtensionTrace, SearchBudget
from prismext.services.extenders.common import (
    PrismWork,
    Strategy,
    construct,
    copy_and_match,
    oracle_solver,
    proper_on,
    split,
)
from prismext.services.fixtures import subcubic_triangle_witness
from prismext.services.graph_core import chromatic_index, prism
from prismext.services.oracle import hypothesis_holds

logger = logging.getLogger(__name__)

Steps = Iterator[Tuple[str, Strategy]]
COLORS = (1, 2, 3, 4)


def _edge(work: PrismWork, x: int, y: int) -> Optional[int]:
    return work.base.edge_id(x, y) if work.base.has_edge(x, y) else None


def _step(work: PrismWork, label: str, **kwargs) -> Tuple[str, Strategy]:
    return label, lambda: construct(work, label, **kwargs)


def _same(assign: Dict[int, int]) -> Tuple[Dict[int, int], Dict[int, int]]:
    return dict(assign), dict(assign)


def _around(work: PrismWork, v: int, colors: Sequence[int], fixed: Dict[int, int]) -> List[Dict[int, int]]:
    """Правильные раскраски неокрашенных рёбер при v цветами colors, совместимые с fixed."""
    free = [e for e in work.base.incident[v] if e not in fixed]
    options = []
    for choice in product(colors, repeat=len(free)):
        assign = dict(zip(free, choice))
        if proper_on(work.base, {**fixed, **assign}):
            options.append(assign)
    return options


# Case 1
def _no_matching_edges(work: PrismWork) -> Steps:
    r = work.reserved
    if all(len(fixed) <= 2 for fixed in work.copy_fixed):
        work.enter("Случай 1: в каждой копии не более двух окрашенных рёбер")
        yield f"копии тремя цветами, M цветом {r}", lambda: split(work, {r})
        return
    work.enter("Случай 1: три окрашенных ребра в одной копии", sketched=True)
    for x in work.copy_colors():
        yield _step(work, f"снятие и возврат цвета {x}", release={x}, exclude={x})
    yield "перенос раскраски копии", lambda: copy_and_match(work)


# Case 2
def _one_matching_edge(work: PrismWork) -> Steps:
    (u, a), = work.matching_fixed.items()
    r = work.reserved
    first, second = work.copies_used()
    if a not in work.copy_colors():
        work.enter(f"Случай 2: цвет {a} только на ребре M")
        yield _step(work, f"копии без цвета {a}", exclude={a}, shared=False)
        return
    if not (first and second):
        work.enter(f"Случай 2: остальные рёбра в одной копии, снятие цвета {a}")
        yield _step(work, f"снятие и возврат цвета {a}", release={a}, exclude={a})
        return

    def clean(f: int, i: int) -> bool:
        w = work.base.other_end(f, u)
        return f not in work.copy_fixed[i] and a not in work.colors_around(work.copy_fixed[i], w)

    work.enter(f"Случай 2: окрашены обе копии, d(u) = {work.base.degree(u)}")
    for f in work.base.incident[u]:
        if clean(f, 0) and clean(f, 1):
            edge = list(work.base.edges[f])
            yield _step(
                work,
                f"ребро {edge} в цвет {a}, затем в цвет {r}",
                exclude={r},
                extra=_same({f: a}),
                recolor=_same({f: r}),
                shared=False,
            )

    work.enter("Случай 2: рёбра при u в цветах, отличных от a", sketched=work.base.degree(u) == 1)
    others = [x for x in COLORS if x not in (a, r)]
    sides = [_around(work, u, others, work.copy_fixed[i]) for i in (0, 1)]
    for k, (one, two) in enumerate(product(*sides)):
        yield _step(work, f"рёбра при u #{k}", exclude={r}, extra=(one, two), shared=False)
    yield _step(work, f"копии без цвета {r}", exclude={r}, shared=False)


# Case 3
def _two_matching_edges(work: PrismWork) -> Steps:
    colored = work.matching_fixed
    colors = work.matching_colors()
    if len(colors) == 1:
        a = colors[0]
        work.enter(f"Случай 3: один цвет {a} на M")
        yield _step(work, f"снятие и возврат цвета {a}", release={a}, exclude={a})
        return

    placed = [(e, color) for fixed in work.copy_fixed for e, color in fixed.items()]
    e3, c3 = placed[0] if placed else (None, None)
    ends3 = set(work.base.edges[e3]) if e3 is not None else set()

    vertices = sorted(colored)
    orders = [tuple(vertices), tuple(reversed(vertices))]
    orders.sort(key=lambda pair: colored[pair[0]] != c3)
    for x, y in orders:
        p, q = colored[x], colored[y]
        work.enter(f"Случай 3: ребро e' при вершине цвета {p}")
        for f in work.base.incident[x]:
            w = work.base.other_end(f, x)
            if w == y or not work.uncolored_in_both(f):
                continue
            if c3 == p and (x in ends3 or w in ends3):
                continue
            yield _step(
                work,
                f"ребро {[x, w]} в цвет {p}, копии без цвета {q}",
                exclude={q},
                extra=_same({f: p}),
                recolor=_same({f: q}),
            )

        work.enter("Случай 3: подходящего ребра e' нет")
        yield _step(work, f"копии без цвета {q}", exclude={q})
        xy = _edge(work, x, y)
        if xy is not None and work.uncolored_in_both(xy):
            for t in COLORS:
                if t not in (p, q):
                    yield _step(work, f"ребро {[x, y]} в цвет {t}, копии без цвета {q}", exclude={q}, extra=_same({xy: t}))


# Case 4
def _two_colors_on_matching(work: PrismWork) -> Steps:
    colored = work.matching_fixed
    (p, _), (q, _) = Counter(colored.values()).most_common()
    u = next(v for v, color in colored.items() if color == q)
    work.enter(f"Случай 4: цвет {p} дважды, цвет {q} один раз, d(u) = {work.base.degree(u)}")
    if work.base.degree(u) <= 2:
        spare = [x for x in COLORS if x not in (p, q)]
        for k, assign in enumerate(_around(work, u, spare, {})):
            yield _step(work, f"рёбра при u в цвета {spare} #{k}", exclude={p}, extra=_same(assign))
        return
    for f in work.base.incident[u]:
        x = work.base.other_end(f, u)
        if x in colored:
            continue
        yield _step(
            work,
            f"ребро {[u, x]} в цвет {q}, затем в цвет {p}",
            exclude={p},
            extra=_same({f: q}),
            recolor=_same({f: p}),
        )


def _three_colors_on_matching(work: PrismWork) -> Steps:
    colored = work.matching_fixed
    r = work.reserved
    group = sorted(colored)
    inside = set(group)
    outside = {v: [w for w in work.base.adjacency[v] if w not in inside] for v in group}

    work.enter("Случай 4: три цвета, независимые рёбра к вершинам x, y вне {u, v, w}")
    for a, b, c in permutations(group):
        for x in outside[a]:
            for y in outside[b]:
                if y == x:
                    continue
                ax, by = work.base.edge_id(a, x), work.base.edge_id(b, y)
                yield _step(
                    work,
                    f"рёбра {[a, x]}, {[b, y]} в цвета M, затем в цвет {colored[c]}",
                    exclude={colored[c]},
                    extra=_same({ax: colored[a], by: colored[b]}),
                    recolor=_same({ax: colored[c], by: colored[c]}),
                )

    neighbours = sorted({w for v in group for w in outside[v]})
    if len(neighbours) == 1:
        (x,) = neighbours
        near = [v for v in group if x in outside[v]]
        work.enter(f"Случай 4: один сосед вне группы, смежны с ним {len(near)}", sketched=len(near) == 2)
        for a, b, c in permutations(group):
            if len(near) == 3:
                xa, xb = work.base.edge_id(x, a), work.base.edge_id(x, b)
                yield _step(
                    work,
                    f"{[x, a]} в цвет {colored[a]}, {[x, b]} в цвет {r}",
                    exclude={colored[c]},
                    extra=_same({xa: colored[a], xb: r}),
                    recolor=_same({xa: colored[c]}),
                )
                continue
            ab, ac, bc, xb = _edge(work, a, b), _edge(work, a, c), _edge(work, b, c), _edge(work, x, b)
            if len(near) == 1 and x in outside[a] and ab is not None and ac is not None:
                yield _step(
                    work, f"{[a, b]} в цвет {r}, {[a, c]} в цвет {colored[b]}",
                    exclude={colored[a]}, extra=_same({ab: r, ac: colored[b]}),
                )
            if len(near) == 1 and x in outside[a] and ab is not None and bc is not None:
                yield _step(
                    work, f"{[b, c]} в цвет {r}, {[a, b]} в цвет {colored[c]}",
                    exclude={colored[a]}, extra=_same({bc: r, ab: colored[c]}),
                )
            if len(near) == 2 and c not in near and xb is not None and ac is not None:
                yield _step(
                    work, f"{[x, b]} в цвет {colored[a]}, {[a, c]} в цвет {colored[b]}",
                    exclude={colored[c]}, extra=_same({xb: colored[a], ac: colored[b]}),
                )
        return

    if len(neighbours) == 2:
        work.enter("Случай 4: два соседа вне группы при одной вершине")
        for a in group:
            if any(outside[v] for v in group if v != a):
                continue
            rest = [v for v in group if v != a]
            spare = [t for t in COLORS if t != colored[a]]
            edges = sorted({e for v in rest for e in work.base.incident[v]})
            for choice in product(spare, repeat=len(edges)):
                assign = dict(zip(edges, choice))
                if any(colored[v] in work.colors_around(assign, v) for v in rest):
                    continue
                if not proper_on(work.base, assign):
                    continue
                yield _step(work, f"рёбра при {rest} без цвета {colored[a]}", exclude={colored[a]}, extra=_same(assign))


def _three_matching_edges(work: PrismWork) -> Steps:
    colors = work.matching_colors()
    if len(colors) == 1:
        work.enter(f"Случай 4: один цвет {colors[0]} на M")
        yield _step(work, f"копии без цвета {colors[0]}", exclude={colors[0]})
    elif len(colors) == 2:
        yield from _two_colors_on_matching(work)
    else:
        yield from _three_colors_on_matching(work)


PLANS = {0: _no_matching_edges, 1: _one_matching_edge, 2: _two_matching_edges, 3: _three_matching_edges}


def extend_subcubic_class1_prism(
    g: Graph,
    c: PartialEdgeColoring,
    budget: Optional[SearchBudget] = None,
    hypothesis: Optional[bool] = None,
) -> Tuple[ExtensionOutcome, ExtensionTrace]:
    """hypothesis=True - вызывающий подтверждает гипотезу о двух рёбрах, иначе она проверяется перебором."""
    if g.max_degree != 3:
        raise PreconditionError(f"требуется Δ = 3, получено {g.max_degree}")
    witness = subcubic_triangle_witness(g)
    if witness is not None:
        raise PreconditionError("база содержит треугольник при вершине степени 3", witness=witness)
    if chromatic_index(g, budget).edge_class is not EdgeClass.CLASS1:
        raise PreconditionError("база должна быть графом класса 1")
    if hypothesis is None:
        hypothesis = hypothesis_holds(g, 2, 3, budget=budget, force=True)
    if hypothesis is not True:
        raise PreconditionError("не подтверждено, что каждые два окрашенных ребра базы продолжаются 3 цветами")

    work = PrismWork("subcubic", prism(g), c, 4, oracle_solver(budget), budget, normalize=3)
    work.require_at_most(3)
    return work.run(PLANS[len(work.matching_fixed)](work))
