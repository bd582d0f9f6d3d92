"""
Призмы K_m□K₂ с палитрой χ'(K_m)+1.

Чётное m = 2n: не более n окрашенных рёбер, палитра 2n.
Нечётное m = 2n-1: не более n+1 окрашенных рёбер, палитра 2n
(2n-1 цветов недостаточно уже для двух рёбер).

Цвета нормализуются так, что цвет палитры 2n свободен; он играет роль
резервного цвета, в который перекрашиваются паросочетания M_1/M_2.
Раскраски копий K_m при заданных ограничениях строит решатель базы.
"""

import logging
from collections import Counter
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from prismext.config import MATCHING_ATTEMPTS
from prismext.exceptions import PreconditionError
from prismext.models.coloring import PartialEdgeColoring
from prismext.models.outcome import ExtensionOutcome, ExtensionTrace, SearchBudget, TraceStep
from prismext.models.report import ConditionReport
from prismext.services.characterizations import complete_even_condition, complete_odd_condition
from prismext.services.extenders.common import (
    MatchingChoice,
    PrismWork,
    Strategy,
    construct,
    copy_and_match,
    good_edge,
    oracle_solver,
    proper_on,
    recolor_classes,
    split,
)
from prismext.services.extenders.cycles import extend_odd_cycle_prism
from prismext.services.fixtures import complete_odd_two_edges
from prismext.services.graph_core import build_complete, prism

logger = logging.getLogger(__name__)

Steps = Iterator[Tuple[str, Strategy]]
Condition = Callable[[int, PartialEdgeColoring], ConditionReport]


def complete_prism_bound(m: int) -> int:
    """Сколько рёбер K_m□K₂ можно окрасить заранее."""
    if m % 2 == 0:
        return m // 2
    return (m + 1) // 2 + 1


# Matchings M_1/M_2
def _lift(work: PrismWork, chosen: MatchingChoice) -> Dict[int, int]:
    return {e: work.matching_fixed[v] for v, e in chosen}


def _paint(chosen: MatchingChoice, color: int) -> Dict[int, int]:
    return {e: color for _, e in chosen}


def _describe(work: PrismWork, chosen: MatchingChoice) -> List[List[int]]:
    return [list(work.base.edges[e]) for _, e in chosen]


def _lifted(
    work: PrismWork,
    label: str,
    chosen: MatchingChoice,
    shared: bool,
    color: Optional[int] = None,
    extra: Sequence[Mapping[int, int]] = ({}, {}),
) -> Strategy:
    """Рёбра M_i получают цвет смежного ребра M, копии - без цвета color, затем M_i перекрашиваются в color."""
    color = work.reserved if color is None else color
    lift, up = _lift(work, chosen), _paint(chosen, color)
    extras = tuple({**extra[i], **lift} for i in (0, 1))
    return lambda: construct(work, label, exclude={color}, extra=extras, recolor=(up, up), shared=shared)


def _exceptional(work: PrismWork, phi: Mapping[int, int], condition: Condition, n: int) -> bool:
    """φ_1 не продолжается χ'(K_m) цветами."""
    if not proper_on(work.base, phi):
        return True
    c = PartialEdgeColoring(graph=work.base, palette=work.palette - 1, assignment=dict(phi))
    return condition(n, c).fired


def _merged(work: PrismWork) -> Optional[Dict[int, int]]:
    """Общая раскраска копий, если окрашенные рёбра двух копий совместимы."""
    merged = dict(work.copy_fixed[0])
    for e, color in work.copy_fixed[1].items():
        if merged.get(e, color) != color:
            return None
        merged[e] = color
    return merged if proper_on(work.base, merged) else None


def _release(work: PrismWork, color: int) -> Steps:
    label = f"снятие и возврат цвета {color}"
    yield label, lambda: construct(work, label, release={color}, exclude={color})
    yield f"{label}, копии независимо", lambda: construct(work, label, release={color}, exclude={color}, shared=False)


def _without(work: PrismWork, color: int, shared: bool = True) -> Tuple[str, Strategy]:
    label = f"копии без цвета {color}"
    return label, lambda: construct(work, label, exclude={color}, shared=shared)


def _all_in_matching(work: PrismWork, distinct_sketched: bool) -> Steps:
    """Все окрашенные рёбра лежат в M."""
    counts = Counter(work.matching_fixed.values())
    repeated = sorted(color for color, times in counts.items() if times >= 2)
    if not repeated:
        work.enter("все цвета M различны", sketched=distinct_sketched)
        yield _without(work, work.reserved)
        return
    if len(repeated) == 1:
        work.enter(f"цвет {repeated[0]} повторяется на M", sketched=not distinct_sketched)
        yield _without(work, repeated[0])
        return
    work.enter("два цвета повторяются на M: паросочетание M_1")
    accept = good_edge(work, ())
    for k, chosen in enumerate(work.matchings_covering(sorted(work.matching_fixed), accept, MATCHING_ATTEMPTS)):
        yield f"M_1 #{k} = {_describe(work, chosen)}", _lifted(work, "M_1 в цвета M", chosen, shared=True)


# K_5
def _k5_single(work: PrismWork, fixed: Dict[int, int]) -> Steps:
    """Окрашены M и одна копия (или согласованные раскраски обеих копий)."""
    colored = work.matching_fixed
    colors = work.matching_colors()
    on_copy = set(fixed.values())

    if len(colors) == 1:
        work.enter("Случай 1: один цвет на M")
        label = f"снятие цвета {colors[0]} с копии"
        yield label, lambda: construct(work, label, release={colors[0]}, exclude={colors[0]})
        return
    if len(colored) == 2:
        work.enter("Случай 1.1: на M два ребра")

        def accept(v: int, e: int, w: int) -> bool:
            return e not in fixed and w not in colored and colored[v] not in work.colors_around(fixed, w)

        for k, chosen in enumerate(work.matchings_covering(sorted(colored), accept, MATCHING_ATTEMPTS)):
            if _exceptional(work, {**fixed, **_lift(work, chosen)}, complete_odd_condition, 3):
                continue
            yield f"φ-хорошее паросочетание #{k} = {_describe(work, chosen)}", _lifted(
                work, "M_1 в цвета M, затем в цвет 6", chosen, shared=True
            )
        shared_colors = [color for color in colors if color in on_copy]
        if on_copy - set(colors):
            work.enter("Случай 1.1: хорошего паросочетания нет", sketched=True)
            for c2 in shared_colors:
                label = f"раскраска без цвета {c2}, рёбра цвета {c2} возвращаются"
                yield label, (lambda c2=c2, label=label: construct(work, label, release={c2}, exclude={c2}))
        elif set(colors) <= on_copy:
            work.enter("Случай 1.1: одни и те же цвета на M и в копии")
            yield f"копии без цветов {colors}", lambda: construct(work, "копии без цветов M", exclude=colors)
        return

    if not fixed:
        yield from _all_in_matching(work, distinct_sketched=True)
        return

    (e1, c0), = fixed.items()
    used = set(colors) | {c0}
    if len(used) == 2:
        work.enter("Случай 1.2: два цвета")
        ends = set(work.base.edges[e1]) | {v for v, color in colored.items() if color == c0}
        for f, (u, w) in enumerate(work.base.edges):
            if f == e1 or u in ends or w in ends:
                continue
            label = f"ребро {[u, w]} в цвет {c0}, остальные без цветов {sorted(used)}"
            yield label, (
                lambda f=f, label=label: construct(work, label, exclude=used, extra=({f: c0}, {f: c0}))
            )
        return

    if c0 in colors:
        work.enter(f"Случай 1.2: цвет {c0} в копии и на M")
        yield from _release(work, c0)
        return

    counts = Counter(colored.values())
    if len(counts) == 2:
        (c, _), (single, _) = counts.most_common()
        work.enter(f"Случай 1.2: цвет {c} дважды на M, цвет {single} один раз")
        centers = sorted(v for v, color in colored.items() if color == c)

        def accept_c(v: int, e: int, w: int) -> bool:
            return e not in fixed and w not in colored and c not in work.colors_around(fixed, w)

        for k, chosen in enumerate(work.matchings_covering(centers, accept_c, MATCHING_ATTEMPTS)):
            yield f"M_1 #{k} = {_describe(work, chosen)}, затем цвет {single}", _lifted(
                work, f"M_1 в цвет {c}, копии без цвета {single}", chosen, shared=True, color=single
            )
        return

    work.enter("Случай 1.2: четыре цвета", sketched=True)
    for x in [work.reserved, *colors]:
        yield _without(work, x)


def _k5_both(work: PrismWork) -> Steps:
    """Окрашены обе копии, раскраски копий несовместимы."""
    colored = work.matching_fixed
    if len(colored) == 1:
        (u, a), = colored.items()
        work.enter("Случай 2: одно ребро M, ребро e3 при u")
        six = work.reserved
        for e3 in work.base.incident[u]:
            w = work.base.other_end(e3, u)
            if not work.uncolored_in_both(e3):
                continue
            if any(a in work.colors_around(work.copy_fixed[i], w) for i in (0, 1)):
                continue
            label = f"ребро {[u, w]} в цвет {a}, затем в цвет {six}"
            yield label, (
                lambda e3=e3, label=label: construct(
                    work, label, exclude={six}, extra=({e3: a}, {e3: a}), recolor=({e3: six}, {e3: six}), shared=False
                )
            )

        work.enter(f"Случай 2: класс цвета {a} в обеих копиях обходит u", sketched=True)
        for i in (0, 1):
            for g, color in work.copy_fixed[i].items():
                if color != a or u in work.base.edges[g]:
                    continue
                rest = sorted(set(range(work.n)) - {u} - set(work.base.edges[g]))
                e4 = work.base.edge_id(*rest)
                cls = {g: a, e4: a}
                label = f"класс цвета {a}: {[list(work.base.edges[f]) for f in sorted(cls)]}"
                yield label, (
                    lambda cls=cls, label=label: construct(
                        work, label, exclude={six}, extra=(cls, cls), shared=False
                    )
                )
        return

    (e1, p), = work.copy_fixed[0].items()
    (e2, q), = work.copy_fixed[1].items()
    colors = set(work.matching_colors())
    if e1 == e2 and {p, q} <= colors:
        work.enter("Случай 2 (a): одно ребро окрашено в копиях по-разному")
        ends = set(work.base.edges[e1])
        for f, (u, w) in enumerate(work.base.edges):
            if u in ends or w in ends:
                continue
            for x in (p, q):
                for y in (p, q):
                    label = f"ребро {[u, w]}: цвета {x}/{y}, остальные без цветов {sorted((p, q))}"
                    yield label, (
                        lambda f=f, x=x, y=y, label=label: construct(
                            work, label, exclude=(p, q), extra=({f: x}, {f: y}), shared=False
                        )
                    )
        return

    work.enter("Случай 2: соответственные паросочетания M_1, M_2")
    accept = good_edge(work, (0, 1))
    for k, chosen in enumerate(work.matchings_covering(sorted(colored), accept, MATCHING_ATTEMPTS)):
        yield f"M_1 = M_2 #{k} = {_describe(work, chosen)}", _lifted(
            work, "M_1, M_2 в цвета M, затем в цвет 6", chosen, shared=False
        )


def _k5_plan(work: PrismWork) -> Steps:
    first, second = work.copies_used()
    if not (first and second):
        yield from _k5_single(work, work.copy_fixed[work.single_source()])
        return
    merged = _merged(work)
    if merged is not None:
        work.enter("Случай 2: раскраски копий совместимы, как в случае 1")
        yield from _k5_single(work, merged)
    yield from _k5_both(work)


# K_{2n-1}, n >= 4
def _near_perfect(work: PrismWork, u: int, a: int) -> Steps:
    """Класс цвета a: паросочетание M', покрывающее все вершины, кроме u."""
    pre = sorted({e for i in (0, 1) for e, color in work.copy_fixed[i].items() if color == a})
    covered = {x for e in pre for x in work.base.edges[e]}
    if u in covered or len(covered) != 2 * len(pre):
        return
    centers = [v for v in range(work.n) if v != u and v not in covered]

    def accept(v: int, e: int, w: int) -> bool:
        return w != u and w not in covered and work.uncolored_in_both(e)

    for k, chosen in enumerate(work.matchings_covering(centers, accept, MATCHING_ATTEMPTS)):
        cls = {e: a for e in pre}
        cls.update(_paint(chosen, a))
        label = f"M' #{k}: класс цвета {a} без вершины {u}"
        yield label, (
            lambda cls=cls, label=label: construct(
                work, label, exclude={work.reserved}, extra=(cls, cls), shared=False
            )
        )


def _one_color_on_copies(work: PrismWork, c: int, repeated: List[int], extra: Sequence[Mapping[int, int]]) -> Steps:
    """Случай 2 при одной окрашенной копии: на копиях только цвет c."""
    if not repeated:
        label = f"копия без цвета {c}, кроме рёбер цвета {c}"
        yield label, lambda: construct(work, label, exclude={c}, extra=extra)
        return
    on_copy = {e for i in (0, 1) for e, color in {**work.copy_fixed[i], **extra[i]}.items() if color == c}
    if len(repeated) == 1 and len(on_copy) <= 1:
        label = f"копия без цвета {repeated[0]}"
        yield label, lambda: construct(work, label, exclude={repeated[0]}, extra=extra)
    work.enter(f"Случай 2: цвета {repeated} повторяются на M, паросочетание M_1", sketched=len(repeated) == 1)
    accept = good_edge(work, (0, 1))
    for k, chosen in enumerate(work.matchings_covering(sorted(work.matching_fixed), accept, MATCHING_ATTEMPTS)):
        yield f"M_1 #{k} = {_describe(work, chosen)}", _lifted(work, "M_1 в цвета M", chosen, True, extra=extra)


def _general_plan(work: PrismWork) -> Steps:
    colored = work.matching_fixed
    colors = work.matching_colors()
    copy_colors = work.copy_colors()
    first, second = work.copies_used()
    r = work.reserved

    if len(colors) == 1:
        a = colors[0]
        if not (first and second):
            work.enter("Случай 1: один цвет на M, окрашена не более чем одна копия")
            label = f"снятие цвета {a} с копии"
            yield label, lambda: construct(work, label, release={a}, exclude={a})
            return
        work.enter("Случай 1: один цвет на M, окрашены обе копии")
        accept = good_edge(work, (0, 1))
        for k, chosen in enumerate(work.matchings_covering(sorted(colored), accept, MATCHING_ATTEMPTS)):
            yield f"M_1 = M_2 #{k} = {_describe(work, chosen)}", _lifted(
                work, f"M_1, M_2 в цвет {a}, затем в цвет {r}", chosen, shared=False
            )
        if len(colored) == 1:
            (u, _), = colored.items()
            work.enter(f"Случай 1: паросочетание M' цвета {a}", sketched=True)
            yield from _near_perfect(work, u, a)
        return

    counts = Counter(colored.values())
    if len(copy_colors) <= 1:
        if not copy_colors:
            work.enter("Случай 2: все окрашенные рёбра в M")
            yield from _all_in_matching(work, distinct_sketched=False)
            return
        c = copy_colors[0]
        repeated = sorted(color for color, times in counts.items() if times >= 2 and color != c)
        if not (first and second):
            work.enter(f"Случай 2: на копии только цвет {c}")
            yield from _one_color_on_copies(work, c, repeated, ({}, {}))
            return
        work.enter(f"Случай 2: на обеих копиях только цвет {c}")
        if not repeated:
            yield _without(work, c)
            yield _without(work, c, shared=False)
            return
        union = {e: c for i in (0, 1) for e in work.copy_fixed[i]}
        yield from _one_color_on_copies(work, c, repeated, (union, union))
        accept = good_edge(work, (0, 1))
        for k, chosen in enumerate(work.matchings_covering(sorted(colored), accept, MATCHING_ATTEMPTS)):
            yield f"M_1 = M_2 #{k} = {_describe(work, chosen)}", _lifted(
                work, "M_1, M_2 в цвета M", chosen, shared=False
            )
        return

    copies = tuple(i for i in (0, 1) if work.copy_fixed[i])
    shared = len(copies) == 1
    work.enter("Случай 3: на M и на копиях не менее двух цветов")
    accept = good_edge(work, copies)
    for k, chosen in enumerate(work.matchings_covering(sorted(colored), accept, MATCHING_ATTEMPTS)):
        yield f"хорошее паросочетание #{k} = {_describe(work, chosen)}", _lifted(
            work, f"M_1 в цвета M, затем в цвет {r}", chosen, shared=shared
        )
    work.enter("Случай 3: хорошего паросочетания нет", sketched=True)
    for c1 in colors:
        extra = tuple(
            {e: c1 for e, color in work.copy_fixed[1 - i].items() if color == c1 and e not in work.copy_fixed[i]}
            for i in (0, 1)
        )
        label = f"класс цвета {c1} из обеих копий, остальное без {c1}"
        yield label, (
            lambda c1=c1, extra=extra, label=label: construct(
                work, label, release={c1}, exclude={c1}, extra=extra, shared=shared
            )
        )


# K_{2n}
def _even_plan(work: PrismWork, n: int) -> Steps:
    colored = work.matching_fixed
    r = work.reserved
    first, second = work.copies_used()
    if first and second:
        work.enter("окрашены M и обе копии: паросочетания M_1/M_2")
        accept = good_edge(work, (0, 1))
        for k, chosen in enumerate(work.matchings_covering(sorted(colored), accept, MATCHING_ATTEMPTS)):
            yield f"M_1/M_2 #{k} = {_describe(work, chosen)}", _lifted(
                work, f"M_1, M_2 в цвета M, затем в цвет {r}", chosen, shared=False
            )
        return

    source = work.single_source()
    fixed = work.copy_fixed[source]
    work.enter("окрашены M и не более одной копии")
    accept = good_edge(work, (source,))
    options = list(work.matchings_covering(sorted(colored), accept, MATCHING_ATTEMPTS))
    for k, chosen in enumerate(options):
        if _exceptional(work, {**fixed, **_lift(work, chosen)}, complete_even_condition, n):
            continue
        yield f"φ_1 продолжается, M_1 #{k} = {_describe(work, chosen)}", _lifted(
            work, f"M_1 в цвета M, затем в цвет {r}", chosen, shared=True
        )

    work.enter("φ_1 не продолжается: снятие цвета M", sketched=True)
    for k, chosen in enumerate(options):
        for rho in work.matching_colors():
            rest = [(v, e) for v, e in chosen if colored[v] != rho]
            lift, up = _lift(work, rest), _paint(rest, rho)
            label = f"M_1 #{k}: снятие цвета {rho}"
            yield label, (
                lambda lift=lift, up=up, rho=rho, label=label: construct(
                    work, label, release={rho}, exclude={rho}, extra=(lift, lift), recolor=(up, up)
                )
            )
    yield f"перекраска M_c в цвет {r}", lambda: recolor_classes(work, r, source)


def extend_complete_prism(
    m: int, c: PartialEdgeColoring, budget: Optional[SearchBudget] = None
) -> Tuple[ExtensionOutcome, ExtensionTrace]:
    if m < 3:
        raise PreconditionError("K_m-призма требует m >= 3")
    palette = m if m % 2 == 0 else m + 1
    if m % 2 == 1 and c.palette == m:
        raise PreconditionError(
            f"для K_{m}□K₂ требуется {m + 1} цветов: с {m} цветами не продолжаются уже два ребра",
            witness=complete_odd_two_edges((m + 1) // 2),
        )
    if m == 3:
        outcome, trace = extend_odd_cycle_prism(1, c, budget)
        trace.steps.insert(0, TraceStep(label="K_3 = C_3: призма над нечётным циклом"))
        return outcome, trace

    work = PrismWork("complete", prism(build_complete(m)), c, palette, oracle_solver(budget), budget, normalize=palette - 1)
    bound = complete_prism_bound(m)
    work.require_at_most(bound)

    def plan() -> Steps:
        if not work.matching_fixed:
            work.enter("на M нет окрашенных рёбер: как для K_n,n")
            yield f"копии без цвета {work.reserved}", lambda: split(work, {work.reserved})
            yield "перенос раскраски копии", lambda: copy_and_match(work)
            return
        if m % 2 == 0:
            yield from _even_plan(work, m // 2)
            return

        n = (m + 1) // 2
        color, times = Counter(work.pre.assignment.values()).most_common(1)[0]
        if work.pre.colored_count == bound and times >= n:
            work.enter(f"не менее {n} рёбер цвета {color}", sketched=True)
            yield from _release(work, color)
        yield from (_k5_plan(work) if m == 5 else _general_plan(work))

    return work.run(plan())
