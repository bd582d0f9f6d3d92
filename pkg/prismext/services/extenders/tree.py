"""
Продолжение раскрасок призм T□K₂ над деревьями до (Δ+1)-раскраски.

Случай 1 (на M нет окрашенных рёбер): копии раскрашиваются независимо
без цвета Δ+1, либо одна раскраска переносится на обе копии.
Случай 2: паросочетание M₁ у вершин степени Δ с окрашенным ребром M,
висячие рёбра M получают фиксированный цвет c, M₁ и M₂ - цвет Δ+1.
"""

import logging
from typing import Iterator, Optional, Set, Tuple

from prismext.config import MATCHING_ATTEMPTS
from prismext.exceptions import PreconditionError
from prismext.models.coloring import PartialEdgeColoring
from prismext.models.graph import Graph
from prismext.models.outcome import ExtensionOutcome, ExtensionTrace, SearchBudget
from prismext.services.extenders.common import (
    PrismWork,
    Strategy,
    copy_and_match,
    oracle_solver,
    reserve_dangling,
    split,
)
from prismext.services.graph_core import is_tree, prism

logger = logging.getLogger(__name__)


def _clean_side(work: PrismWork, v: int, w: int) -> bool:
    """В компоненте T - v, содержащей w, нет окрашенных рёбер ни в копиях, ни на M."""
    side: Set[int] = work.component_without(v, w)
    if side & set(work.matching_fixed):
        return False
    for fixed in work.copy_fixed:
        for e in fixed:
            a, b = work.base.edges[e]
            if a in side and b in side:
                return False
    return True


def _case2_plan(work: PrismWork, delta: int) -> Iterator[Tuple[str, Strategy]]:
    centers = [v for v in sorted(work.matching_fixed) if work.base.degree(v) == delta]
    work.trace.add("V_M: вершины степени Δ с окрашенным ребром M", vertices=centers)

    def accept(v: int, e: int, w: int) -> bool:
        return (
            w not in work.matching_fixed
            and work.uncolored_in_both(e)
            and _clean_side(work, v, w)
        )

    colors = list(range(1, delta + 1))
    for k, chosen in enumerate(work.matchings_covering(centers, accept, MATCHING_ATTEMPTS)):
        for c in colors:
            label = f"Случай 2: M1 #{k} = {[list(work.base.edges[e]) for _, e in chosen]}, c = {c}"
            yield label, (lambda chosen=chosen, c=c: reserve_dangling(work, chosen, c))


def extend_tree_prism(
    t: Graph, c: PartialEdgeColoring, budget: Optional[SearchBudget] = None
) -> Tuple[ExtensionOutcome, ExtensionTrace]:
    if not is_tree(t) or t.edge_count == 0:
        raise PreconditionError("база должна быть деревом хотя бы с одним ребром")
    delta = t.max_degree
    work = PrismWork("tree", prism(t), c, delta + 1, oracle_solver(budget), budget, normalize=delta)
    work.require_at_most(delta)
    r = work.reserved

    first, second = work.copies_used()
    if not work.matching_fixed:
        if first and second:
            work.trace.add("Случай 1: обе копии окрашены, M пусто")
            plan = [("раскраска копий без цвета Δ+1", lambda: split(work, {r}))]
        else:
            work.trace.add("Случай 1: окрашена не более чем одна копия")
            plan = [("перенос раскраски копии", lambda: copy_and_match(work))]
    elif not (first and second):
        work.trace.add("Случай 2: окрашены M и не более одной копии")
        plan = [("T_i вместе с M как лес", lambda: copy_and_match(work))]
    else:
        work.trace.add("Случай 2: окрашены M и обе копии")
        plan = _case2_plan(work, delta)

    outcome, trace = work.run(plan)
    logger.debug("tree: n=%d, Δ=%d, fallback=%s", t.vertex_count, delta, trace.fallback)
    return outcome, trace
