"""
Призмы K_{n,n}□K₂: не более n окрашенных рёбер, палитра n+1.
"""

import logging
from collections import Counter
from typing import Iterator, Optional, Tuple

from prismext.config import MATCHING_ATTEMPTS
from prismext.exceptions import PreconditionError
from prismext.models.coloring import PartialEdgeColoring
from prismext.models.outcome import ExtensionOutcome, ExtensionTrace, SearchBudget
from prismext.models.report import ConditionKind
from prismext.services.characterizations import ah_bipartite_condition
from prismext.services.extenders.common import (
    MatchingChoice,
    PrismWork,
    Strategy,
    good_edge,
    oracle_solver,
    recolor_classes,
    reserve,
    split,
)
from prismext.services.graph_core import build_complete_bipartite, prism
from prismext.services.oracle import solve_with_domains

logger = logging.getLogger(__name__)


def _supergraph_copy(work: PrismWork, n: int, source: int) -> Optional[ExtensionTrace]:
    """Копия с n окрашенными рёбрами вкладывается в K_{n+1,n+1} и раскрашивается n+1 цветами."""
    big = build_complete_bipartite(n + 1, n + 1)

    def lift(e: int) -> int:
        u, v = work.base.edges[e]
        return big.edge_id(u, v + 1)

    fixed = {lift(e): color for e, color in work.copy_fixed[source].items()}
    solution, _ = solve_with_domains(big, n + 1, fixed, None, work.budget)
    if solution is None:
        return None
    copy = {e: solution[lift(e)] for e in range(work.base.edge_count)}
    matching = work.fill_matching((copy, copy), {})
    if matching is None:
        return None
    attempt = ExtensionTrace(route="supergraph")
    attempt.add("K_{n+1,n+1}: ограничение на копию", assign=work.copy_assign(source + 1, copy))
    attempt.add("другая копия по соответствию", assign=work.copy_assign(2 - source, copy))
    attempt.add("M: единственный недостающий цвет", assign=work.matching_assign(matching))
    return attempt


def _one_copy_plan(work: PrismWork, n: int, chosen: MatchingChoice, source: int) -> Tuple[str, Strategy]:
    lifted = dict(work.copy_fixed[source])
    for v, e in chosen:
        lifted[e] = work.matching_fixed[v]
    phi = PartialEdgeColoring(graph=work.base, palette=n, assignment=lifted)
    report = ah_bipartite_condition(n, phi)
    matchings = (chosen, []) if source == 0 else ([], chosen)

    if report.condition is ConditionKind.NONE:
        label = "φ1 продолжается n цветами: M1 в цвет n+1"
        return label, lambda: reserve(work, n + 1, matchings, mirror_from=source)

    if report.condition is ConditionKind.AH_A:
        rho = work.matching_fixed[chosen[0][0]]
        label = f"(a): снятие цвета {rho} с e_M1"
        return label, lambda: reserve(work, rho, matchings, mirror_from=source)

    counts = Counter(work.pre.assignment.values())
    once_on_m = [color for color in work.matching_colors() if counts[color] == 1]
    if once_on_m:
        rho = once_on_m[0]
        label = f"(b): цвет {rho} встречается один раз"
        return label, lambda: reserve(work, rho, matchings, mirror_from=source)
    label = "(b): перекраска M_c в цвет n+1"
    return label, lambda: recolor_classes(work, n + 1, mirror_from=source)


def extend_knn_prism(
    n: int, c: PartialEdgeColoring, budget: Optional[SearchBudget] = None
) -> Tuple[ExtensionOutcome, ExtensionTrace]:
    if n < 2:
        raise PreconditionError("K_n,n-призма требует n >= 2")
    work = PrismWork("knn", prism(build_complete_bipartite(n, n)), c, n + 1, oracle_solver(budget), budget, normalize=n)
    work.require_at_most(n)
    r = work.reserved
    first, second = work.copies_used()

    def plan() -> Iterator[Tuple[str, Strategy]]:
        if not work.matching_fixed:
            full = [i for i in (0, 1) if len(work.copy_fixed[i]) == n]
            if full:
                work.enter("Случай 1: в копии n окрашенных рёбер")
                yield "вложение в K_{n+1,n+1}", lambda: _supergraph_copy(work, n, full[0])
            else:
                work.enter("Случай 1: в каждой копии не более n-1 окрашенных рёбер")
                yield "копии n цветами, M цветом n+1", lambda: split(work, {r})
            return

        centers = sorted(work.matching_fixed)
        if first and second:
            work.enter("Случай 2: окрашены M и обе копии")
            accept = good_edge(work, (0, 1))
            for k, chosen in enumerate(work.matchings_covering(centers, accept, MATCHING_ATTEMPTS)):
                label = f"M1/M2 #{k} = {[list(work.base.edges[e]) for _, e in chosen]}"
                yield label, (lambda chosen=chosen: reserve(work, r, (chosen, chosen)))
            return

        source = work.single_source()
        work.enter("Случай 2: окрашены M и не более одной копии", copy=source + 1)
        accept = good_edge(work, (source,))
        for k, chosen in enumerate(work.matchings_covering(centers, accept, MATCHING_ATTEMPTS)):
            label, strategy = _one_copy_plan(work, n, chosen, source)
            yield f"M1 #{k}: {label}", strategy

    return work.run(plan())
