"""
Призмы над регулярными графами с независимыми окрашенными рёбрами.

Если каждая раскраска не более k независимых рёбер графа G продолжается
до χ'(G)-раскраски (это свойство сертифицирует BaseExtender), то
в G□K₂ продолжается каждая раскраска не более k+1 независимых рёбер
палитрой χ'(G)+1 при k < Δ для графов без треугольников и k < Δ/2 иначе.
"""

import logging
from typing import Any, Dict, Iterator, Mapping, Optional, Tuple

from prismext.config import MATCHING_ATTEMPTS
from prismext.exceptions import PreconditionError
from prismext.models.coloring import PartialEdgeColoring
from prismext.models.graph import Graph
from prismext.models.outcome import ExtensionOutcome, ExtensionTrace, SearchBudget
from prismext.services.coloring_core import is_independent
from prismext.services.extenders.common import (
    BaseSolver,
    EdgeFilter,
    PrismWork,
    Strategy,
    oracle_solver,
    reserve,
    split,
)
from prismext.services.graph_core import chromatic_index_value, is_regular, is_triangle_free, prism
from prismext.services.oracle import extend_exhaustive, hypothesis_holds

logger = logging.getLogger(__name__)


class BaseExtender:
    """
    Расширитель для базового графа: продолжает раскраски не более k
    независимых рёбер до χ'(G)-раскраски.

    solve() - интерфейс подзадач призменных расширителей (ограничения
    на цвета рёбер), __call__ - продолжение готовой раскраски базы.
    """

    def __init__(
        self,
        name: str,
        k: int,
        graph_class: str = "regular",
        solver: Optional[BaseSolver] = None,
        budget: Optional[SearchBudget] = None,
    ) -> None:
        if k < 0:
            raise PreconditionError(f"k = {k} < 0")
        self.name = name
        self.k = k
        self.graph_class = graph_class
        self.budget = budget
        self._solver = solver or oracle_solver(budget)
        self._certified: Dict[Tuple[Graph, int], Optional[bool]] = {}

    @classmethod
    def oracle(cls, k: int, budget: Optional[SearchBudget] = None) -> "BaseExtender":
        return cls("oracle", k, budget=budget)

    @property
    def capability(self) -> Dict[str, Any]:
        return {"name": self.name, "graph_class": self.graph_class, "k": self.k, "independent": True}

    def solve(
        self, graph: Graph, palette: int, fixed: Mapping[int, int], domains: Mapping[int, int]
    ) -> Optional[Dict[int, int]]:
        return self._solver(graph, palette, fixed, domains)

    def __call__(self, g: Graph, c: PartialEdgeColoring, palette: Optional[int] = None) -> ExtensionOutcome:
        if palette is not None and palette != c.palette:
            raise PreconditionError(f"палитра {c.palette}, ожидалась {palette}")
        solution = self.solve(g, c.palette, c.assignment, {})
        if solution is None:
            return extend_exhaustive(c, self.budget)
        return ExtensionOutcome.extended(PartialEdgeColoring.trusted(g, c.palette, solution))

    def certified(self, g: Graph, palette: Optional[int] = None) -> Optional[bool]:
        """Проверяет гипотезу (g, k) перебором независимых предраскрасок; результат кэшируется."""
        palette = palette or chromatic_index_value(g, self.budget)
        key = (g, palette)
        if key not in self._certified:
            verdict = hypothesis_holds(g, self.k, palette, independent_only=True, budget=self.budget)
            logger.info("BaseExtender %s: гипотеза k=%d для %d вершин: %s", self.name, self.k, g.vertex_count, verdict)
            self._certified[key] = verdict
        return self._certified[key]


def _accept(work: PrismWork, copies: Tuple[int, ...]) -> EdgeFilter:
    """Ребро M_i смежно ровно с одним окрашенным ребром произведения."""

    def accept(v: int, e: int, w: int) -> bool:
        if not work.uncolored_in_both(e) or w in work.matching_fixed:
            return False
        return all(not work.colors_around(work.copy_fixed[i], w) for i in copies)

    return accept


def _plan(work: PrismWork) -> Iterator[Tuple[str, Strategy]]:
    r = work.reserved
    first, second = work.copies_used()

    if not work.matching_fixed:
        if first and second:
            work.enter("Случай 1: окрашены обе копии")
            yield f"копии χ' цветами, M цветом {r}", lambda: split(work, {r})
            return
        work.enter("Случай 1: окрашена одна копия")
        source = work.single_source()
        rho = min(work.copy_colors(), default=1)
        yield f"снятие и возврат цвета {rho}", lambda: reserve(work, rho, ([], []), source)
        return

    centers = sorted(work.matching_fixed)
    if first and second:
        work.enter("Случай 3: окрашены обе копии и M")
        accept = _accept(work, (0, 1))
        for k, chosen in enumerate(work.matchings_covering(centers, accept, MATCHING_ATTEMPTS)):
            yield f"M1/M2 #{k}, цвет {r}", (lambda chosen=chosen: reserve(work, r, (chosen, chosen)))
        return

    if first or second:
        source = work.single_source()
        work.enter("Случай 2: окрашены одна копия и M", copy=source + 1)
        accept = _accept(work, (source,))
        for k, chosen in enumerate(work.matchings_covering(centers, accept, MATCHING_ATTEMPTS)):
            colors = set(work.copy_fixed[source].values()) | {work.matching_fixed[v] for v, _ in chosen}
            rho = min(colors)
            pair = (chosen, []) if source == 0 else ([], chosen)
            yield f"M1 #{k}, снятие цвета {rho}", (
                lambda pair=pair, rho=rho: reserve(work, rho, pair, source)
            )
        return

    rho = min(work.matching_colors())
    rest = [v for v in centers if work.matching_fixed[v] != rho]
    work.enter("Случай 4: все окрашенные рёбра в M", color=rho, e1=rest)
    accept = _accept(work, (0,))
    for k, chosen in enumerate(work.matchings_covering(rest, accept, MATCHING_ATTEMPTS)):
        yield f"M1 #{k} для E_1, цвет {rho}", (lambda chosen=chosen: reserve(work, rho, (chosen, []), 0))


def extend_regular_independent_prism(
    g: Graph,
    c: PartialEdgeColoring,
    base: BaseExtender,
    budget: Optional[SearchBudget] = None,
    certify: bool = True,
) -> Tuple[ExtensionOutcome, ExtensionTrace]:
    """certify=False - вызывающий сам отвечает за гипотезу (g, k)."""
    if g.edge_count == 0 or not is_regular(g):
        raise PreconditionError("база должна быть регулярным графом с рёбрами")
    delta = g.max_degree
    k = base.k
    triangle_free = is_triangle_free(g)
    if not ((triangle_free and k < delta) or 2 * k < delta):
        raise PreconditionError(
            f"k = {k} вне допустимого диапазона: нужно k < Δ без треугольников или k < Δ/2 (Δ = {delta})"
        )
    chi = chromatic_index_value(g, budget)
    work = PrismWork("regular", prism(g), c, chi + 1, base.solve, budget, normalize=chi)
    if not is_independent(c):
        raise PreconditionError("окрашенные рёбра должны быть независимыми")
    work.require_at_most(k + 1)
    if certify and base.certified(g, chi) is not True:
        raise PreconditionError(f"базовый расширитель {base.name} не подтверждает гипотезу для k = {k}")

    work.trace.add("гипотеза базы", **base.capability, triangle_free=triangle_free)
    return work.run(_plan(work))
