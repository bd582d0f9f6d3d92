"""
Общая часть конструктивных расширителей призм G□K₂.

Расширитель нормализует цвета предраскраски, раскладывает её по копиям
G₁, G₂ и паросочетанию M и перебирает стратегии в порядке случаев
доказательства. Каждая стратегия раскрашивает копии базового графа
отдельными подзадачами (решатель BaseSolver) и возвращает протокол
шагов. Результат принимается только после проверки is_valid_extension;
если ни одна стратегия не сработала, задача целиком уходит оракулу,
а в протоколе выставляется флаг fallback.
"""

import logging
from typing import Any, Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from prismext.exceptions import (
    BudgetExhausted,
    ColoringFormatError,
    GraphMismatchError,
    PreconditionError,
    ProofStepError,
)
from prismext.models.coloring import PartialEdgeColoring
from prismext.models.graph import Graph, PrismDecomposition
from prismext.models.outcome import ExtensionOutcome, ExtensionTrace, SearchBudget
from prismext.services.coloring_core import find_conflict, is_valid_extension, normalize_colors
from prismext.services.oracle import extend_exhaustive, mask_of, solve_with_domains

logger = logging.getLogger(__name__)

# (базовый граф, палитра, окрашенные рёбра, маски допустимых цветов) -> раскраска или None
BaseSolver = Callable[[Graph, int, Mapping[int, int], Mapping[int, int]], Optional[Dict[int, int]]]
Strategy = Callable[[], Optional[ExtensionTrace]]
Plan = Iterable[Tuple[str, Strategy]]
MatchingChoice = List[Tuple[int, int]]  # (вершина, ребро базы)
EdgeFilter = Callable[[int, int, int], bool]


def oracle_solver(budget: Optional[SearchBudget] = None) -> BaseSolver:
    def solve(graph: Graph, palette: int, fixed: Mapping[int, int], domains: Mapping[int, int]):
        solution, _ = solve_with_domains(graph, palette, fixed, domains, budget)
        return solution

    return solve


def proper_on(graph: Graph, assign: Mapping[int, int]) -> bool:
    for e, color in assign.items():
        for f in graph.edge_neighbors[e]:
            if assign.get(f) == color:
                return False
    return True


class PrismWork:
    """Состояние одного запуска расширителя."""

    def __init__(
        self,
        route: str,
        decomposition: PrismDecomposition,
        coloring: PartialEdgeColoring,
        palette: int,
        solver: Optional[BaseSolver],
        budget: Optional[SearchBudget] = None,
        normalize: Optional[int] = None,
    ) -> None:
        if coloring.graph != decomposition.product:
            raise GraphMismatchError("раскраска задана не на призме базового графа")
        if coloring.palette != palette:
            raise PreconditionError(f"палитра {coloring.palette}, требуется {palette}")
        conflict = find_conflict(coloring)
        if conflict is not None:
            raise ColoringFormatError(f"раскраска неправильная в вершине {conflict[0]}")

        self.route = route
        self.d = decomposition
        self.base = decomposition.base
        self.n = decomposition.base_vertex_count
        self.palette = palette
        self.original = coloring
        self.solver = solver
        self.budget = budget
        self.trace = ExtensionTrace(route=route)
        self.case: Optional[str] = None
        self.sketched = False

        working = coloring
        if normalize is not None:
            working, perm = normalize_colors(coloring, normalize)
            self.trace.permutation = perm
        self.pre = working

        self.copy_fixed: Tuple[Dict[int, int], Dict[int, int]] = ({}, {})
        self.matching_fixed: Dict[int, int] = {}
        for e, color in working.assignment.items():
            role = decomposition.role(e)
            if role.in_matching:
                self.matching_fixed[role.base] = color
            else:
                self.copy_fixed[role.copy - 1][role.base] = color

    # Shape of the precoloring
    @property
    def reserved(self) -> int:
        return self.palette

    @property
    def full(self) -> int:
        return (1 << self.palette) - 1

    def require_at_most(self, limit: int) -> None:
        if self.pre.colored_count > limit:
            raise PreconditionError(f"окрашено {self.pre.colored_count} рёбер, допускается не более {limit}")

    def copies_used(self) -> Tuple[bool, bool]:
        return bool(self.copy_fixed[0]), bool(self.copy_fixed[1])

    def matching_colors(self) -> List[int]:
        return sorted(set(self.matching_fixed.values()))

    def copy_colors(self) -> List[int]:
        return sorted(set(self.copy_fixed[0].values()) | set(self.copy_fixed[1].values()))

    def single_source(self) -> int:
        """Копия, содержащая окрашенные рёбра (0, если обе пусты)."""
        return 1 if self.copy_fixed[1] and not self.copy_fixed[0] else 0

    # Building blocks
    def colors_around(self, assign: Mapping[int, int], v: int) -> Set[int]:
        return {assign[e] for e in self.base.incident[v] if e in assign}

    def matching_exclusions(self) -> Dict[int, Set[int]]:
        return {v: {color} for v, color in self.matching_fixed.items()}

    def domains(
        self,
        fixed: Mapping[int, int],
        exclude: Iterable[int] = (),
        at: Optional[Mapping[int, Set[int]]] = None,
        free: Iterable[int] = (),
    ) -> Dict[int, int]:
        everywhere = mask_of(exclude)
        at = at or {}
        free = set(free)
        result: Dict[int, int] = {}
        for e, (u, v) in enumerate(self.base.edges):
            if e in fixed:
                continue
            mask = self.full & ~everywhere
            if e not in free:
                mask &= ~mask_of(at.get(u, ())) & ~mask_of(at.get(v, ()))
            result[e] = mask
        return result

    def solve_copy(self, fixed: Mapping[int, int], domains: Mapping[int, int]) -> Optional[Dict[int, int]]:
        return self.solve_base(self.palette, fixed, domains)

    def solve_base(self, palette: int, fixed: Mapping[int, int], domains: Mapping[int, int]) -> Optional[Dict[int, int]]:
        if self.solver is None:
            raise ProofStepError("у расширителя нет решателя базы")
        return self.solver(self.base, palette, fixed, domains)

    def fill_matching(
        self, copies: Tuple[Mapping[int, int], Mapping[int, int]], matching: Dict[int, int]
    ) -> Optional[Dict[int, int]]:
        """Неокрашенные рёбра M получают наименьший цвет, отсутствующий у обоих концов."""
        result = dict(matching)
        for v in range(self.n):
            if v in result:
                continue
            seen = self.colors_around(copies[0], v) | self.colors_around(copies[1], v)
            spare = [c for c in range(1, self.palette + 1) if c not in seen]
            if not spare:
                return None
            result[v] = spare[0]
        return result

    def copy_assign(self, copy: int, base_assign: Mapping[int, int]) -> Dict[int, int]:
        edges = self.d.copy_edges[copy - 1]
        return {edges[e]: color for e, color in base_assign.items()}

    def matching_assign(self, matching: Mapping[int, int]) -> Dict[int, int]:
        return {self.d.matching_edges[v]: color for v, color in matching.items()}

    # Matchings
    def component_without(self, v: int, w: int) -> Set[int]:
        """Вершины компоненты графа G - v, содержащей w."""
        seen = {w}
        stack = [w]
        while stack:
            x = stack.pop()
            for y in self.base.adjacency[x]:
                if y != v and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def uncolored_in_both(self, e: int) -> bool:
        return e not in self.copy_fixed[0] and e not in self.copy_fixed[1]

    def matchings_covering(
        self,
        centers: Sequence[int],
        accept: EdgeFilter,
        limit: int,
        optional: bool = False,
    ) -> Iterator[MatchingChoice]:
        """
        Паросочетания базы, где у каждой вершины из centers выбрано
        инцидентное ребро (v, e), допустимое по accept(v, e, w).
        Выбор жадный в каноническом порядке с возвратом; не более limit вариантов.
        """
        chosen: MatchingChoice = []
        covered: Set[int] = set()

        def extend(i: int) -> Iterator[MatchingChoice]:
            if i == len(centers):
                yield list(chosen)
                return
            v = centers[i]
            if v in covered:
                yield from extend(i + 1)
                return
            for e in self.base.incident[v]:
                w = self.base.other_end(e, v)
                if w in covered or not accept(v, e, w):
                    continue
                chosen.append((v, e))
                covered.update((v, w))
                yield from extend(i + 1)
                chosen.pop()
                covered.difference_update((v, w))
            if optional:
                yield from extend(i + 1)

        for count, matching in enumerate(extend(0)):
            if count >= limit:
                return
            yield matching

    # Driver
    def enter(self, label: str, sketched: bool = False, **detail: Any) -> None:
        """Отмечает случай доказательства; sketched - шаг, изложенный без построения."""
        self.case = label
        self.sketched = sketched
        self.trace.add(label, sketched=sketched, **detail)

    def run(self, plan: Plan) -> Tuple[ExtensionOutcome, ExtensionTrace]:
        try:
            for label, strategy in plan:
                try:
                    attempt = strategy()
                    if attempt is None:
                        self.trace.add(f"{label}: не выполнено")
                        continue
                    return self._finish(label, attempt), self.trace
                except ProofStepError as exc:
                    self.trace.add(f"{label}: отклонено", reason=str(exc))
        except BudgetExhausted as exc:
            logger.info("%s: бюджет исчерпан на подзадаче, nodes=%d", self.route, exc.nodes)
            self.trace.add("бюджет исчерпан", nodes=exc.nodes)
            return ExtensionOutcome.unknown(exc.nodes), self.trace
        reason = "ни одна стратегия не дала продолжения"
        if self.case is not None:
            kind = "набросок" if self.sketched else "построение"
            reason = f"{reason} ({kind}: {self.case})"
        return self.fallback(reason)

    def _finish(self, label: str, attempt: ExtensionTrace) -> ExtensionOutcome:
        working: Dict[int, int] = {}
        for step in attempt.steps:
            working.update(step.assign)
        if len(working) != self.d.product.edge_count:
            raise ProofStepError("окрашены не все рёбра")
        perm = self.trace.permutation
        back = perm.inverse() if perm is not None else None
        assignment = working if back is None else {e: back(c) for e, c in working.items()}
        full = PartialEdgeColoring.trusted(self.d.product, self.palette, assignment)
        if not is_valid_extension(full, self.original):
            raise ProofStepError("результат не продолжает предраскраску")
        self.trace.add(label)
        self.trace.steps.extend(attempt.steps)
        self.trace.coloring = full
        return ExtensionOutcome.extended(full)

    def fallback(self, reason: str) -> Tuple[ExtensionOutcome, ExtensionTrace]:
        logger.warning("%s: переход к оракулу, причина: %s", self.route, reason)
        self.trace.fallback = True
        outcome = extend_exhaustive(self.original, self.budget)
        assign: Dict[int, int] = {}
        if outcome.is_extended:
            self.trace.coloring = outcome.coloring
            perm = self.trace.permutation
            assign = dict(outcome.coloring.assignment)
            if perm is not None:
                assign = {e: perm(c) for e, c in assign.items()}
        else:
            logger.error("%s: оракул вернул %s внутри предусловия", self.route, outcome.status.value)
        self.trace.add("оракул", assign=assign, reason=reason, status=outcome.status.value)
        return outcome, self.trace


# Strategies
def copy_and_match(work: PrismWork) -> Optional[ExtensionTrace]:
    """Одна раскраска базы на обе копии, M - наименьший недостающий цвет."""
    merged = dict(work.copy_fixed[0])
    for e, color in work.copy_fixed[1].items():
        if merged.get(e, color) != color:
            return None
        merged[e] = color
    if not proper_on(work.base, merged):
        return None
    base = work.solve_copy(merged, work.domains(merged, at=work.matching_exclusions()))
    if base is None:
        return None
    matching = work.fill_matching((base, base), dict(work.matching_fixed))
    if matching is None:
        return None
    attempt = ExtensionTrace(route="copy-and-match")
    attempt.add("копия 1", assign=work.copy_assign(1, base))
    attempt.add("копия 2 по соответствию", assign=work.copy_assign(2, base))
    attempt.add("M: недостающие цвета", assign=work.matching_assign(matching))
    return attempt


def split(work: PrismWork, excluded: Iterable[int]) -> Optional[ExtensionTrace]:
    """Копии раскрашиваются независимо без цветов excluded, затем M."""
    excluded = sorted(set(excluded))
    copies: List[Dict[int, int]] = []
    for i in (0, 1):
        fixed = work.copy_fixed[i]
        solution = work.solve_copy(fixed, work.domains(fixed, exclude=excluded, at=work.matching_exclusions()))
        if solution is None:
            return None
        copies.append(solution)
    matching = work.fill_matching((copies[0], copies[1]), dict(work.matching_fixed))
    if matching is None:
        return None
    attempt = ExtensionTrace(route="split")
    attempt.add("копия 1 без цветов", assign=work.copy_assign(1, copies[0]), excluded=excluded)
    attempt.add("копия 2 без цветов", assign=work.copy_assign(2, copies[1]), excluded=excluded)
    attempt.add("M: недостающие цвета", assign=work.matching_assign(matching))
    return attempt


def reserve(
    work: PrismWork,
    rho: int,
    matchings: Tuple[MatchingChoice, MatchingChoice],
    mirror_from: Optional[int] = None,
) -> Optional[ExtensionTrace]:
    """
    Резервный цвет rho: рёбра копии цвета rho временно освобождаются,
    рёбра паросочетаний M_i получают цвет смежного ребра M, копия
    раскрашивается без rho, после чего эти рёбра перекрашиваются в rho.
    mirror_from - номер копии (0/1), раскраска которой переносится на другую.
    """
    attempt = ExtensionTrace(route="reserve")
    exclusions = work.matching_exclusions()
    results: List[Optional[Dict[int, int]]] = [None, None]
    order = (0, 1) if mirror_from is None else (mirror_from,)

    for i in order:
        held = {e for e, color in work.copy_fixed[i].items() if color == rho}
        fixed = {e: color for e, color in work.copy_fixed[i].items() if color != rho}
        lifted: Dict[int, int] = {}
        for v, e in matchings[i]:
            a = work.matching_fixed.get(v)
            if a is None or a == rho:
                continue
            if e in fixed or lifted.get(e, a) != a:
                return None
            lifted[e] = a
        fixed.update(lifted)
        if not proper_on(work.base, fixed):
            return None
        solution = work.solve_copy(fixed, work.domains(fixed, exclude=(rho,), at=exclusions, free=held))
        if solution is None:
            return None
        attempt.add(
            f"копия {i + 1}: M_{i + 1} в цветах M, без цвета {rho}",
            assign=work.copy_assign(i + 1, solution),
            matching=[list(work.base.edges[e]) for e in lifted],
        )
        recolor = {e: rho for e in held | set(lifted)}
        solution.update(recolor)
        if recolor:
            attempt.add(f"копия {i + 1}: перекраска в {rho}", assign=work.copy_assign(i + 1, recolor))
        results[i] = solution

    if mirror_from is not None:
        source = results[mirror_from]
        other = 1 - mirror_from
        if any(source.get(e) != color for e, color in work.copy_fixed[other].items()):
            return None
        results[other] = dict(source)
        attempt.add(f"копия {other + 1} по соответствию", assign=work.copy_assign(other + 1, source))

    matching = work.fill_matching((results[0], results[1]), dict(work.matching_fixed))
    if matching is None:
        return None
    attempt.add("M: недостающие цвета", assign=work.matching_assign(matching))
    return attempt


def reserve_dangling(work: PrismWork, chosen: MatchingChoice, c: int) -> Optional[ExtensionTrace]:
    """
    Рёбра chosen в обеих копиях получают резервный цвет, свободные концы
    этих рёбер получают на M фиксированный цвет c, остальные неокрашенные
    рёбра M - резервный цвет; копии раскрашиваются без резервного цвета.
    """
    r = work.reserved
    dangling = {work.base.other_end(e, v) for v, e in chosen}
    edges = {e for _, e in chosen}
    x: Dict[int, int] = {}
    for v in range(work.n):
        if v in work.matching_fixed:
            x[v] = work.matching_fixed[v]
        else:
            x[v] = c if v in dangling else r
    at = {v: {color} for v, color in x.items()}

    attempt = ExtensionTrace(route="reserve-dangling")
    attempt.add(
        "паросочетания M1/M2 и фиксированный цвет",
        matching=[list(work.base.edges[e]) for e in sorted(edges)],
        color=c,
    )
    copies: List[Dict[int, int]] = []
    for i in (0, 1):
        fixed = dict(work.copy_fixed[i])
        if edges & set(fixed):
            return None
        fixed.update({e: r for e in edges})
        solution = work.solve_copy(fixed, work.domains(fixed, exclude=(r,), at=at))
        if solution is None:
            return None
        attempt.add(f"копия {i + 1}", assign=work.copy_assign(i + 1, solution))
        copies.append(solution)
    attempt.add("M: c на висячих рёбрах, иначе резервный цвет", assign=work.matching_assign(x))
    return attempt


def recolor_classes(work: PrismWork, rho: int, mirror_from: Optional[int] = None) -> Optional[ExtensionTrace]:
    """
    Копии раскрашиваются без rho; ребро копии у окрашенного ребра M того
    же цвета перекрашивается в rho (эти рёбра должны образовать паросочетание).
    """
    attempt = ExtensionTrace(route="recolor-classes")
    results: List[Optional[Dict[int, int]]] = [None, None]
    order = (0, 1) if mirror_from is None else (mirror_from,)
    for i in order:
        fixed = work.copy_fixed[i]
        solution = work.solve_copy(fixed, work.domains(fixed, exclude=(rho,)))
        if solution is None:
            return None
        attempt.add(f"копия {i + 1} без цвета {rho}", assign=work.copy_assign(i + 1, solution))
        recolor: Dict[int, int] = {}
        touched: Set[int] = set()
        for v, a in work.matching_fixed.items():
            for e in work.base.incident[v]:
                if solution.get(e) == a:
                    if e in fixed:
                        return None
                    recolor[e] = rho
        for e in recolor:
            u, w = work.base.edges[e]
            if u in touched or w in touched:
                return None
            touched.update((u, w))
        solution.update(recolor)
        attempt.add(f"копия {i + 1}: класс M_c в цвет {rho}", assign=work.copy_assign(i + 1, recolor))
        results[i] = solution

    if mirror_from is not None:
        source = results[mirror_from]
        other = 1 - mirror_from
        if any(source.get(e) != color for e, color in work.copy_fixed[other].items()):
            return None
        results[other] = dict(source)
        attempt.add(f"копия {other + 1} по соответствию", assign=work.copy_assign(other + 1, source))

    matching = work.fill_matching((results[0], results[1]), dict(work.matching_fixed))
    if matching is None:
        return None
    attempt.add("M: недостающие цвета", assign=work.matching_assign(matching))
    return attempt




def _placeholder_solve(
    work: PrismWork,
    kept: Sequence[Mapping[int, int]],
    exclude: Sequence[int],
    at: Mapping[int, Set[int]],
    free: Set[int],
) -> Optional[Tuple[Dict[int, int], Dict[int, Tuple[int, int]]]]:
    """
    Одна раскраска базы для обеих копий. Рёбра, окрашенные в копиях
    по-разному, получают на время решения собственный цвет вне палитры,
    а смежные с ними рёбра избегают обоих цветов копий.
    """
    merged: Dict[int, int] = {}
    differ: Dict[int, Tuple[int, int]] = {}
    for e in sorted(set(kept[0]) | set(kept[1])):
        a, b = kept[0].get(e), kept[1].get(e)
        if a is not None and b is not None and a != b:
            differ[e] = (a, b)
        else:
            merged[e] = a if a is not None else b
    for i in (0, 1):
        view = dict(merged)
        view.update({e: pair[i] for e, pair in differ.items()})
        if not proper_on(work.base, view):
            return None
    fixed = dict(merged)
    for k, e in enumerate(differ):
        fixed[e] = work.palette + k + 1
    domains = work.domains(fixed, exclude=exclude, at=at, free=free)
    for e, pair in differ.items():
        for f in work.base.edge_neighbors[e]:
            if f in domains:
                domains[f] &= ~mask_of(pair)
    solution = work.solve_base(work.palette + len(differ), fixed, domains)
    if solution is None:
        return None
    return solution, differ


def construct(
    work: PrismWork,
    label: str,
    *,
    exclude: Iterable[int] = (),
    release: Iterable[int] = (),
    extra: Sequence[Mapping[int, int]] = ({}, {}),
    recolor: Sequence[Mapping[int, int]] = ({}, {}),
    shared: bool = True,
) -> Optional[ExtensionTrace]:
    """
    Шаг доказательства в общем виде.

    Рёбра копий с цветами release временно освобождаются и после раскраски
    получают свой цвет обратно; extra[i] - цвета, которые доказательство
    назначает неокрашенным рёбрам копии i; свободные рёбра раскрашиваются
    решателем базы без цветов exclude и без цвета окрашенного ребра M
    в его концах; затем рёбра recolor[i] перекрашиваются.
    shared=True - одна раскраска базы на обе копии (пустая копия повторяет
    другую целиком), иначе копии раскрашиваются независимо.
    Неокрашенные рёбра M получают наименьший недостающий цвет.
    """
    exclude = sorted(set(exclude))
    release = set(release)
    at = work.matching_exclusions()
    kept: List[Dict[int, int]] = []
    restored: List[Dict[int, int]] = []
    for i in (0, 1):
        fixed: Dict[int, int] = {}
        back: Dict[int, int] = {}
        for e, color in work.copy_fixed[i].items():
            (back if color in release else fixed)[e] = color
        for e, color in extra[i].items():
            if e in back or fixed.get(e, color) != color:
                return None
            fixed[e] = color
        if not proper_on(work.base, fixed):
            return None
        kept.append(fixed)
        restored.append(back)

    attempt = ExtensionTrace(route="construct")
    attempt.add(
        label,
        exclude=exclude,
        release=sorted(release),
        extra=[{str(list(work.base.edges[e])): c for e, c in sorted(extra[i].items())} for i in (0, 1)],
    )
    finals: List[Dict[int, int]] = []
    if shared:
        solved = _placeholder_solve(work, kept, exclude, at, set(restored[0]) & set(restored[1]))
        if solved is None:
            return None
        base, differ = solved
        for i in (0, 1):
            final = dict(base)
            final.update({e: pair[i] for e, pair in differ.items()})
            final.update(restored[i])
            final.update(recolor[i])
            finals.append(final)
        empty = [not work.copy_fixed[i] and not extra[i] for i in (0, 1)]
        if empty[0] != empty[1]:
            source = 0 if empty[1] else 1
            finals[1 - source] = dict(finals[source])
    else:
        for i in (0, 1):
            solution = work.solve_copy(kept[i], work.domains(kept[i], exclude=exclude, at=at, free=restored[i]))
            if solution is None:
                return None
            solution.update(restored[i])
            solution.update(recolor[i])
            finals.append(solution)

    for i in (0, 1):
        attempt.add(f"копия {i + 1}", assign=work.copy_assign(i + 1, finals[i]))
    matching = work.fill_matching((finals[0], finals[1]), dict(work.matching_fixed))
    if matching is None:
        return None
    attempt.add("M: недостающие цвета", assign=work.matching_assign(matching))
    return attempt


def good_edge(work: PrismWork, copies: Sequence[int]) -> EdgeFilter:
    """
    Ребро vw годится для M_i: не окрашено ни в одной копии, у w нет ребра M
    другого цвета и нет ребра копии цвета a_v.
    """

    def accept(v: int, e: int, w: int) -> bool:
        a = work.matching_fixed[v]
        if not work.uncolored_in_both(e):
            return False
        if work.matching_fixed.get(w, a) != a:
            return False
        return all(a not in work.colors_around(work.copy_fixed[i], w) for i in copies)

    return accept
