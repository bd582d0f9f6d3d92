"""
Точный перебор с возвратом для задачи продолжения раскраски рёбер.

Переменная - неокрашенное ребро с наименьшим числом доступных цветов
(при равенстве - меньший EdgeId), значения - цвета по возрастанию,
после каждого присваивания выполняется forward checking.
Доступные цвета хранятся битовыми масками: бит c-1 - цвет c.
"""

import logging
import random
import time
from itertools import combinations, product
from math import comb
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Tuple

from prismext.config import EXHAUSTIVE_CAP, SAMPLE_ATTEMPT_FACTOR, TIME_CHECK_INTERVAL
from prismext.exceptions import BudgetExhausted, ColoringFormatError, PreconditionError
from prismext.models.coloring import PartialEdgeColoring
from prismext.models.graph import Graph
from prismext.models.outcome import ExtensionOutcome, OutcomeStatus, SearchBudget
from prismext.models.report import EnumerationKind, EnumerationMode
from prismext.services.coloring_core import find_conflict, is_independent

logger = logging.getLogger(__name__)

PrecoloringFilter = Callable[[PartialEdgeColoring], bool]


class _Search:
    def __init__(
        self,
        graph: Graph,
        palette: int,
        fixed: Mapping[int, int],
        domains: Optional[Mapping[int, int]],
        budget: Optional[SearchBudget],
    ) -> None:
        self.graph = graph
        self.neighbors = graph.edge_neighbors
        self.m = graph.edge_count
        self.full = (1 << palette) - 1
        self.color: List[int] = [0] * self.m
        self.avail: List[int] = [0] * self.m
        self.fixed = fixed
        self.domains = domains or {}
        self.nodes = 0
        budget = budget or SearchBudget.unlimited()
        self.max_nodes = budget.max_nodes
        self.deadline = None if budget.time_limit is None else time.monotonic() + budget.time_limit
        self.solution: Optional[Dict[int, int]] = None
        self.count = 0
        self.cap: Optional[int] = None

    def _prepare(self) -> bool:
        for e, c in self.fixed.items():
            self.color[e] = c
        for e in range(self.m):
            if self.color[e]:
                continue
            taken = 0
            for f in self.neighbors[e]:
                if self.color[f]:
                    taken |= 1 << (self.color[f] - 1)
            self.avail[e] = self.domains.get(e, self.full) & self.full & ~taken
            if not self.avail[e]:
                return False
        return True

    def _tick(self) -> None:
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExhausted(self.nodes)
        if self.deadline is not None and self.nodes % TIME_CHECK_INTERVAL == 0:
            if time.monotonic() > self.deadline:
                raise BudgetExhausted(self.nodes)

    def _pick(self) -> int:
        best, best_size = -1, 1 << 30
        for e in range(self.m):
            if self.color[e]:
                continue
            size = self.avail[e].bit_count()
            if size < best_size:
                best, best_size = e, size
                if size <= 1:
                    break
        return best

    def _leaf(self) -> bool:
        if self.cap is None:
            self.solution = {e: self.color[e] for e in range(self.m)}
            return True
        self.count += 1
        return self.count >= self.cap

    def _dfs(self) -> bool:
        e = self._pick()
        if e < 0:
            return self._leaf()
        options = self.avail[e]
        while options:
            bit = options & -options
            options ^= bit
            self._tick()
            self.color[e] = bit.bit_length()
            touched = []
            wiped = False
            for f in self.neighbors[e]:
                if not self.color[f] and self.avail[f] & bit:
                    self.avail[f] ^= bit
                    touched.append(f)
                    if not self.avail[f]:
                        wiped = True
                        break
            if not wiped and self._dfs():
                return True
            for f in touched:
                self.avail[f] |= bit
            self.color[e] = 0
        return False

    def run(self) -> bool:
        return self._prepare() and self._dfs()


def _check_proper(c: PartialEdgeColoring) -> None:
    conflict = find_conflict(c)
    if conflict is not None:
        v, color = conflict
        raise ColoringFormatError(f"раскраска неправильная: цвет {color} повторяется в вершине {v}")


def solve_with_domains(
    graph: Graph,
    palette: int,
    fixed: Mapping[int, int],
    domains: Optional[Mapping[int, int]] = None,
    budget: Optional[SearchBudget] = None,
) -> Tuple[Optional[Dict[int, int]], int]:
    """
    Перебор с ограничениями на цвета рёбер (domains: EdgeId -> битовая маска).
    Возвращает (раскраска | None, число узлов); BudgetExhausted пробрасывается.
    """
    search = _Search(graph, palette, fixed, domains, budget)
    search.run()
    return search.solution, search.nodes


def mask_of(colors) -> int:
    mask = 0
    for c in colors:
        mask |= 1 << (c - 1)
    return mask


def extend_exhaustive(c: PartialEdgeColoring, budget: Optional[SearchBudget] = None) -> ExtensionOutcome:
    _check_proper(c)
    search = _Search(c.graph, c.palette, c.assignment, None, budget)
    try:
        found = search.run()
    except BudgetExhausted as exc:
        logger.info("Оракул: бюджет исчерпан, nodes=%d, edges=%d", exc.nodes, c.graph.edge_count)
        return ExtensionOutcome.unknown(exc.nodes)
    if not found:
        return ExtensionOutcome.not_extendable(search.nodes)
    coloring = PartialEdgeColoring.trusted(c.graph, c.palette, search.solution)
    return ExtensionOutcome.extended(coloring, search.nodes)


def count_extensions(c: PartialEdgeColoring, cap: int, budget: Optional[SearchBudget] = None) -> int:
    """Число полных правильных продолжений, насыщается на cap."""
    if cap <= 0:
        return 0
    _check_proper(c)
    search = _Search(c.graph, c.palette, c.assignment, None, budget)
    search.cap = cap
    search.run()
    return min(search.count, cap)


# Enumeration
def instance_space_size(m: int, t: int, k: int) -> int:
    return comb(m, k) * t**k


def _unrank_combination(m: int, k: int, rank: int) -> List[int]:
    result: List[int] = []
    x = 0
    for i in range(k):
        while True:
            block = comb(m - x - 1, k - i - 1)
            if rank < block:
                result.append(x)
                x += 1
                break
            rank -= block
            x += 1
    return result


def _unrank_colors(t: int, k: int, rank: int) -> List[int]:
    digits = []
    for _ in range(k):
        digits.append(rank % t + 1)
        rank //= t
    digits.reverse()
    return digits


def _adjacent_positions(g: Graph, subset: Tuple[int, ...]) -> List[Tuple[int, int]]:
    return [
        (i, j)
        for i, j in combinations(range(len(subset)), 2)
        if subset[j] in g.edge_neighbors[subset[i]]
    ]


def indexed_precolorings(
    g: Graph,
    t: int,
    k: int,
    mode: Optional[EnumerationMode] = None,
    keep: Optional[PrecoloringFilter] = None,
) -> Iterator[Tuple[int, PartialEdgeColoring]]:
    """
    Пары (номер, раскраска). В полном режиме номер - индекс в каноническом
    порядке (подмножества рёбер лексикографически, затем наборы цветов),
    в режиме выборки - порядковый номер выдачи.
    """
    mode = mode or EnumerationMode.exhaustive()
    m = g.edge_count
    if k < 0 or k > m:
        raise PreconditionError(f"k = {k} вне диапазона 0..{m}")
    if t < 1:
        raise PreconditionError(f"палитра {t} < 1")

    space = instance_space_size(m, t, k)
    block = t**k

    if mode.kind is EnumerationKind.EXHAUSTIVE:
        if space > EXHAUSTIVE_CAP and not mode.force:
            raise PreconditionError(
                f"пространство {space} кандидатов больше лимита {EXHAUSTIVE_CAP}; используйте выборку или force"
            )
        for subset_rank, subset in enumerate(combinations(range(m), k)):
            clashes = _adjacent_positions(g, subset)
            for color_rank, colors in enumerate(product(range(1, t + 1), repeat=k)):
                if any(colors[i] == colors[j] for i, j in clashes):
                    continue
                c = PartialEdgeColoring.trusted(g, t, dict(zip(subset, colors)))
                if keep is None or keep(c):
                    yield subset_rank * block + color_rank, c
        return

    rng = random.Random(mode.seed)
    emitted = attempts = 0
    limit = mode.count * SAMPLE_ATTEMPT_FACTOR
    while emitted < mode.count and attempts < limit:
        attempts += 1
        index = rng.randrange(space)
        subset = tuple(_unrank_combination(m, k, index // block))
        colors = _unrank_colors(t, k, index % block)
        if any(colors[i] == colors[j] for i, j in _adjacent_positions(g, subset)):
            continue
        c = PartialEdgeColoring.trusted(g, t, dict(zip(subset, colors)))
        if keep is not None and not keep(c):
            continue
        yield emitted, c
        emitted += 1
    if emitted < mode.count:
        logger.warning(
            "Выборка: получено %d из %d раскрасок за %d попыток (m=%d, t=%d, k=%d)",
            emitted, mode.count, attempts, m, t, k,
        )


def enumerate_precolorings(
    g: Graph,
    t: int,
    k: int,
    mode: Optional[EnumerationMode] = None,
    keep: Optional[PrecoloringFilter] = None,
) -> Iterator[PartialEdgeColoring]:
    for _, c in indexed_precolorings(g, t, k, mode, keep):
        yield c


def hypothesis_holds(
    g: Graph,
    k: int,
    palette: int,
    independent_only: bool = False,
    budget: Optional[SearchBudget] = None,
    force: bool = False,
) -> Optional[bool]:
    """
    Каждая правильная предраскраска не более k рёбер (при independent_only -
    только независимых) продолжается до palette-раскраски.
    None - какой-то перебор упёрся в бюджет. Уровень больше EXHAUSTIVE_CAP
    без force даёт PreconditionError.
    """
    keep = is_independent if independent_only else None
    inconclusive = False
    mode = EnumerationMode.exhaustive(force=force)
    for j in range(min(k, g.edge_count) + 1):
        for c in enumerate_precolorings(g, palette, j, mode, keep):
            outcome = extend_exhaustive(c, budget)
            if outcome.status is OutcomeStatus.NOT_EXTENDABLE:
                return False
            if outcome.status is OutcomeStatus.UNKNOWN:
                inconclusive = True
    return None if inconclusive else True
