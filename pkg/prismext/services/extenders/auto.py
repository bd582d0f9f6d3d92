"""
Выбор расширителя по виду графа.

Призма распознаётся только в документированной нумерации (база на
вершинах 0..n-1). Семейство базы определяется точным совпадением с
построителем, поэтому изоморфные, но иначе пронумерованные базы уходят
к оракулу.
"""

import logging
from typing import Callable, Dict, Optional, Tuple

from prismext.exceptions import PreconditionError
from prismext.models.coloring import PartialEdgeColoring
from prismext.models.graph import Graph, PrismDecomposition
from prismext.models.outcome import ExtensionOutcome, ExtensionTrace, SearchBudget
from prismext.services.coloring_core import is_independent
from prismext.services.extenders.complete import complete_prism_bound, extend_complete_prism
from prismext.services.extenders.cycles import extend_even_cycle_prism, extend_odd_cycle_prism
from prismext.services.extenders.knn import extend_knn_prism
from prismext.services.extenders.regular import BaseExtender, extend_regular_independent_prism
from prismext.services.extenders.subcubic import extend_subcubic_class1_prism
from prismext.services.extenders.tree import extend_tree_prism
from prismext.services.graph_core import (
    build_complete,
    build_complete_bipartite,
    build_cycle,
    is_regular,
    is_tree,
    recognize_prism,
)
from prismext.services.oracle import extend_exhaustive

logger = logging.getLogger(__name__)

Extender = Callable[..., Tuple[ExtensionOutcome, ExtensionTrace]]
METHODS = ("auto", "tree", "knn", "complete", "cycle", "regular", "subcubic", "oracle")


def extend_oracle(g: Graph, c: PartialEdgeColoring, budget: Optional[SearchBudget] = None):
    trace = ExtensionTrace(route="oracle")
    outcome = extend_exhaustive(c, budget)
    trace.add("полный перебор", status=outcome.status.value, nodes=outcome.nodes)
    if outcome.is_extended:
        trace.steps[-1].assign = dict(outcome.coloring.assignment)
        trace.coloring = outcome.coloring
    return outcome, trace


def _route(d: PrismDecomposition, c: PartialEdgeColoring) -> Optional[Tuple[str, Extender, tuple]]:
    """(маршрут, функция, аргументы) или None, если подходящего расширителя нет."""
    base = d.base
    n = base.vertex_count
    count = c.colored_count
    if base.edge_count == 0:
        return None

    if is_tree(base) and c.palette == base.max_degree + 1 and count <= base.max_degree:
        return "tree", extend_tree_prism, (base,)

    if n >= 3 and base == build_cycle(n):
        if n % 2 == 0 and c.palette == 3 and count <= 2:
            return "even-cycle", extend_even_cycle_prism, (n // 2,)
        if n % 2 == 1 and c.palette == 4 and count <= 3:
            return "odd-cycle", extend_odd_cycle_prism, ((n - 1) // 2,)

    if n % 2 == 0 and n >= 4 and base == build_complete_bipartite(n // 2, n // 2):
        half = n // 2
        if c.palette == half + 1 and count <= half:
            return "knn", extend_knn_prism, (half,)

    if n >= 4 and base == build_complete(n):
        palette = n if n % 2 == 0 else n + 1
        if c.palette == palette and count <= complete_prism_bound(n):
            return "complete", extend_complete_prism, (n,)

    # для остальных классов нужна проверка гипотезы перебором, это делает сам расширитель
    if is_regular(base) and is_independent(c) and count >= 1:
        return "regular", _regular, (base,)

    if base.max_degree == 3 and c.palette == 4 and count <= 3:
        return "subcubic", extend_subcubic_class1_prism, (base,)
    return None


def _regular(g: Graph, c: PartialEdgeColoring, budget: Optional[SearchBudget] = None):
    return extend_regular_independent_prism(g, c, BaseExtender.oracle(c.colored_count - 1, budget), budget)


def extend_auto(
    g: Graph, c: PartialEdgeColoring, budget: Optional[SearchBudget] = None
) -> Tuple[ExtensionOutcome, ExtensionTrace]:
    d = recognize_prism(g)
    route = _route(d, c) if d is not None else None
    if route is None:
        logger.info("auto: подходящий расширитель не найден, оракул")
        return extend_oracle(g, c, budget)

    name, extender, args = route
    try:
        outcome, trace = extender(*args, c, budget)
    except PreconditionError as exc:
        logger.info("auto: %s отклонил вход (%s), оракул", name, exc)
        outcome, trace = extend_oracle(g, c, budget)
        trace.add(f"маршрут {name} отклонён", reason=str(exc))
        return outcome, trace
    logger.info("auto: маршрут %s", name)
    return outcome, trace


def run_method(
    method: str,
    g: Graph,
    c: PartialEdgeColoring,
    budget: Optional[SearchBudget] = None,
    base: Optional[BaseExtender] = None,
) -> Tuple[ExtensionOutcome, ExtensionTrace]:
    """Запуск расширителя по имени метода CLI; граф должен быть призмой, кроме auto и oracle."""
    if method not in METHODS:
        raise PreconditionError(f"неизвестный метод {method}")
    if method == "auto":
        return extend_auto(g, c, budget)
    if method == "oracle":
        return extend_oracle(g, c, budget)

    d = recognize_prism(g)
    if d is None:
        raise PreconditionError("граф не является призмой в документированной нумерации")
    b = d.base
    n = b.vertex_count
    dispatch: Dict[str, Callable[[], Tuple[ExtensionOutcome, ExtensionTrace]]] = {
        "tree": lambda: extend_tree_prism(b, c, budget),
        "knn": lambda: _knn(b, c, budget),
        "complete": lambda: _complete(b, c, budget),
        "cycle": lambda: _cycle(b, c, budget),
        "regular": lambda: extend_regular_independent_prism(
            b, c, base or BaseExtender.oracle(max(c.colored_count - 1, 0), budget), budget
        ),
        "subcubic": lambda: extend_subcubic_class1_prism(b, c, budget),
    }
    logger.debug("run_method: %s, база на %d вершинах", method, n)
    return dispatch[method]()


def _knn(b: Graph, c: PartialEdgeColoring, budget: Optional[SearchBudget]):
    n = b.vertex_count
    if n % 2 or b != build_complete_bipartite(n // 2, n // 2):
        raise PreconditionError("база не является K_n,n")
    return extend_knn_prism(n // 2, c, budget)


def _complete(b: Graph, c: PartialEdgeColoring, budget: Optional[SearchBudget]):
    if b != build_complete(b.vertex_count):
        raise PreconditionError("база не является полным графом")
    return extend_complete_prism(b.vertex_count, c, budget)


def _cycle(b: Graph, c: PartialEdgeColoring, budget: Optional[SearchBudget]):
    n = b.vertex_count
    if n < 3 or b != build_cycle(n):
        raise PreconditionError("база не является циклом")
    if n % 2 == 0:
        return extend_even_cycle_prism(n // 2, c, budget)
    return extend_odd_cycle_prism((n - 1) // 2, c, budget)
