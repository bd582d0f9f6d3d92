import logging
from typing import Optional

from prismext.exceptions import GraphMismatchError, PreconditionError, ProofStepError
from prismext.models.coloring import PartialEdgeColoring
from prismext.models.graph import Graph
from prismext.models.outcome import ExtensionOutcome, OutcomeStatus, SearchBudget
from prismext.services.characterizations import tree_condition
from prismext.services.coloring_core import find_conflict, is_valid_extension
from prismext.services.graph_core import is_forest
from prismext.services.oracle import extend_exhaustive

logger = logging.getLogger(__name__)


def extend_forest(f: Graph, c: PartialEdgeColoring, budget: Optional[SearchBudget] = None) -> ExtensionOutcome:
    """
    Продолжение Δ-раскраски леса: не более Δ-1 окрашенных рёбер,
    либо ровно Δ при невыполненных условиях (C1)-(C4).
    """
    if not is_forest(f):
        raise PreconditionError("граф не является лесом")
    if c.graph != f:
        raise GraphMismatchError("раскраска задана не на этом лесе")
    delta = f.max_degree
    if c.palette != delta:
        raise PreconditionError(f"палитра {c.palette}, требуется Δ = {delta}")
    if find_conflict(c) is not None:
        raise PreconditionError("раскраска неправильная")
    if c.colored_count > delta:
        raise PreconditionError(f"окрашено {c.colored_count} рёбер, допускается не более {delta}")
    if c.colored_count == delta and delta >= 2:
        report = tree_condition(f, c)
        if report.fired:
            raise PreconditionError(f"выполнено условие {report.condition.value}", witness=report.witness)

    outcome = extend_exhaustive(c, budget)
    if outcome.status is OutcomeStatus.NOT_EXTENDABLE:
        raise ProofStepError("лес в пределах предусловия оказался нерасширяемым")
    if outcome.is_extended and not is_valid_extension(outcome.coloring, c):
        raise ProofStepError("оракул вернул некорректное продолжение")
    return outcome
