from collections import Counter
from typing import Dict, Iterable, Optional

from prismext.models.coloring import PartialEdgeColoring
from prismext.models.graph import PrismDecomposition
from prismext.models.outcome import ExtensionOutcome, ExtensionTrace
from prismext.services.coloring_core import is_valid_extension


def prism_coloring(
    d: PrismDecomposition,
    palette: int,
    copy1: Optional[Dict[int, int]] = None,
    copy2: Optional[Dict[int, int]] = None,
    matching: Optional[Dict[int, int]] = None,
) -> PartialEdgeColoring:
    """Раскраска призмы по базовым рёбрам копий и базовым вершинам M."""
    assignment: Dict[int, int] = {}
    for e, color in (copy1 or {}).items():
        assignment[d.copy_edges[0][e]] = color
    for e, color in (copy2 or {}).items():
        assignment[d.copy_edges[1][e]] = color
    for v, color in (matching or {}).items():
        assignment[d.matching_edges[v]] = color
    return PartialEdgeColoring(graph=d.product, palette=palette, assignment=assignment)


def assert_extends(outcome: ExtensionOutcome, c: PartialEdgeColoring) -> None:
    assert outcome.is_extended, outcome.status
    assert is_valid_extension(outcome.coloring, c)


def fallback_reason(trace: ExtensionTrace) -> Optional[str]:
    """Причина перехода к оракулу, если расширитель к нему переходил."""
    if not trace.fallback:
        return None
    return next(step.detail["reason"] for step in trace.steps if step.label == "оракул")


def fallback_cases(traces: Iterable[ExtensionTrace]) -> Counter:
    """Сколько раз каждый случай доказательства ушёл к оракулу."""
    return Counter(fallback_reason(trace) for trace in traces if trace.fallback)
