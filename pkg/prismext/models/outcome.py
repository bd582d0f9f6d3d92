from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from prismext.models.coloring import ColorPermutation, PartialEdgeColoring


class OutcomeStatus(str, Enum):
    EXTENDED = "extended"
    NOT_EXTENDABLE = "not_extendable"
    UNKNOWN = "unknown"


class SearchBudget(BaseModel):
    """Лимиты перебора; None - без ограничения."""

    model_config = ConfigDict(frozen=True)

    max_nodes: Optional[int] = Field(None, ge=0, description="Максимум узлов перебора")
    time_limit: Optional[float] = Field(None, ge=0, description="Лимит времени, секунды")

    @classmethod
    def unlimited(cls) -> "SearchBudget":
        return cls()


class ExtensionOutcome(BaseModel):
    """Extended(полная раскраска) | NotExtendable | Unknown(исчерпан бюджет)."""

    status: OutcomeStatus
    coloring: Optional[PartialEdgeColoring] = None
    nodes: int = Field(0, ge=0, description="Развёрнуто узлов перебора")

    @model_validator(mode="after")
    def _payload_matches_status(self) -> "ExtensionOutcome":
        if self.status is OutcomeStatus.EXTENDED and self.coloring is None:
            raise ValueError("Extended требует раскраску")
        if self.status is not OutcomeStatus.EXTENDED and self.coloring is not None:
            raise ValueError("раскраска допустима только для Extended")
        return self

    @classmethod
    def extended(cls, coloring: PartialEdgeColoring, nodes: int = 0) -> "ExtensionOutcome":
        return cls(status=OutcomeStatus.EXTENDED, coloring=coloring, nodes=nodes)

    @classmethod
    def not_extendable(cls, nodes: int = 0) -> "ExtensionOutcome":
        return cls(status=OutcomeStatus.NOT_EXTENDABLE, nodes=nodes)

    @classmethod
    def unknown(cls, nodes: int) -> "ExtensionOutcome":
        return cls(status=OutcomeStatus.UNKNOWN, nodes=nodes)

    @property
    def is_extended(self) -> bool:
        return self.status is OutcomeStatus.EXTENDED


class TraceStep(BaseModel):
    label: str
    detail: Dict[str, Any] = Field(default_factory=dict)
    assign: Dict[int, int] = Field(default_factory=dict, description="Записи цветов этого шага (рабочие цвета)")


class ExtensionTrace(BaseModel):
    """
    Протокол работы расширителя: маршрут, метки случаев, выбранные
    паросочетания и цвета. Шаги хранят записи цветов в рабочей
    (нормализованной) палитре; replay() восстанавливает итоговую раскраску.
    """

    route: str
    steps: List[TraceStep] = Field(default_factory=list)
    fallback: bool = False
    permutation: Optional[ColorPermutation] = None
    coloring: Optional[PartialEdgeColoring] = None

    def add(self, label: str, assign: Optional[Dict[int, int]] = None, **detail: Any) -> None:
        self.steps.append(TraceStep(label=label, detail=detail, assign=dict(assign or {})))

    @property
    def labels(self) -> List[str]:
        return [step.label for step in self.steps]

    def replay(self) -> Dict[int, int]:
        working: Dict[int, int] = {}
        for step in self.steps:
            working.update(step.assign)
        if self.permutation is None:
            return working
        back = self.permutation.inverse()
        return {e: back(c) for e, c in working.items()}


class EdgeClass(str, Enum):
    CLASS1 = "Class1"
    CLASS2 = "Class2"
    UNKNOWN = "Unknown"


class ChromaticIndexResult(BaseModel):
    edge_class: EdgeClass
    max_degree: int
    index: Optional[int] = None
    witness: Optional[PartialEdgeColoring] = None
