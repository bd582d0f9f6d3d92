from datetime import datetime
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from prismext.models.outcome import ExtensionTrace, SearchBudget
from prismext.models.report import ConditionReport, VerificationReport
from prismext.services.formats import ColoringPayload, GraphPayload


# Requests
class BudgetIn(BaseModel):
    """Лимиты перебора в запросе."""

    budget_nodes: Optional[int] = Field(None, ge=0, description="Максимум узлов перебора")
    time_limit: Optional[float] = Field(None, ge=0, description="Лимит времени, секунды")

    def budget(self) -> Optional[SearchBudget]:
        if self.budget_nodes is None and self.time_limit is None:
            return None
        return SearchBudget(max_nodes=self.budget_nodes, time_limit=self.time_limit)


class ChiRequest(BudgetIn):
    graph: GraphPayload


class ColoringRequest(BudgetIn):
    """Граф и частичная раскраска на нём."""

    graph: GraphPayload
    coloring: ColoringPayload


class ExtendRequest(ColoringRequest):
    method: str = Field("auto", description="auto, tree, knn, complete, cycle, regular, subcubic, oracle")

    @field_validator("method")
    @classmethod
    def validate_method(cls, v: str) -> str:
        v = v.strip().lower()
        if not v:
            raise ValueError("method не должен быть пустым")
        return v


class HuntRequest(BaseModel):
    """Параметры фонового поиска контрпримеров."""

    family: str = Field(..., description="trees, cycles, complete, complete_bipartite, hypercubes, random_regular")
    max_size: int = Field(..., ge=1, le=64, description="Наибольший размер в семействе")
    k: Optional[List[int]] = Field(None, description="Значения k (по умолчанию Δ-1)")
    sample: Optional[int] = Field(None, ge=1, description="Объём выборки; None - полный перебор")
    seed: int = Field(42, description="Зерно выборки и случайных графов")
    count: int = Field(10, ge=1, description="Число случайных графов")
    degree: int = Field(3, ge=1, description="Степень случайных регулярных графов")
    budget_nodes: Optional[int] = Field(None, ge=0)

    @field_validator("family")
    @classmethod
    def validate_family(cls, v: str) -> str:
        v = v.strip()
        if v == "from_file":
            raise ValueError("семейство from_file доступно только из CLI")
        return v


# Responses
class ChiResponse(BaseModel):
    edge_class: str
    max_degree: int
    index: Optional[int] = None


class ExtendResponse(BaseModel):
    status: str
    nodes: int = 0
    coloring: Optional[ColoringPayload] = None
    trace: Optional[ExtensionTrace] = None


class CheckResponse(ConditionReport):
    pass


class HuntStarted(BaseModel):
    run_id: str
    family: str


class HuntReportOut(BaseModel):
    """Schema ответа сохранённого отчёта."""

    id: int
    run_id: str
    family: str
    graph: str
    k: int
    palette: int
    verdict: str
    total: int
    created_at: datetime

    model_config = ConfigDict(from_attributes=True)


class HuntReportDetail(HuntReportOut):
    report: VerificationReport


def error_detail(exc: Exception, witness: Optional[Any] = None) -> Dict[str, Any]:
    detail: Dict[str, Any] = {"message": str(exc), "type": type(exc).__name__}
    if witness is not None:
        detail["witness"] = witness
    return detail
