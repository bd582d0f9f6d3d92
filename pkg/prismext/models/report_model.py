from datetime import datetime
from typing import Optional

from sqlalchemy import Column, DateTime, Text
from sqlmodel import Field, SQLModel

from prismext.models.report import VerificationReport


class HuntReport(SQLModel, table=True):
    """Отчёт поиска контрпримеров; полный VerificationReport хранится в payload."""

    id: Optional[int] = Field(default=None, primary_key=True)
    run_id: str = Field(index=True)
    family: str
    graph: str
    k: int
    palette: int
    verdict: str = Field(index=True)
    total: int = 0
    payload: str = Field(sa_column=Column(Text, nullable=False))
    created_at: datetime = Field(
        default_factory=datetime.utcnow,
        sa_column=Column(DateTime, nullable=False, default=datetime.utcnow),
    )

    @classmethod
    def from_report(cls, run_id: str, family: str, report: VerificationReport) -> "HuntReport":
        return cls(
            run_id=run_id,
            family=family,
            graph=report.graph,
            k=report.k,
            palette=report.palette,
            verdict=report.verdict.value,
            total=report.total,
            payload=report.model_dump_json(),
        )

    def report(self) -> VerificationReport:
        return VerificationReport.model_validate_json(self.payload)
