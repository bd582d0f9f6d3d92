import json
import logging
from typing import List, NoReturn, Optional

from fastapi import APIRouter, Depends, HTTPException, Request, WebSocket, WebSocketDisconnect
from sqlalchemy import select
from sqlalchemy.ext.asyncio import AsyncSession
from starlette import status

from prismext.db.database import get_db
from prismext.exceptions import GraphMismatchError, PreconditionError, PrismExtError
from prismext.models.coloring import PartialEdgeColoring
from prismext.models.graph import Graph
from prismext.models.pydantic_api_dto import (
    CheckResponse,
    ChiRequest,
    ChiResponse,
    ColoringRequest,
    ExtendRequest,
    ExtendResponse,
    HuntReportDetail,
    HuntReportOut,
    HuntRequest,
    HuntStarted,
    error_detail,
)
from prismext.models.report_model import HuntReport
from prismext.services.characterizations import detect_condition
from prismext.services.extenders.auto import run_method
from prismext.services.formats import coloring_from_payload, graph_from_payload, write_coloring
from prismext.services.graph_core import chromatic_index
from prismext.services.oracle import extend_exhaustive
from prismext.tasks.hunt_runner import HuntRunner
from prismext.ws.ws_handler import manager

logger = logging.getLogger(__name__)

router = APIRouter()


# Helpers
def _coloring_json(c: PartialEdgeColoring) -> dict:
    return json.loads(write_coloring(c, as_json=True))


def _raise_http(exc: PrismExtError) -> NoReturn:
    """Ошибки пакета -> HTTP: вход не по предусловию 400, некорректные данные 422."""
    if isinstance(exc, PreconditionError):
        witness = _coloring_json(exc.witness) if isinstance(exc.witness, PartialEdgeColoring) else exc.witness
        raise HTTPException(status_code=400, detail=error_detail(exc, witness))
    if isinstance(exc, (ValueError, GraphMismatchError)):
        raise HTTPException(status_code=422, detail=error_detail(exc))
    raise HTTPException(status_code=400, detail=error_detail(exc))


def _parse(body: ColoringRequest) -> PartialEdgeColoring:
    try:
        g: Graph = graph_from_payload(body.graph)
        return coloring_from_payload(body.coloring, g)
    except PrismExtError as exc:
        _raise_http(exc)


async def _get_report_or_404(db: AsyncSession, report_id: int) -> HuntReport:
    row = await db.get(HuntReport, report_id)
    if not row:
        raise HTTPException(status_code=404, detail="Отчёт не найден")
    return row


# Computation endpoints
@router.post("/extend", response_model=ExtendResponse)
def extend(body: ExtendRequest):
    """Продолжить частичную раскраску выбранным методом."""
    c = _parse(body)
    try:
        outcome, trace = run_method(body.method, c.graph, c, body.budget())
    except PrismExtError as exc:
        _raise_http(exc)
    return ExtendResponse(
        status=outcome.status.value,
        nodes=outcome.nodes,
        coloring=_coloring_json(outcome.coloring) if outcome.is_extended else None,
        trace=trace.model_copy(update={"coloring": None}),
    )


@router.post("/oracle", response_model=ExtendResponse)
def oracle(body: ColoringRequest):
    """Полный перебор без расширителей."""
    c = _parse(body)
    outcome = extend_exhaustive(c, body.budget())
    return ExtendResponse(
        status=outcome.status.value,
        nodes=outcome.nodes,
        coloring=_coloring_json(outcome.coloring) if outcome.is_extended else None,
    )


@router.post("/check", response_model=CheckResponse)
def check(body: ColoringRequest):
    """Условие нерасширяемости для леса, K_n,n или полного графа."""
    c = _parse(body)
    try:
        report = detect_condition(c.graph, c)
    except PrismExtError as exc:
        _raise_http(exc)
    return CheckResponse(**report.model_dump())


@router.post("/chi", response_model=ChiResponse)
def chi(body: ChiRequest):
    try:
        g = graph_from_payload(body.graph)
    except PrismExtError as exc:
        _raise_http(exc)
    result = chromatic_index(g, body.budget())
    return ChiResponse(edge_class=result.edge_class.value, max_degree=result.max_degree, index=result.index)


# Reports
@router.get("/reports", response_model=List[HuntReportOut])
async def list_reports(
    run_id: Optional[str] = None,
    verdict: Optional[str] = None,
    db: AsyncSession = Depends(get_db),
):
    """Сохранённые отчёты поиска, с фильтром по запуску и вердикту."""
    query = select(HuntReport).order_by(HuntReport.id)
    if run_id is not None:
        query = query.where(HuntReport.run_id == run_id)
    if verdict is not None:
        query = query.where(HuntReport.verdict == verdict)
    result = await db.execute(query)
    return result.scalars().all()


@router.get("/reports/{report_id}", response_model=HuntReportDetail)
async def retrieve_report(report_id: int, db: AsyncSession = Depends(get_db)):
    row = await _get_report_or_404(db, report_id)
    return HuntReportDetail(**HuntReportOut.model_validate(row).model_dump(), report=row.report())


@router.delete("/reports/{report_id}", status_code=status.HTTP_204_NO_CONTENT)
async def delete_report(report_id: int, db: AsyncSession = Depends(get_db)):
    row = await _get_report_or_404(db, report_id)
    await db.delete(row)
    await db.commit()


# WebSocket
@router.websocket("/ws/hunt")
async def hunt_ws(ws: WebSocket):
    """WebSocket с ходом фоновых поисков."""
    await manager.connect(ws)
    try:
        while True:
            await ws.receive_text()
    except WebSocketDisconnect:
        pass
    except Exception as exc:
        logger.warning("WS error: %s", exc)
    finally:
        manager.disconnect(ws)


# Background tasks
def _runner(request: Request) -> HuntRunner:
    runner: Optional[HuntRunner] = getattr(request.app.state, "hunt_runner", None)
    if runner is None:
        raise HTTPException(500, "Фоновый поиск не запущен")
    return runner


@router.post("/tasks/hunt", response_model=HuntStarted, status_code=status.HTTP_202_ACCEPTED)
async def start_hunt(body: HuntRequest, request: Request):
    """Запустить поиск контрпримеров в фоне."""
    runner = _runner(request)
    try:
        run_id = runner.start(body)
    except PrismExtError as exc:
        _raise_http(exc)
    return HuntStarted(run_id=run_id, family=body.family)


@router.get("/tasks/hunt")
async def running_hunts(request: Request):
    return {"running": _runner(request).running}
