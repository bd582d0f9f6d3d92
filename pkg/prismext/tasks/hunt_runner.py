import asyncio
import logging
import threading
import uuid
from typing import Dict, List, Optional

from prismext.db.database import AsyncSessionLocal
from prismext.exceptions import PreconditionError
from prismext.models.outcome import SearchBudget
from prismext.models.pydantic_api_dto import HuntRequest
from prismext.models.report import EnumerationMode, VerificationReport
from prismext.models.report_model import HuntReport
from prismext.services.harness import FAMILIES, family_graphs, hunt_counterexamples
from prismext.ws.ws_handler import ConnectionManager, manager

logger = logging.getLogger(__name__)


class HuntCancelled(Exception):
    """Поиск остановлен по запросу."""


# Events
async def emit_event(event_type: str, run_id: str, payload: dict, ws: ConnectionManager) -> None:
    try:
        await ws.broadcast({"type": event_type, "run_id": run_id, **payload})
    except Exception:
        logger.warning("WS broadcast failed: run_id=%s", run_id)


# DB
async def save_report(run_id: str, family: str, report: VerificationReport) -> HuntReport:
    async with AsyncSessionLocal() as db:
        row = HuntReport.from_report(run_id, family, report)
        db.add(row)
        await db.commit()
        await db.refresh(row)
        return row


# Runner
class HuntRunner:
    """
    Фоновые поиски контрпримеров. Перебор идёт в потоке исполнителя,
    готовые отчёты передаются в цикл событий через очередь, сохраняются
    в SQLite и рассылаются подписчикам /ws/hunt.
    """

    def __init__(self, ws: ConnectionManager = manager) -> None:
        self.ws = ws
        self._tasks: Dict[str, asyncio.Task] = {}
        self._stop = threading.Event()

    @property
    def running(self) -> List[str]:
        return [run_id for run_id, task in self._tasks.items() if not task.done()]

    def start(self, request: HuntRequest) -> str:
        if request.family not in FAMILIES:
            raise PreconditionError(f"неизвестное семейство {request.family}")
        run_id = uuid.uuid4().hex[:12]
        self._stop.clear()
        self._tasks[run_id] = asyncio.create_task(self._run(run_id, request))
        logger.info("Поиск %s запущен: family=%s, max_size=%d", run_id, request.family, request.max_size)
        return run_id

    async def _run(self, run_id: str, request: HuntRequest) -> None:
        loop = asyncio.get_running_loop()
        queue: asyncio.Queue = asyncio.Queue()

        def on_report(index: int, report: VerificationReport) -> None:
            if self._stop.is_set():
                raise HuntCancelled()
            loop.call_soon_threadsafe(queue.put_nowait, (index, report))

        def work() -> None:
            mode = EnumerationMode.sample(request.seed, request.sample) if request.sample else EnumerationMode.exhaustive()
            budget = SearchBudget(max_nodes=request.budget_nodes) if request.budget_nodes is not None else None
            graphs = family_graphs(request.family, request.max_size, request.seed, request.count, request.degree)
            hunt_counterexamples(graphs, request.k, mode, budget, on_report=on_report)

        future = loop.run_in_executor(None, work)
        await emit_event("started", run_id, {"family": request.family}, self.ws)
        try:
            while not (future.done() and queue.empty()):
                try:
                    index, report = await asyncio.wait_for(queue.get(), timeout=0.5)
                except asyncio.TimeoutError:
                    continue
                row = await save_report(run_id, request.family, report)
                await emit_event(
                    "report", run_id, {"index": index, "id": row.id, "report": report.model_dump(mode="json")}, self.ws
                )
            await future
        except HuntCancelled:
            logger.info("Поиск %s остановлен", run_id)
            await emit_event("stopped", run_id, {}, self.ws)
            return
        except asyncio.CancelledError:
            self._stop.set()
            raise
        except Exception as exc:
            logger.error("Поиск %s завершился ошибкой: %s", run_id, exc)
            await emit_event("failed", run_id, {"error": str(exc)}, self.ws)
            return
        logger.info("Поиск %s завершён", run_id)
        await emit_event("finished", run_id, {}, self.ws)

    async def wait(self, run_id: str) -> None:
        task: Optional[asyncio.Task] = self._tasks.get(run_id)
        if task is not None:
            await task

    async def stop(self) -> None:
        self._stop.set()
        for task in self._tasks.values():
            if not task.done():
                task.cancel()
        for task in self._tasks.values():
            try:
                await task
            except asyncio.CancelledError:
                pass
        self._tasks.clear()
