import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from prismext.api import router
from prismext.config import LOG_LEVEL
from prismext.db.database import create_tables
from prismext.tasks.hunt_runner import HuntRunner

logging.basicConfig(level=LOG_LEVEL, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    # Startup
    await create_tables()
    app.state.hunt_runner = HuntRunner()
    logger.info("prismext запущен")
    yield
    # Shutdown
    runner: HuntRunner | None = getattr(app.state, "hunt_runner", None)
    if runner is not None:
        await runner.stop()


app = FastAPI(title="prismext", version="1.0", lifespan=lifespan)

# Подключаем роуты
app.include_router(router.router)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_methods=["*"],
    allow_headers=["*"],
)
