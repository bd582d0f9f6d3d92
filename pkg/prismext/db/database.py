from typing import AsyncIterator

from sqlalchemy.ext.asyncio import AsyncSession, async_sessionmaker, create_async_engine
from sqlmodel import SQLModel

from prismext.config import DATABASE_URL

# Database engine
engine = create_async_engine(
    DATABASE_URL,
    echo=False,
    pool_pre_ping=True,
)


# Session factory
AsyncSessionLocal = async_sessionmaker(
    bind=engine,
    class_=AsyncSession,
    expire_on_commit=False,
    autoflush=False,
)


async def create_tables() -> None:
    # таблицы регистрируются импортом модели
    from prismext.models import report_model  # noqa: F401

    async with engine.begin() as conn:
        await conn.run_sync(SQLModel.metadata.create_all)


# Dependency
async def get_db() -> AsyncIterator[AsyncSession]:
    """
    FastAPI dependency.
    Открывает сессию на время запроса и закрывает её после ответа.
    """
    async with AsyncSessionLocal() as session:
        yield session
