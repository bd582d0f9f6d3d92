import logging
from typing import Set

from fastapi import WebSocket
from fastapi.encoders import jsonable_encoder

logger = logging.getLogger(__name__)


class ConnectionManager:
    """Подписчики на ход поиска контрпримеров."""

    def __init__(self) -> None:
        self.active: Set[WebSocket] = set()

    async def connect(self, ws: WebSocket) -> None:
        await ws.accept()
        self.active.add(ws)
        logger.info("WebSocket подключен: client=%s, total=%d", getattr(ws, "client", None), len(self.active))

    def disconnect(self, ws: WebSocket) -> None:
        self.active.discard(ws)
        logger.info("WebSocket отключен: client=%s, total=%d", getattr(ws, "client", None), len(self.active))

    async def broadcast(self, message: dict) -> None:
        if not self.active:
            return

        data = jsonable_encoder(message)
        bad_connections = []
        for ws in list(self.active):
            try:
                await ws.send_json(data)
            except Exception:
                bad_connections.append(ws)

        for ws in bad_connections:
            self.disconnect(ws)
            logger.warning("Удалён неработающий WebSocket: client=%s", getattr(ws, "client", None))


# Singleton
manager = ConnectionManager()
