from typing import Any, Optional


class PrismExtError(Exception):
    """Базовая ошибка пакета."""


class GraphFormatError(PrismExtError, ValueError):
    """Некорректный граф или параметры построителя."""


class ColoringFormatError(PrismExtError, ValueError):
    """Некорректная (или неправильная) частичная раскраска."""


class GraphMismatchError(PrismExtError):
    """Раскраски относятся к разным графам."""


class PreconditionError(PrismExtError):
    """
    Вход не удовлетворяет предусловию операции.

    witness - необязательная раскраска, подтверждающая нарушение
    (например, нерасширяемая 2-раскраска треугольника).
    """

    def __init__(self, message: str, witness: Optional[Any] = None) -> None:
        super().__init__(message)
        self.witness = witness


class ProofStepError(PrismExtError):
    """Шаг конструктивного алгоритма не выполнился."""


class UnreachableError(PrismExtError):
    """Между рёбрами нет пути."""


class BudgetExhausted(PrismExtError):
    """Исчерпан бюджет перебора (узлы или время)."""

    def __init__(self, nodes: int) -> None:
        super().__init__(f"бюджет перебора исчерпан после {nodes} узлов")
        self.nodes = nodes
