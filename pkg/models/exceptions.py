"""Исключения detbound. Все наследуют DetBoundError (и ValueError)."""

from typing import Optional


class DetBoundError(ValueError):
    """Базовое исключение пакета."""


class InvalidMatrix(DetBoundError):
    """Матрица не квадратная, n < 2 или содержит нечисловой элемент."""


class MatrixParseError(DetBoundError):
    """Текст матрицы не разбирается."""


class DimensionMismatch(DetBoundError):
    """Размеры матриц не совпадают."""


class SingularShiftedIdentity(DetBoundError):
    """xI + yJ вырождена: x = 0 или x = -ny."""


class InfeasiblePair(DetBoundError):
    """Пара (alpha, beta) недопустима для требуемой конструкции."""


class NonpositiveBeta(DetBoundError):
    """beta должна быть положительной."""


class NotSignMatrix(DetBoundError):
    """Элемент матрицы не равен ни 1, ни -1."""


class NotBinaryMatrix(DetBoundError):
    """Элемент матрицы не равен ни 0, ни 1."""


class EpsilonCapExceeded(DetBoundError):
    """Элемент возмущения E = I - M превышает eps по модулю."""


class NonpositiveStep(DetBoundError):
    """Шаг арифметической прогрессии q должен быть положительным."""


class DivergentSpec(DetBoundError):
    """Суммы бесконечной матрицы не сходятся."""


class SpecParseError(DetBoundError):
    """Файл описания бесконечной матрицы не разбирается."""


class SearchSpaceTooLarge(DetBoundError):
    """Число расстановок после симметрийной редукции превышает лимит."""

    def __init__(self, size: int, limit: int, message: Optional[str] = None) -> None:
        self.size = size
        self.limit = limit
        super().__init__(
            message or f"пространство поиска {size} больше лимита {limit}"
        )
