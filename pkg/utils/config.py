import os
from typing import Callable, TypeVar

from dotenv import load_dotenv

from utils.logger import get_logger

# Тихая настройка логгера для модуля
logger = get_logger(__name__)

load_dotenv()

T = TypeVar("T")


def _env(name: str, default: T, cast: Callable[[str], T]) -> T:
    """
    Читает переменную окружения и приводит её к нужному типу.

    Args:
        name: Имя переменной окружения.
        default: Значение по умолчанию.
        cast: Функция приведения типа.

    Returns:
        Значение переменной или default, если переменная не задана или некорректна.
    """
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return cast(raw.strip())
    except ValueError:
        logger.warning(
            f"Некорректное значение {name}={raw!r}, используется значение по умолчанию {default!r}"
        )
        return default


def _positive_int(raw: str) -> int:
    value = int(raw)
    if value < 1:
        raise ValueError(raw)
    return value


def _positive_float(raw: str) -> float:
    value = float(raw)
    if not value > 0:
        raise ValueError(raw)
    return value


# Параметры поиска
SEARCH_WORKERS = _env("SEARCH_WORKERS", 1, _positive_int)
SEARCH_SPACE_LIMIT = _env("SEARCH_SPACE_LIMIT", 10**8, _positive_int)
RATIO_TABLE_EXHAUSTIVE_LIMIT = _env("RATIO_TABLE_EXHAUSTIVE_LIMIT", 2 * 10**6, _positive_int)

# Параметры отжига
ANNEAL_BUDGET = _env("ANNEAL_BUDGET", 200_000, _positive_int)
ANNEAL_SEED = _env("ANNEAL_SEED", 1, int)

# Допуск проверки характеризации максимизаторов
VERIFY_TOL = _env("VERIFY_TOL", 1e-9, _positive_float)
