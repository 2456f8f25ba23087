"""
Текстовый формат матриц, файлы описаний бесконечных матриц и отчёты.

Формат матрицы: одна строка матрицы на строку текста, элементы через запятую;
элемент: целое, десятичная дробь или точная дробь "p/q". Пустые строки и
строки, начинающиеся с '#', пропускаются.
"""

import dataclasses
import enum
import json
import math
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Union

from models.exceptions import InvalidMatrix, MatrixParseError, SpecParseError
from models.models import InfiniteMatrixSpec, Matrix, SpecKind, to_fraction
from utils.logger import get_logger

# Тихая настройка логгера для модуля
logger = get_logger(__name__)

PathLike = Union[str, Path]

RANGE_PATTERN = re.compile(r"^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$")


def format_value(value: Fraction) -> str:
    """Целое как "7", нецелое как точная дробь "p/q"."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_matrix_text(text: str) -> Matrix:
    """
    Разбирает матрицу из текстового формата.

    Raises:
        MatrixParseError: Если элемент не разбирается; сообщение содержит номер строки.
        InvalidMatrix: Если матрица не квадратная или n < 2.

    Example:
        >>> parse_matrix_text("1, 2\\n2, 3").n
        2
    """
    rows: List[List[Fraction]] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            rows.append([to_fraction(cell) for cell in stripped.split(",")])
        except MatrixParseError as e:
            raise MatrixParseError(f"строка {line_no}: {e}") from e
    if not rows:
        raise InvalidMatrix("матрица пуста")
    return Matrix.from_rows(rows)


def format_matrix(m: Matrix) -> str:
    """Матрица в текстовом формате; повторный разбор даёт ту же точную матрицу."""
    return "\n".join(",".join(format_value(v) for v in row) for row in m.rows) + "\n"


def read_matrix(path: PathLike) -> Matrix:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        logger.error(f"Не удалось прочитать матрицу из {path}: {e}")
        raise MatrixParseError(f"не удалось прочитать {path}: {e}") from e
    return parse_matrix_text(text)


def write_matrix(m: Matrix, path: PathLike) -> None:
    Path(path).write_text(format_matrix(m), encoding="utf-8")


def parse_entries(expression: str) -> List[Fraction]:
    """
    Мультимножество элементов из выражения "1..9" (целые включительно)
    или явного списка "1,1,2,2" (допускаются дроби "p/q").

    Raises:
        MatrixParseError: Если выражение не разбирается или диапазон пуст.
    """
    match = RANGE_PATTERN.match(expression)
    if match:
        low, high = int(match.group(1)), int(match.group(2))
        if low > high:
            raise MatrixParseError(f"пустой диапазон {expression!r}")
        return [Fraction(v) for v in range(low, high + 1)]
    cells = [cell for cell in expression.split(",") if cell.strip()]
    if not cells:
        raise MatrixParseError(f"пустой список элементов {expression!r}")
    return [to_fraction(cell) for cell in cells]


def _spec_value(value: Any, where: str) -> Fraction:
    try:
        return to_fraction(value)
    except MatrixParseError as e:
        raise SpecParseError(f"{where}: {e}") from e


def _spec_index(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise SpecParseError(f"{where}: индекс должен быть целым >= 1, получено {value!r}")
    return value


def spec_from_dict(data: Dict[str, Any]) -> InfiniteMatrixSpec:
    """
    Описание бесконечной матрицы из словаря (JSON).

    {"kind": "diagonal_geometric", "c": "1/2", "r": "1/2"};
    {"kind": "finite_support", "entries": [[i, j, "v"], ...]};
    {"kind": "table", "rows": [["v", ...], ...]}. Индексы с единицы.

    Raises:
        SpecParseError: Если описание некорректно.
    """
    if not isinstance(data, dict):
        raise SpecParseError("описание должно быть JSON-объектом")
    try:
        kind = SpecKind(data.get("kind"))
    except ValueError as e:
        known = ", ".join(k.value for k in SpecKind)
        raise SpecParseError(f"неизвестный kind {data.get('kind')!r}, ожидается одно из: {known}") from e

    if kind is SpecKind.DIAGONAL_GEOMETRIC:
        if "c" not in data or "r" not in data:
            raise SpecParseError("для diagonal_geometric нужны поля c и r")
        return InfiniteMatrixSpec(
            kind=kind, c=_spec_value(data["c"], "c"), r=_spec_value(data["r"], "r")
        )

    entries: Dict[tuple, Fraction] = {}
    if kind is SpecKind.FINITE_SUPPORT:
        items = data.get("entries")
        if not isinstance(items, list):
            raise SpecParseError("для finite_support нужен список entries")
        for k, item in enumerate(items, start=1):
            if not isinstance(item, list) or len(item) != 3:
                raise SpecParseError(f"entries[{k}]: ожидается [i, j, значение]")
            i = _spec_index(item[0], f"entries[{k}]")
            j = _spec_index(item[1], f"entries[{k}]")
            value = _spec_value(item[2], f"entries[{k}]")
            if value != 0:
                entries[(i, j)] = entries.get((i, j), Fraction(0)) + value
    else:
        rows = data.get("rows")
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise SpecParseError("для table нужен список строк rows")
        for i, row in enumerate(rows, start=1):
            for j, cell in enumerate(row, start=1):
                value = _spec_value(cell, f"rows[{i}][{j}]")
                if value != 0:
                    entries[(i, j)] = value
    return InfiniteMatrixSpec(kind=kind, entries=entries)


def read_spec(path: PathLike) -> InfiniteMatrixSpec:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        logger.error(f"Не удалось прочитать описание из {path}: {e}")
        raise SpecParseError(f"не удалось прочитать {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise SpecParseError(f"{path}: некорректный JSON ({e.msg}, строка {e.lineno})") from e
    return spec_from_dict(data)


def to_jsonable(value: Any) -> Any:
    """
    Приводит результат вычислений к JSON-совместимому виду.

    Fraction -> "p/q" (целые -> "7"), Enum -> значение, Matrix -> список строк
    из строковых элементов, dataclass -> словарь, нечисловые float -> "inf"/"nan".
    """
    if isinstance(value, bool) or value is None or isinstance(value, (str, int)):
        return value
    if isinstance(value, Fraction):
        return format_value(value)
    if isinstance(value, float):
        return value if math.isfinite(value) else str(value)
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, Matrix):
        return [[format_value(v) for v in row] for row in value.rows]
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, "item"):  # numpy-скаляры
        return to_jsonable(value.item())
    raise TypeError(f"значение типа {type(value).__name__} не сериализуется в отчёт")


def render_report(payload: Dict[str, Any], summary: str) -> str:
    """JSON-отчёт (ключи отсортированы, отступ 2) и итоговая строка "# ..."."""
    body = json.dumps(to_jsonable(payload), sort_keys=True, indent=2, ensure_ascii=False)
    return f"{body}\n# {summary}\n"
