import enum
import math
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from numbers import Rational
from typing import Any, Dict, Iterable, Iterator, Optional, Sequence, Tuple

import numpy as np

from models.exceptions import (
    DimensionMismatch,
    DivergentSpec,
    InvalidMatrix,
    MatrixParseError,
)
from utils.logger import get_logger

# Тихая настройка логгера для модуля
logger = get_logger(__name__)

Row = Tuple[Fraction, ...]


def to_fraction(value: Any) -> Fraction:
    """
    Приводит значение к точной дроби.

    Поддерживаются int, Fraction, float (переводится точно), Decimal, numpy-скаляры
    и строки вида "3", "-1.25", "2/7".

    Args:
        value: Исходное значение.

    Returns:
        Fraction: Точное рациональное значение.

    Raises:
        MatrixParseError: Если значение не является конечным числом.

    Example:
        >>> to_fraction("2/4")
        Fraction(1, 2)
    """
    if isinstance(value, bool):
        raise MatrixParseError(f"логическое значение {value!r} не является элементом матрицы")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, np.integer):
        return Fraction(int(value))
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(float(value)):
            raise MatrixParseError(f"элемент {value!r} не конечен")
        return Fraction(float(value))
    if isinstance(value, Decimal):
        if not value.is_finite():
            raise MatrixParseError(f"элемент {value!r} не конечен")
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise MatrixParseError("пустой элемент")
        try:
            if "/" in text:
                num, den = text.split("/", 1)
                if not den.strip() or int(den) == 0:
                    raise MatrixParseError(f"нулевой знаменатель в {value!r}")
                return Fraction(int(num), int(den))
            return Fraction(Decimal(text))
        except (ValueError, InvalidOperation) as e:
            raise MatrixParseError(f"не удалось разобрать элемент {value!r}") from e
    raise MatrixParseError(f"неподдерживаемый тип элемента: {type(value).__name__}")


class Matrix:
    """
    Плотная квадратная матрица n x n (n >= 2) с точными рациональными элементами.

    Объект неизменяем. is_exact=False означает, что элементы получены округлением
    иррациональных величин до double (например, корней в экстремальных конструкциях);
    сами элементы при этом остаются точными дробями от этих double.
    """

    __slots__ = ("_rows", "is_exact")

    def __init__(self, rows: Iterable[Iterable[Any]], is_exact: bool = True) -> None:
        try:
            converted = tuple(tuple(to_fraction(v) for v in row) for row in rows)
        except TypeError as e:
            raise InvalidMatrix("строки матрицы должны быть итерируемыми") from e
        n = len(converted)
        if n < 2:
            raise InvalidMatrix(f"размерность должна быть не меньше 2, получено {n}")
        for i, row in enumerate(converted):
            if len(row) != n:
                raise InvalidMatrix(
                    f"матрица не квадратная: строка {i + 1} имеет {len(row)} элементов вместо {n}"
                )
        self._rows: Tuple[Row, ...] = converted
        self.is_exact = is_exact

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def ones(cls, n: int) -> "Matrix":
        """Матрица J из одних единиц."""
        return cls([[1] * n for _ in range(n)])

    @classmethod
    def zeros(cls, n: int) -> "Matrix":
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[Any]]) -> "Matrix":
        return cls(rows)

    @classmethod
    def from_flat(cls, values: Sequence[Any], n: int, is_exact: bool = True) -> "Matrix":
        """Матрица из n*n значений в построчном порядке."""
        if len(values) != n * n:
            raise InvalidMatrix(f"ожидалось {n * n} значений, получено {len(values)}")
        return cls((values[i * n:(i + 1) * n] for i in range(n)), is_exact=is_exact)

    @staticmethod
    def block_diagonal(blocks: Sequence[Sequence[Sequence[Any]]], is_exact: bool = True) -> "Matrix":
        """
        Собирает блочно-диагональную матрицу.

        Args:
            blocks: Квадратные блоки (списки строк), допускаются блоки 1 x 1.
            is_exact: Признак точности элементов.

        Returns:
            Matrix: Блочно-диагональная матрица.
        """
        size = sum(len(b) for b in blocks)
        rows = [[Fraction(0)] * size for _ in range(size)]
        offset = 0
        for block in blocks:
            k = len(block)
            for i in range(k):
                for j in range(k):
                    rows[offset + i][offset + j] = to_fraction(block[i][j])
            offset += k
        return Matrix(rows, is_exact=is_exact)

    @property
    def n(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> Tuple[Row, ...]:
        return self._rows

    def entry(self, i: int, j: int) -> Fraction:
        return self._rows[i][j]

    def row(self, i: int) -> Row:
        """Строка M_i (индексация с нуля)."""
        return self._rows[i]

    def column(self, j: int) -> Row:
        """Столбец M^j (индексация с нуля)."""
        return tuple(row[j] for row in self._rows)

    def flat(self) -> Tuple[Fraction, ...]:
        return tuple(v for row in self._rows for v in row)

    def submatrix(self, i: int, j: int) -> Tuple[Row, ...]:
        """Строки без i-й строки и j-го столбца (может быть 1 x 1, поэтому не Matrix)."""
        return tuple(
            row[:j] + row[j + 1:] for k, row in enumerate(self._rows) if k != i
        )

    def transpose(self) -> "Matrix":
        return Matrix(zip(*self._rows), is_exact=self.is_exact)

    def negate(self) -> "Matrix":
        return Matrix(([-v for v in row] for row in self._rows), is_exact=self.is_exact)

    def scale(self, c: Any) -> "Matrix":
        c = to_fraction(c)
        return Matrix(([c * v for v in row] for row in self._rows), is_exact=self.is_exact)

    def swap_rows(self, i: int, j: int) -> "Matrix":
        rows = list(self._rows)
        rows[i], rows[j] = rows[j], rows[i]
        return Matrix(rows, is_exact=self.is_exact)

    def permute(self, row_order: Sequence[int], col_order: Sequence[int]) -> "Matrix":
        """Переставляет строки и столбцы: результат[i][j] = M[row_order[i]][col_order[j]]."""
        return Matrix(
            ([self._rows[r][c] for c in col_order] for r in row_order),
            is_exact=self.is_exact,
        )

    def matmul(self, other: "Matrix") -> "Matrix":
        if other.n != self.n:
            raise DimensionMismatch(f"размеры {self.n} и {other.n} не совпадают")
        cols = list(zip(*other.rows))
        return Matrix(
            ([sum(a * b for a, b in zip(row, col)) for col in cols] for row in self._rows),
            is_exact=self.is_exact and other.is_exact,
        )

    def gram(self) -> "Matrix":
        """Произведение M * M^T."""
        return self.matmul(self.transpose())

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for row in self._rows for v in row)

    def to_numpy(self) -> np.ndarray:
        """Вещественное представление (float64)."""
        return np.array([[float(v) for v in row] for row in self._rows], dtype=float)

    def __iter__(self) -> Iterator[Row]:
        return iter(self._rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(v) for v in row) + "]" for row in self._rows)
        return f"<Matrix {self.n}x{self.n} [{body}]>"


class CaseTag(enum.Enum):
    """Сравнение alpha^2 и beta."""

    ALPHA_SQ_LT_BETA = "alpha_sq_lt_beta"
    ALPHA_SQ_EQ_BETA = "alpha_sq_eq_beta"
    ALPHA_SQ_GT_BETA = "alpha_sq_gt_beta"


class FormulaTag(enum.Enum):
    """Какая формула оценки сработала."""

    BETA_POWER = "beta_power"
    ALPHA_KAPPA = "alpha_kappa"


class Variant(enum.Enum):
    """Вариант экстремальной конструкции."""

    SHIFTED_IDENTITY = "shifted"
    ORTHOGONAL_BLOCKS = "orthogonal"


class ProgressionMode(enum.Enum):
    """Семейство матриц из арифметической прогрессии."""

    FULL_SQUARE = "full-square"
    REPEATED = "repeated"


class SearchMode(enum.Enum):
    EXHAUSTIVE = "exhaustive"
    ANNEAL = "anneal"


class SpecKind(enum.Enum):
    """Тип описания бесконечной матрицы."""

    DIAGONAL_GEOMETRIC = "diagonal_geometric"
    FINITE_SUPPORT = "finite_support"
    TABLE = "table"


@dataclass(frozen=True)
class EntryStats:
    """Статистики элементов: s(M), q(M), alpha, beta, kappa и случай alpha^2 vs beta."""

    n: int
    s: Fraction
    q: Fraction
    alpha: Fraction
    beta: Fraction
    kappa: Fraction
    case_tag: CaseTag


@dataclass(frozen=True)
class BoundReport:
    stats: EntryStats
    bound: float
    formula_tag: FormulaTag
    beta_power: float
    feasible: bool
    # |alpha| kappa^((n-1)/2) во всех случаях, даже когда это не оценка
    alpha_kappa: float


@dataclass(frozen=True)
class ComplexBoundReport:
    """Оценка |det(A + iB)| для обеих ориентаций A+iB и B+iA."""

    alpha: Fraction
    beta: Fraction
    kappa: Fraction
    bound_direct: float
    bound_swapped: float
    bound: float
    alpha_swapped: Fraction
    kappa_swapped: Fraction
    formula_direct: FormulaTag
    formula_swapped: FormulaTag


@dataclass(frozen=True)
class RyserInput:
    n: int
    t: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise InvalidMatrix(f"размерность должна быть не меньше 2, получено {self.n}")
        if not 0 <= self.t <= self.n * self.n:
            raise InvalidMatrix(f"число единиц t={self.t} вне диапазона [0, {self.n * self.n}]")

    @property
    def k(self) -> Fraction:
        return Fraction(self.t, self.n)


@dataclass(frozen=True)
class BrentInput:
    n: int
    epsilon: Fraction
    zero_diagonal: bool = False

    def __post_init__(self) -> None:
        if self.n < 2:
            raise InvalidMatrix(f"размерность должна быть не меньше 2, получено {self.n}")
        object.__setattr__(self, "epsilon", to_fraction(self.epsilon))
        if self.epsilon <= 0:
            raise InvalidMatrix(f"epsilon должен быть положительным, получено {self.epsilon}")


@dataclass(frozen=True)
class ProgressionBound:
    n: int
    p: Fraction
    q: Fraction
    mode: ProgressionMode
    r: Fraction
    rho: Fraction
    sigma: Fraction
    bound: float
    formula_tag: FormulaTag


@dataclass(frozen=True)
class ExcessCheck:
    is_hadamard: bool
    excess: Fraction
    bound: float
    alpha_sq_le_beta: bool


@dataclass(frozen=True)
class TraceDetCheck:
    lhs: float
    rhs: float
    holds: bool
    lhs_exact: Fraction
    rhs_exact: Fraction


@dataclass(frozen=True)
class RelateGap:
    lhs: float
    rhs: float
    equal: bool


@dataclass(frozen=True)
class ExtremalRecipe:
    n: int
    alpha: Fraction
    beta: Fraction
    variant: Variant
    gamma: Any  # Fraction для точных конструкций, иначе float
    matrix: Matrix
    claimed_det: Any
    exact: bool
    negated: bool = False
    rows_swapped: bool = False


@dataclass(frozen=True)
class CharacterizationReport:
    delta: Fraction
    rowsum_ok: Optional[bool]
    colsum_ok: Optional[bool]
    gram_ok: bool
    det_ok: bool
    max_residual: float
    regimes: Tuple[str, ...]


@dataclass(frozen=True)
class SearchProblem:
    n: int
    entries: Tuple[Fraction, ...]
    mode: SearchMode = SearchMode.EXHAUSTIVE
    seed: Optional[int] = None
    iteration_budget: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(to_fraction(v) for v in self.entries))
        if self.n < 2:
            raise InvalidMatrix(f"размерность должна быть не меньше 2, получено {self.n}")
        if len(self.entries) != self.n * self.n:
            raise InvalidMatrix(
                f"мультимножество содержит {len(self.entries)} элементов вместо {self.n * self.n}"
            )


@dataclass(frozen=True)
class SearchResult:
    best_matrix: Matrix
    best_abs_det: Fraction
    upper_bound: float
    ratio: float
    nodes_visited: int
    exhaustive_certificate: bool
    mode: SearchMode


@dataclass(frozen=True)
class RatioRow:
    n: int
    best: Fraction
    bound: float
    ratio: float
    certificate: bool


@dataclass(frozen=True)
class InfiniteMatrixSpec:
    """
    Описание бесконечной матрицы A для детерминанта det(I - A).

    DIAGONAL_GEOMETRIC: A_ii = c * r^i (i >= 1), вне диагонали нули.
    FINITE_SUPPORT и TABLE: конечное число ненулевых элементов (индексы с единицы).
    """

    kind: SpecKind
    c: Fraction = Fraction(0)
    r: Fraction = Fraction(0)
    entries: Dict[Tuple[int, int], Fraction] = field(default_factory=dict)

    def entry(self, i: int, j: int) -> Fraction:
        if self.kind is SpecKind.DIAGONAL_GEOMETRIC:
            return self.c * self.r**i if i == j else Fraction(0)
        return self.entries.get((i, j), Fraction(0))

    def _check_summable(self) -> None:
        if self.kind is SpecKind.DIAGONAL_GEOMETRIC and self.c != 0 and abs(self.r) >= 1:
            logger.warning(f"Ряд c*r^i расходится: c={self.c}, r={self.r}")
            raise DivergentSpec(f"|r| = {abs(self.r)} >= 1, суммы диагонали не сходятся")

    @property
    def trace_abs_sum(self) -> Fraction:
        """Сумма |A_ii| по всей бесконечной диагонали."""
        self._check_summable()
        if self.kind is SpecKind.DIAGONAL_GEOMETRIC and self.c == 0:
            return Fraction(0)
        if self.kind is SpecKind.DIAGONAL_GEOMETRIC:
            r = abs(self.r)
            return abs(self.c) * r / (1 - r)
        return sum((abs(v) for (i, j), v in self.entries.items() if i == j), Fraction(0))

    @property
    def trace_sum(self) -> Fraction:
        """Сумма A_ii со знаком."""
        self._check_summable()
        if self.kind is SpecKind.DIAGONAL_GEOMETRIC and self.c == 0:
            return Fraction(0)
        if self.kind is SpecKind.DIAGONAL_GEOMETRIC:
            return self.c * self.r / (1 - self.r)
        return sum((v for (i, j), v in self.entries.items() if i == j), Fraction(0))

    @property
    def square_sum(self) -> Fraction:
        """Сумма A_ij^2 по всем элементам."""
        self._check_summable()
        if self.kind is SpecKind.DIAGONAL_GEOMETRIC and self.c == 0:
            return Fraction(0)
        if self.kind is SpecKind.DIAGONAL_GEOMETRIC:
            return self.c**2 * self.r**2 / (1 - self.r**2)
        return sum((v * v for v in self.entries.values()), Fraction(0))

    @property
    def support(self) -> int:
        """Наибольший индекс ненулевого элемента (0 для бесконечного носителя)."""
        if self.kind is SpecKind.DIAGONAL_GEOMETRIC:
            return 0
        return max((max(i, j) for i, j in self.entries), default=0)


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    truncated_det: float
    finite_bound: float
    koch_bound: float
    sharp_bound: float

