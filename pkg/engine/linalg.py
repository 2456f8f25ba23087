"""
Детерминанты (точный и вещественный), статистики элементов и алгебра матриц xI + yJ.
"""

import math
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from models.exceptions import DimensionMismatch, InvalidMatrix, SingularShiftedIdentity
from models.models import CaseTag, EntryStats, Matrix, to_fraction
from utils.logger import get_logger

# Тихая настройка логгера для модуля
logger = get_logger(__name__)


def classify(alpha: Fraction, beta: Fraction) -> CaseTag:
    """Точное сравнение alpha^2 и beta."""
    lhs = alpha * alpha
    if lhs < beta:
        return CaseTag.ALPHA_SQ_LT_BETA
    if lhs == beta:
        return CaseTag.ALPHA_SQ_EQ_BETA
    return CaseTag.ALPHA_SQ_GT_BETA


def entry_stats(m: Matrix) -> EntryStats:
    """
    Вычисляет s(M), q(M), alpha, beta, kappa и случай alpha^2 vs beta.

    Args:
        m: Матрица.

    Returns:
        EntryStats: Точные статистики элементов.

    Example:
        >>> entry_stats(Matrix([[1, 2], [2, 3]])).case_tag
        <CaseTag.ALPHA_SQ_GT_BETA: 'alpha_sq_gt_beta'>
    """
    n = m.n
    values = m.flat()
    s = sum(values, Fraction(0))
    q = sum((v * v for v in values), Fraction(0))
    alpha = s / n
    beta = q / n
    kappa = (n * beta - alpha * alpha) / (n - 1)
    return EntryStats(
        n=n, s=s, q=q, alpha=alpha, beta=beta, kappa=kappa, case_tag=classify(alpha, beta)
    )


def det_int(rows: Sequence[Sequence[int]]) -> int:
    """
    Точный детерминант целочисленной матрицы методом Баресса.

    Промежуточные значения остаются целыми: каждое деление на предыдущий
    ведущий элемент выполняется нацело.

    Args:
        rows: Квадратная целочисленная матрица (допускается 1 x 1).

    Returns:
        int: Детерминант.
    """
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)

    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            aik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def det_exact(m: Matrix) -> Fraction:
    """
    Точный детерминант.

    Каждая строка домножается на НОК знаменателей своих элементов, после чего
    детерминант целочисленной матрицы считается методом Баресса.

    Args:
        m: Матрица.

    Returns:
        Fraction: det(m) без округлений.
    """
    if m.is_integral():
        return Fraction(det_int([[v.numerator for v in row] for row in m.rows]))
    return _det_rational_rows(m.rows)


def _det_rational_rows(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    int_rows: List[List[int]] = []
    scale = 1
    for row in rows:
        lcm = 1
        for v in row:
            lcm = math.lcm(lcm, v.denominator)
        int_rows.append([int(v * lcm) for v in row])
        scale *= lcm
    return Fraction(det_int(int_rows), scale)


def minor(m: Matrix, i: int, j: int) -> Fraction:
    """Минор: детерминант матрицы без i-й строки и j-го столбца (индексы с нуля)."""
    return _det_rational_rows(m.submatrix(i, j))


def det_float(m: Any) -> float:
    """
    Вещественный детерминант через LU-разложение с частичным выбором ведущего элемента.

    Args:
        m: Matrix или квадратный numpy-массив.

    Returns:
        float: Детерминант; переполнение даёт inf, а не исключение.
    """
    array = m.to_numpy() if isinstance(m, Matrix) else np.asarray(m, dtype=float)
    with np.errstate(all="ignore"):
        return float(np.linalg.det(array))


def shifted_identity(x: Any, y: Any, n: int) -> Matrix:
    """Явная матрица xI + yJ."""
    x, y = to_fraction(x), to_fraction(y)
    return Matrix([[x + y if i == j else y for j in range(n)] for i in range(n)])


def shifted_identity_det(x: Any, y: Any, n: int) -> Fraction:
    """
    det(xI + yJ) = x^(n-1) (x + ny).

    Args:
        x: Сдвиг по диагонали.
        y: Коэффициент при J.
        n: Размерность (n >= 2).

    Returns:
        Fraction: Точный детерминант.
    """
    if n < 2:
        raise InvalidMatrix(f"размерность должна быть не меньше 2, получено {n}")
    x, y = to_fraction(x), to_fraction(y)
    return x ** (n - 1) * (x + n * y)


def shifted_identity_inverse(x: Any, y: Any, n: int) -> Matrix:
    """
    Обратная к xI + yJ: (1/x) I - y / (x (x + ny)) J.

    Args:
        x: Сдвиг по диагонали.
        y: Коэффициент при J.
        n: Размерность (n >= 2).

    Returns:
        Matrix: Обратная матрица.

    Raises:
        SingularShiftedIdentity: Если x = 0 или x = -ny.
    """
    if n < 2:
        raise InvalidMatrix(f"размерность должна быть не меньше 2, получено {n}")
    x, y = to_fraction(x), to_fraction(y)
    if x == 0 or x + n * y == 0:
        logger.debug(f"xI + yJ вырождена при x={x}, y={y}, n={n}")
        raise SingularShiftedIdentity(f"xI + yJ вырождена: x={x}, y={y}, n={n}")
    diag = 1 / x
    off = -y / (x * (x + n * y))
    return Matrix([[diag + off if i == j else off for j in range(n)] for i in range(n)])


def rational_sqrt(x: Any) -> Optional[Fraction]:
    """
    Точный квадратный корень из неотрицательной дроби.

    Returns:
        Fraction или None, если числитель или знаменатель не является полным квадратом.

    Example:
        >>> rational_sqrt(Fraction(9, 4))
        Fraction(3, 2)
    """
    x = to_fraction(x)
    if x < 0:
        return None
    num, den = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if num * num == x.numerator and den * den == x.denominator:
        return Fraction(num, den)
    return None


def complex_embedding(a: Matrix, b: Matrix) -> Matrix:
    """Вещественная матрица 2n x 2n [[A, B], [-B, A]] для A + iB."""
    if a.n != b.n:
        raise DimensionMismatch(f"размеры A ({a.n}) и B ({b.n}) не совпадают")
    top = [list(ra) + list(rb) for ra, rb in zip(a.rows, b.rows)]
    bottom = [[-v for v in rb] + list(ra) for ra, rb in zip(a.rows, b.rows)]
    return Matrix(top + bottom, is_exact=a.is_exact and b.is_exact)


def to_float(x: Fraction) -> float:
    """Дробь в double; выход за диапазон даёт +-inf вместо OverflowError."""
    try:
        return float(x)
    except OverflowError:
        return math.inf if x > 0 else -math.inf


def log_abs(x: Fraction) -> float:
    """ln|x| для ненулевой дроби любой величины."""
    return math.log(abs(x.numerator)) - math.log(x.denominator)


def exp_or_inf(value: float) -> float:
    try:
        return math.exp(value)
    except OverflowError:
        return math.inf


def complex_abs_det(a: Matrix, b: Matrix) -> float:
    """|det(A + iB)| как корень из детерминанта вещественного вложения."""
    squared = det_exact(complex_embedding(a, b))
    if squared <= 0:
        return 0.0
    value = to_float(squared)
    if math.isinf(value):
        return exp_or_inf(log_abs(squared) / 2)
    return math.sqrt(value)


def power_product(*factors: Tuple[Fraction, float]) -> float:
    """
    Произведение x_i^e_i (x_i >= 0, e_i > 0) в double.

    Если прямое вычисление выходит за диапазон double, произведение
    считается через сумму логарифмов; переполнение итога даёт inf.

    Example:
        >>> power_product((Fraction(9), 0.5), (Fraction(4), 2))
        48.0
    """
    if any(x <= 0 for x, _ in factors):
        return 0.0
    try:
        value = math.prod(float(x) ** e for x, e in factors)
    except OverflowError:
        value = math.inf
    if math.isinf(value) or value == 0.0:
        return exp_or_inf(math.fsum(e * log_abs(x) for x, e in factors))
    return value
