"""
Бесконечные детерминанты det(I - A) как предел усечений det(I - A(n))
и экспоненциальная оценка exp(1/2 sum A_ij^2 - sum A_ii).
"""

import math
from fractions import Fraction
from typing import List, Tuple

import numpy as np

from engine.linalg import det_float
from models.exceptions import InvalidMatrix
from models.models import ConvergenceRow, InfiniteMatrixSpec, SpecKind
from utils.logger import get_logger

# Тихая настройка логгера для модуля
logger = get_logger(__name__)


def _check_n(n: int) -> None:
    if n < 1:
        raise InvalidMatrix(f"порядок усечения должен быть не меньше 1, получено {n}")


def truncation(spec: InfiniteMatrixSpec, n: int) -> np.ndarray:
    """Вещественная матрица I - A(n)."""
    _check_n(n)
    result = np.eye(n)
    if spec.kind is SpecKind.DIAGONAL_GEOMETRIC:
        c, r = float(spec.c), float(spec.r)
        for i in range(1, n + 1):
            result[i - 1, i - 1] -= c * r**i
        return result
    for (i, j), v in spec.entries.items():
        if i <= n and j <= n:
            result[i - 1, j - 1] -= float(v)
    return result


def truncated_det(spec: InfiniteMatrixSpec, n: int) -> float:
    """
    det(I - A(n)) в double; n = 1 допускается (скаляр 1 - A_11).

    Example:
        >>> spec = InfiniteMatrixSpec(SpecKind.DIAGONAL_GEOMETRIC, Fraction(1, 2), Fraction(1, 2))
        >>> truncated_det(spec, 3)
        0.615234375
    """
    return det_float(truncation(spec, n))


def _geometric_partial(c: float, r: float, n: int) -> float:
    """sum_{i=1..n} c r^i."""
    if c == 0:
        return 0.0
    if r == 1:
        return c * n
    return c * r * (1 - r**n) / (1 - r)


def partial_sums(spec: InfiniteMatrixSpec, n: int) -> Tuple[float, float, float]:
    """
    Суммы по усечению A(n): (sum A_ii, sum A_ij^2, sum A_ij).

    Для DIAGONAL_GEOMETRIC используются замкнутые формулы, поэтому n может
    быть сколь угодно большим.
    """
    _check_n(n)
    if spec.kind is SpecKind.DIAGONAL_GEOMETRIC:
        c, r = float(spec.c), float(spec.r)
        trace = _geometric_partial(c, r, n)
        squares = _geometric_partial(c * c, r * r, n)
        return trace, squares, trace
    trace = squares = total = Fraction(0)
    for (i, j), v in spec.entries.items():
        if i > n or j > n:
            continue
        total += v
        squares += v * v
        if i == j:
            trace += v
    return float(trace), float(squares), float(total)


def finite_bound(spec: InfiniteMatrixSpec, n: int) -> float:
    """
    beta^(n/2) для I - A(n): (1 + (1/n) sum A_ij^2 - (2/n) sum A_ii)^(n/2).

    Степень считается через log1p, чтобы не терять точность при больших n.
    """
    trace, squares, _ = partial_sums(spec, n)
    x = (squares - 2 * trace) / n
    if x <= -1:
        return 0.0
    return math.exp(n / 2 * math.log1p(x))


def sharp_bound(spec: InfiniteMatrixSpec, n: int) -> float:
    """
    |alpha| kappa^((n-1)/2) для I - A(n), где alpha = (n - sum A_ij)/n.

    Является оценкой |det| только при alpha^2 >= beta; в пределе совпадает
    с exp(1/2 sum A_ij^2 - sum A_ii), как и finite_bound.
    """
    trace, squares, total = partial_sums(spec, n)
    alpha = 1 - total / n
    if n == 1:
        return abs(alpha)
    # kappa = 1 + y/(n-1)
    y = squares - 2 * trace + 2 * total / n - (total / n) ** 2
    z = y / (n - 1)
    if z <= -1:
        return 0.0
    return abs(alpha) * math.exp((n - 1) / 2 * math.log1p(z))


def koch_bound(spec: InfiniteMatrixSpec) -> float:
    """
    exp(1/2 sum A_ij^2 - sum A_ii) по всей бесконечной матрице.

    Raises:
        DivergentSpec: Если суммы не сходятся (|r| >= 1 при c != 0).
    """
    exponent = float(spec.square_sum) / 2 - float(spec.trace_sum)
    return math.exp(exponent)


def convergence_report(spec: InfiniteMatrixSpec, n_max: int) -> List[ConvergenceRow]:
    """
    Строки (n, det(I - A(n)), finite_bound(n), koch_bound, sharp_bound(n)) для n = 1..n_max.

    Args:
        spec: Описание матрицы A.
        n_max: Наибольший порядок усечения.

    Returns:
        List[ConvergenceRow]: По строке на каждое n.
    """
    _check_n(n_max)
    koch = koch_bound(spec)
    rows: List[ConvergenceRow] = []
    for n in range(1, n_max + 1):
        det = truncated_det(spec, n)
        bound = finite_bound(spec, n)
        if abs(det) > bound * (1 + 1e-9):
            logger.warning(f"|det(I - A({n}))| = {abs(det)!r} превышает оценку {bound!r}")
        rows.append(
            ConvergenceRow(
                n=n,
                truncated_det=det,
                finite_bound=bound,
                koch_bound=koch,
                sharp_bound=sharp_bound(spec, n),
            )
        )
    logger.info(
        f"Усечения 1..{n_max} ({spec.kind.value}): det = {rows[-1].truncated_det:.9g}, "
        f"finite_bound = {rows[-1].finite_bound:.9g}, koch_bound = {koch:.9g}"
    )
    return rows
