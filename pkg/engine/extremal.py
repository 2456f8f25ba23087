"""
Экстремальные матрицы с заданными s(M) = n alpha, q(M) = n beta и проверка
необходимых условий для матриц с максимальным детерминантом.
"""

import math
from fractions import Fraction
from typing import Any, List, Optional, Tuple

import numpy as np

from engine.linalg import det_exact, det_float, entry_stats, power_product, rational_sqrt, to_float
from models.exceptions import InfeasiblePair, InvalidMatrix, NonpositiveBeta
from models.models import (
    CaseTag,
    CharacterizationReport,
    ExtremalRecipe,
    Matrix,
    Variant,
    to_fraction,
)
from utils.logger import get_logger

# Тихая настройка логгера для модуля
logger = get_logger(__name__)

Number = Any  # Fraction на точном пути, float иначе


def _sqrt(x: Fraction) -> Tuple[Number, bool]:
    """Корень: точная дробь, если возможно, иначе float."""
    root = rational_sqrt(x)
    if root is not None:
        return root, True
    return math.sqrt(float(x)), False


def _check_n(n: int) -> None:
    if n < 2:
        raise InvalidMatrix(f"размерность должна быть не меньше 2, получено {n}")


def _check_pair(alpha: Fraction, beta: Fraction, limit: Fraction, what: str) -> None:
    if beta <= 0:
        raise NonpositiveBeta(f"beta должна быть положительной, получено {beta}")
    if alpha * alpha > limit:
        logger.debug(f"Недопустимая пара для {what}: alpha={alpha}, beta={beta}")
        raise InfeasiblePair(f"{what}: alpha^2 = {alpha * alpha} > {limit}")


def construct_shifted(n: int, alpha: Any, beta: Any) -> ExtremalRecipe:
    """
    Строит M = gamma I + ((alpha - gamma)/n) J с gamma = ((n beta - alpha^2)/(n-1))^(1/2).

    det M = alpha gamma^(n-1), s(M) = n alpha, q(M) = n beta.

    Args:
        n: Размерность.
        alpha: Целевое среднее s(M)/n.
        beta: Целевое среднее q(M)/n (> 0).

    Returns:
        ExtremalRecipe: Матрица и заявленный детерминант.

    Raises:
        InvalidMatrix: Если n < 2.
        InfeasiblePair: Если alpha^2 > n beta.
    """
    _check_n(n)
    alpha, beta = to_fraction(alpha), to_fraction(beta)
    _check_pair(alpha, beta, n * beta, "shifted")
    gamma_sq = (n * beta - alpha * alpha) / (n - 1)
    gamma, exact = _sqrt(gamma_sq)
    if exact:
        off = (alpha - gamma) / n
        rows = [[gamma + off if i == j else off for j in range(n)] for i in range(n)]
        claimed: Number = alpha * gamma ** (n - 1)
    else:
        a = float(alpha)
        off = (a - gamma) / n
        rows = [[gamma + off if i == j else off for j in range(n)] for i in range(n)]
        claimed = math.copysign(power_product((abs(alpha), 1), (gamma_sq, (n - 1) / 2)), a)
    logger.debug(f"Сдвинутая конструкция n={n}, alpha={alpha}, beta={beta}, gamma={gamma!r}")
    return ExtremalRecipe(
        n=n,
        alpha=alpha,
        beta=beta,
        variant=Variant.SHIFTED_IDENTITY,
        gamma=gamma,
        matrix=Matrix(rows, is_exact=exact),
        claimed_det=claimed,
        exact=exact,
    )


def _rotation_block(alpha: Fraction, beta: Fraction) -> Tuple[List[List[Number]], bool]:
    """Блок 2x2 [[alpha, w], [-w, alpha]], w = sqrt(beta - alpha^2), det = beta."""
    w, exact = _sqrt(beta - alpha * alpha)
    a: Number = alpha if exact else float(alpha)
    return [[a, w], [-w, a]], exact


def _three_block(alpha: Fraction, beta: Fraction) -> Tuple[List[List[Number]], Number, bool]:
    """
    Блок 3x3 sqrt(beta) [[g, h, 0], [-h, g, 0], [0, 0, 1]],
    g = (3 alpha / sqrt(beta) - 1)/2, h = sqrt(1 - g^2); det = beta^(3/2).
    """
    root_beta, exact_b = _sqrt(beta)
    if exact_b:
        g: Number = (3 * alpha / root_beta - 1) / 2
        h, exact_h = _sqrt(1 - g * g)
        exact = exact_h
        if not exact:
            g, root_beta = float(g), float(root_beta)
    else:
        g = (3 * float(alpha) / root_beta - 1) / 2
        h = math.sqrt(max(1 - g * g, 0.0))
        exact = False
    zero: Number = Fraction(0) if exact else 0.0
    block = [
        [root_beta * g, root_beta * h, zero],
        [-root_beta * h, root_beta * g, zero],
        [zero, zero, root_beta],
    ]
    return block, g, exact


def construct_orthogonal(n: int, alpha: Any, beta: Any) -> ExtremalRecipe:
    """
    Блочно-диагональная матрица с M M^T = beta I и det M = beta^(n/2).

    Чётное n: n/2 блоков 2x2. Нечётное n = 2k+1: k-1 блоков 2x2 и один блок 3x3.
    При alpha < 0 строится матрица для -alpha и берётся со знаком минус;
    при нечётном n дополнительно меняются местами первые две строки.

    Args:
        n: Размерность.
        alpha: Целевое среднее s(M)/n.
        beta: Целевое среднее q(M)/n (> 0).

    Returns:
        ExtremalRecipe: Матрица, параметр 3x3-блока (для нечётного n) и beta^(n/2).

    Raises:
        InvalidMatrix: Если n < 2.
        InfeasiblePair: Если alpha^2 > beta.
    """
    _check_n(n)
    alpha, beta = to_fraction(alpha), to_fraction(beta)
    _check_pair(alpha, beta, beta, "orthogonal")
    negated = alpha < 0
    base_alpha = -alpha if negated else alpha

    blocks: List[List[List[Number]]] = []
    exact = True
    gamma: Optional[Number] = None
    pairs = n // 2 if n % 2 == 0 else (n - 3) // 2
    if pairs:
        block, exact_a = _rotation_block(base_alpha, beta)
        exact = exact and exact_a
        blocks.extend([block] * pairs)
    if n % 2 == 1:
        block, gamma, exact_b = _three_block(base_alpha, beta)
        exact = exact and exact_b
        blocks.append(block)

    matrix = Matrix.block_diagonal(blocks, is_exact=exact)
    rows_swapped = False
    if negated:
        matrix = matrix.negate()
        if n % 2 == 1:
            matrix = matrix.swap_rows(0, 1)
            rows_swapped = True

    root, beta_exact = _sqrt(beta)
    if beta_exact and n % 2 == 1:
        claimed: Number = root**n
    elif n % 2 == 0:
        claimed = beta ** (n // 2)
    else:
        claimed = power_product((beta, n / 2))
    logger.debug(
        f"Ортогональная конструкция n={n}, alpha={alpha}, beta={beta}, "
        f"точная={exact}, отрицание={negated}"
    )
    return ExtremalRecipe(
        n=n,
        alpha=alpha,
        beta=beta,
        variant=Variant.ORTHOGONAL_BLOCKS,
        gamma=gamma,
        matrix=matrix,
        claimed_det=claimed,
        exact=exact,
        negated=negated,
        rows_swapped=rows_swapped,
    )


def recipe_det(recipe: ExtremalRecipe) -> Number:
    """Детерминант построенной матрицы: точный для точных рецептов, иначе float."""
    if recipe.exact:
        return det_exact(recipe.matrix)
    return det_float(recipe.matrix)


def _gap(value: float, target: float) -> float:
    if value == target:
        return 0.0
    return abs(value - target)


def verify_characterization(m: Matrix, tol: float = 1e-9) -> CharacterizationReport:
    """
    Проверяет необходимые условия максимальности детерминанта в M_{alpha,beta}.

    alpha^2 <= beta: M M^T = beta I и det M = beta^(n/2).
    alpha^2 >= beta: суммы строк и столбцов равны alpha,
    M M^T = (beta - delta) I + delta J и det M = |alpha| (beta - delta)^((n-1)/2),
    где delta = (alpha^2 - beta)/(n-1). При alpha^2 = beta проверяются оба режима.
    Детерминант сравнивается со знаком: у максимизатора он положителен.
    Максимальность матрицы отчёт не утверждает.

    Args:
        m: Проверяемая матрица.
        tol: Допуск на абсолютное отклонение каждого тождества (поэлементно).

    Returns:
        CharacterizationReport: Флаги по каждому условию и наибольшее абсолютное отклонение.
    """
    if not tol > 0:
        raise ValueError(f"tol должен быть положительным, получено {tol}")
    stats = entry_stats(m)
    n = stats.n
    alpha, beta = stats.alpha, stats.beta
    delta = (alpha * alpha - beta) / (n - 1)

    values = m.to_numpy()
    gram = values @ values.T
    det = to_float(det_exact(m))
    identity = np.eye(n)
    b = float(beta)

    residuals: List[float] = []
    regimes: List[str] = []
    gram_ok = True
    det_ok = True
    rowsum_ok: Optional[bool] = None
    colsum_ok: Optional[bool] = None

    if stats.case_tag in (CaseTag.ALPHA_SQ_LT_BETA, CaseTag.ALPHA_SQ_EQ_BETA):
        regimes.append("orthogonal")
        gram_residual = float(np.max(np.abs(gram - b * identity)))
        det_residual = _gap(det, power_product((beta, n / 2)))
        residuals += [gram_residual, det_residual]
        gram_ok = gram_ok and gram_residual <= tol
        det_ok = det_ok and det_residual <= tol

    if stats.case_tag in (CaseTag.ALPHA_SQ_GT_BETA, CaseTag.ALPHA_SQ_EQ_BETA):
        regimes.append("shifted")
        a = float(alpha)
        row_sums = np.array([to_float(sum(m.row(i))) for i in range(n)])
        col_sums = np.array([to_float(sum(m.column(j))) for j in range(n)])
        row_residual = float(np.max(np.abs(row_sums - a)))
        col_residual = float(np.max(np.abs(col_sums - a)))
        d = float(delta)
        target = (b - d) * identity + d * np.ones((n, n))
        gram_residual = float(np.max(np.abs(gram - target)))
        # beta - delta = kappa
        det_residual = _gap(det, power_product((abs(alpha), 1), (stats.kappa, (n - 1) / 2)))
        residuals += [row_residual, col_residual, gram_residual, det_residual]
        rowsum_ok = row_residual <= tol
        colsum_ok = col_residual <= tol
        gram_ok = gram_ok and gram_residual <= tol
        det_ok = det_ok and det_residual <= tol

    report = CharacterizationReport(
        delta=delta,
        rowsum_ok=rowsum_ok,
        colsum_ok=colsum_ok,
        gram_ok=gram_ok,
        det_ok=det_ok,
        max_residual=max(residuals),
        regimes=tuple(regimes),
    )
    logger.debug(f"Проверка характеризации: режимы {regimes}, отклонение {report.max_residual!r}")
    return report
