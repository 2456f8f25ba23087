"""
Оценки детерминанта через s(M) и q(M): основная трёхслучайная оценка,
оценка для комплексных матриц и прикладные оценки (Адамар, Бест, Райзер,
Брент-Осборн-Смит, детерминант и след, арифметические прогрессии).
"""

import math
from fractions import Fraction
from typing import Any, List

from engine.linalg import classify, det_exact, entry_stats, power_product, to_float
from models.exceptions import (
    DimensionMismatch,
    EpsilonCapExceeded,
    InfeasiblePair,
    InvalidMatrix,
    NonpositiveBeta,
    NonpositiveStep,
    NotBinaryMatrix,
    NotSignMatrix,
)
from models.models import (
    BoundReport,
    BrentInput,
    CaseTag,
    ComplexBoundReport,
    EntryStats,
    ExcessCheck,
    FormulaTag,
    Matrix,
    ProgressionBound,
    ProgressionMode,
    RelateGap,
    RyserInput,
    TraceDetCheck,
    to_fraction,
)
from utils.logger import get_logger

# Тихая настройка логгера для модуля
logger = get_logger(__name__)


def _power(x: Fraction, exponent: float) -> float:
    """x^exponent в double для неотрицательного x."""
    return power_product((x, exponent))


def alpha_kappa_value(stats: EntryStats) -> float:
    """
    |alpha| kappa^((n-1)/2) независимо от случая.

    При alpha^2 < beta это выражение не является оценкой |det M|
    (например, для diag(1, -1) оно равно 0).
    """
    return power_product((abs(stats.alpha), 1), (stats.kappa, (stats.n - 1) / 2))


def bound_from_stats(stats: EntryStats) -> BoundReport:
    """Трёхслучайная оценка по готовым статистикам."""
    n = stats.n
    beta_power = _power(stats.beta, n / 2)
    alpha_kappa = alpha_kappa_value(stats)
    if stats.case_tag is CaseTag.ALPHA_SQ_LT_BETA:
        bound, tag = beta_power, FormulaTag.BETA_POWER
    else:
        # При alpha^2 = beta обе формулы совпадают точно; min убирает шум округления
        bound, tag = min(alpha_kappa, beta_power), FormulaTag.ALPHA_KAPPA
    return BoundReport(
        stats=stats,
        bound=bound,
        formula_tag=tag,
        beta_power=beta_power,
        feasible=stats.alpha * stats.alpha <= n * stats.beta,
        alpha_kappa=alpha_kappa,
    )


def gasper_bound(m: Matrix) -> BoundReport:
    """
    Верхняя оценка |det M| по alpha = s(M)/n и beta = q(M)/n.

    alpha^2 < beta: beta^(n/2); иначе |alpha| kappa^((n-1)/2).

    Args:
        m: Матрица.

    Returns:
        BoundReport: Значение оценки, сработавшая формула и beta^(n/2) для сравнения.

    Example:
        >>> round(gasper_bound(Matrix([[1, 2], [2, 3]])).bound ** 2, 9)
        32.0
    """
    report = bound_from_stats(entry_stats(m))
    logger.debug(
        f"Оценка для n={m.n}: {report.formula_tag.value} = {report.bound!r} "
        f"(beta^(n/2) = {report.beta_power!r})"
    )
    return report


def _complex_orientation(s_real: Fraction, beta: Fraction, n: int):
    alpha = s_real / n
    kappa = (2 * n * beta - alpha * alpha) / (2 * n - 1)
    beta_power = _power(beta, n / 2)
    if classify(alpha, beta) is CaseTag.ALPHA_SQ_LT_BETA:
        return alpha, kappa, beta_power, FormulaTag.BETA_POWER
    value = power_product((abs(alpha), 1 / 2), (kappa, (2 * n - 1) / 4))
    return alpha, kappa, min(value, beta_power), FormulaTag.ALPHA_KAPPA


def complex_bound(a: Matrix, b: Matrix) -> ComplexBoundReport:
    """
    Оценка |det(A + iB)| через вещественное вложение 2n x 2n.

    Считаются обе ориентации: A + iB и B + iA (|det(A + iB)| = |det(B + iA)|),
    в качестве итоговой берётся меньшая.

    Args:
        a: Вещественная часть.
        b: Мнимая часть.

    Returns:
        ComplexBoundReport: Обе оценки и их минимум.

    Raises:
        DimensionMismatch: Если размеры A и B различаются.
    """
    if a.n != b.n:
        logger.warning(f"Размеры A ({a.n}) и B ({b.n}) не совпадают")
        raise DimensionMismatch(f"размеры A ({a.n}) и B ({b.n}) не совпадают")
    n = a.n
    stats_a, stats_b = entry_stats(a), entry_stats(b)
    beta = (stats_a.q + stats_b.q) / n
    alpha, kappa, direct, tag_direct = _complex_orientation(stats_a.s, beta, n)
    alpha_sw, kappa_sw, swapped, tag_swapped = _complex_orientation(stats_b.s, beta, n)
    return ComplexBoundReport(
        alpha=alpha,
        beta=beta,
        kappa=kappa,
        bound_direct=direct,
        bound_swapped=swapped,
        bound=min(direct, swapped),
        alpha_swapped=alpha_sw,
        kappa_swapped=kappa_sw,
        formula_direct=tag_direct,
        formula_swapped=tag_swapped,
    )


def hadamard_row_bound(m: Matrix) -> float:
    """Оценка Адамара: произведение евклидовых норм строк."""
    return math.prod(math.sqrt(to_float(sum(v * v for v in row))) for row in m.rows)


def entry_cap_bound(n: int, gamma: Any) -> float:
    """
    Оценка gamma^n n^(n/2) для матриц с |M_ij| <= gamma.

    Следует из beta <= gamma^2; при gamma = 1 это неравенство Адамара n^(n/2).
    """
    gamma = to_fraction(gamma)
    if gamma < 0:
        raise InvalidMatrix(f"gamma должна быть неотрицательной, получено {gamma}")
    if n < 2:
        raise InvalidMatrix(f"размерность должна быть не меньше 2, получено {n}")
    return power_product((gamma, n), (Fraction(n), n / 2))


def best_excess_check(m: Matrix) -> ExcessCheck:
    """
    Неравенство Беста: для матрицы Адамара порядка n избыток s(M) <= n sqrt(n).

    Args:
        m: Матрица из элементов +-1.

    Returns:
        ExcessCheck: Признак матрицы Адамара (M M^T = nI точно), избыток и n^(3/2).

    Raises:
        NotSignMatrix: Если есть элемент, отличный от +-1.
    """
    for i, row in enumerate(m.rows):
        for j, v in enumerate(row):
            if v not in (1, -1):
                raise NotSignMatrix(f"элемент ({i + 1}, {j + 1}) = {v} не равен +-1")
    n = m.n
    stats = entry_stats(m)
    is_hadamard = m.gram() == Matrix.identity(n).scale(n)
    return ExcessCheck(
        is_hadamard=is_hadamard,
        excess=stats.s,
        bound=n**1.5,
        alpha_sq_le_beta=stats.alpha * stats.alpha <= stats.beta,
    )


def ryser_input_from_matrix(m: Matrix) -> RyserInput:
    """Параметры (n, t) для 0/1-матрицы."""
    for i, row in enumerate(m.rows):
        for j, v in enumerate(row):
            if v not in (0, 1):
                raise NotBinaryMatrix(f"элемент ({i + 1}, {j + 1}) = {v} не равен 0 или 1")
    return RyserInput(n=m.n, t=int(entry_stats(m).s))


def ryser_bound(inp: RyserInput) -> float:
    """
    Оценка Райзера для 0/1-матриц с t единицами, k = t/n.

    t < n: k^(n/2); t = n: 1; t > n: k^((n+1)/2) ((n-k)/(n-1))^((n-1)/2).
    """
    n, t, k = inp.n, inp.t, inp.k
    if t < n:
        return _power(k, n / 2)
    if t == n:
        return 1.0
    return power_product((k, (n + 1) / 2), ((n - k) / (n - 1), (n - 1) / 2))


def brent_input_from_matrix(m: Matrix, epsilon: Any) -> BrentInput:
    """
    Параметры для M = I - E: проверяет |E_ij| <= eps и определяет нулевую диагональ E.

    Raises:
        EpsilonCapExceeded: Если какой-то элемент E превышает eps по модулю.
    """
    epsilon = to_fraction(epsilon)
    n = m.n
    zero_diagonal = True
    for i, row in enumerate(m.rows):
        for j, v in enumerate(row):
            e = (1 if i == j else 0) - v
            if abs(e) > epsilon:
                raise EpsilonCapExceeded(
                    f"|E_({i + 1},{j + 1})| = {abs(e)} больше eps = {epsilon}"
                )
            if i == j and e != 0:
                zero_diagonal = False
    return BrentInput(n=n, epsilon=epsilon, zero_diagonal=zero_diagonal)


def brent_bound(inp: BrentInput) -> float:
    """
    Оценки Брента-Осборна-Смита для |det(I - E)| при |E_ij| <= eps.

    Общий случай: (1 + 2 eps + n eps^2)^(n/2);
    нулевая диагональ E: (1 + (n-1) eps^2)^(n/2).
    """
    n, eps = inp.n, inp.epsilon
    if inp.zero_diagonal:
        base = 1 + (n - 1) * eps * eps
    else:
        base = 1 + 2 * eps + n * eps * eps
    return _power(base, n / 2)


def trace_det_check(m: Matrix) -> TraceDetCheck:
    """
    (det A)^(2/n) <= tr(A A^T)/n в возведённой в степень n форме:
    (det A)^2 <= (q(A)/n)^n. Положительная определённость не требуется.
    """
    n = m.n
    lhs = det_exact(m) ** 2
    rhs = (entry_stats(m).q / n) ** n
    return TraceDetCheck(lhs=to_float(lhs), rhs=to_float(rhs), holds=lhs <= rhs, lhs_exact=lhs, rhs_exact=rhs)


def progression_entries(n: int, p: Any, q: Any, mode: ProgressionMode) -> List[Fraction]:
    """
    Мультимножество элементов семейства.

    FULL_SQUARE: p, p+q, ..., p+(n^2-1)q; REPEATED: каждое из p, ..., p+(n-1)q по n раз.
    """
    p, q = to_fraction(p), to_fraction(q)
    if mode is ProgressionMode.FULL_SQUARE:
        return [p + k * q for k in range(n * n)]
    return [p + k * q for k in range(n) for _ in range(n)]


def progression_bound(n: int, p: Any, q: Any, mode: ProgressionMode) -> ProgressionBound:
    """
    Оценка для матриц, элементы которых образуют арифметическую прогрессию.

    Args:
        n: Размерность.
        p: Начало прогрессии.
        q: Шаг прогрессии (q > 0).
        mode: FULL_SQUARE (перестановка n^2 членов) или REPEATED (n членов по n раз).

    Returns:
        ProgressionBound: r, rho, sigma и оценка: sigma^(n/2) при r^2 < rho,
        иначе n^n q^n |r| rho^((n-1)/2).

    Raises:
        NonpositiveStep: Если q <= 0.
    """
    p, q = to_fraction(p), to_fraction(q)
    if q <= 0:
        logger.warning(f"Неположительный шаг прогрессии q={q}")
        raise NonpositiveStep(f"шаг прогрессии q должен быть положительным, получено {q}")
    if n < 2:
        raise InvalidMatrix(f"размерность должна быть не меньше 2, получено {n}")
    if mode is ProgressionMode.FULL_SQUARE:
        r = p / q + Fraction(n * n - 1, 2)
        rho = Fraction(n**3 + n**2 + n + 1, 12)
        sigma = n * q * q * (r * r + Fraction(n**4 - 1, 12))
    else:
        r = p / q + Fraction(n - 1, 2)
        rho = Fraction(n + 1, 12)
        sigma = n * q * q * (r * r + Fraction(n * n - 1, 12))
    if r * r < rho:
        bound, tag = _power(sigma, n / 2), FormulaTag.BETA_POWER
    else:
        value = power_product((Fraction(n) * q, n), (abs(r), 1), (rho, (n - 1) / 2))
        bound, tag = min(value, _power(sigma, n / 2)), FormulaTag.ALPHA_KAPPA
    return ProgressionBound(
        n=n, p=p, q=q, mode=mode, r=r, rho=rho, sigma=sigma, bound=bound, formula_tag=tag
    )


def relate_gap(alpha: Any, beta: Any, n: int) -> RelateGap:
    """
    Сравнение |alpha| ((n beta - alpha^2)/(n-1))^((n-1)/2) и beta^(n/2).

    Левая часть не больше правой, равенство ровно при alpha^2 = beta
    (проверяется точно).

    Raises:
        InvalidMatrix: Если n < 2.
        NonpositiveBeta: Если beta <= 0.
        InfeasiblePair: Если alpha^2 > n beta.
    """
    if n < 2:
        raise InvalidMatrix(f"размерность должна быть не меньше 2, получено {n}")
    alpha, beta = to_fraction(alpha), to_fraction(beta)
    if beta <= 0:
        raise NonpositiveBeta(f"beta должна быть положительной, получено {beta}")
    if alpha * alpha > n * beta:
        logger.debug(f"Недопустимая пара alpha={alpha}, beta={beta}, n={n}")
        raise InfeasiblePair(f"alpha^2 = {alpha * alpha} > n*beta = {n * beta}")
    rhs = _power(beta, n / 2)
    equal = alpha * alpha == beta
    if equal:
        lhs = rhs
    else:
        lhs = power_product((abs(alpha), 1), ((n * beta - alpha * alpha) / (n - 1), (n - 1) / 2))
        lhs = min(lhs, rhs)
    return RelateGap(lhs=lhs, rhs=rhs, equal=equal)
