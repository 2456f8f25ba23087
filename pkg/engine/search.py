"""
Поиск максимального |det| среди матриц, элементы которых образуют заданное
мультимножество: полный перебор с симметрийной редукцией и отжиг.
"""

import itertools
import math
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from engine.bounds import gasper_bound, progression_bound, progression_entries
from engine.linalg import det_int
from models.exceptions import InvalidMatrix, SearchSpaceTooLarge
from models.models import (
    Matrix,
    ProgressionMode,
    RatioRow,
    SearchMode,
    SearchProblem,
    SearchResult,
)
from utils import config
from utils.logger import get_logger

# Тихая настройка логгера для модуля
logger = get_logger(__name__)

# Результат задачи: (|det| в целых, ключ расстановки в индексах значений, число листьев)
TaskResult = Tuple[int, Optional[Tuple[int, ...]], int]


def _scaled(entries: Sequence[Fraction]) -> Tuple[List[int], List[int], int]:
    """
    Переводит мультимножество в целые: значения умножаются на НОК знаменателей.

    Returns:
        (различные значения по возрастанию, их кратности, множитель L).
    """
    scale = 1
    for v in entries:
        scale = math.lcm(scale, v.denominator)
    counter = Counter(int(v * scale) for v in entries)
    values = sorted(counter)
    return values, [counter[v] for v in values], scale


def search_space_size(entries: Sequence[Fraction], n: int, reduce_symmetry: bool = True) -> int:
    """
    Точное число перебираемых расстановок.

    С редукцией: наибольший элемент стоит в (1,1), остаток первой строки и
    остаток первого столбца не убывают, внутренняя часть (n-1)^2 произвольна.
    Без редукции: число различных перестановок мультимножества.

    Args:
        entries: Мультимножество из n^2 элементов.
        n: Размерность.
        reduce_symmetry: Учитывать ли симметрийную редукцию.

    Returns:
        int: Число расстановок.
    """
    counts = sorted(Counter(entries).items())
    if not reduce_symmetry:
        total = math.factorial(n * n)
        for _, m in counts:
            total //= math.factorial(m)
        return total

    multiplicities = [m for _, m in counts]
    multiplicities[-1] -= 1  # наибольший элемент закреплён в (1,1)
    k = n - 1
    # Веса: сумма по выборам строки и столбца произведений 1/c_v! для внутренней части
    weights: Dict[Tuple[int, int], Fraction] = {(0, 0): Fraction(1)}
    for m in multiplicities:
        updated: Dict[Tuple[int, int], Fraction] = {}
        for (row_taken, col_taken), w in weights.items():
            for a in range(0, min(m, k - row_taken) + 1):
                for b in range(0, min(m - a, k - col_taken) + 1):
                    key = (row_taken + a, col_taken + b)
                    updated[key] = updated.get(key, Fraction(0)) + w / math.factorial(m - a - b)
        weights = updated
    total = weights.get((k, k), Fraction(0)) * math.factorial(k * k)
    return int(total)


def orbit_min(key: Sequence[int], n: int) -> Tuple[int, ...]:
    """
    Лексикографически наименьшая построчная запись среди матриц, получаемых
    перестановками строк, перестановками столбцов и транспонированием.

    При фиксированном порядке столбцов наименьшая запись получается
    сортировкой строк, поэтому достаточно перебрать n! порядков столбцов
    для матрицы и для её транспонированной.

    Example:
        >>> orbit_min((3, 0, 1, 2), 2)
        (0, 2, 3, 1)
    """
    rows = [tuple(key[i * n:(i + 1) * n]) for i in range(n)]
    best: Optional[Tuple[int, ...]] = None
    for grid in (rows, list(zip(*rows))):
        for order in itertools.permutations(range(n)):
            arranged = sorted(tuple(row[j] for j in order) for row in grid)
            flat = tuple(v for row in arranged for v in row)
            if best is None or flat < best:
                best = flat
    return best


class _ArrangementWalker:
    """
    Обход канонических расстановок в построчном порядке с подсчётом лучшего |det|.

    Каждая оптимальная расстановка заменяется наименьшим представителем своей
    орбиты (orbit_min), и из них хранится наименьший: так итог совпадает с
    лексикографически наименьшей оптимальной расстановкой среди всех, а не
    только канонических.
    """

    def __init__(self, n: int, values: Sequence[int], reduce_symmetry: bool) -> None:
        self.n = n
        self.nn = n * n
        self.values = list(values)
        self.reduce = reduce_symmetry
        self.cells: List[int] = [0] * self.nn
        self.best = -1
        self.best_key: Optional[Tuple[int, ...]] = None
        self.leaves = 0

    def _lower_index(self, pos: int) -> int:
        if not self.reduce:
            return 0
        i, j = divmod(pos, self.n)
        if i == 0 and j >= 2:
            return self.cells[pos - 1]
        if j == 0 and i >= 2:
            return self.cells[pos - self.n]
        return 0

    def prefixes(self, counts: List[int]) -> List[Tuple[int, ...]]:
        """Все допустимые первые строки (задачи для параллельного перебора)."""
        found: List[Tuple[int, ...]] = []

        def walk(pos: int) -> None:
            if pos == self.n:
                found.append(tuple(self.cells[: self.n]))
                return
            if self.reduce and pos == 0:
                candidates = [len(self.values) - 1]
            else:
                candidates = range(self._lower_index(pos), len(self.values))
            for k in candidates:
                if counts[k]:
                    counts[k] -= 1
                    self.cells[pos] = k
                    walk(pos + 1)
                    counts[k] += 1

        walk(0)
        return found

    def run(self, prefix: Tuple[int, ...], counts: List[int]) -> TaskResult:
        self.cells[: len(prefix)] = list(prefix)
        self._walk(len(prefix), counts)
        return self.best, self.best_key, self.leaves

    def _walk(self, pos: int, counts: List[int]) -> None:
        if pos == self.nn:
            self.leaves += 1
            n, values, cells = self.n, self.values, self.cells
            rows = [[values[k] for k in cells[i * n:(i + 1) * n]] for i in range(n)]
            d = abs(det_int(rows))
            if d > self.best:
                self.best = d
                self.best_key = orbit_min(cells, n)
            elif d == self.best:
                key = orbit_min(cells, n)
                if key < self.best_key:
                    self.best_key = key
            return
        for k in range(self._lower_index(pos), len(self.values)):
            if counts[k]:
                counts[k] -= 1
                self.cells[pos] = k
                self._walk(pos + 1, counts)
                counts[k] += 1


def _run_task(args: Tuple[int, List[int], bool, Tuple[int, ...], List[int]]) -> TaskResult:
    """Одна задача перебора: все продолжения заданной первой строки."""
    n, values, reduce_symmetry, prefix, counts = args
    walker = _ArrangementWalker(n, values, reduce_symmetry)
    return walker.run(prefix, list(counts))


def _merge(results: Sequence[TaskResult]) -> TaskResult:
    """Максимум |det| с выбором лексикографически меньшего ключа при равенстве."""
    best, best_key, leaves = -1, None, 0
    for value, key, count in results:
        leaves += count
        if key is None:
            continue
        if value > best or (value == best and key < best_key):
            best, best_key = value, key
    return best, best_key, leaves


def _result(
    problem: SearchProblem,
    values: Sequence[int],
    scale: int,
    best: int,
    flat: Sequence[int],
    leaves: int,
    certificate: bool,
) -> SearchResult:
    n = problem.n
    matrix = Matrix.from_flat([Fraction(values[k], scale) for k in flat], n)
    best_abs_det = Fraction(best, scale**n)
    upper_bound = gasper_bound(matrix).bound
    if float(best_abs_det) > upper_bound * (1 + 1e-9):
        logger.warning(
            f"Найденный |det| = {best_abs_det} превышает оценку {upper_bound!r}: проверьте вход"
        )
    ratio = float(best_abs_det) / upper_bound if upper_bound > 0 else 0.0
    return SearchResult(
        best_matrix=matrix,
        best_abs_det=best_abs_det,
        upper_bound=upper_bound,
        ratio=ratio,
        nodes_visited=leaves,
        exhaustive_certificate=certificate,
        mode=problem.mode,
    )


def exhaustive_max_det(
    problem: SearchProblem,
    workers: Optional[int] = None,
    reduce_symmetry: bool = True,
    limit: Optional[int] = None,
) -> SearchResult:
    """
    Точный максимум |det| по всем расстановкам мультимножества.

    Пространство делится на задачи по первой строке; результаты задач
    сливаются взятием максимума с лексикографическим выбором при равенстве,
    поэтому ответ не зависит от числа процессов.

    Args:
        problem: Размерность и мультимножество элементов.
        workers: Число процессов (по умолчанию SEARCH_WORKERS).
        reduce_symmetry: Перебирать только канонические расстановки.
        limit: Предел размера пространства (по умолчанию SEARCH_SPACE_LIMIT).

    Returns:
        SearchResult: Лучшая матрица, |det|, оценка и число обойдённых расстановок.

    Raises:
        SearchSpaceTooLarge: Если число расстановок больше предела.
    """
    n = problem.n
    workers = workers or config.SEARCH_WORKERS
    limit = limit or config.SEARCH_SPACE_LIMIT
    size = search_space_size(problem.entries, n, reduce_symmetry)
    if size > limit:
        logger.warning(f"Пространство перебора {size} больше лимита {limit}")
        raise SearchSpaceTooLarge(size, limit)

    values, counts, scale = _scaled(problem.entries)
    planner = _ArrangementWalker(n, values, reduce_symmetry)
    prefixes = planner.prefixes(list(counts))
    tasks = []
    for prefix in prefixes:
        remaining = list(counts)
        for k in prefix:
            remaining[k] -= 1
        tasks.append((n, values, reduce_symmetry, prefix, remaining))

    logger.debug(f"Перебор n={n}: {size} расстановок, {len(tasks)} задач, процессов {workers}")
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        results = [_run_task(task) for task in tasks]

    best, best_key, leaves = _merge(results)
    result = _result(problem, values, scale, best, best_key, leaves, certificate=True)
    logger.info(
        f"Перебор n={n} завершён: |det| = {result.best_abs_det}, оценка {result.upper_bound:.6g}, "
        f"расстановок {leaves}"
    )
    return result


def _swap_candidates(cells: Sequence[int]) -> List[Tuple[int, int]]:
    return [
        (i, j)
        for i in range(len(cells))
        for j in range(i + 1, len(cells))
        if cells[i] != cells[j]
    ]


def anneal_max_det(
    problem: SearchProblem,
    t_start: float = 0.1,
    t_end: float = 1e-4,
) -> SearchResult:
    """
    Отжиг по перестановкам элементов: ход меняет местами два элемента.

    Изменение |det| нормируется на верхнюю оценку; температура убывает
    геометрически от t_start до t_end за iteration_budget шагов. После отжига
    лучшая расстановка доводится жадно до локального максимума по всем
    транспозициям. При фиксированном seed результат воспроизводим.

    Args:
        problem: Мультимножество, seed и бюджет итераций.
        t_start: Начальная температура.
        t_end: Конечная температура.

    Returns:
        SearchResult: Лучшая найденная матрица (без сертификата оптимальности).
    """
    n, nn = problem.n, problem.n * problem.n
    seed = problem.seed if problem.seed is not None else config.ANNEAL_SEED
    budget = problem.iteration_budget or config.ANNEAL_BUDGET
    rng = random.Random(seed)

    values, counts, scale = _scaled(problem.entries)
    cells = [k for k, c in enumerate(counts) for _ in range(c)]
    rng.shuffle(cells)

    def abs_det(state: Sequence[int]) -> int:
        return abs(det_int([[values[k] for k in state[i * n:(i + 1) * n]] for i in range(n)]))

    sample = Matrix.from_flat([Fraction(values[k], scale) for k in cells], n)
    norm = gasper_bound(sample).bound * scale**n
    norm = norm if norm > 0 else 1.0

    current = abs_det(cells)
    best, best_cells = current, list(cells)
    steps = 0
    if len(counts) > 1:
        cooling = (t_end / t_start) ** (1.0 / budget)
        temperature = t_start
        for _ in range(budget):
            steps += 1
            i, j = rng.randrange(nn), rng.randrange(nn)
            if cells[i] != cells[j]:
                cells[i], cells[j] = cells[j], cells[i]
                candidate = abs_det(cells)
                delta = (candidate - current) / norm
                if delta >= 0 or rng.random() < math.exp(delta / temperature):
                    current = candidate
                    if current > best or (current == best and cells < best_cells):
                        best, best_cells = current, list(cells)
                else:
                    cells[i], cells[j] = cells[j], cells[i]
            temperature *= cooling

        # Жадная доводка до локального максимума
        improved = True
        while improved:
            improved = False
            for i, j in _swap_candidates(best_cells):
                best_cells[i], best_cells[j] = best_cells[j], best_cells[i]
                candidate = abs_det(best_cells)
                steps += 1
                if candidate > best:
                    best = candidate
                    improved = True
                else:
                    best_cells[i], best_cells[j] = best_cells[j], best_cells[i]

    result = _result(problem, values, scale, best, best_cells, steps, certificate=False)
    logger.info(
        f"Отжиг n={n}, seed={seed}, бюджет {budget}: |det| = {result.best_abs_det}, "
        f"отношение к оценке {result.ratio:.6f}"
    )
    return result


def run_search(problem: SearchProblem, workers: Optional[int] = None) -> SearchResult:
    """Запуск поиска в режиме, указанном в задаче."""
    if problem.mode is SearchMode.EXHAUSTIVE:
        return exhaustive_max_det(problem, workers=workers)
    return anneal_max_det(problem)


def ratio_table(
    n_max: int,
    family: ProgressionMode,
    seed: Optional[int] = None,
    budget: Optional[int] = None,
    exhaustive_limit: Optional[int] = None,
    workers: Optional[int] = None,
) -> List[RatioRow]:
    """
    Таблица (n, лучший |det|, оценка, отношение, сертификат) для n = 2..n_max.

    Элементы: 1, ..., n^2 (FULL_SQUARE) или 1, ..., n по n раз (REPEATED).
    Ячейка перебирается полностью, если пространство не больше
    exhaustive_limit, иначе заполняется отжигом и помечается certificate=False.
    """
    if n_max < 2:
        raise InvalidMatrix(f"n_max должен быть не меньше 2, получено {n_max}")
    exhaustive_limit = exhaustive_limit or config.RATIO_TABLE_EXHAUSTIVE_LIMIT
    rows: List[RatioRow] = []
    for n in range(2, n_max + 1):
        entries = progression_entries(n, 1, 1, family)
        bound = progression_bound(n, 1, 1, family).bound
        size = search_space_size(entries, n)
        if size <= exhaustive_limit:
            problem = SearchProblem(n=n, entries=tuple(entries), mode=SearchMode.EXHAUSTIVE)
            result = exhaustive_max_det(problem, workers=workers, limit=exhaustive_limit)
        else:
            problem = SearchProblem(
                n=n,
                entries=tuple(entries),
                mode=SearchMode.ANNEAL,
                seed=seed if seed is not None else config.ANNEAL_SEED,
                iteration_budget=budget or config.ANNEAL_BUDGET,
            )
            result = anneal_max_det(problem)
        rows.append(
            RatioRow(
                n=n,
                best=result.best_abs_det,
                bound=bound,
                ratio=float(result.best_abs_det) / bound,
                certificate=result.exhaustive_certificate,
            )
        )
    return rows


def max_excess_hadamard(n: int) -> Tuple[Optional[Matrix], Optional[int]]:
    """
    Матрица Адамара порядка n с наибольшим избытком s(M) (полный перебор).

    Строки выбираются из векторов +-1 по неубыванию номера с попарной
    ортогональностью. Для порядков без матриц Адамара возвращается (None, None).

    Raises:
        SearchSpaceTooLarge: Если n > 4.
    """
    if n < 2:
        raise InvalidMatrix(f"размерность должна быть не меньше 2, получено {n}")
    if n > 4:
        raise SearchSpaceTooLarge(2 ** (n * n), 2**16)
    vectors = list(itertools.product((-1, 1), repeat=n))
    sums = [sum(v) for v in vectors]
    best: Optional[int] = None
    best_rows: Optional[List[int]] = None
    chosen: List[int] = []

    def orthogonal(a: int, b: int) -> bool:
        return sum(x * y for x, y in zip(vectors[a], vectors[b])) == 0

    def walk(start: int) -> None:
        nonlocal best, best_rows
        if len(chosen) == n:
            excess = sum(sums[k] for k in chosen)
            if best is None or excess > best:
                best, best_rows = excess, list(chosen)
            return
        for k in range(start, len(vectors)):
            if all(orthogonal(k, c) for c in chosen):
                chosen.append(k)
                walk(k + 1)
                chosen.pop()

    walk(0)
    if best_rows is None:
        return None, None
    return Matrix([vectors[k] for k in best_rows]), best
