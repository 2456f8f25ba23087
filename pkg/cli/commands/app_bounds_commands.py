from fractions import Fraction
from typing import Any, Dict, Optional

import click

from cli.commands.utils import RATIONAL, emit_report, handle_errors
from engine.bounds import (
    best_excess_check,
    brent_bound,
    brent_input_from_matrix,
    entry_cap_bound,
    ryser_bound,
    ryser_input_from_matrix,
    trace_det_check,
)
from engine.linalg import det_exact
from models.exceptions import DetBoundError
from models.models import BrentInput, Matrix, RyserInput
from utils.logger import get_logger
from utils.matrix_io import read_matrix

# Тихая настройка логгера для модуля
logger = get_logger(__name__)

KINDS = ("ryser", "brent", "best", "trace", "entry-cap")


def _require(value: Any, flag: str, kind: str) -> Any:
    if value is None:
        raise click.UsageError(f"{kind}: нужен параметр {flag} или --input")
    return value


def _evaluate(
    kind: str,
    m: Optional[Matrix],
    n: Optional[int],
    t: Optional[int],
    epsilon: Optional[Fraction],
    zero_diagonal: bool,
    gamma: Optional[Fraction],
) -> Dict[str, Any]:
    """Одна прикладная оценка по матрице или по параметрам."""
    abs_det = abs(det_exact(m)) if m is not None else None

    if kind == "ryser":
        if m is not None:
            inp = ryser_input_from_matrix(m)
        else:
            inp = RyserInput(n=_require(n, "--n", kind), t=_require(t, "--t", kind))
        return {"n": inp.n, "t": inp.t, "k": inp.k, "bound": ryser_bound(inp), "abs_det": abs_det}

    if kind == "brent":
        eps = _require(epsilon, "--epsilon", kind)
        if m is not None:
            inp = brent_input_from_matrix(m, eps)
        else:
            inp = BrentInput(n=_require(n, "--n", kind), epsilon=eps, zero_diagonal=zero_diagonal)
        return {
            "n": inp.n,
            "epsilon": inp.epsilon,
            "zero_diagonal": inp.zero_diagonal,
            "bound": brent_bound(inp),
            "abs_det": abs_det,
        }

    if kind == "best":
        check = best_excess_check(_require(m, "--input", kind))
        return {
            "is_hadamard": check.is_hadamard,
            "excess": check.excess,
            "bound": check.bound,
            "alpha_sq_le_beta": check.alpha_sq_le_beta,
        }

    if kind == "trace":
        check = trace_det_check(_require(m, "--input", kind))
        return {"det_squared": check.lhs_exact, "mean_square_power": check.rhs_exact, "holds": check.holds}

    # entry-cap
    if m is not None:
        size = m.n
        cap = gamma if gamma is not None else max(abs(v) for v in m.flat())
    else:
        size = _require(n, "--n", kind)
        cap = _require(gamma, "--gamma", kind)
    return {"n": size, "gamma": cap, "bound": entry_cap_bound(size, cap), "abs_det": abs_det}


def init_app_bounds_commands(cli: click.Group) -> None:
    """Регистрация команды app-bounds."""

    @cli.command("app-bounds")
    @click.option("--kind", type=click.Choice(KINDS + ("all",)), default="all", show_default=True)
    @click.option("--input", "input_path", default=None, type=click.Path(dir_okay=False), help="Файл матрицы.")
    @click.option("--n", "n", type=click.IntRange(min=2), default=None, help="Размерность.")
    @click.option("--t", "t", type=click.IntRange(min=0), default=None, help="Число единиц 0/1-матрицы.")
    @click.option("--epsilon", type=RATIONAL, default=None, help="Предел |E_ij| для M = I - E.")
    @click.option("--zero-diagonal", is_flag=True, help="Диагональ E нулевая.")
    @click.option("--gamma", type=RATIONAL, default=None, help="Предел |M_ij|.")
    @click.option("--output", default=None, help="Файл отчёта (по умолчанию stdout).")
    @handle_errors("app-bounds")
    def app_bounds(
        kind: str,
        input_path: Optional[str],
        n: Optional[int],
        t: Optional[int],
        epsilon: Optional[Fraction],
        zero_diagonal: bool,
        gamma: Optional[Fraction],
        output: Optional[str],
    ) -> None:
        """Прикладные оценки: Райзер, Брент-Осборн-Смит, Бест, след, ограничение элементов."""
        m = read_matrix(input_path) if input_path else None
        if kind != "all":
            results = {kind: _evaluate(kind, m, n, t, epsilon, zero_diagonal, gamma)}
        else:
            results = {}
            for k in KINDS:
                try:
                    results[k] = _evaluate(k, m, n, t, epsilon, zero_diagonal, gamma)
                except (click.UsageError, DetBoundError) as e:
                    logger.debug(f"Оценка {k} пропущена: {e}")
                    results[k] = {"skipped": f"{type(e).__name__}: {e}"}
        evaluated = [k for k, v in results.items() if "skipped" not in v]
        emit_report(results, f"вычислено: {', '.join(evaluated) or 'ничего'}", output)
