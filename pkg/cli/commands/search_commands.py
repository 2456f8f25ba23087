from typing import Optional

import click

from cli.commands.utils import emit_report, handle_errors
from engine.bounds import progression_entries
from engine.search import ratio_table, run_search, search_space_size
from models.models import ProgressionMode, SearchMode, SearchProblem
from utils import config
from utils.logger import get_logger
from utils.matrix_io import parse_entries, write_matrix

# Тихая настройка логгера для модуля
logger = get_logger(__name__)


def init_search_commands(cli: click.Group) -> None:
    """Регистрация команд search и ratio-table."""

    @cli.command("search")
    @click.option("--n", "n", required=True, type=click.IntRange(min=2), help="Размерность.")
    @click.option("--entries", default=None, help='Мультимножество: "1..9" или "1,1,2,2".')
    @click.option(
        "--family",
        type=click.Choice([m.value for m in ProgressionMode]),
        default=None,
        help="Элементы 1..n^2 (full-square) или 1..n по n раз (repeated).",
    )
    @click.option("--mode", type=click.Choice([m.value for m in SearchMode]), default=SearchMode.EXHAUSTIVE.value)
    @click.option("--seed", type=int, default=None, help="Seed отжига (по умолчанию ANNEAL_SEED).")
    @click.option("--budget", type=click.IntRange(min=1), default=None, help="Итерации отжига (по умолчанию ANNEAL_BUDGET).")
    @click.option("--matrix-out", default=None, help="Записать лучшую матрицу в текстовом формате.")
    @click.option("--output", default=None, help="Файл отчёта (по умолчанию stdout).")
    @click.pass_context
    @handle_errors("search")
    def search(
        ctx: click.Context,
        n: int,
        entries: Optional[str],
        family: Optional[str],
        mode: str,
        seed: Optional[int],
        budget: Optional[int],
        matrix_out: Optional[str],
        output: Optional[str],
    ) -> None:
        """Максимум |det| по расстановкам мультимножества."""
        if (entries is None) == (family is None):
            raise click.UsageError("нужно указать ровно одно из --entries и --family")
        values = parse_entries(entries) if entries is not None else progression_entries(n, 1, 1, ProgressionMode(family))
        search_mode = SearchMode(mode)
        problem = SearchProblem(
            n=n,
            entries=tuple(values),
            mode=search_mode,
            seed=(seed if seed is not None else config.ANNEAL_SEED) if search_mode is SearchMode.ANNEAL else None,
            iteration_budget=(budget or config.ANNEAL_BUDGET) if search_mode is SearchMode.ANNEAL else None,
        )
        result = run_search(problem, workers=ctx.obj["workers"])
        payload = {
            "n": n,
            "mode": result.mode,
            "best_matrix": result.best_matrix,
            "best_abs_det": result.best_abs_det,
            "upper_bound": result.upper_bound,
            "ratio": result.ratio,
            "nodes_visited": result.nodes_visited,
            "exhaustive_certificate": result.exhaustive_certificate,
            "search_space_size": search_space_size(problem.entries, n),
        }
        if search_mode is SearchMode.ANNEAL:
            payload["seed"] = problem.seed
            payload["budget"] = problem.iteration_budget
        if matrix_out:
            write_matrix(result.best_matrix, matrix_out)
        emit_report(
            payload,
            f"best = {result.best_abs_det}, bound = {result.upper_bound:.12g}, ratio = {result.ratio:.6f}",
            output,
        )

    @cli.command("ratio-table")
    @click.option("--family", required=True, type=click.Choice([m.value for m in ProgressionMode]))
    @click.option("--n-max", "n_max", required=True, type=click.IntRange(min=2), help="Наибольшая размерность.")
    @click.option("--seed", type=int, default=None, help="Seed отжига для больших n.")
    @click.option("--budget", type=click.IntRange(min=1), default=None, help="Итерации отжига для больших n.")
    @click.option("--output", default=None, help="Файл отчёта (по умолчанию stdout).")
    @click.pass_context
    @handle_errors("ratio-table")
    def ratio_table_command(
        ctx: click.Context,
        family: str,
        n_max: int,
        seed: Optional[int],
        budget: Optional[int],
        output: Optional[str],
    ) -> None:
        """Отношение лучшего |det| к оценке для n = 2..n_max."""
        rows = ratio_table(
            n_max, ProgressionMode(family), seed=seed, budget=budget, workers=ctx.obj["workers"]
        )
        certified = sum(1 for row in rows if row.certificate)
        emit_report(
            {"family": ProgressionMode(family), "rows": rows},
            f"{family}: {len(rows)} строк, точных {certified}, последнее отношение {rows[-1].ratio:.6f}",
            output,
        )
