from typing import Optional

import click

from cli.commands.utils import emit_report, handle_errors
from engine.infdet import convergence_report, koch_bound
from utils.logger import get_logger
from utils.matrix_io import read_spec

# Тихая настройка логгера для модуля
logger = get_logger(__name__)


def init_infdet_commands(cli: click.Group) -> None:
    """Регистрация команды infdet."""

    @cli.command("infdet")
    @click.option("--spec", "spec_path", required=True, type=click.Path(dir_okay=False), help="JSON-описание матрицы A.")
    @click.option("--terms", type=click.IntRange(min=1), default=40, show_default=True, help="Наибольший порядок усечения.")
    @click.option("--output", default=None, help="Файл отчёта (по умолчанию stdout).")
    @handle_errors("infdet")
    def infdet(spec_path: str, terms: int, output: Optional[str]) -> None:
        """Усечения det(I - A(n)) и оценка exp(1/2 sum A_ij^2 - sum A_ii)."""
        spec = read_spec(spec_path)
        rows = convergence_report(spec, terms)
        koch = koch_bound(spec)
        last = rows[-1]
        payload = {
            "kind": spec.kind,
            "trace_sum": spec.trace_sum,
            "trace_abs_sum": spec.trace_abs_sum,
            "square_sum": spec.square_sum,
            "koch_bound": koch,
            "final_gap": abs(last.finite_bound - koch),
            "rows": rows,
        }
        emit_report(
            payload,
            f"n = {last.n}: det = {last.truncated_det:.12g}, finite_bound = {last.finite_bound:.12g}, "
            f"koch_bound = {koch:.12g}",
            output,
        )
