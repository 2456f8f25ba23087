from typing import Optional

import click

from cli.commands.utils import emit_report, handle_errors
from engine.bounds import complex_bound, gasper_bound, hadamard_row_bound
from engine.linalg import complex_abs_det, det_exact
from utils.logger import get_logger
from utils.matrix_io import read_matrix

# Тихая настройка логгера для модуля
logger = get_logger(__name__)


def init_bound_commands(cli: click.Group) -> None:
    """Регистрация команд bound и complex-bound."""

    @cli.command("bound")
    @click.option("--input", "input_path", required=True, type=click.Path(dir_okay=False), help="Файл матрицы.")
    @click.option("--output", default=None, help="Файл отчёта (по умолчанию stdout).")
    @handle_errors("bound")
    def bound(input_path: str, output: Optional[str]) -> None:
        """Оценка |det M| по alpha = s(M)/n и beta = q(M)/n."""
        m = read_matrix(input_path)
        report = gasper_bound(m)
        det = det_exact(m)
        stats = report.stats
        payload = {
            "n": stats.n,
            "s": stats.s,
            "q": stats.q,
            "alpha": stats.alpha,
            "beta": stats.beta,
            "kappa": stats.kappa,
            "case": stats.case_tag,
            "formula": report.formula_tag,
            "bound": report.bound,
            "beta_power": report.beta_power,
            "alpha_kappa": report.alpha_kappa,
            "feasible": report.feasible,
            "det": det,
            "hadamard_row_bound": hadamard_row_bound(m),
        }
        emit_report(
            payload,
            f"bound = {report.bound:.12g} ({report.formula_tag.value}), |det| = {abs(det)}",
            output,
        )

    @cli.command("complex-bound")
    @click.option("--input", "input_path", required=True, type=click.Path(dir_okay=False), help="Вещественная часть A.")
    @click.option("--imag", "imag_path", required=True, type=click.Path(dir_okay=False), help="Мнимая часть B.")
    @click.option("--output", default=None, help="Файл отчёта (по умолчанию stdout).")
    @handle_errors("complex-bound")
    def complex_bound_command(input_path: str, imag_path: str, output: Optional[str]) -> None:
        """Оценка |det(A + iB)| по обеим ориентациям."""
        a, b = read_matrix(input_path), read_matrix(imag_path)
        report = complex_bound(a, b)
        abs_det = complex_abs_det(a, b)
        payload = {
            "n": a.n,
            "alpha": report.alpha,
            "beta": report.beta,
            "kappa": report.kappa,
            "formula_direct": report.formula_direct,
            "bound_direct": report.bound_direct,
            "alpha_swapped": report.alpha_swapped,
            "kappa_swapped": report.kappa_swapped,
            "formula_swapped": report.formula_swapped,
            "bound_swapped": report.bound_swapped,
            "bound": report.bound,
            "abs_det": abs_det,
        }
        emit_report(payload, f"bound = {report.bound:.12g}, |det(A + iB)| = {abs_det:.12g}", output)
