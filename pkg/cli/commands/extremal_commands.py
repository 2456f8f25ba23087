from fractions import Fraction
from typing import Optional

import click

from cli.commands.utils import RATIONAL, emit_report, handle_errors
from engine.extremal import construct_orthogonal, construct_shifted, recipe_det, verify_characterization
from engine.linalg import entry_stats
from models.models import Variant
from utils import config
from utils.logger import get_logger
from utils.matrix_io import read_matrix, write_matrix

# Тихая настройка логгера для модуля
logger = get_logger(__name__)


def init_extremal_commands(cli: click.Group) -> None:
    """Регистрация команд construct и verify."""

    @cli.command("construct")
    @click.option("--n", "n", required=True, type=click.IntRange(min=2), help="Размерность.")
    @click.option("--alpha", required=True, type=RATIONAL, help="Целевое s(M)/n.")
    @click.option("--beta", required=True, type=RATIONAL, help="Целевое q(M)/n.")
    @click.option(
        "--variant",
        required=True,
        type=click.Choice([v.value for v in Variant]),
        help="shifted: gamma I + ((alpha - gamma)/n) J; orthogonal: блоки с M M^T = beta I.",
    )
    @click.option("--matrix-out", default=None, help="Записать матрицу в текстовом формате.")
    @click.option("--output", default=None, help="Файл отчёта (по умолчанию stdout).")
    @handle_errors("construct")
    def construct(
        n: int, alpha: Fraction, beta: Fraction, variant: str, matrix_out: Optional[str], output: Optional[str]
    ) -> None:
        """Строит матрицу с s(M) = n alpha, q(M) = n beta и экстремальным детерминантом."""
        if Variant(variant) is Variant.SHIFTED_IDENTITY:
            recipe = construct_shifted(n, alpha, beta)
        else:
            recipe = construct_orthogonal(n, alpha, beta)
        det = recipe_det(recipe)
        stats = entry_stats(recipe.matrix)
        payload = {
            "n": n,
            "alpha": recipe.alpha,
            "beta": recipe.beta,
            "kappa": stats.kappa,
            "case": stats.case_tag,
            "variant": recipe.variant,
            "gamma": recipe.gamma,
            "exact": recipe.exact,
            "negated": recipe.negated,
            "rows_swapped": recipe.rows_swapped,
            "matrix": recipe.matrix,
            "claimed_det": recipe.claimed_det,
            "det": det,
        }
        if matrix_out:
            write_matrix(recipe.matrix, matrix_out)
        emit_report(payload, f"{recipe.variant.value}: det = {det}, exact = {recipe.exact}", output)

    @cli.command("verify")
    @click.option("--input", "input_path", required=True, type=click.Path(dir_okay=False), help="Файл матрицы.")
    @click.option("--tol", type=click.FloatRange(min=0, min_open=True), default=None, help="Допуск (по умолчанию VERIFY_TOL).")
    @click.option("--output", default=None, help="Файл отчёта (по умолчанию stdout).")
    @handle_errors("verify")
    def verify(input_path: str, tol: Optional[float], output: Optional[str]) -> None:
        """Проверяет необходимые условия максимальности детерминанта."""
        m = read_matrix(input_path)
        tol = tol or config.VERIFY_TOL
        stats = entry_stats(m)
        report = verify_characterization(m, tol)
        payload = {
            "n": stats.n,
            "alpha": stats.alpha,
            "beta": stats.beta,
            "kappa": stats.kappa,
            "case": stats.case_tag,
            "delta": report.delta,
            "regimes": report.regimes,
            "rowsum_ok": report.rowsum_ok,
            "colsum_ok": report.colsum_ok,
            "gram_ok": report.gram_ok,
            "det_ok": report.det_ok,
            "max_residual": report.max_residual,
            "tol": tol,
        }
        passed = report.gram_ok and report.det_ok and report.rowsum_ok is not False and report.colsum_ok is not False
        emit_report(
            payload,
            f"{'+'.join(report.regimes)}: {'все условия выполнены' if passed else 'условия нарушены'}",
            output,
        )
