from typing import Optional

import click

from cli.commands.app_bounds_commands import init_app_bounds_commands
from cli.commands.bound_commands import init_bound_commands
from cli.commands.extremal_commands import init_extremal_commands
from cli.commands.infdet_commands import init_infdet_commands
from cli.commands.search_commands import init_search_commands
from utils import config
from utils.logger import get_logger, init_simple_logging

# Тихая настройка логгера для модуля
logger = get_logger(__name__)


def create_cli() -> click.Group:
    """
    Создаёт группу команд detbound и регистрирует все подкоманды.

    Returns:
        click.Group: Готовая группа команд.
    """
    # Обработчик консоли привязывается к stderr процесса до запуска команд
    init_simple_logging("detbound")

    @click.group(name="detbound")
    @click.option(
        "--log-level",
        type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], case_sensitive=False),
        default=None,
        help="Уровень логирования (по умолчанию LOG_LEVEL из окружения).",
    )
    @click.option(
        "--workers",
        type=click.IntRange(min=1),
        default=None,
        help="Число процессов для полного перебора (по умолчанию SEARCH_WORKERS).",
    )
    @click.pass_context
    def cli(ctx: click.Context, log_level: Optional[str], workers: Optional[int]) -> None:
        """Оценки детерминанта через сумму и сумму квадратов элементов."""
        if log_level:
            init_simple_logging("detbound", log_level)
        ctx.ensure_object(dict)
        ctx.obj["workers"] = workers or config.SEARCH_WORKERS

    init_bound_commands(cli)
    init_extremal_commands(cli)
    init_search_commands(cli)
    init_infdet_commands(cli)
    init_app_bounds_commands(cli)
    return cli


def main() -> None:
    create_cli()(prog_name="detbound")


if __name__ == "__main__":
    main()
