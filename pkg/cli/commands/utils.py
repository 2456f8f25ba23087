import functools
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, Optional

import click

from models.exceptions import DetBoundError, SearchSpaceTooLarge
from models.models import to_fraction
from utils.logger import LoggerContext, get_logger
from utils.matrix_io import render_report

# Тихая настройка логгера для модуля
logger = get_logger(__name__)

EXIT_VALIDATION = 2
EXIT_GUARD = 3


class RationalType(click.ParamType):
    """Параметр-рациональное число: "3", "-1.25" или "p/q"."""

    name = "rational"

    def convert(self, value: Any, param: Optional[click.Parameter], ctx: Optional[click.Context]) -> Fraction:
        if isinstance(value, Fraction):
            return value
        try:
            return to_fraction(value)
        except DetBoundError as e:
            self.fail(f"{value!r} не является рациональным числом ({e})", param, ctx)


RATIONAL = RationalType()


def emit_report(payload: Dict[str, Any], summary: str, output: Optional[str] = None) -> None:
    """
    Выводит отчёт в stdout или записывает в файл.

    Args:
        payload: Поля отчёта.
        summary: Итоговая строка для человека.
        output: Путь к файлу (None означает стандартный вывод).
    """
    text = render_report(payload, summary)
    if output:
        Path(output).write_text(text, encoding="utf-8")
        logger.info(f"Отчёт записан в {output}")
    else:
        click.echo(text, nl=False)


def handle_errors(command: str) -> Callable:
    """
    Декоратор команды: переводит исключения пакета в коды выхода.

    SearchSpaceTooLarge -> 3, остальные ошибки проверки, разбора и ввода-вывода -> 2.
    Сообщение начинается с имени класса исключения.
    """

    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            ctx = click.get_current_context()
            try:
                with LoggerContext(logger, f"Команда {command} завершилась ошибкой"):
                    return func(*args, **kwargs)
            except SearchSpaceTooLarge as e:
                click.echo(f"SearchSpaceTooLarge: {e}", err=True)
                ctx.exit(EXIT_GUARD)
            except (DetBoundError, OSError) as e:
                click.echo(f"{type(e).__name__}: {e}", err=True)
                ctx.exit(EXIT_VALIDATION)

        return wrapper

    return decorator
