import os
import sys
import time
from datetime import datetime
from logging import Formatter, Logger, StreamHandler, getLogger
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional

import pytz
from dotenv import load_dotenv

_configured_loggers = set()

LOG_LEVELS = {"DEBUG": 10, "INFO": 20, "WARNING": 30, "ERROR": 40, "CRITICAL": 50}


class ZonedFormatter(Formatter):
    """Форматтер, переводящий время записи в часовой пояс из LOG_TZ."""

    def __init__(self, fmt: str, datefmt: str, tz_name: str) -> None:
        super().__init__(fmt, datefmt=datefmt)
        try:
            self.tz = pytz.timezone(tz_name)
        except pytz.UnknownTimeZoneError:
            self.tz = pytz.timezone("Europe/Moscow")

    def converter(self, timestamp: float) -> time.struct_time:
        """
        Преобразует временную метку в struct_time в настроенном часовом поясе.

        Args:
            timestamp: Временная метка в секундах (Unix timestamp).

        Returns:
            time.struct_time: Время в часовом поясе логгера.
        """
        dt = datetime.fromtimestamp(timestamp, tz=pytz.UTC)
        return dt.astimezone(self.tz).timetuple()

    def format(self, record) -> str:
        # Место вызова только для WARNING и выше
        if record.levelno >= 30:
            record.location = f"{record.filename}:{record.lineno} "
        else:
            record.location = ""
        if record.levelno >= 40:
            record.func_info = f"in {record.funcName}() "
        else:
            record.func_info = ""
        return super().format(record)


def _resolve_level(name: str) -> str:
    level = os.getenv("LOG_LEVEL", "INFO").upper()
    if level not in LOG_LEVELS:
        getLogger(name).warning(
            f"Недопустимый уровень логирования '{level}' в LOG_LEVEL. "
            f"Используется уровень по умолчанию: INFO"
        )
        level = "INFO"
    return level


def setup_logger(
    name: str,
    log_dir: Optional[str] = None,
    max_bytes: int = 10 * 1024 * 1024,  # 10MB
    backup_count: int = 5,
    silent_setup: bool = True,
) -> Logger:
    """
    Настраивает и возвращает логгер с заданным именем.

    Консольный вывод идёт в stderr: stdout занят отчётами CLI.
    Файловый обработчик подключается, только если задан каталог логов
    (аргумент или переменная окружения LOG_DIR).

    Args:
        name: Имя логгера (обычно __name__ модуля).
        log_dir: Директория для логов (по умолчанию из LOG_DIR).
        max_bytes: Максимальный размер файла лога в байтах.
        backup_count: Количество резервных копий логов.
        silent_setup: Не выводить информацию о настройке логгера.

    Returns:
        Logger: Настроенный объект логгера.
    """
    load_dotenv()

    log_level_str = _resolve_level(name)
    log_level = LOG_LEVELS[log_level_str]
    if log_dir is None:
        log_dir = os.getenv("LOG_DIR", "")
    tz_name = os.getenv("LOG_TZ", "Europe/Moscow")

    logger = getLogger(name)
    logger.setLevel(log_level)

    if not logger.handlers:
        detailed_format = "[%(asctime)s] [%(levelname)s] [%(name)s] %(location)s%(func_info)s%(message)s"
        simple_format = "[%(asctime)s] [%(levelname)s] [%(name)s] %(message)s"

        console_handler = StreamHandler(sys.stderr)
        console_handler.setLevel(log_level)
        console_handler.setFormatter(
            ZonedFormatter(simple_format, "%Y-%m-%d %H:%M:%S", tz_name)
        )
        logger.addHandler(console_handler)

        if log_dir:
            log_path = Path(log_dir)
            log_path.mkdir(parents=True, exist_ok=True)
            file_handler = RotatingFileHandler(
                log_path / "detbound.log",
                maxBytes=max_bytes,
                backupCount=backup_count,
                encoding="utf-8",
            )
            file_handler.setLevel(log_level)
            file_handler.setFormatter(
                ZonedFormatter(detailed_format, "%Y-%m-%d %H:%M:%S", tz_name)
            )
            logger.addHandler(file_handler)

        # Дочерние логгеры не дублируют записи через корневой
        logger.propagate = False

        if not silent_setup and name not in _configured_loggers:
            logger.info(
                f"Logging system initialized for '{name}' (level: {log_level_str})"
            )
            if log_dir:
                logger.info(f"Log directory: {Path(log_dir).absolute()}")
        _configured_loggers.add(name)

    return logger


def get_logger(name: str) -> Logger:
    """
    Получение логгера для модуля с тихой настройкой.

    Args:
        name: Имя логгера (обычно __name__ модуля).

    Returns:
        Logger: Настроенный логгер.
    """
    return setup_logger(name, silent_setup=True)


def init_simple_logging(app_name: str = "detbound", log_level: str = None) -> Logger:
    """
    Простая инициализация логирования для точки входа.

    Args:
        app_name: Имя приложения.
        log_level: Уровень логирования (если None, берется из .env).

    Returns:
        Logger: Основной логгер приложения.
    """
    if log_level:
        log_level = log_level.upper()
        if log_level not in LOG_LEVELS:
            getLogger(app_name).warning(
                f"Недопустимый уровень логирования '{log_level}'. "
                f"Используется уровень из окружения или INFO"
            )
        else:
            os.environ["LOG_LEVEL"] = log_level
            # Уже созданные логгеры модулей получают новый уровень
            for name in list(_configured_loggers):
                existing = getLogger(name)
                existing.setLevel(LOG_LEVELS[log_level])
                for handler in existing.handlers:
                    handler.setLevel(LOG_LEVELS[log_level])

    main_logger = setup_logger(app_name, silent_setup=True)
    main_logger.debug(f"{app_name} started")
    return main_logger


class LoggerContext:
    """
    Контекстный менеджер для автоматического логирования исключений.
    """

    def __init__(self, logger: Logger, message: str = "Operation failed"):
        self.logger = logger
        self.message = message

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if exc_type:
            self.logger.error(f"{self.message}: {exc_type.__name__}: {exc_val}")
        return False  # Не подавляем исключение
