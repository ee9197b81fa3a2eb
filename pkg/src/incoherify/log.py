"""
Logging for incoherify: Rich console output plus a rotating plain-text log file
(`setup_logger`), and the queue plumbing that lets `--jobs K` worker processes log through the
parent's handlers (`worker_log_queue` / `worker_init`).
"""

from __future__ import annotations

import logging
import multiprocessing
from collections.abc import Iterator
from contextlib import contextmanager
from logging.handlers import QueueHandler, QueueListener, RotatingFileHandler
from pathlib import Path
from typing import Any

from rich.console import Console
from rich.logging import RichHandler
from rich.theme import Theme

__all__ = [
    "FileFilter",
    "TerminalFilter",
    "set_log_level",
    "setup_logger",
    "worker_init",
    "worker_log_queue",
]

# Silences "no handlers could be found" for library users who never configure logging.
logging.getLogger("incoherify").addHandler(logging.NullHandler())

_THEME = Theme(
    {
        "logging.level.debug": "bold cyan",
        "logging.level.info": "bold green",
        "logging.level.warning": "bold yellow",
        "logging.level.error": "bold red",
        "path": "dim white",
    }
)

_FILE_FORMAT = "%(asctime)s [%(levelname)s] %(name)s:%(lineno)d - %(message)s"


class TerminalFilter(logging.Filter):
    """Drops records logged with `extra={"file_only": True}` from the console."""

    def filter(self, record: logging.LogRecord) -> bool:
        return not getattr(record, "file_only", False)


class FileFilter(logging.Filter):
    """Drops records logged with `extra={"terminal_only": True}` from the log file."""

    def filter(self, record: logging.LogRecord) -> bool:
        return not getattr(record, "terminal_only", False)


def setup_logger(
    level: int = logging.INFO,
    terminal: bool = True,
    log_file: Path | str | None = Path("incoherify.log"),
    max_bytes: int = 10 * 1024 * 1024,
    backup_count: int = 5,
) -> logging.Logger:
    """
    Configures the root logger with a Rich console handler and a rotating log file.

    Args:
        level (int): root log level
        terminal (bool): attach the Rich console handler
        log_file (Path | str | None): rotating log file; `None` disables file output
        max_bytes (int): rotation threshold for the log file
        backup_count (int): number of rotated files kept

    Returns:
        (logging.Logger): the configured root logger

    """
    root = logging.getLogger()
    root.setLevel(level)

    if not terminal and log_file is None:
        return root

    root.handlers.clear()

    if terminal:
        handler = RichHandler(
            console=Console(theme=_THEME, stderr=True),
            show_time=True,
            log_time_format="[%Y-%m-%d %H:%M:%S]",
            show_path=True,
            enable_link_path=False,
            markup=False,
            rich_tracebacks=True,
        )
        handler.addFilter(TerminalFilter())
        root.addHandler(handler)

    if log_file is not None:
        log_file = Path(log_file)
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = RotatingFileHandler(
            log_file, maxBytes=max_bytes, backupCount=backup_count, encoding="utf-8"
        )
        file_handler.setFormatter(logging.Formatter(_FILE_FORMAT))
        file_handler.addFilter(FileFilter())
        root.addHandler(file_handler)

    return root


@contextmanager
def worker_log_queue() -> Iterator[tuple[multiprocessing.Queue[Any], int]]:
    """
    Starts a `QueueListener` that forwards records from worker processes to the handlers
    currently on the root logger, and stops it (flushing everything queued) on exit.

    Yields:
        (tuple[multiprocessing.Queue, int]): the queue and root log level to hand to
            `worker_init` through a pool initializer

    """
    root = logging.getLogger()
    queue: multiprocessing.Queue[Any] = multiprocessing.Queue(-1)
    listener = QueueListener(queue, *root.handlers, respect_handler_level=True)
    listener.start()
    try:
        yield queue, root.level
    finally:
        listener.stop()


def worker_init(queue: multiprocessing.Queue[Any], level: int) -> None:
    """
    Points a worker process's root logger at `queue` only. Handlers inherited through `fork`
    are removed so no worker writes to the parent's console or file directly.

    Args:
        queue (multiprocessing.Queue): queue yielded by `worker_log_queue`
        level (int): log level for the worker's root logger

    """
    root = logging.getLogger()
    root.handlers.clear()
    root.addHandler(QueueHandler(queue))
    root.setLevel(level)


def set_log_level(level: int | str, logger_name: str = "incoherify") -> None:
    """
    Sets the level of `logger_name` (every `incoherify.*` logger inherits it), for library
    callers who want quieter or chattier output without calling `setup_logger`.

    Args:
        level (int | str): a `logging` level or level name
        logger_name (str): logger to adjust

    """
    logging.getLogger(logger_name).setLevel(level)
