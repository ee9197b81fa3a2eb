"""Tests for logger setup"""

import logging
from pathlib import Path

import pytest
from rich.logging import RichHandler

from incoherify.log import FileFilter, TerminalFilter, set_log_level, setup_logger


@pytest.fixture
def restore_root_logger():
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield root
    for handler in root.handlers:
        if handler not in handlers:
            handler.close()
    root.handlers[:] = handlers
    root.setLevel(level)


def _record(**extra) -> logging.LogRecord:
    record = logging.LogRecord("incoherify.test", logging.INFO, __file__, 1, "msg", None, None)
    record.__dict__.update(extra)
    return record


class TestSetupLogger:
    def test_adds_console_and_file_handlers(self, tmp_path: Path, restore_root_logger):
        log_file = tmp_path / "logs" / "run.log"
        root = setup_logger(level=logging.DEBUG, log_file=log_file)
        assert root.level == logging.DEBUG
        assert any(isinstance(h, RichHandler) for h in root.handlers)
        logging.getLogger("incoherify.test").info("hello from the test")
        for handler in root.handlers:
            handler.flush()
        assert "hello from the test" in log_file.read_text(encoding="utf-8")

    def test_file_only(self, tmp_path: Path, restore_root_logger):
        root = setup_logger(terminal=False, log_file=tmp_path / "run.log")
        assert not any(isinstance(h, RichHandler) for h in root.handlers)

    def test_no_outputs_keeps_existing_handlers(self, restore_root_logger):
        before = list(restore_root_logger.handlers)
        setup_logger(level=logging.WARNING, terminal=False, log_file=None)
        assert restore_root_logger.handlers == before
        assert restore_root_logger.level == logging.WARNING


class TestFilters:
    def test_terminal_filter(self):
        assert TerminalFilter().filter(_record())
        assert not TerminalFilter().filter(_record(file_only=True))

    def test_file_filter(self):
        assert FileFilter().filter(_record())
        assert not FileFilter().filter(_record(terminal_only=True))


class TestSetLogLevel:
    def test_sets_the_package_logger(self):
        logger = logging.getLogger("incoherify")
        before = logger.level
        try:
            set_log_level("DEBUG")
            assert logger.level == logging.DEBUG
        finally:
            logger.setLevel(before)
