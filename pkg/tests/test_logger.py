"""Tests for logging utilities."""

import logging
from collections.abc import Generator
from pathlib import Path
from unittest.mock import patch

import pytest

from usher_lab.utils.logger import (
    configure_file_logging,
    error,
    get_logger,
    info,
    set_debug_mode,
    success,
    warning,
)


@pytest.fixture
def restore_logger() -> Generator[logging.Logger, None, None]:
    """Remove handlers a test adds and leave debug mode off."""
    logger = get_logger()
    before = list(logger.handlers)
    yield logger
    for handler in logger.handlers[len(before) :]:
        handler.close()
        logger.removeHandler(handler)
    set_debug_mode(False)


class TestLogger:
    """Test logger functionality."""

    def test_get_logger_singleton(self) -> None:
        """Test that get_logger returns the same instance."""
        logger1 = get_logger()
        logger2 = get_logger()

        assert logger1 is logger2
        assert logger1.name == "usher-lab"

    def test_get_logger_configuration(self) -> None:
        logger = get_logger()

        assert len(logger.handlers) >= 1
        assert not logger.propagate

    def test_set_debug_mode(self, restore_logger: logging.Logger) -> None:
        set_debug_mode(True)
        assert restore_logger.level == logging.DEBUG
        set_debug_mode(False)
        assert restore_logger.level == logging.INFO


class TestConsoleOutput:
    """Test console output functions."""

    @patch("usher_lab.utils.logger.console")
    def test_success(self, mock_console) -> None:
        success("Test success message")
        mock_console.print.assert_called_once_with("[green]✓ Test success message[/green]")

    @patch("usher_lab.utils.logger.console")
    def test_info(self, mock_console) -> None:
        info("Test info message")
        mock_console.print.assert_called_once_with("[blue]ℹ Test info message[/blue]")

    @patch("usher_lab.utils.logger.console")
    def test_warning(self, mock_console) -> None:
        warning("Test warning message")
        mock_console.print.assert_called_once_with("[yellow]⚠ Test warning message[/yellow]")

    @patch("usher_lab.ui.styles.error_console")
    def test_error(self, mock_error_console) -> None:
        """Errors go to the stderr console."""
        error("Test error message")
        mock_error_console.print.assert_called_once_with("[red]✗ Test error message[/red]")


class TestFileLogging:
    """Test file logging functionality."""

    def test_records_debug_messages(
        self, temp_dir: Path, restore_logger: logging.Logger
    ) -> None:
        log_file = temp_dir / "logs" / "run.log"
        configure_file_logging(log_file)

        restore_logger.debug("density target refreshed")
        for handler in restore_logger.handlers:
            handler.flush()

        content = log_file.read_text(encoding="utf-8")
        assert "DEBUG" in content
        assert "density target refreshed" in content
