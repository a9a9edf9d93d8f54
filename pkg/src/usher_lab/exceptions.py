"""Custom exceptions for usher-lab."""

from typing import Optional


class UsherLabError(Exception):
    """Base exception for usher-lab errors."""

    pass


class ConfigurationError(UsherLabError):
    """Raised when an experiment configuration is invalid or unreadable."""

    pass


class ContractViolationError(UsherLabError, ValueError):
    """Raised when a caller breaks an operation's preconditions.

    Out-of-range state/action/goal indices, ``T = 0`` density queries, learning
    rates outside ``(0, 1]`` and negative densities all end up here.
    """

    pass


class GridMapParseError(UsherLabError):
    """Raised when a textual grid map cannot be parsed."""

    def __init__(self, message: str, line: int, column: Optional[int] = None) -> None:
        self.line = line
        self.column = column
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")


class EmptyBufferError(UsherLabError):
    """Raised when sampling from a replay buffer that holds no transitions."""

    pass


class FileOperationError(UsherLabError):
    """Raised when file operations fail."""

    def __init__(self, message: str, path: Optional[object] = None) -> None:
        self.path = path
        super().__init__(f"{message} ({path})" if path is not None else message)
