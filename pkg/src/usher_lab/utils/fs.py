"""File system utilities for usher-lab.

Run outputs (metrics CSVs, reports, table dumps) are written through these
helpers so that I/O failures surface as ``FileOperationError`` with the
offending path attached.
"""

import os
import tempfile
from pathlib import Path

from ..exceptions import FileOperationError


def ensure_directory(directory: Path) -> None:
    """Ensure a directory exists, creating it if necessary.

    Args:
        directory: Path to the directory

    Raises:
        FileOperationError: If the directory cannot be created
    """
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise FileOperationError(f"Cannot create directory: {e.strerror}", directory) from e


def read_text_file(file_path: Path) -> str:
    """Read a UTF-8 text file.

    Args:
        file_path: Path to the file

    Returns:
        File contents

    Raises:
        FileOperationError: If the file is missing or unreadable
    """
    try:
        return file_path.read_text(encoding="utf-8")
    except OSError as e:
        raise FileOperationError(f"Cannot read file: {e.strerror}", file_path) from e


def write_text_atomic(file_path: Path, content: str) -> None:
    """Write text to ``file_path`` via a temporary file and rename.

    Newlines are written verbatim (no platform translation).

    Args:
        file_path: Destination path; parent directories are created
        content: Text to write

    Raises:
        FileOperationError: If the file cannot be written
    """
    ensure_directory(file_path.parent)
    try:
        fd, tmp_name = tempfile.mkstemp(dir=file_path.parent, prefix=f".{file_path.name}.")
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(content)
        os.replace(tmp_name, file_path)
    except OSError as e:
        raise FileOperationError(f"Cannot write file: {e.strerror}", file_path) from e
