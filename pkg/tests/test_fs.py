"""Tests for file system utilities."""

from pathlib import Path
from unittest.mock import patch

import pytest

from usher_lab.exceptions import FileOperationError
from usher_lab.utils.fs import ensure_directory, read_text_file, write_text_atomic


class TestEnsureDirectory:
    """Test directory creation."""

    def test_creates_nested(self, temp_dir: Path) -> None:
        target = temp_dir / "a" / "b"
        ensure_directory(target)
        assert target.is_dir()

    def test_existing_is_fine(self, temp_dir: Path) -> None:
        ensure_directory(temp_dir)

    def test_file_in_the_way(self, temp_dir: Path) -> None:
        blocker = temp_dir / "file"
        blocker.write_text("x", encoding="utf-8")
        with pytest.raises(FileOperationError):
            ensure_directory(blocker / "sub")


class TestTextFiles:
    """Test reading and atomic writing."""

    def test_round_trip(self, temp_dir: Path) -> None:
        path = temp_dir / "out" / "report.txt"
        write_text_atomic(path, "line one\nline two\n")
        assert read_text_file(path) == "line one\nline two\n"

    def test_newlines_written_verbatim(self, temp_dir: Path) -> None:
        path = temp_dir / "lf.csv"
        write_text_atomic(path, "a\nb\n")
        assert path.read_bytes() == b"a\nb\n"

    def test_overwrite_leaves_no_temporaries(self, temp_dir: Path) -> None:
        path = temp_dir / "run.csv"
        write_text_atomic(path, "first\n")
        write_text_atomic(path, "second\n")
        assert read_text_file(path) == "second\n"
        assert [p.name for p in temp_dir.iterdir()] == ["run.csv"]

    def test_missing_file(self, temp_dir: Path) -> None:
        with pytest.raises(FileOperationError) as exc_info:
            read_text_file(temp_dir / "missing.txt")
        assert exc_info.value.path == temp_dir / "missing.txt"

    def test_write_failure(self, temp_dir: Path) -> None:
        with patch("usher_lab.utils.fs.os.replace", side_effect=OSError(13, "denied")):
            with pytest.raises(FileOperationError, match="denied"):
                write_text_atomic(temp_dir / "x.txt", "data")
