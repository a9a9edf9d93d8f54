"""Tests for metrics CSV writing, reading and comparison."""

from pathlib import Path

import pytest

from usher_lab.exceptions import ContractViolationError, FileOperationError
from usher_lab.harness.metrics import (
    MetricsRow,
    RunMetrics,
    compare_metrics,
    format_metrics,
    read_metrics,
    write_metrics,
)


@pytest.fixture
def run_metrics() -> RunMetrics:
    metrics = RunMetrics(agent="usher", env="chain", seed=3, config_hash="abc")
    metrics.append(MetricsRow(10, 0.5, 0.1234567, -0.01234567, 0.001, 0.0))
    metrics.append(MetricsRow(20, 1.0, 0.5, 0.0, 0.0, 0.0))
    return metrics


class TestFormat:
    """Test the exact text layout."""

    def test_layout(self, run_metrics: RunMetrics) -> None:
        lines = format_metrics(run_metrics).split("\n")
        assert lines[0] == "# agent=usher,env=chain,seed=3,config_hash=abc"
        assert lines[1] == "episode,success_rate,avg_return,bias_start,bias_ci,wallclock_ms"
        assert lines[2] == "10,0.5,0.123457,-0.0123457,0.001,0"
        assert lines[3] == "20,1,0.5,0,0,0"
        assert lines[4] == ""

    def test_header_only(self) -> None:
        text = format_metrics(RunMetrics(agent="her", env="red_light", seed=0, config_hash="x"))
        assert text.count("\n") == 2

    def test_episodes_must_increase(self, run_metrics: RunMetrics) -> None:
        with pytest.raises(ContractViolationError):
            run_metrics.append(MetricsRow(20, 1.0, 0.5, 0.0, 0.0))

    def test_final(self, run_metrics: RunMetrics) -> None:
        assert run_metrics.final.episode == 20
        with pytest.raises(ContractViolationError):
            RunMetrics(agent="her", env="chain", seed=0, config_hash="x").final


class TestReadWrite:
    """Test persistence."""

    def test_round_trip(self, run_metrics: RunMetrics, temp_dir: Path) -> None:
        path = temp_dir / "nested" / "run.csv"
        write_metrics(run_metrics, path)
        loaded = read_metrics(path)
        assert loaded.metadata() == run_metrics.metadata()
        assert [row.episode for row in loaded.rows] == [10, 20]
        assert loaded.rows[0].avg_return == pytest.approx(0.123457)

    def test_lf_line_endings(self, run_metrics: RunMetrics, temp_dir: Path) -> None:
        path = temp_dir / "run.csv"
        write_metrics(run_metrics, path)
        assert b"\r" not in path.read_bytes()

    def test_missing_metadata(self, temp_dir: Path) -> None:
        path = temp_dir / "run.csv"
        path.write_text("episode,success_rate\n", encoding="utf-8")
        with pytest.raises(FileOperationError, match="metadata"):
            read_metrics(path)

    def test_incomplete_metadata(self, temp_dir: Path) -> None:
        path = temp_dir / "run.csv"
        path.write_text("# agent=usher,env=chain\n", encoding="utf-8")
        with pytest.raises(FileOperationError, match="seed"):
            read_metrics(path)

    def test_wrong_header(self, temp_dir: Path) -> None:
        path = temp_dir / "run.csv"
        path.write_text("# agent=a,env=b,seed=0,config_hash=c\nepisode,score\n", encoding="utf-8")
        with pytest.raises(FileOperationError, match="header"):
            read_metrics(path)

    def test_malformed_row(self, run_metrics: RunMetrics, temp_dir: Path) -> None:
        path = temp_dir / "run.csv"
        path.write_text(format_metrics(run_metrics) + "30,oops,0,0,0,0\n", encoding="utf-8")
        with pytest.raises(FileOperationError, match="Malformed"):
            read_metrics(path)

    def test_non_increasing_rows(self, run_metrics: RunMetrics, temp_dir: Path) -> None:
        path = temp_dir / "run.csv"
        path.write_text(format_metrics(run_metrics) + "15,1,0,0,0,0\n", encoding="utf-8")
        with pytest.raises(FileOperationError):
            read_metrics(path)


class TestCompare:
    """Test the long-format join."""

    def test_rows_per_metric(self, run_metrics: RunMetrics, temp_dir: Path) -> None:
        first = temp_dir / "a.csv"
        second = temp_dir / "b.csv"
        write_metrics(run_metrics, first)
        write_metrics(RunMetrics(agent="her", env="chain", seed=1, config_hash="d"), second)
        lines = compare_metrics([first, second]).splitlines()
        assert lines[0] == "source,agent,env,seed,config_hash,episode,metric,value"
        # two rows times five metrics; the empty run adds nothing
        assert len(lines) == 1 + 2 * 5
        assert lines[1] == "a.csv,usher,chain,3,abc,10,success_rate,0.5"
