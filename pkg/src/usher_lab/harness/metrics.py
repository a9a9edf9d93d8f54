"""Training metrics and their CSV representation.

A metrics file has one ``# key=value,...`` metadata line, the header
``episode,success_rate,avg_return,bias_start,bias_ci,wallclock_ms`` and one
row per evaluation. Floats carry six significant digits and lines end in LF.
"""

import csv
import io
from collections.abc import Iterable
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

from ..constants import COMPARE_COLUMNS, METRICS_COLUMNS
from ..exceptions import ContractViolationError, FileOperationError
from ..utils.fs import read_text_file, write_text_atomic

_METADATA_KEYS = ("agent", "env", "seed", "config_hash")


class MetricsRow(NamedTuple):
    """One evaluation point."""

    episode: int
    success_rate: float
    avg_return: float
    bias_start: float
    bias_ci: float
    wallclock_ms: float = 0.0


@dataclass
class RunMetrics:
    """Evaluation rows of one training run plus identifying metadata."""

    agent: str
    env: str
    seed: int
    config_hash: str
    rows: list[MetricsRow] = field(default_factory=list)

    def append(self, row: MetricsRow) -> None:
        if self.rows and row.episode <= self.rows[-1].episode:
            raise ContractViolationError(
                f"episode {row.episode} does not follow {self.rows[-1].episode}"
            )
        self.rows.append(row)

    @property
    def final(self) -> MetricsRow:
        if not self.rows:
            raise ContractViolationError("run has no evaluation rows")
        return self.rows[-1]

    def metadata(self) -> dict[str, str]:
        return {
            "agent": self.agent,
            "env": self.env,
            "seed": str(self.seed),
            "config_hash": self.config_hash,
        }


def _format_value(value: float) -> str:
    return format(float(value), ".6g")


def format_metrics(metrics: RunMetrics) -> str:
    """Serialise ``metrics`` to the CSV text ``write_metrics`` stores."""
    buffer = io.StringIO()
    meta = ",".join(f"{key}={value}" for key, value in metrics.metadata().items())
    buffer.write(f"# {meta}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(METRICS_COLUMNS)
    for row in metrics.rows:
        writer.writerow([str(row.episode)] + [_format_value(v) for v in row[1:]])
    return buffer.getvalue()


def write_metrics(metrics: RunMetrics, path: Path) -> None:
    """Write a metrics CSV (UTF-8, LF line endings).

    Raises:
        FileOperationError: If the file cannot be written
    """
    write_text_atomic(path, format_metrics(metrics))


def read_metrics(path: Path) -> RunMetrics:
    """Parse a file produced by ``write_metrics``.

    Raises:
        FileOperationError: If the file is unreadable or not a metrics CSV
    """
    lines = read_text_file(path).splitlines()
    if not lines or not lines[0].startswith("#"):
        raise FileOperationError("Missing metadata line in metrics file", path)
    meta: dict[str, str] = {}
    for item in lines[0].lstrip("#").strip().split(","):
        key, sep, value = item.partition("=")
        if sep:
            meta[key.strip()] = value.strip()
    missing = [key for key in _METADATA_KEYS if key not in meta]
    if missing:
        raise FileOperationError(f"Metadata lacks {', '.join(missing)}", path)

    reader = csv.DictReader(lines[1:])
    if tuple(reader.fieldnames or ()) != METRICS_COLUMNS:
        raise FileOperationError("Unexpected metrics header", path)
    try:
        metrics = RunMetrics(
            agent=meta["agent"],
            env=meta["env"],
            seed=int(meta["seed"]),
            config_hash=meta["config_hash"],
        )
        for record in reader:
            metrics.append(
                MetricsRow(
                    episode=int(record["episode"]),
                    success_rate=float(record["success_rate"]),
                    avg_return=float(record["avg_return"]),
                    bias_start=float(record["bias_start"]),
                    bias_ci=float(record["bias_ci"]),
                    wallclock_ms=float(record["wallclock_ms"]),
                )
            )
    except (TypeError, ValueError) as e:
        raise FileOperationError(f"Malformed metrics row: {e}", path) from e
    return metrics


def compare_metrics(paths: Iterable[Path]) -> str:
    """Join metrics files into one long-format CSV.

    Every numeric cell of every input becomes a row
    ``source,agent,env,seed,config_hash,episode,metric,value``.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(COMPARE_COLUMNS)
    for path in paths:
        metrics = read_metrics(path)
        for row in metrics.rows:
            for metric in METRICS_COLUMNS[1:]:
                writer.writerow(
                    [
                        path.name,
                        metrics.agent,
                        metrics.env,
                        metrics.seed,
                        metrics.config_hash,
                        row.episode,
                        metric,
                        _format_value(getattr(row, metric)),
                    ]
                )
    return buffer.getvalue()
