"""Textual grid maps.

A map is a rectangular block of characters, one row per line::

    #####
    #S!G#
    #####

``#`` wall, ``.`` free, ``S`` start, ``G`` goal, ``!`` hazard. Cells outside the
block behave like walls.
"""

from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from ..constants import DEFAULT_HAZARD_STOP_PROB
from ..exceptions import GridMapParseError
from ..utils.fs import read_text_file


class Cell(str, Enum):
    """Grid cell kinds keyed by their map symbol."""

    FREE = "."
    WALL = "#"
    START = "S"
    GOAL = "G"
    HAZARD = "!"


@dataclass(frozen=True)
class GridMap:
    """Validated rectangular grid.

    Attributes:
        width: Number of columns
        height: Number of rows
        cells: Row-major cell kinds
        hazard_stop_prob: Chance that entering a hazard ends in the fail state
    """

    width: int
    height: int
    cells: tuple[tuple[Cell, ...], ...]
    hazard_stop_prob: float = DEFAULT_HAZARD_STOP_PROB

    def __getitem__(self, position: tuple[int, int]) -> Cell:
        row, col = position
        return self.cells[row][col]

    def positions(self, kind: Cell) -> list[tuple[int, int]]:
        """Row-major positions of every cell of ``kind``."""
        return [
            (row, col)
            for row in range(self.height)
            for col in range(self.width)
            if self.cells[row][col] is kind
        ]

    @property
    def start(self) -> tuple[int, int]:
        return self.positions(Cell.START)[0]

    def is_open(self, row: int, col: int) -> bool:
        """Whether ``(row, col)`` lies inside the map and is not a wall."""
        if not (0 <= row < self.height and 0 <= col < self.width):
            return False
        return self.cells[row][col] is not Cell.WALL

    def render(self) -> str:
        return "\n".join("".join(cell.value for cell in row) for row in self.cells)


def parse_grid_map(text: str, hazard_stop_prob: float = DEFAULT_HAZARD_STOP_PROB) -> GridMap:
    """Parse a textual map.

    Args:
        text: Newline-separated rows; trailing blank lines are ignored
        hazard_stop_prob: Stop probability attached to every hazard cell

    Returns:
        Validated GridMap

    Raises:
        GridMapParseError: On ragged rows, unknown symbols, a missing or repeated
            start, or a missing goal; the error names the line (and column)
    """
    lines = text.replace("\r\n", "\n").split("\n")
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise GridMapParseError("map is empty", line=1)

    width = len(lines[0])
    symbols = {cell.value: cell for cell in Cell}
    rows: list[tuple[Cell, ...]] = []
    start_seen = False
    goal_seen = False
    for line_number, line in enumerate(lines, start=1):
        if len(line) != width:
            raise GridMapParseError(
                f"row has {len(line)} cells, expected {width} (map must be rectangular)",
                line=line_number,
            )
        row = []
        for column, char in enumerate(line, start=1):
            cell = symbols.get(char)
            if cell is None:
                raise GridMapParseError(
                    f"unknown symbol {char!r}", line=line_number, column=column
                )
            if cell is Cell.START:
                if start_seen:
                    raise GridMapParseError(
                        "second start cell 'S'", line=line_number, column=column
                    )
                start_seen = True
            goal_seen = goal_seen or cell is Cell.GOAL
            row.append(cell)
        rows.append(tuple(row))

    if not start_seen:
        raise GridMapParseError("map has no start cell 'S'", line=len(lines))
    if not goal_seen:
        raise GridMapParseError("map has no goal cell 'G'", line=len(lines))
    if not 0.0 <= hazard_stop_prob <= 1.0:
        raise GridMapParseError("hazard_stop_prob must lie in [0, 1]", line=1)

    return GridMap(
        width=width,
        height=len(rows),
        cells=tuple(rows),
        hazard_stop_prob=hazard_stop_prob,
    )


def load_grid_map(path: Path, hazard_stop_prob: float = DEFAULT_HAZARD_STOP_PROB) -> GridMap:
    """Read and parse a map file."""
    return parse_grid_map(read_text_file(path), hazard_stop_prob)


def default_map_path() -> Path:
    """Location of the bundled risky map."""
    return Path(__file__).parent / "maps" / "risky_default.txt"
