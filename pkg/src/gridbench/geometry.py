"""Grid geometry: the fixed 9x9 cell layout shared by every task.

The board is a 9x9 grid of square cells. The left two columns are the hint
bar, the bottom row carries the backpack strip, and the remaining 8x7 block
is the field. Gameplay happens in a centered 5x5 sub-rectangle of the field;
the rest of the field is decorative.

Note on tiling: a full-height 9x2 hint bar plus an 8-cell backpack strip
cannot both fit disjointly in 81 cells, so the hint bar spans rows 0-7 and
the backpack strip occupies the bottom row from column 1 onward. Cell (8, 0)
is decorative.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class RegionKind(Enum):
    HINT = "hint"
    PLAY = "play"
    DECOR = "decor"
    BACKPACK = "backpack"


@dataclass(frozen=True)
class CellRect:
    """Inclusive cell rectangle."""

    row0: int
    col0: int
    row1: int
    col1: int

    def __contains__(self, cell: tuple[int, int]) -> bool:
        r, c = cell
        return self.row0 <= r <= self.row1 and self.col0 <= c <= self.col1

    def cells(self) -> list[tuple[int, int]]:
        return [
            (r, c)
            for r in range(self.row0, self.row1 + 1)
            for c in range(self.col0, self.col1 + 1)
        ]

    @property
    def n_rows(self) -> int:
        return self.row1 - self.row0 + 1

    @property
    def n_cols(self) -> int:
        return self.col1 - self.col0 + 1


VALID_CELL_SIZES = (32, 64, 96)


@dataclass(frozen=True)
class GridGeometry:
    total_rows: int = 9
    total_cols: int = 9
    cell_px: int = 64

    def __post_init__(self) -> None:
        if self.cell_px not in VALID_CELL_SIZES:
            raise ValueError(f"cell_px must be one of {VALID_CELL_SIZES}, got {self.cell_px}")

    @property
    def hint_region(self) -> CellRect:
        return CellRect(0, 0, 7, 1)

    @property
    def field_region(self) -> CellRect:
        return CellRect(0, 2, 7, 8)

    @property
    def play_region(self) -> CellRect:
        # centered 5x5 inside the 8-row, 7-col field
        field = self.field_region
        r0 = field.row0 + (field.n_rows - 5) // 2
        c0 = field.col0 + (field.n_cols - 5) // 2
        return CellRect(r0, c0, r0 + 4, c0 + 4)

    @property
    def backpack_cells(self) -> list[tuple[int, int]]:
        # 8-cell strip on the bottom row; 4 active slots, 4 filler cells
        return [(self.total_rows - 1, c) for c in range(1, 9)]

    @property
    def backpack_slot_cells(self) -> list[tuple[int, int]]:
        return self.backpack_cells[:4]

    @property
    def image_size(self) -> tuple[int, int]:
        return (self.total_cols * self.cell_px, self.total_rows * self.cell_px)


def region_of(row: int, col: int, geometry: GridGeometry | None = None) -> RegionKind:
    """Classify a cell as hint, play, decor, or backpack."""
    geo = geometry or GridGeometry()
    if not (0 <= row < geo.total_rows and 0 <= col < geo.total_cols):
        raise IndexError(f"cell ({row}, {col}) out of range")
    if (row, col) in geo.backpack_cells:
        return RegionKind.BACKPACK
    if (row, col) in geo.hint_region:
        return RegionKind.HINT
    if (row, col) in geo.play_region:
        return RegionKind.PLAY
    return RegionKind.DECOR


def play_cells(geometry: GridGeometry | None = None) -> list[tuple[int, int]]:
    geo = geometry or GridGeometry()
    return geo.play_region.cells()
