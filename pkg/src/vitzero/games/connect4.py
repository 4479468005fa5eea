"""Connect4 rules on bitboards. Row 0 is the top; discs fall to the
highest row index with an empty cell. Win = 4 in a row."""

from __future__ import annotations

from .bitops import Geometry

WIN_LENGTH = 4


def legal_columns(geo: Geometry, occupied: int) -> list[int]:
    # a column is playable iff its top cell is empty
    return [c for c in range(geo.w) if not (occupied >> c) & 1]


def drop_bit(geo: Geometry, occupied: int, col: int) -> int:
    """Bit of the cell a disc dropped in `col` lands on, or 0 if full."""
    for r in range(geo.h - 1, -1, -1):
        b = 1 << (r * geo.w + col)
        if not occupied & b:
            return b
    return 0


def has_win(geo: Geometry, bits: int) -> bool:
    return geo.has_window(bits, WIN_LENGTH)
