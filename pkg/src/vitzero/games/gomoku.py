"""Gomoku rules on bitboards. Stones go on any empty cell; a line of
five or more wins (freestyle: overlines count)."""

from __future__ import annotations

from .bitops import Geometry

WIN_LENGTH = 5


def legal_bits(geo: Geometry, occupied: int) -> int:
    return geo.full & ~occupied


def has_win(geo: Geometry, bits: int) -> bool:
    return geo.has_window(bits, WIN_LENGTH)
