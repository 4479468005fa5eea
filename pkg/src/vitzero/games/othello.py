"""Othello rules on bitboards.

The game ends when the board is full or neither player has a flipping
placement (which covers the double-pass rule positionally); the winner
is the disc majority, equal counts are a draw.
"""

from __future__ import annotations

import numpy as np

from .bitops import Geometry
from .types import GameId, GameState


def initial_cells(game_id: GameId) -> np.ndarray:
    """Central 2x2 diagonal setup; +1 (first player, black) on the
    anti-diagonal, -1 (white) on the main diagonal."""
    h, w = game_id.board_h, game_id.board_w
    cells = np.zeros((h, w), dtype=np.int8)
    r, c = h // 2 - 1, w // 2 - 1
    cells[r, c] = -1
    cells[r + 1, c + 1] = -1
    cells[r, c + 1] = +1
    cells[r + 1, c] = +1
    return cells


def initial_state(game_id: GameId) -> GameState:
    return GameState(game_id, initial_cells(game_id), to_move=+1)


def moves_bits(geo: Geometry, own: int, opp: int) -> int:
    return geo.othello_moves(own, opp)


def flips(geo: Geometry, move_bit: int, own: int, opp: int) -> int:
    return geo.othello_flips(move_bit, own, opp)


def is_over(geo: Geometry, p1: int, p2: int) -> bool:
    if (p1 | p2) == geo.full:
        return True
    return not geo.othello_moves(p1, p2) and not geo.othello_moves(p2, p1)


def winner(p1: int, p2: int) -> int:
    n1, n2 = p1.bit_count(), p2.bit_count()
    if n1 > n2:
        return +1
    if n2 > n1:
        return -1
    return 0
