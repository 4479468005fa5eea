"""Core domain types shared by every game variant.

Cell values follow the color convention used throughout the engine:
+1 for the first player, -1 for the second player, 0 for empty. All
types here are immutable after construction, so they can be shared
freely between threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class GameKind(enum.Enum):
    CONNECT4 = "connect4"
    GOMOKU = "gomoku"
    OTHELLO = "othello"


@dataclass(frozen=True)
class GameId:
    """A game family together with its board dimensions."""

    game: GameKind
    board_h: int
    board_w: int

    def __post_init__(self):
        if self.board_h < 1 or self.board_w < 1:
            raise ValueError(f"board must be at least 1x1, got {self.board_h}x{self.board_w}")
        if self.game is GameKind.OTHELLO:
            if self.board_h % 2 or self.board_w % 2 or min(self.board_h, self.board_w) < 4:
                raise ValueError("othello boards need even dimensions >= 4")

    @property
    def action_space(self) -> int:
        """Size of the move-index space (pass included for othello)."""
        if self.game is GameKind.CONNECT4:
            return self.board_w
        if self.game is GameKind.OTHELLO:
            return self.board_h * self.board_w + 1
        return self.board_h * self.board_w

    @property
    def name(self) -> str:
        return f"{self.game.value}_{self.board_h}x{self.board_w}"


# The six built-in variants. Connect4 5x4 is 5 wide by 4 tall.
CONNECT4 = GameId(GameKind.CONNECT4, 6, 7)
CONNECT4_5X4 = GameId(GameKind.CONNECT4, 4, 5)
GOMOKU = GameId(GameKind.GOMOKU, 9, 9)
GOMOKU_6X6 = GameId(GameKind.GOMOKU, 6, 6)
OTHELLO = GameId(GameKind.OTHELLO, 8, 8)
OTHELLO_6X6 = GameId(GameKind.OTHELLO, 6, 6)

BUILTIN_VARIANTS: dict[str, GameId] = {
    "connect4": CONNECT4,
    "connect4_5x4": CONNECT4_5X4,
    "gomoku": GOMOKU,
    "gomoku_6x6": GOMOKU_6X6,
    "othello": OTHELLO,
    "othello_6x6": OTHELLO_6X6,
}

# the canonical HxW names (GameId.name) are accepted as aliases
_VARIANT_LOOKUP: dict[str, GameId] = {
    **BUILTIN_VARIANTS,
    **{gid.name: gid for gid in BUILTIN_VARIANTS.values()},
}


def variant_by_name(name: str) -> GameId:
    try:
        return _VARIANT_LOOKUP[name.lower()]
    except KeyError:
        known = ", ".join(sorted(BUILTIN_VARIANTS))
        raise KeyError(f"unknown game {name!r} (known: {known})") from None


class ActionKind(enum.Enum):
    PLACE = "place"
    DROP = "drop"
    PASS = "pass"


@dataclass(frozen=True)
class Action:
    """One move: place(row, col) for gomoku/othello, drop(col) for connect4,
    or a pass (othello only, when no placement flips a disc)."""

    kind: ActionKind
    row: int = -1
    col: int = -1

    @staticmethod
    def place(row: int, col: int) -> "Action":
        return Action(ActionKind.PLACE, row, col)

    @staticmethod
    def drop(col: int) -> "Action":
        return Action(ActionKind.DROP, col=col)

    @staticmethod
    def pass_() -> "Action":
        return Action(ActionKind.PASS)

    def __repr__(self):
        if self.kind is ActionKind.PLACE:
            return f"place({self.row},{self.col})"
        if self.kind is ActionKind.DROP:
            return f"drop({self.col})"
        return "pass"


class GameStatus(enum.Enum):
    ONGOING = "ongoing"
    WIN = "win"
    DRAW = "draw"


@dataclass(frozen=True)
class Outcome:
    status: GameStatus
    winner: int = 0  # +1 / -1 for WIN, 0 otherwise

    @property
    def is_terminal(self) -> bool:
        return self.status is not GameStatus.ONGOING

    @property
    def c_win(self) -> int:
        """Winner's disc color; 0 for draws (and for ongoing games)."""
        return self.winner if self.status is GameStatus.WIN else 0


ONGOING = Outcome(GameStatus.ONGOING)
DRAW = Outcome(GameStatus.DRAW)
WIN_FIRST = Outcome(GameStatus.WIN, +1)
WIN_SECOND = Outcome(GameStatus.WIN, -1)


def _cells_to_bits(cells_flat: np.ndarray, color: int) -> int:
    packed = np.packbits(cells_flat == color, bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def bits_to_cells(p1: int, p2: int, h: int, w: int) -> np.ndarray:
    """Expand two occupancy bitboards back into an HxW int8 grid."""
    n = h * w
    nbytes = (n + 7) // 8
    a = np.unpackbits(np.frombuffer(p1.to_bytes(nbytes, "little"), np.uint8),
                      count=n, bitorder="little").astype(np.int8)
    b = np.unpackbits(np.frombuffer(p2.to_bytes(nbytes, "little"), np.uint8),
                      count=n, bitorder="little").astype(np.int8)
    return (a - b).reshape(h, w)


@dataclass(frozen=True)
class GameState:
    """Immutable snapshot of a position.

    `cells` is an HxW int8 grid over {+1, -1, 0}. The two occupancy
    bitboards (row-major, bit r*W+c) are cached at construction and feed
    the fast rule paths; they are derived data, never authoritative over
    `cells`.
    """

    id: GameId
    cells: np.ndarray
    to_move: int
    move_count: int = 0
    p1_bits: int = field(init=False, repr=False)
    p2_bits: int = field(init=False, repr=False)

    def __post_init__(self):
        cells = np.ascontiguousarray(self.cells, dtype=np.int8)
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)
        if cells.shape != (self.id.board_h, self.id.board_w):
            raise ValueError(f"cells shape {cells.shape} does not match {self.id}")
        if self.to_move not in (+1, -1):
            raise ValueError(f"to_move must be +1 or -1, got {self.to_move}")
        flat = cells.reshape(-1)
        object.__setattr__(self, "p1_bits", _cells_to_bits(flat, +1))
        object.__setattr__(self, "p2_bits", _cells_to_bits(flat, -1))

    def bits(self, color: int) -> int:
        return self.p1_bits if color == +1 else self.p2_bits

    @property
    def mover_bits(self) -> int:
        return self.bits(self.to_move)

    @property
    def opponent_bits(self) -> int:
        return self.bits(-self.to_move)

    def key(self) -> tuple:
        """Hashable identity of the position (for tests and caches)."""
        return (self.id, self.p1_bits, self.p2_bits, self.to_move, self.move_count)


class IllegalMoveError(ValueError):
    """Raised when apply_move receives an action that breaks the rules."""


class TerminalStateError(ValueError):
    """Raised when an operation requires a non-terminal state."""
