"""Game rules, state encodings, and symmetry transforms for the six
built-in variants (connect4 7x6 and 5x4, gomoku 9x9 and 6x6, othello
8x8 and 6x6). All states are immutable and all operations pure."""

from .encoding import encode_planes, symmetries, symmetry_count
from .rules import (
    action_from_index,
    action_index,
    apply_index,
    apply_move,
    initial_state,
    legal_indices,
    legal_moves,
    terminal_status,
)
from .textio import format_match_record, parse_board, parse_match_record, render_board
from .types import (
    Action,
    ActionKind,
    BUILTIN_VARIANTS,
    CONNECT4,
    CONNECT4_5X4,
    GOMOKU,
    GOMOKU_6X6,
    GameId,
    GameKind,
    GameState,
    GameStatus,
    IllegalMoveError,
    OTHELLO,
    OTHELLO_6X6,
    Outcome,
    TerminalStateError,
    variant_by_name,
)

__all__ = [
    "Action", "ActionKind", "BUILTIN_VARIANTS", "CONNECT4", "CONNECT4_5X4",
    "GOMOKU", "GOMOKU_6X6", "GameId", "GameKind", "GameState", "GameStatus",
    "IllegalMoveError", "OTHELLO", "OTHELLO_6X6", "Outcome",
    "TerminalStateError", "action_from_index", "action_index", "apply_index",
    "apply_move", "encode_planes", "format_match_record", "initial_state",
    "legal_indices", "legal_moves", "parse_board", "parse_match_record",
    "render_board", "symmetries", "symmetry_count", "terminal_status",
    "variant_by_name",
]
