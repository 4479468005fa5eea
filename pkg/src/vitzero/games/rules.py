"""Public rule operations for all game variants.

Every operation is a pure function of immutable values. The index-based
forms (`legal_indices`, `apply_index`) are the fast path used by search;
the Action-based forms wrap them. Index order is row-major with the
othello pass slot (H*W) last, so "lowest index" tie-breaking is
deterministic everywhere.
"""

from __future__ import annotations

import numpy as np

from . import connect4, gomoku, othello
from .bitops import Geometry, geometry
from .types import (
    Action,
    ActionKind,
    DRAW,
    GameId,
    GameKind,
    GameState,
    GameStatus,
    IllegalMoveError,
    ONGOING,
    Outcome,
    TerminalStateError,
    bits_to_cells,
)


def initial_state(game_id: GameId) -> GameState:
    if game_id.game is GameKind.OTHELLO:
        return othello.initial_state(game_id)
    cells = np.zeros((game_id.board_h, game_id.board_w), dtype=np.int8)
    return GameState(game_id, cells, to_move=+1)


# -- action/index bijection ---------------------------------------------------

def action_index(action: Action, game_id: GameId) -> int:
    """Map an action to its move index: col for connect4, row*W+col for
    gomoku/othello, H*W for the othello pass."""
    if game_id.game is GameKind.CONNECT4:
        if action.kind is not ActionKind.DROP:
            raise ValueError(f"connect4 actions are drops, got {action!r}")
        if not 0 <= action.col < game_id.board_w:
            raise ValueError(f"column {action.col} out of range")
        return action.col
    if action.kind is ActionKind.PASS:
        if game_id.game is not GameKind.OTHELLO:
            raise ValueError("pass is only legal in othello")
        return game_id.board_h * game_id.board_w
    if action.kind is not ActionKind.PLACE:
        raise ValueError(f"{game_id.game.value} actions are placements, got {action!r}")
    if not (0 <= action.row < game_id.board_h and 0 <= action.col < game_id.board_w):
        raise ValueError(f"cell ({action.row},{action.col}) out of range")
    return action.row * game_id.board_w + action.col


def action_from_index(index: int, game_id: GameId) -> Action:
    if not 0 <= index < game_id.action_space:
        raise ValueError(f"index {index} out of range for {game_id.name}")
    if game_id.game is GameKind.CONNECT4:
        return Action.drop(index)
    if game_id.game is GameKind.OTHELLO and index == game_id.board_h * game_id.board_w:
        return Action.pass_()
    return Action.place(index // game_id.board_w, index % game_id.board_w)


# -- bit-level primitives (shared by the GameState API and by search) ---------

def _bits_of(idx: int) -> int:
    return 1 << idx


def legal_indices_bits(game_id: GameId, geo: Geometry, own: int, opp: int) -> list[int]:
    occupied = own | opp
    kind = game_id.game
    if kind is GameKind.CONNECT4:
        return connect4.legal_columns(geo, occupied)
    if kind is GameKind.GOMOKU:
        empty = gomoku.legal_bits(geo, occupied)
        return _bit_indices(empty)
    moves = othello.moves_bits(geo, own, opp)
    if moves:
        return _bit_indices(moves)
    return [game_id.board_h * game_id.board_w]  # forced pass


def _bit_indices(bits: int) -> list[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


def apply_index_bits(game_id: GameId, geo: Geometry, own: int, opp: int,
                     index: int) -> tuple[int, int]:
    """Apply a legal move index for the side owning `own`; returns the
    updated (own, opp) bitboards. Legality is NOT re-checked here."""
    kind = game_id.game
    if kind is GameKind.CONNECT4:
        return own | connect4.drop_bit(geo, own | opp, index), opp
    if kind is GameKind.GOMOKU:
        return own | _bits_of(index), opp
    if index == game_id.board_h * game_id.board_w:
        return own, opp
    move = _bits_of(index)
    flipped = othello.flips(geo, move, own, opp)
    return own | move | flipped, opp & ~flipped


def terminal_bits(game_id: GameId, geo: Geometry, p1: int, p2: int,
                  last_mover: int) -> Outcome:
    """Outcome of a position given first/second player bitboards.
    `last_mover` is the color that made the previous move (checked first
    for a win so legal positions resolve unambiguously)."""
    kind = game_id.game
    if kind is GameKind.OTHELLO:
        if othello.is_over(geo, p1, p2):
            w = othello.winner(p1, p2)
            return Outcome(GameStatus.WIN, w) if w else DRAW
        return ONGOING
    win = connect4.has_win if kind is GameKind.CONNECT4 else gomoku.has_win
    for color in (last_mover, -last_mover):
        if win(geo, p1 if color == +1 else p2):
            return Outcome(GameStatus.WIN, color)
    if (p1 | p2) == geo.full:
        return DRAW
    return ONGOING


# -- GameState operations ------------------------------------------------------

def terminal_status(state: GameState) -> Outcome:
    geo = geometry(state.id.board_h, state.id.board_w)
    return terminal_bits(state.id, geo, state.p1_bits, state.p2_bits, -state.to_move)


def legal_indices(state: GameState) -> list[int]:
    """Ascending legal move indices. Requires a non-terminal state."""
    if terminal_status(state).is_terminal:
        raise TerminalStateError(f"no legal moves in a terminal {state.id.name} position")
    geo = geometry(state.id.board_h, state.id.board_w)
    return legal_indices_bits(state.id, geo, state.mover_bits, state.opponent_bits)


def legal_moves(state: GameState) -> list[Action]:
    return [action_from_index(i, state.id) for i in legal_indices(state)]


def _check_legal(state: GameState, action: Action, geo: Geometry) -> int:
    """Validate `action` for `state` and return its index."""
    gid = state.id
    idx = action_index(action, gid)
    occupied = state.p1_bits | state.p2_bits
    if gid.game is GameKind.CONNECT4:
        if (occupied >> idx) & 1:
            raise IllegalMoveError(f"column {idx} is full")
        return idx
    if gid.game is GameKind.GOMOKU:
        if (occupied >> idx) & 1:
            raise IllegalMoveError(f"cell ({action.row},{action.col}) is occupied")
        return idx
    moves = othello.moves_bits(geo, state.mover_bits, state.opponent_bits)
    if action.kind is ActionKind.PASS:
        if moves:
            raise IllegalMoveError("pass is only legal when no placement flips a disc")
        return idx
    if (occupied >> idx) & 1:
        raise IllegalMoveError(f"cell ({action.row},{action.col}) is occupied")
    if not (moves >> idx) & 1:
        raise IllegalMoveError(f"placing at ({action.row},{action.col}) flips no disc")
    return idx


def apply_move(state: GameState, action: Action) -> GameState:
    geo = geometry(state.id.board_h, state.id.board_w)
    if terminal_status(state).is_terminal:
        raise TerminalStateError("cannot move in a terminal position")
    idx = _check_legal(state, action, geo)
    return _successor(state, geo, idx)


def apply_index(state: GameState, index: int) -> GameState:
    """Fast successor for a move index already known to be legal."""
    geo = geometry(state.id.board_h, state.id.board_w)
    return _successor(state, geo, index)


def _successor(state: GameState, geo: Geometry, index: int) -> GameState:
    own, opp = state.mover_bits, state.opponent_bits
    own, opp = apply_index_bits(state.id, geo, own, opp, index)
    p1, p2 = (own, opp) if state.to_move == +1 else (opp, own)
    cells = bits_to_cells(p1, p2, state.id.board_h, state.id.board_w)
    return GameState(state.id, cells, to_move=-state.to_move,
                     move_count=state.move_count + 1)
