"""Plain full-width minimax (depth 3, no pruning) with hand-crafted
leaf evaluations.

Connect4/gomoku positions score the maximal same-color runs on the
board: a run of two is worth R, of three R^2 (gomoku adds R^3 for
four), R = 100, signed by the run color times the minimax player's
color. Terminal values are R^3 (connect4) / R^4 (gomoku) times the
winner color. Othello positions use per-cell weight tables; its
terminal value is 1000 times the winner color, and within the last six
turns the tree is expanded all the way to terminal positions.
"""

from __future__ import annotations

import numpy as np

from ..games import Action, GameState, GameKind, TerminalStateError, terminal_status
from ..games.bitops import Geometry, geometry
from ..games.rules import action_from_index, legal_indices_bits, _bit_indices

BASE_REWARD = 100
TERMINAL_VALUE = {
    GameKind.CONNECT4: BASE_REWARD ** 3,
    GameKind.GOMOKU: BASE_REWARD ** 4,
    GameKind.OTHELLO: 1000,
}
OTHELLO_ENDGAME_TURNS = 6

OTHELLO_WEIGHTS_6 = np.array([
    [30,  -5,   2,   2,  -5,  30],
    [-5, -15,   3,   3, -15,  -5],
    [2,    3,   0,   0,   3,   2],
    [2,    3,   0,   0,   3,   2],
    [-5, -15,   3,   3, -15,  -5],
    [30,  -5,   2,   2,  -5,  30],
], dtype=np.int64)

OTHELLO_WEIGHTS_8 = np.array([
    [120, -20,  20,   5,   5,  20, -20, 120],
    [-20, -40,  -5,  -5,  -5,  -5, -40, -20],
    [20,   -5,  15,   3,   3,  15,  -5,  20],
    [5,    -5,   3,   3,   3,   3,  -5,   5],
    [5,    -5,   3,   3,   3,   3,  -5,   5],
    [20,   -5,  15,   3,   3,  15,  -5,  20],
    [-20, -40,  -5,  -5,  -5,  -5, -40, -20],
    [120, -20,  20,   5,   5,  20, -20, 120],
], dtype=np.int64)


def othello_weight_table(h: int, w: int) -> np.ndarray:
    if (h, w) == (6, 6):
        return OTHELLO_WEIGHTS_6
    if (h, w) == (8, 8):
        return OTHELLO_WEIGHTS_8
    raise ValueError(f"no othello weight table for a {h}x{w} board")


def _run_score(geo: Geometry, p1: int, p2: int, kmax: int) -> int:
    """First-player-perspective line score: sum over maximal runs of
    length k in [2, kmax] of R^(k-1), signed by the run's color."""
    total = 0
    for bits, sign in ((p1, 1), (p2, -1)):
        runs = geo.maximal_run_counts(bits, kmax)
        for i, r in enumerate(runs):
            total += sign * r * BASE_REWARD ** (i + 1)
    return total


def _table_score(table_flat, p1: int, p2: int) -> int:
    total = 0
    for bits, sign in ((p1, 1), (p2, -1)):
        while bits:
            low = bits & -bits
            total += sign * table_flat[low.bit_length() - 1]
            bits ^= low
    return total


def evaluate_leaf(state: GameState, minimax_color: int) -> float:
    """Static evaluation of a position from `minimax_color`'s side."""
    geo = geometry(state.id.board_h, state.id.board_w)
    kind = state.id.game
    if kind is GameKind.OTHELLO:
        table = othello_weight_table(state.id.board_h, state.id.board_w)
        score = _table_score(table.reshape(-1), state.p1_bits, state.p2_bits)
    else:
        kmax = 3 if kind is GameKind.CONNECT4 else 4
        score = _run_score(geo, state.p1_bits, state.p2_bits, kmax)
    return float(score * minimax_color)


def _minimax_value(gid, geo: Geometry, own: int, opp: int, to_move: int,
                   depth: int, mm: int, table_flat) -> float:
    """Value of the position where `to_move` (owning `own`) is to act."""
    kind = gid.game
    term = TERMINAL_VALUE[kind]

    if kind is GameKind.OTHELLO:
        p1, p2 = (own, opp) if to_move == +1 else (opp, own)
        if (own | opp) == geo.full:
            return term * _majority(p1, p2) * mm
        moves = geo.othello_moves(own, opp)
        if not moves:
            if not geo.othello_moves(opp, own):
                return term * _majority(p1, p2) * mm
            # forced pass: same board, other side to act
            return _minimax_value(gid, geo, opp, own, -to_move, depth - 1, mm,
                                  table_flat)
        endgame = geo.n - (own | opp).bit_count() <= OTHELLO_ENDGAME_TURNS
        if depth <= 0 and not endgame:
            return float(_table_score(table_flat, p1, p2) * mm)
        best = None
        for idx in _bit_indices(moves):
            mv = 1 << idx
            fl = geo.othello_flips(mv, own, opp)
            v = _minimax_value(gid, geo, opp & ~fl, own | mv | fl, -to_move,
                               depth - 1, mm, table_flat)
            best = v if best is None else (max(best, v) if to_move == mm else min(best, v))
        return best

    # connect4 / gomoku: only the previous mover (owner of `opp`) can have
    # just completed a line
    win_len = 4 if kind is GameKind.CONNECT4 else 5
    if geo.has_window(opp, win_len):
        return term * -to_move * mm
    if (own | opp) == geo.full:
        return 0.0
    if depth <= 0:
        p1, p2 = (own, opp) if to_move == +1 else (opp, own)
        kmax = 3 if kind is GameKind.CONNECT4 else 4
        return float(_run_score(geo, p1, p2, kmax) * mm)
    best = None
    for idx in legal_indices_bits(gid, geo, own, opp):
        nown, nopp = _apply(gid, geo, own, opp, idx, kind)
        v = _minimax_value(gid, geo, nopp, nown, -to_move, depth - 1, mm, table_flat)
        best = v if best is None else (max(best, v) if to_move == mm else min(best, v))
    return best


def _apply(gid, geo, own, opp, idx, kind):
    if kind is GameKind.CONNECT4:
        from ..games.connect4 import drop_bit
        return own | drop_bit(geo, own | opp, idx), opp
    return own | (1 << idx), opp


def _majority(p1: int, p2: int) -> int:
    n1, n2 = p1.bit_count(), p2.bit_count()
    return +1 if n1 > n2 else -1 if n2 > n1 else 0


def minimax_root_values(state: GameState, depth: int = 3) -> tuple[list[int], list[float]]:
    """Legal move indices and their minimax values for the mover."""
    if terminal_status(state).is_terminal:
        raise TerminalStateError("minimax needs a non-terminal state")
    gid = state.id
    geo = geometry(gid.board_h, gid.board_w)
    table_flat = (othello_weight_table(gid.board_h, gid.board_w).reshape(-1)
                  if gid.game is GameKind.OTHELLO else None)
    own, opp = state.mover_bits, state.opponent_bits
    moves = legal_indices_bits(gid, geo, own, opp)
    values = []
    for idx in moves:
        if gid.game is GameKind.OTHELLO and idx == gid.board_h * gid.board_w:
            v = _minimax_value(gid, geo, opp, own, -state.to_move, depth - 1,
                               state.to_move, table_flat)
        else:
            nown, nopp = apply_for(gid, geo, own, opp, idx)
            v = _minimax_value(gid, geo, nopp, nown, -state.to_move, depth - 1,
                               state.to_move, table_flat)
        values.append(v)
    return moves, values


def apply_for(gid, geo, own, opp, idx):
    kind = gid.game
    if kind is GameKind.OTHELLO:
        mv = 1 << idx
        fl = geo.othello_flips(mv, own, opp)
        return own | mv | fl, opp & ~fl
    return _apply(gid, geo, own, opp, idx, kind)


def minimax_move(state: GameState, depth: int = 3,
                 rng: np.random.Generator | None = None) -> Action:
    """Best move at the root; exact ties are broken uniformly at random
    (seeded by the caller's rng) to avoid exploitable determinism."""
    moves, values = minimax_root_values(state, depth)
    best = max(values)
    top = [m for m, v in zip(moves, values) if v == best]
    if len(top) > 1 and rng is not None:
        choice = top[int(rng.integers(len(top)))]
    else:
        choice = top[0]
    return action_from_index(choice, state.id)
