"""Feature-plane encoding and board symmetries.

A feature stack is a (2T+1, H, W) int8 array: planes [0, T) hold the
first player's occupancy at times now, now-1, ..., planes [T, 2T) the
second player's, and the last plane is constant +1/-1 for the side to
move. T defaults to 1 (just the current position).
"""

from __future__ import annotations

import numpy as np

from .types import GameId, GameKind, GameState

PolicyArray = np.ndarray
FeatureStack = np.ndarray


def encode_planes(state: GameState, history: list[GameState] | None = None,
                  t_history: int = 1) -> FeatureStack:
    """Encode `state` (plus the previous t_history-1 states, most recent
    first, zero-filled when missing) into binary feature planes."""
    h, w = state.id.board_h, state.id.board_w
    planes = np.zeros((2 * t_history + 1, h, w), dtype=np.int8)
    seq = [state] + list(history or [])
    for t in range(min(t_history, len(seq))):
        planes[t] = seq[t].cells == +1
        planes[t_history + t] = seq[t].cells == -1
    planes[2 * t_history] = state.to_move
    return planes


def _dihedral_ops(n_syms: int):
    """Transforms of an (..., H, W) array, identity first. The first two
    are the identity and the horizontal mirror; the square-board group
    adds the remaining six."""
    ops = [
        lambda a: a,
        lambda a: np.flip(a, axis=-1),
    ]
    if n_syms == 8:
        ops += [
            lambda a: np.rot90(a, 1, axes=(-2, -1)),
            lambda a: np.rot90(a, 2, axes=(-2, -1)),
            lambda a: np.rot90(a, 3, axes=(-2, -1)),
            lambda a: np.flip(np.rot90(a, 1, axes=(-2, -1)), axis=-1),
            lambda a: np.flip(np.rot90(a, 2, axes=(-2, -1)), axis=-1),
            lambda a: np.flip(np.rot90(a, 3, axes=(-2, -1)), axis=-1),
        ]
    return ops


def symmetry_count(game_id: GameId) -> int:
    return 2 if game_id.game is GameKind.CONNECT4 else 8


def symmetries(features: FeatureStack, policy: PolicyArray,
               game_id: GameId) -> list[tuple[FeatureStack, PolicyArray]]:
    """All rule-preserving (features, policy) transforms of a sample:
    identity + mirror for connect4, the full dihedral group of the
    square for gomoku/othello. The othello pass entry and the color
    plane are carried unchanged (the color plane is constant, so the
    spatial maps fix it anyway)."""
    h, w = game_id.board_h, game_id.board_w
    n_syms = symmetry_count(game_id)
    if n_syms == 8 and h != w:
        raise ValueError(f"8-fold symmetry needs a square board, got {h}x{w}")
    policy = np.asarray(policy)

    if game_id.game is GameKind.CONNECT4:
        if policy.shape != (w,):
            raise ValueError(f"connect4 policy must have shape ({w},)")
        return [
            (features.copy(), policy.copy()),
            (np.flip(features, axis=-1).copy(), policy[::-1].copy()),
        ]

    has_pass = game_id.game is GameKind.OTHELLO
    expect = h * w + (1 if has_pass else 0)
    if policy.shape != (expect,):
        raise ValueError(f"policy must have shape ({expect},)")
    spatial = policy[: h * w].reshape(h, w)
    out = []
    for op in _dihedral_ops(n_syms):
        f = op(features).copy()
        p_sp = op(spatial).reshape(-1)
        p = np.concatenate([p_sp, policy[h * w:]]) if has_pass else p_sp.copy()
        out.append((f, p))
    return out
