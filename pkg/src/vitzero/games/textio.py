"""Text formats: board diagrams for fixtures and per-move match records.

Board format: a header line `<game> <H> <W> <to_move>` followed by H
rows of W characters, 'X' for the first player, 'O' for the second,
'.' for empty.

Match record: one line per move, `turn=<n> player=<±1> action=<index>`,
terminated by `result=<±1|0>`.
"""

from __future__ import annotations

import numpy as np

from .types import GameId, GameKind, GameState

_CHARS = {+1: "X", -1: "O", 0: "."}
_VALUES = {v: k for k, v in _CHARS.items()}


def render_board(state: GameState) -> str:
    gid = state.id
    lines = [f"{gid.game.value} {gid.board_h} {gid.board_w} {state.to_move:+d}"]
    for row in state.cells:
        lines.append("".join(_CHARS[int(v)] for v in row))
    return "\n".join(lines) + "\n"


def parse_board(text: str) -> GameState:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty board text")
    parts = lines[0].split()
    if len(parts) != 4:
        raise ValueError(f"bad header {lines[0]!r}, want '<game> <H> <W> <to_move>'")
    game = GameKind(parts[0].lower())
    h, w, to_move = int(parts[1]), int(parts[2]), int(parts[3])
    gid = GameId(game, h, w)
    if len(lines) != h + 1:
        raise ValueError(f"expected {h} board rows, got {len(lines) - 1}")
    cells = np.zeros((h, w), dtype=np.int8)
    for r, row in enumerate(lines[1:]):
        if len(row) != w:
            raise ValueError(f"row {r} has {len(row)} cells, want {w}")
        for c, ch in enumerate(row):
            try:
                cells[r, c] = _VALUES[ch]
            except KeyError:
                raise ValueError(f"bad cell char {ch!r} at ({r},{c})") from None
    discs = int(np.count_nonzero(cells))
    # passes are not recoverable from a diagram; count placements only
    move_count = discs - 4 if game is GameKind.OTHELLO else discs
    return GameState(gid, cells, to_move=to_move, move_count=max(move_count, 0))


def move_record_line(turn: int, player: int, action_index: int) -> str:
    return f"turn={turn} player={player:+d} action={action_index}"


def result_line(c_win: int) -> str:
    return f"result={c_win:+d}" if c_win else "result=0"


def format_match_record(moves: list[tuple[int, int, int]], c_win: int) -> str:
    """`moves` is a list of (turn, player, action_index) triples."""
    lines = [move_record_line(*m) for m in moves]
    lines.append(result_line(c_win))
    return "\n".join(lines) + "\n"


def parse_match_record(text: str) -> tuple[list[tuple[int, int, int]], int]:
    moves: list[tuple[int, int, int]] = []
    result: int | None = None
    for ln in text.strip().splitlines():
        ln = ln.strip()
        if not ln:
            continue
        if ln.startswith("result="):
            result = int(ln.split("=", 1)[1])
            break
        fields = dict(kv.split("=", 1) for kv in ln.split())
        moves.append((int(fields["turn"]), int(fields["player"]), int(fields["action"])))
    if result is None:
        raise ValueError("match record missing result line")
    return moves, result
