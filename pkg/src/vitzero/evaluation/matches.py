"""Single evaluation matches between two agents."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..games import (
    GameId,
    action_index,
    apply_move,
    format_match_record,
    initial_state,
    terminal_status,
)


class IncompatibleAgentError(ValueError):
    """An agent cannot play the requested variant (tournaments record
    this as a skip, never as a loss)."""


@dataclass(frozen=True)
class MatchSpec:
    agents: tuple[str, ...]
    game: GameId
    games_per_pair: int = 2
    alternate_first_player: bool = True
    seed: int = 0

    def __post_init__(self):
        if len(self.agents) < 2:
            raise ValueError("a match needs at least two agents")
        if self.games_per_pair < 1:
            raise ValueError("games_per_pair must be >= 1")
        if self.alternate_first_player and self.games_per_pair % 2:
            raise ValueError("games_per_pair must be even when first-player "
                             "alternation is on")


@dataclass
class MatchOutcome:
    result: str            # "a" | "b" | "draw"
    n_moves: int
    record: str            # move-by-move text record

    @property
    def score_a(self) -> float:
        return {"a": 1.0, "draw": 0.5, "b": 0.0}[self.result]


def play_match(agent_a, agent_b, game_id: GameId,
               seed: int | np.random.Generator = 0) -> MatchOutcome:
    """One evaluation game, agent_a moving first, both sides greedy and
    noise-free. The per-seed move record is fully reproducible."""
    for agent in (agent_a, agent_b):
        if not agent.can_play(game_id):
            raise IncompatibleAgentError(f"{agent.name} cannot play {game_id.name}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    state = initial_state(game_id)
    moves: list[tuple[int, int, int]] = []
    while True:
        outcome = terminal_status(state)
        if outcome.is_terminal:
            break
        agent = agent_a if state.to_move == +1 else agent_b
        action = agent.move(state, rng)
        moves.append((state.move_count, state.to_move, action_index(action, game_id)))
        state = apply_move(state, action)
    c_win = outcome.c_win
    result = "a" if c_win == +1 else "b" if c_win == -1 else "draw"
    return MatchOutcome(result=result, n_moves=len(moves),
                        record=format_match_record(moves, c_win))
