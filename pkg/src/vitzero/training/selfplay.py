"""Self-play game generation, symmetry augmentation, and queue
bootstrapping.

A self-play game records, at every turn, the encoded position and the
normalized root visit counts; the final winner's color is back-filled
into every sample. The first t_opening moves are sampled by a softmax
over visit counts (temperature tau); later moves take the most visited
action.
"""

from __future__ import annotations

import numpy as np

from ..games import (
    GameId,
    apply_index,
    encode_planes,
    initial_state,
    legal_indices,
    symmetries,
    terminal_status,
)
from ..search.puct import play_from_visits
from ..search.agents import UctAgent
from .replay import ReplayQueue, Sample


def self_play(agent, game_id: GameId, rng: np.random.Generator,
              t_opening: int = 6, tau: float = 100.0,
              t_history: int = 1) -> list[Sample]:
    """One full game by `agent` against itself; returns one sample per
    ply. The agent must expose search_visits(state, rng)."""
    state = initial_state(game_id)
    past: list = []
    pending: list[tuple[np.ndarray, np.ndarray]] = []
    while True:
        outcome = terminal_status(state)
        if outcome.is_terminal:
            break
        visits = agent.search_visits(state, rng)
        total = visits.sum()
        pi = (visits / total).astype(np.float32)
        planes = encode_planes(state, past, t_history)
        pending.append((planes, pi))

        mask = np.zeros(game_id.action_space, dtype=bool)
        mask[legal_indices(state)] = True
        mode = "softmax" if state.move_count < t_opening else "greedy"
        idx = play_from_visits(visits, mode, tau=tau, legal_mask=mask, rng=rng)
        if t_history > 1:
            past.insert(0, state)
            del past[t_history - 1:]
        state = apply_index(state, idx)

    c_win = outcome.c_win
    return [Sample(planes, pi, c_win, game_id.name) for planes, pi in pending]


def augment(samples: list[Sample], game_id: GameId) -> list[Sample]:
    """Expand each sample through the game's symmetry group (x2 for
    connect4, x8 for gomoku/othello); winners are unchanged."""
    out = []
    for s in samples:
        for planes, pi in symmetries(s.planes, s.pi, game_id):
            out.append(Sample(planes, pi.astype(np.float32), s.c_win, s.game))
    return out


def bootstrap_queue(game_id: GameId, queue: ReplayQueue, rng: np.random.Generator,
                    min_fill: int = 1024, n_sim: int = 100,
                    t_opening: int = 6, tau: float = 100.0,
                    t_history: int = 1) -> int:
    """Fill an empty queue with augmented rollout-MCTS self-play until
    it holds at least min_fill samples (capped by queue capacity).
    Returns the number of games played."""
    agent = UctAgent(n_sim)
    games = 0
    target = min(min_fill, queue.capacity)
    while len(queue) < target:
        samples = self_play(agent, game_id, rng, t_opening=t_opening, tau=tau,
                            t_history=t_history)
        queue.extend(augment(samples, game_id))
        games += 1
    return games
