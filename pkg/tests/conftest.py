import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from vitzero.games import apply_index, initial_state, legal_indices, terminal_status


def random_playout(game_id, rng, collect=True):
    """Play uniformly random legal moves to the end; returns the list of
    states visited (terminal last) or just the final state."""
    state = initial_state(game_id)
    states = [state]
    while not terminal_status(state).is_terminal:
        moves = legal_indices(state)
        state = apply_index(state, moves[rng.integers(len(moves))])
        if collect:
            states.append(state)
    return states if collect else state


def random_position(game_id, rng, max_plies=None):
    """A random non-terminal position from a random playout prefix."""
    while True:
        states = random_playout(game_id, rng)
        candidates = states[:-1]
        if max_plies is not None:
            candidates = [s for s in candidates if s.move_count <= max_plies]
        if candidates:
            return candidates[rng.integers(len(candidates))]


def rng_for(seed):
    return np.random.default_rng(seed)
