"""Bridge between game states and a network: the evaluator interface
used by the tree search."""

from __future__ import annotations

import numpy as np
import torch

from ..games import GameState, encode_planes


class NetworkEvaluator:
    """state -> (value for the first player, prior scores per action).

    Runs the model in eval mode without gradients; safe to share across
    concurrent searches because inference never mutates the weights.
    """

    def __init__(self, model):
        self.model = model
        model.eval()

    def __call__(self, state: GameState) -> tuple[float, np.ndarray]:
        planes = encode_planes(state, [], self.model.config.t_history)
        x = torch.from_numpy(np.ascontiguousarray(planes)).float().unsqueeze(0)
        with torch.inference_mode():
            value, policy = self.model(x, state.id)
        return float(value[0]), policy[0].numpy().astype(np.float64)
