"""Playing agents and the descriptor grammar used by the CLI and the
tournament harness: `alphavit:<ckpt>` (likewise alphavid/alphavda/
alphazero), `mcts:100`, `mcts:400`, `minimax:3`, `random`.
"""

from __future__ import annotations

import numpy as np

from ..games import Action, GameId, GameKind, GameState, legal_indices
from ..games.rules import action_from_index
from .minimax import minimax_move, othello_weight_table
from .params import SearchParams
from .puct import mcts_search, play_from_visits
from .uct import uct_visit_counts


def random_move(state: GameState, rng: np.random.Generator) -> Action:
    """Uniform choice among the legal moves."""
    moves = legal_indices(state)
    return action_from_index(moves[int(rng.integers(len(moves)))], state.id)


class Agent:
    """One move selector. `move` plays in evaluation mode (greedy, no
    exploration noise); agents that can drive self-play also implement
    `search_visits`."""

    name: str = "agent"

    def can_play(self, game_id: GameId) -> bool:
        return True

    def move(self, state: GameState, rng: np.random.Generator) -> Action:
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class RandomAgent(Agent):
    name = "random"

    def move(self, state, rng):
        return random_move(state, rng)


class MinimaxAgent(Agent):
    def __init__(self, depth: int = 3):
        self.depth = depth
        self.name = f"minimax:{depth}"

    def can_play(self, game_id):
        if game_id.game is GameKind.OTHELLO:
            try:
                othello_weight_table(game_id.board_h, game_id.board_w)
            except ValueError:
                return False
        return True

    def move(self, state, rng):
        return minimax_move(state, self.depth, rng)


class UctAgent(Agent):
    """The MCTS100/MCTS400 baselines (rollout MCTS, fifth-visit expansion)."""

    def __init__(self, n_sim: int):
        self.n_sim = n_sim
        self.name = f"mcts:{n_sim}"

    def search_visits(self, state, rng):
        return uct_visit_counts(state, self.n_sim, rng)

    def move(self, state, rng):
        visits = self.search_visits(state, rng)
        mask = np.zeros(state.id.action_space, dtype=bool)
        mask[legal_indices(state)] = True
        return action_from_index(play_from_visits(visits, "greedy", legal_mask=mask),
                                 state.id)


class NetworkMctsAgent(Agent):
    """PUCT search guided by a policy/value network. In self-play mode
    the root prior is perturbed with Dirichlet noise; evaluation mode
    searches without noise and plays greedily."""

    def __init__(self, model, name: str = "net", sims_by_game: dict | None = None,
                 default_sims: int = 200, c_puct: float = 1.25,
                 self_play: bool = False, dirichlet_eps: float = 0.2,
                 dirichlet_alpha: float = 0.3):
        from ..neural.evaluate import NetworkEvaluator

        self.model = model
        self.name = name
        self.evaluator = NetworkEvaluator(model)
        self.sims_by_game = sims_by_game or {}
        self.default_sims = default_sims
        self.c_puct = c_puct
        self.self_play = self_play
        self.dirichlet_eps = dirichlet_eps
        self.dirichlet_alpha = dirichlet_alpha

    def can_play(self, game_id):
        return self.model.can_play(game_id)

    def params_for(self, game_id: GameId) -> SearchParams:
        return SearchParams(
            n_sim=self.sims_by_game.get(game_id.name, self.default_sims),
            c_puct=self.c_puct,
            dirichlet_eps=self.dirichlet_eps if self.self_play else 0.0,
            dirichlet_alpha=self.dirichlet_alpha,
        )

    def search_visits(self, state, rng):
        visits, _ = mcts_search(state, self.evaluator, self.params_for(state.id), rng)
        return visits

    def move(self, state, rng):
        visits = self.search_visits(state, rng)
        mask = np.zeros(state.id.action_space, dtype=bool)
        mask[legal_indices(state)] = True
        return action_from_index(play_from_visits(visits, "greedy", legal_mask=mask),
                                 state.id)


NETWORK_FAMILIES = ("alphavit", "alphavid", "alphavda", "alphazero")


def parse_agent(descriptor: str, default_sims: int | None = None,
                sims_by_game: dict | None = None) -> Agent:
    """Build an agent from its descriptor string."""
    desc = descriptor.strip()
    kind, _, arg = desc.partition(":")
    kind = kind.lower()
    if kind == "random":
        return RandomAgent()
    if kind == "minimax":
        return MinimaxAgent(int(arg) if arg else 3)
    if kind == "mcts":
        if not arg:
            raise ValueError(f"{desc!r}: mcts needs a simulation count, e.g. mcts:100")
        return UctAgent(int(arg))
    if kind in NETWORK_FAMILIES:
        if not arg:
            raise ValueError(f"{desc!r}: {kind} needs a checkpoint path")
        from ..neural.checkpoint import load_checkpoint

        model, meta = load_checkpoint(arg)
        if model.config.family.value != kind:
            raise ValueError(
                f"{desc!r}: checkpoint holds a {model.config.family.value} model")
        kwargs = {}
        if default_sims is not None:
            kwargs["default_sims"] = default_sims
        return NetworkMctsAgent(model, name=desc, sims_by_game=sims_by_game or {},
                                **kwargs)
    raise ValueError(f"unknown agent descriptor {descriptor!r}")
