"""Lockstep execution of many network-guided games.

Self-play games of one iteration (and evaluation duels) run as
independent state machines whose searches pause at each leaf that needs
a network evaluation; pending leaves from every live game are evaluated
in a single batched forward pass. Each game draws from its own seeded
generator, so results do not depend on how many games share a batch,
only on the per-game seeds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import torch

from ..games import (
    GameId,
    GameState,
    apply_index,
    encode_planes,
    initial_state,
    terminal_status,
)
from ..search.params import SearchParams
from ..search.puct import SearchNode, play_from_visits, root_visits, search_generator
from .replay import Sample


class BatchedNetworkEvaluator:
    """Evaluate a list of same-variant states in one forward pass."""

    def __init__(self, model):
        self.model = model
        self.t_history = model.config.t_history
        model.eval()

    def __call__(self, states: list[GameState]) -> list[tuple[float, np.ndarray]]:
        game_id = states[0].id
        planes = np.stack([encode_planes(s, [], self.t_history) for s in states])
        x = torch.from_numpy(planes).float()
        with torch.inference_mode():
            values, policies = self.model(x, game_id)
        p = policies.numpy().astype(np.float64)
        return [(float(values[i]), p[i]) for i in range(len(states))]


@dataclass
class _SearchTask:
    """One in-flight tree search."""
    root: SearchNode
    gen: object
    request: GameState = None

    @staticmethod
    def start(state: GameState, params: SearchParams, rng) -> "_SearchTask":
        root = SearchNode(state)
        gen = search_generator(root, params, rng)
        task = _SearchTask(root=root, gen=gen)
        task.request = next(gen)
        return task

    def feed(self, result) -> bool:
        """Advance with an evaluation result; True when the search is done."""
        try:
            self.request = self.gen.send(result)
            return False
        except StopIteration:
            self.request = None
            return True


@dataclass
class _SelfPlaySlot:
    rng: np.random.Generator
    state: GameState
    params: SearchParams
    t_opening: int
    tau: float
    t_history: int
    past: list = field(default_factory=list)
    pending: list = field(default_factory=list)   # (planes, pi) per ply
    task: _SearchTask | None = None
    samples: list | None = None                   # set when finished

    def begin_search(self):
        self.task = _SearchTask.start(self.state, self.params, self.rng)

    def finish_search(self, game_id: GameId):
        visits = root_visits(self.task.root)
        pi = (visits / visits.sum()).astype(np.float32)
        planes = encode_planes(self.state, self.past, self.t_history)
        self.pending.append((planes, pi))

        mask = np.zeros(game_id.action_space, dtype=bool)
        mask[self.task.root.actions] = True
        mode = "softmax" if self.state.move_count < self.t_opening else "greedy"
        idx = play_from_visits(visits, mode, tau=self.tau, legal_mask=mask,
                               rng=self.rng)
        if self.t_history > 1:
            self.past.insert(0, self.state)
            del self.past[self.t_history - 1:]
        self.state = apply_index(self.state, idx)
        self.task = None

        outcome = terminal_status(self.state)
        if outcome.is_terminal:
            c_win = outcome.c_win
            self.samples = [Sample(planes, pi, c_win, game_id.name)
                            for planes, pi in self.pending]
        else:
            self.begin_search()


def self_play_batch(evaluator: BatchedNetworkEvaluator, game_id: GameId,
                    n_games: int, seed_entropies: list, params: SearchParams,
                    t_opening: int, tau: float,
                    t_history: int = 1) -> list[list[Sample]]:
    """Play n_games self-play games in lockstep; returns each game's
    samples in input order."""
    slots = []
    for g in range(n_games):
        rng = np.random.default_rng(np.random.SeedSequence(seed_entropies[g]))
        slot = _SelfPlaySlot(rng=rng, state=initial_state(game_id), params=params,
                             t_opening=t_opening, tau=tau, t_history=t_history)
        slot.begin_search()
        slots.append(slot)

    while True:
        live = [s for s in slots if s.samples is None]
        if not live:
            break
        requests = [s.task.request for s in live]
        results = evaluator(requests)
        for slot, result in zip(live, results):
            if slot.task.feed(result):
                slot.finish_search(game_id)
    return [s.samples for s in slots]


@dataclass
class _DuelSlot:
    rng: np.random.Generator
    state: GameState
    net_color: int
    task: _SearchTask | None = None
    result: str | None = None   # "net" | "opponent" | "draw"


def duel_batch(model, opponent, game_id: GameId, n_games: int, n_sim: int,
               seed0: int = 0, c_puct: float = 1.25, alternate: bool = True,
               ) -> list[str]:
    """Evaluation matches of a network agent against `opponent`, batched
    over the network's turns. Greedy, noise-free play on both sides; the
    network takes the first move in even games (then alternates). Per
    game one seeded generator drives both players, as in play_match."""
    evaluator = BatchedNetworkEvaluator(model)
    params = SearchParams(n_sim=n_sim, c_puct=c_puct, dirichlet_eps=0.0)
    slots = []
    for g in range(n_games):
        net_color = +1 if (g % 2 == 0 or not alternate) else -1
        slots.append(_DuelSlot(rng=np.random.default_rng(seed0 + g),
                               state=initial_state(game_id),
                               net_color=net_color))

    def advance(slot: _DuelSlot):
        """Play opponent moves / detect the end until it is the network's
        turn, then start its search."""
        while slot.result is None:
            outcome = terminal_status(slot.state)
            if outcome.is_terminal:
                c = outcome.c_win
                slot.result = ("draw" if c == 0 else
                               "net" if c == slot.net_color else "opponent")
                return
            if slot.state.to_move == slot.net_color:
                slot.task = _SearchTask.start(slot.state, params, slot.rng)
                return
            slot.state = apply_index(
                slot.state,
                _move_index(opponent, slot.state, slot.rng))

    def _move_index(agent, state, rng):
        from ..games.rules import action_index
        return action_index(agent.move(state, rng), state.id)

    for slot in slots:
        advance(slot)

    while True:
        live = [s for s in slots if s.result is None]
        if not live:
            break
        requests = [s.task.request for s in live]
        results = evaluator(requests)
        for slot, result in zip(live, results):
            if slot.task.feed(result):
                visits = root_visits(slot.task.root)
                mask = np.zeros(game_id.action_space, dtype=bool)
                mask[slot.task.root.actions] = True
                idx = play_from_visits(visits, "greedy", legal_mask=mask)
                slot.state = apply_index(slot.state, idx)
                slot.task = None
                advance(slot)
    return [s.result for s in slots]
