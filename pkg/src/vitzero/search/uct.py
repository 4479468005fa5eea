"""Baseline MCTS (the MCTS100/MCTS400 opponents).

Classic UCT: UCB1 selection with unvisited edges tried first, leaf
evaluation by a uniform-random rollout to the end of the game (value =
winner color, draw 0), and delayed expansion - a node's children are
created on its fifth visit. The root is expanded immediately so every
simulation crosses exactly one root edge.
"""

from __future__ import annotations

import math

import numpy as np

from ..games import Action, GameState, TerminalStateError
from ..games.bitops import geometry
from ..games.rules import (
    action_from_index,
    apply_index,
    apply_index_bits,
    legal_indices_bits,
    terminal_bits,
)

EXPAND_AT_VISIT = 5
DEFAULT_C_UCB = math.sqrt(2.0)


def rollout_value(state: GameState, rng: np.random.Generator) -> float:
    """Uniform-random playout from `state`; returns the winner color."""
    gid = state.id
    geo = geometry(gid.board_h, gid.board_w)
    p1, p2, to_move = state.p1_bits, state.p2_bits, state.to_move
    while True:
        out = terminal_bits(gid, geo, p1, p2, -to_move)
        if out.is_terminal:
            return float(out.c_win)
        own, opp = (p1, p2) if to_move == +1 else (p2, p1)
        moves = legal_indices_bits(gid, geo, own, opp)
        own, opp = apply_index_bits(gid, geo, own, opp,
                                    moves[rng.integers(len(moves))])
        p1, p2 = (own, opp) if to_move == +1 else (opp, own)
        to_move = -to_move


class UctNode:
    __slots__ = ("state", "terminal_value", "visits", "actions", "N", "W", "Q",
                 "children")

    def __init__(self, state: GameState):
        self.state = state
        geo = geometry(state.id.board_h, state.id.board_w)
        out = terminal_bits(state.id, geo, state.p1_bits, state.p2_bits,
                            -state.to_move)
        self.terminal_value = float(out.c_win) if out.is_terminal else None
        self.visits = 0
        self.actions: list[int] | None = None
        self.N = self.W = self.Q = None
        self.children: dict[int, UctNode] = {}

    @property
    def expanded(self) -> bool:
        return self.actions is not None

    def expand(self) -> None:
        state = self.state
        geo = geometry(state.id.board_h, state.id.board_w)
        acts = legal_indices_bits(state.id, geo, state.mover_bits,
                                  state.opponent_bits)
        self.actions = acts
        self.N = np.zeros(len(acts), dtype=np.int64)
        self.W = np.zeros(len(acts), dtype=np.float64)
        self.Q = np.zeros(len(acts), dtype=np.float64)

    def select(self, c_ucb: float) -> int:
        unvisited = np.flatnonzero(self.N == 0)
        if len(unvisited):
            return int(unvisited[0])
        scores = self.Q + c_ucb * np.sqrt(math.log(self.N.sum()) / self.N)
        return int(np.argmax(scores))

    def child(self, k: int) -> "UctNode":
        node = self.children.get(k)
        if node is None:
            node = UctNode(apply_index(self.state, self.actions[k]))
            self.children[k] = node
        return node


def uct_visit_counts(root_state: GameState, n_sim: int, rng: np.random.Generator,
                     c_ucb: float = DEFAULT_C_UCB,
                     return_root: bool = False):
    """Root visit counts over the full action space after n_sim
    simulations (optionally also the root node, for inspection)."""
    root = UctNode(root_state)
    if root.terminal_value is not None:
        raise TerminalStateError("uct search needs a non-terminal root")
    root.expand()

    for _ in range(n_sim):
        node = root
        path: list[tuple[UctNode, int]] = []
        while True:
            if node.terminal_value is not None:
                value = node.terminal_value
                break
            if not node.expanded:
                if node.visits >= EXPAND_AT_VISIT - 1:
                    node.expand()
                    continue
                value = rollout_value(node.state, rng)
                break
            k = node.select(c_ucb)
            path.append((node, k))
            node = node.child(k)
        node.visits += 1
        for parent, k in path:
            parent.visits += 1
            parent.N[k] += 1
            parent.W[k] += value * parent.state.to_move
            parent.Q[k] = parent.W[k] / parent.N[k]

    visits = np.zeros(root_state.id.action_space, dtype=np.int64)
    visits[np.asarray(root.actions)] = root.N
    return (visits, root) if return_root else visits


def uct_search(root_state: GameState, n_sim: int, rng: np.random.Generator,
               c_ucb: float = DEFAULT_C_UCB) -> Action:
    """Best move by visit count (lowest index on ties)."""
    visits = uct_visit_counts(root_state, n_sim, rng, c_ucb)
    return action_from_index(int(np.argmax(visits)), root_state.id)
