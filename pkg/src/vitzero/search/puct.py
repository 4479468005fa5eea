"""Network-guided Monte Carlo tree search.

Each simulation selects edges by the PUCT score down to a leaf,
evaluates the leaf with the network (or the winner color for terminal
leaves), expands it, and backs the value up the path. Leaf values are
in absolute first-player terms; an edge accumulates v times the color
of the player moving at its parent, so Q is always from the acting
player's perspective and selection maximizes for both sides.

A tree is owned by a single search call; nothing here mutates shared
state, so concurrent searches over one read-only network are safe.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..games import GameState, TerminalStateError
from ..games.rules import legal_indices_bits, apply_index, terminal_bits
from ..games.bitops import geometry
from .params import SearchParams

# evaluator: state -> (value in [-1,1] for the first player,
#                      prior scores over the full action space)
Evaluator = Callable[[GameState], tuple[float, np.ndarray]]


def uniform_evaluator(state: GameState) -> tuple[float, np.ndarray]:
    """Untrained stand-in: zero value, equal prior on every action."""
    return 0.0, np.ones(state.id.action_space, dtype=np.float64)


class SearchNode:
    __slots__ = ("state", "terminal_value", "actions", "N", "W", "Q", "P", "children")

    def __init__(self, state: GameState):
        self.state = state
        geo = geometry(state.id.board_h, state.id.board_w)
        out = terminal_bits(state.id, geo, state.p1_bits, state.p2_bits, -state.to_move)
        self.terminal_value = float(out.c_win) if out.is_terminal else None
        self.actions: list[int] | None = None  # set on expansion
        self.N = self.W = self.Q = self.P = None
        self.children: dict[int, SearchNode] = {}

    @property
    def expanded(self) -> bool:
        return self.actions is not None

    def expand(self, priors: np.ndarray) -> None:
        state = self.state
        geo = geometry(state.id.board_h, state.id.board_w)
        acts = legal_indices_bits(state.id, geo, state.mover_bits, state.opponent_bits)
        self.actions = acts
        n = len(acts)
        self.N = np.zeros(n, dtype=np.int64)
        self.W = np.zeros(n, dtype=np.float64)
        self.Q = np.zeros(n, dtype=np.float64)
        p = np.asarray(priors, dtype=np.float64)[acts]
        total = p.sum()
        # sigmoid outputs are positive, but guard degenerate inputs
        self.P = p / total if total > 0 else np.full(n, 1.0 / n)

    def child(self, k: int) -> "SearchNode":
        node = self.children.get(k)
        if node is None:
            node = SearchNode(apply_index(self.state, self.actions[k]))
            self.children[k] = node
        return node


def puct_scores(node: SearchNode, c_puct: float) -> np.ndarray:
    sqrt_total = np.sqrt(node.N.sum())
    return node.Q + c_puct * node.P * sqrt_total / (1.0 + node.N)


def puct_select(node: SearchNode, c_puct: float) -> int:
    """Position (into node.actions) of the highest-scoring edge, ties
    broken toward the lowest action index."""
    if not node.expanded:
        raise ValueError("puct_select on an unexpanded node")
    return int(np.argmax(puct_scores(node, c_puct)))


def puct_select_move(node: SearchNode, c_puct: float):
    """The selected edge as an Action."""
    from ..games.rules import action_from_index
    k = puct_select(node, c_puct)
    return action_from_index(node.actions[k], node.state.id)


def add_root_noise(node: SearchNode, eps: float, alpha: float,
                   rng: np.random.Generator) -> None:
    if eps <= 0.0:
        return
    noise = rng.dirichlet(np.full(len(node.actions), alpha))
    node.P = (1.0 - eps) * node.P + eps * noise


def search_generator(root: SearchNode, params: SearchParams,
                     rng: np.random.Generator):
    """Simulation driver as a generator: yields each state that needs a
    network evaluation and receives (value, priors) via send(). Batched
    runners interleave many of these over one model; the generator's
    own arithmetic is identical to the synchronous search. Returns the
    summed backed-up leaf value."""
    if root.terminal_value is not None:
        raise TerminalStateError("mcts_search needs a non-terminal root")
    _, priors = yield root.state
    root.expand(priors)
    add_root_noise(root, params.dirichlet_eps, params.dirichlet_alpha, rng)

    value_sum = 0.0
    for _ in range(params.n_sim):
        node = root
        path: list[tuple[SearchNode, int]] = []
        while True:
            if node.terminal_value is not None:
                value = node.terminal_value
                break
            if not node.expanded:
                value, priors = yield node.state
                node.expand(priors)
                break
            k = puct_select(node, params.c_puct)
            path.append((node, k))
            node = node.child(k)
        for parent, k in path:
            parent.N[k] += 1
            parent.W[k] += value * parent.state.to_move
            parent.Q[k] = parent.W[k] / parent.N[k]
        value_sum += value
    return value_sum


def root_visits(root: SearchNode) -> np.ndarray:
    visits = np.zeros(root.state.id.action_space, dtype=np.int64)
    visits[np.asarray(root.actions)] = root.N
    return visits


def mcts_search(root_state: GameState, evaluate: Evaluator, params: SearchParams,
                rng: np.random.Generator, root: SearchNode | None = None,
                ) -> tuple[np.ndarray, float]:
    """Run params.n_sim simulations from root_state.

    Returns (visit counts over the full action space, value estimate).
    The value estimate is the mean backed-up leaf value in first-player
    terms. Pass a prebuilt root to inspect the tree afterwards.
    """
    if root is None:
        root = SearchNode(root_state)
    gen = search_generator(root, params, rng)
    request = next(gen)
    while True:
        try:
            request = gen.send(evaluate(request))
        except StopIteration as done:
            value_sum = done.value
            break
    return root_visits(root), value_sum / params.n_sim


def play_from_visits(visits: np.ndarray, mode: str = "greedy", tau: float = 1.0,
                     legal_mask: np.ndarray | None = None,
                     rng: np.random.Generator | None = None) -> int:
    """Pick a move index from root visit counts.

    greedy: most visited (lowest index on ties; lowest legal index when
    all visits are zero). softmax: sample with probability proportional
    to exp(N/tau) over legal actions.
    """
    visits = np.asarray(visits, dtype=np.float64)
    if legal_mask is None:
        legal = np.arange(len(visits))
    else:
        legal = np.flatnonzero(legal_mask)
        if len(legal) == 0:
            raise ValueError("no legal actions")
    if mode == "greedy":
        return int(legal[np.argmax(visits[legal])])
    if mode != "softmax":
        raise ValueError(f"unknown mode {mode!r}")
    if rng is None:
        raise ValueError("softmax sampling needs an rng")
    p = softmax_visit_probs(visits[legal], tau)
    return int(rng.choice(legal, p=p))


def softmax_visit_probs(visits: np.ndarray, tau: float) -> np.ndarray:
    """exp(N/tau) / sum(exp(N/tau)), computed stably."""
    x = np.asarray(visits, dtype=np.float64) / tau
    x -= x.max()
    e = np.exp(x)
    return e / e.sum()
