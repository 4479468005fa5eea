"""Move selection: PUCT tree search for network agents plus the UCT,
minimax, and random baselines."""

from .agents import (
    Agent,
    MinimaxAgent,
    NetworkMctsAgent,
    RandomAgent,
    UctAgent,
    parse_agent,
    random_move,
)
from .minimax import evaluate_leaf, minimax_move, minimax_root_values
from .params import SearchParams
from .puct import (
    SearchNode,
    mcts_search,
    play_from_visits,
    puct_select,
    puct_select_move,
    softmax_visit_probs,
    uniform_evaluator,
)
from .uct import uct_search, uct_visit_counts

__all__ = [
    "Agent", "MinimaxAgent", "NetworkMctsAgent", "RandomAgent", "SearchNode",
    "SearchParams", "UctAgent", "evaluate_leaf", "mcts_search", "minimax_move",
    "minimax_root_values", "parse_agent", "play_from_visits", "puct_select",
    "puct_select_move",
    "random_move", "softmax_visit_probs", "uct_search", "uct_visit_counts",
    "uniform_evaluator",
]
