"""vitzero: board-game AI engine with board-size-agnostic transformer
policy/value networks, MCTS agents, self-play training, and an Elo
tournament harness."""

__version__ = "0.1.0"
