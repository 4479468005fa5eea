"""Training configuration with the reference defaults.

Game-specific knobs (simulations, self-play games per iteration,
opening length, softmax temperature) default to the published
per-variant table; everything else to the shared hyperparameter table.
Values can be overridden by a key=value config file.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path


@dataclass(frozen=True)
class GameTrainParams:
    n_sim: int
    n_selfplay: int
    t_opening: int
    tau: float


# per-variant defaults: simulations, self-play games, T_opening, tau
GAME_TRAIN_DEFAULTS: dict[str, GameTrainParams] = {
    "connect4_6x7": GameTrainParams(200, 30, 6, 100.0),
    "connect4_4x5": GameTrainParams(200, 30, 4, 100.0),
    "gomoku_9x9": GameTrainParams(400, 10, 8, 40.0),
    "gomoku_6x6": GameTrainParams(200, 10, 6, 20.0),
    "othello_8x8": GameTrainParams(400, 10, 6, 80.0),
    "othello_6x6": GameTrainParams(200, 10, 4, 40.0),
}

FALLBACK_GAME_PARAMS = GameTrainParams(200, 10, 6, 40.0)


@dataclass(frozen=True)
class TrainConfig:
    n_iterations: int = 1000
    batch_size: int = 1024
    n_epochs: int = 1
    learning_rate: float = 0.01
    momentum: float = 0.9
    weight_decay: float = 0.0001
    queue_capacity: int = 100_000
    t_history: int = 1
    c_puct: float = 1.25
    dirichlet_eps: float = 0.2
    dirichlet_alpha: float = 0.3
    bootstrap_min_fill: int = 1024
    bootstrap_sims: int = 100
    threads: int = 1
    game_params: dict[str, GameTrainParams] = field(default_factory=dict)

    def __post_init__(self):
        for name, value in (("n_iterations", self.n_iterations),
                            ("batch_size", self.batch_size),
                            ("n_epochs", self.n_epochs),
                            ("queue_capacity", self.queue_capacity),
                            ("t_history", self.t_history),
                            ("threads", self.threads)):
            if value < 1:
                raise ValueError(f"{name} must be positive")
        if self.learning_rate < 0 or self.momentum < 0 or self.weight_decay < 0:
            raise ValueError("optimizer settings must be non-negative")

    def for_game(self, game_name: str) -> GameTrainParams:
        if game_name in self.game_params:
            return self.game_params[game_name]
        return GAME_TRAIN_DEFAULTS.get(game_name, FALLBACK_GAME_PARAMS)


_SCALAR_KEYS = {
    "num_iterations": ("n_iterations", int),
    "batch_size": ("batch_size", int),
    "num_epochs": ("n_epochs", int),
    "learning_rate": ("learning_rate", float),
    "momentum": ("momentum", float),
    "weight_decay": ("weight_decay", float),
    "queue_size": ("queue_capacity", int),
    "history_t": ("t_history", int),
    "c_puct": ("c_puct", float),
    "epsilon": ("dirichlet_eps", float),
    "dirichlet_alpha": ("dirichlet_alpha", float),
    "bootstrap_min_fill": ("bootstrap_min_fill", int),
    "bootstrap_sims": ("bootstrap_sims", int),
    "threads": ("threads", int),
}

# per-game keys look like `connect4_4x5.num_simulations`
_GAME_KEYS = {
    "num_simulations": ("n_sim", int),
    "num_selfplay": ("n_selfplay", int),
    "t_opening": ("t_opening", int),
    "tau": ("tau", float),
}


class ConfigFileError(ValueError):
    pass


def parse_config_file(path, base: TrainConfig | None = None) -> TrainConfig:
    """Apply `key=value` lines ('#' comments allowed) over `base`."""
    cfg = base or TrainConfig()
    updates: dict = {}
    game_updates: dict[str, dict] = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigFileError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if "." in key:
            game, _, gkey = key.partition(".")
            if gkey not in _GAME_KEYS:
                raise ConfigFileError(f"{path}:{lineno}: unknown game key {gkey!r}")
            attr, conv = _GAME_KEYS[gkey]
            game_updates.setdefault(game, {})[attr] = conv(value)
        elif key in _SCALAR_KEYS:
            attr, conv = _SCALAR_KEYS[key]
            updates[attr] = conv(value)
        else:
            raise ConfigFileError(f"{path}:{lineno}: unknown key {key!r}")
    game_params = dict(cfg.game_params)
    for game, fields in game_updates.items():
        current = cfg.for_game(game)
        game_params[game] = replace(current, **fields)
    if game_updates:
        updates["game_params"] = game_params
    return replace(cfg, **updates)
