"""Self-play data generation, replay queues, the combined value/policy
loss, and the multi-game training loop."""

from .batchrun import BatchedNetworkEvaluator, duel_batch, self_play_batch
from .config import (
    ConfigFileError,
    GAME_TRAIN_DEFAULTS,
    GameTrainParams,
    TrainConfig,
    parse_config_file,
)
from .loop import (
    IterationMetrics,
    TrainingDivergence,
    batch_tensors,
    latest_checkpoint,
    make_optimizer,
    train_loop,
    train_step,
)
from .losses import NonFiniteLossError, batch_loss, compute_gradients, loss, loss_terms
from .replay import ReplayQueue, Sample
from .selfplay import augment, bootstrap_queue, self_play

__all__ = [
    "BatchedNetworkEvaluator", "ConfigFileError", "GAME_TRAIN_DEFAULTS", "GameTrainParams",
    "IterationMetrics", "NonFiniteLossError", "ReplayQueue", "Sample",
    "TrainConfig", "TrainingDivergence", "augment", "batch_loss",
    "batch_tensors", "bootstrap_queue", "compute_gradients", "latest_checkpoint",
    "duel_batch", "loss", "loss_terms", "make_optimizer", "parse_config_file",
    "self_play", "self_play_batch", "train_loop", "train_step",
]
