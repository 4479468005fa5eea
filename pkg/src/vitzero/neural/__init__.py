"""Policy/value networks: three size-agnostic transformer families plus
the fixed-size residual baseline, with a binary checkpoint format.

Thread contract: weights are immutable during inference, so concurrent
forward passes may share one model; backward passes and optimizer steps
need exclusive access.
"""

from .build import build_model, parameter_count
from .checkpoint import (
    CheckpointError,
    CheckpointInfo,
    load_checkpoint,
    manifest_parameter_count,
    read_manifest,
    save_checkpoint,
)
from .config import GAME_SLOT, NetworkConfig, NetworkFamily, small_config
from .evaluate import NetworkEvaluator
from .resnet import AlphaZeroNet, BoardSizeError
from .vit import AlphaVDA, AlphaViD, AlphaViT, resample_rows

__all__ = [
    "AlphaVDA", "AlphaViD", "AlphaViT", "AlphaZeroNet", "BoardSizeError",
    "CheckpointError", "CheckpointInfo", "GAME_SLOT", "NetworkConfig",
    "NetworkEvaluator", "NetworkFamily", "build_model", "load_checkpoint",
    "manifest_parameter_count", "parameter_count", "read_manifest",
    "resample_rows", "save_checkpoint", "small_config",
]
