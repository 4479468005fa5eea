"""Model construction and parameter accounting."""

from __future__ import annotations

import torch

from .config import NetworkConfig, NetworkFamily
from .resnet import AlphaZeroNet
from .vit import FAMILY_CLASSES


def build_model(config: NetworkConfig, seed: int | None = None) -> torch.nn.Module:
    """Instantiate a model; with a seed, initialization is bit-reproducible."""
    if seed is not None:
        torch.manual_seed(seed)
    if config.family is NetworkFamily.ALPHAZERO:
        return AlphaZeroNet(config)
    return FAMILY_CLASSES[config.family](config)


def parameter_count(config: NetworkConfig) -> int:
    """Exact number of learnable scalars (static buffers such as the
    one-hot game tokens and batch-norm statistics are excluded)."""
    model = build_model(config, seed=0)
    return sum(p.numel() for p in model.parameters() if p.requires_grad)
