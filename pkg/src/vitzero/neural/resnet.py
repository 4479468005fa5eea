"""Residual-tower baseline network, fixed to one board size.

Flattening into the head MLPs hard-wires the board dimensions, which is
exactly why this baseline cannot follow a size change: the forward pass
raises on any input whose shape differs from the one it was built for.
GELU activations keep the loss smooth in every parameter, which the
finite-difference gradient checks rely on.
"""

from __future__ import annotations

import torch
import torch.nn as nn
import torch.nn.functional as F

from ..games import GameId
from .config import NetworkConfig

HEAD_CHANNELS = 128
VALUE_HIDDEN = 256


class ResidualBlock(nn.Module):
    def __init__(self, filters: int, kernel: int):
        super().__init__()
        pad = kernel // 2
        self.conv1 = nn.Conv2d(filters, filters, kernel, padding=pad)
        self.bn1 = nn.BatchNorm2d(filters)
        self.conv2 = nn.Conv2d(filters, filters, kernel, padding=pad)
        self.bn2 = nn.BatchNorm2d(filters)

    def forward(self, x):
        out = F.gelu(self.bn1(self.conv1(x)))
        out = self.bn2(self.conv2(out))
        return F.gelu(out + x)


class BoardSizeError(ValueError):
    """Input board does not match the size this network was built for."""


class AlphaZeroNet(nn.Module):
    def __init__(self, config: NetworkConfig):
        super().__init__()
        if config.fixed_game is None:
            raise ValueError("AlphaZeroNet requires config.fixed_game")
        self.config = config
        game = config.fixed_game
        h, w = game.board_h, game.board_w
        f, k = config.n_filters, config.kernel_size
        self.conv_in = nn.Conv2d(config.in_channels, f, k, padding=k // 2)
        self.bn_in = nn.BatchNorm2d(f)
        self.blocks = nn.ModuleList(
            ResidualBlock(f, k) for _ in range(config.n_blocks))
        self.policy_conv = nn.Conv2d(f, HEAD_CHANNELS, 1)
        self.policy_bn = nn.BatchNorm2d(HEAD_CHANNELS)
        self.policy_fc = nn.Linear(HEAD_CHANNELS * h * w, game.action_space)
        self.value_conv = nn.Conv2d(f, HEAD_CHANNELS, 1)
        self.value_bn = nn.BatchNorm2d(HEAD_CHANNELS)
        self.value_fc1 = nn.Linear(HEAD_CHANNELS * h * w, VALUE_HIDDEN)
        self.value_fc2 = nn.Linear(VALUE_HIDDEN, 1)

    def can_play(self, game_id: GameId) -> bool:
        return game_id == self.config.fixed_game

    def forward(self, planes: torch.Tensor, game_id: GameId):
        fixed = self.config.fixed_game
        if game_id != fixed or planes.shape[-2:] != (fixed.board_h, fixed.board_w):
            raise BoardSizeError(
                f"network is built for {fixed.name}, got {game_id.name} input "
                f"{tuple(planes.shape[-2:])}")
        x = F.gelu(self.bn_in(self.conv_in(planes)))
        for block in self.blocks:
            x = block(x)
        p = F.gelu(self.policy_bn(self.policy_conv(x))).flatten(1)
        policy = torch.sigmoid(self.policy_fc(p))
        v = F.gelu(self.value_bn(self.value_conv(x))).flatten(1)
        v = F.gelu(self.value_fc1(v))
        value = torch.tanh(self.value_fc2(v)).squeeze(-1)
        return value, policy
