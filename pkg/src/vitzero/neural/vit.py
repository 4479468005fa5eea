"""Transformer policy/value networks that play any board size with one
weight set.

The board planes are projected to one token per cell by a convolution
(odd kernel, stride 1, same padding), learnable 2D position embeddings
are resampled bilinearly to the board size and added, and the sequence
[value token; game token; cell tokens (+ pass token for othello)] runs
through a pre-LN transformer encoder. The value head reads the value
token through tanh; the policy head applies a shared per-token MLP with
a sigmoid, so policy entries are independent probabilities (search
renormalizes them over legal moves).

The encoder-only model reads per-cell move probabilities straight off
the cell tokens (connect4 exposes only the top-row entries). The
decoder variants instead resample a decoder input sequence to the
action-space length: from a bridged copy of the encoder's cell outputs,
or from a learned bank of action tokens.
"""

from __future__ import annotations

import torch
import torch.nn as nn
import torch.nn.functional as F

from ..games import GameId, GameKind
from .config import NetworkConfig, NetworkFamily


class EncoderLayer(nn.Module):
    def __init__(self, dim: int, heads: int, ffn_dim: int):
        super().__init__()
        self.ln1 = nn.LayerNorm(dim)
        self.attn = nn.MultiheadAttention(dim, heads, batch_first=True)
        self.ln2 = nn.LayerNorm(dim)
        self.ff = nn.Sequential(nn.Linear(dim, ffn_dim), nn.GELU(),
                                nn.Linear(ffn_dim, dim))

    def forward(self, x):
        h = self.ln1(x)
        a, _ = self.attn(h, h, h, need_weights=False)
        x = x + a
        return x + self.ff(self.ln2(x))


class DecoderLayer(nn.Module):
    def __init__(self, dim: int, heads: int, ffn_dim: int):
        super().__init__()
        self.ln1 = nn.LayerNorm(dim)
        self.self_attn = nn.MultiheadAttention(dim, heads, batch_first=True)
        self.ln2 = nn.LayerNorm(dim)
        self.cross_attn = nn.MultiheadAttention(dim, heads, batch_first=True)
        self.ln3 = nn.LayerNorm(dim)
        self.ff = nn.Sequential(nn.Linear(dim, ffn_dim), nn.GELU(),
                                nn.Linear(ffn_dim, dim))

    def forward(self, x, memory):
        h = self.ln1(x)
        a, _ = self.self_attn(h, h, h, need_weights=False)
        x = x + a
        a, _ = self.cross_attn(self.ln2(x), memory, memory, need_weights=False)
        x = x + a
        return x + self.ff(self.ln3(x))


class ScalarHead(nn.Module):
    """LN -> Linear -> GELU -> Linear applied to each token, yielding one
    scalar per token. Shared by the value and policy heads."""

    def __init__(self, dim: int, hidden: int):
        super().__init__()
        self.ln = nn.LayerNorm(dim)
        self.fc1 = nn.Linear(dim, hidden)
        self.fc2 = nn.Linear(hidden, 1)

    def forward(self, x):
        return self.fc2(F.gelu(self.fc1(self.ln(x)))).squeeze(-1)


class _ViTBase(nn.Module):
    """Shared trunk: patch embedding, scalable position grid, value and
    game tokens, encoder stack, and both heads.

    Weights are immutable during inference: any number of concurrent
    forward passes may share one model, but backward passes and
    optimizer updates require exclusive access.
    """

    def __init__(self, config: NetworkConfig):
        super().__init__()
        self.config = config
        d = config.embed_dim
        self.patch_embed = nn.Conv2d(config.in_channels, d, config.patch_size,
                                     stride=config.stride, padding=config.padding)
        self.pos_grid = nn.Parameter(
            torch.zeros(1, d, config.base_pos_h, config.base_pos_w))
        self.value_token = nn.Parameter(torch.zeros(1, 1, d))
        game_tokens = torch.zeros(config.n_games, d)
        game_tokens[:, : config.n_games] = torch.eye(config.n_games)
        self.register_buffer("game_tokens", game_tokens)  # static one-hot
        self.encoder = nn.ModuleList(
            EncoderLayer(d, config.n_heads, config.ffn_dim)
            for _ in range(config.n_enc_layers))
        self.encoder_norm = nn.LayerNorm(d)
        self.value_head = ScalarHead(d, config.head_hidden)
        self.policy_head = ScalarHead(d, config.head_hidden)
        self._init_tokens()

    def _init_tokens(self):
        nn.init.trunc_normal_(self.pos_grid, std=0.02)
        nn.init.trunc_normal_(self.value_token, std=0.02)

    def can_play(self, game_id: GameId) -> bool:
        from .config import GAME_SLOT
        return GAME_SLOT[game_id.game] < self.config.n_games

    def tokenize(self, planes: torch.Tensor) -> torch.Tensor:
        """Convolve (B, 2T+1, H, W) planes into (B, H*W, d) tokens in
        row-major order."""
        if planes.dim() != 4:
            raise ValueError("expected a (batch, planes, H, W) tensor")
        if planes.shape[-2] < 1 or planes.shape[-1] < 1:
            raise ValueError("board must be at least 1x1")
        x = self.patch_embed(planes)
        return x.flatten(2).transpose(1, 2)

    def positional_grid(self, h: int, w: int) -> torch.Tensor:
        """(H*W, d) position embeddings, bilinearly resampled from the
        base grid when the size differs (corners map to corners)."""
        grid = self.pos_grid
        if (h, w) != (grid.shape[2], grid.shape[3]):
            grid = F.interpolate(grid, size=(h, w), mode="bilinear",
                                 align_corners=True)
        return grid.flatten(2).transpose(1, 2)[0]

    def _embed_cells(self, planes: torch.Tensor) -> torch.Tensor:
        tokens = self.tokenize(planes)
        return tokens + self.positional_grid(planes.shape[-2], planes.shape[-1])

    def _prefix_tokens(self, batch: int, game_id: GameId) -> torch.Tensor:
        slot = self.config.game_slot(game_id)
        value = self.value_token.expand(batch, 1, -1)
        game = self.game_tokens[slot].expand(batch, 1, -1)
        return torch.cat([value, game], dim=1)

    def _encode(self, seq: torch.Tensor) -> torch.Tensor:
        for layer in self.encoder:
            seq = layer(seq)
        return self.encoder_norm(seq)

    def _value(self, encoded: torch.Tensor) -> torch.Tensor:
        return torch.tanh(self.value_head(encoded[:, 0]))


class AlphaViT(_ViTBase):
    """Encoder-only: the policy comes directly from the cell tokens and
    the optional pass token, so the policy length is tied to the board."""

    def __init__(self, config: NetworkConfig):
        super().__init__(config)
        self.pass_token = nn.Parameter(torch.zeros(1, 1, config.embed_dim))
        nn.init.trunc_normal_(self.pass_token, std=0.02)

    def assemble_sequence(self, cell_tokens: torch.Tensor,
                          game_id: GameId) -> torch.Tensor:
        """[value; game; cells...; pass (othello only)]."""
        b = cell_tokens.shape[0]
        parts = [self._prefix_tokens(b, game_id), cell_tokens]
        if game_id.game is GameKind.OTHELLO:
            parts.append(self.pass_token.expand(b, 1, -1))
        return torch.cat(parts, dim=1)

    def forward_from_cell_tokens(self, cell_tokens: torch.Tensor, game_id: GameId,
                                 board_w: int):
        seq = self.assemble_sequence(cell_tokens, game_id)
        z = self._encode(seq)
        value = self._value(z)
        n_cells = cell_tokens.shape[1]
        scores = torch.sigmoid(self.policy_head(z[:, 2: 2 + n_cells]))
        if game_id.game is GameKind.CONNECT4:
            policy = scores[:, :board_w]  # only the top-row entries
        elif game_id.game is GameKind.OTHELLO:
            pass_prob = torch.sigmoid(self.policy_head(z[:, 2 + n_cells]))
            policy = torch.cat([scores, pass_prob.unsqueeze(1)], dim=1)
        else:
            policy = scores
        return value, policy

    def forward(self, planes: torch.Tensor, game_id: GameId):
        return self.forward_from_cell_tokens(self._embed_cells(planes), game_id,
                                             planes.shape[-1])


class _DecoderPolicyBase(_ViTBase):
    """Encoder for the value plus a decoder whose input sequence is
    resampled to the action-space size, decoupling policy length from
    the board."""

    def __init__(self, config: NetworkConfig):
        super().__init__(config)
        d = config.embed_dim
        self.decoder = nn.ModuleList(
            DecoderLayer(d, config.n_heads, config.ffn_dim)
            for _ in range(config.n_dec_layers))
        self.decoder_norm = nn.LayerNorm(d)

    def decoder_input(self, encoded: torch.Tensor, n_cells: int,
                      n_actions: int) -> torch.Tensor:
        raise NotImplementedError

    def forward(self, planes: torch.Tensor, game_id: GameId,
                n_actions: int | None = None):
        if n_actions is None:
            n_actions = game_id.action_space
        if n_actions < 1:
            raise ValueError("action space must have at least one entry")
        seq = torch.cat([self._prefix_tokens(planes.shape[0], game_id),
                         self._embed_cells(planes)], dim=1)
        z = self._encode(seq)
        value = self._value(z)
        n_cells = planes.shape[-2] * planes.shape[-1]
        tgt = self.decoder_input(z, n_cells, n_actions)
        for layer in self.decoder:
            tgt = layer(tgt, z)
        y = self.decoder_norm(tgt)
        policy = torch.sigmoid(self.policy_head(y))
        return value, policy


def resample_rows(rows: torch.Tensor, n_out: int) -> torch.Tensor:
    """Linearly interpolate a (B, N, d) sequence along N to (B, n_out, d);
    the identity when the lengths already match."""
    if rows.shape[1] == n_out:
        return rows
    x = rows.transpose(1, 2)
    x = F.interpolate(x, size=n_out, mode="linear", align_corners=True)
    return x.transpose(1, 2)


class AlphaViD(_DecoderPolicyBase):
    """Decoder input bridged from the encoder's cell outputs."""

    def __init__(self, config: NetworkConfig):
        super().__init__(config)
        self.bridge = nn.Linear(config.embed_dim, config.embed_dim)

    def decoder_input(self, encoded, n_cells, n_actions):
        rows = self.bridge(encoded[:, 2: 2 + n_cells])
        return resample_rows(rows, n_actions)


class AlphaVDA(_DecoderPolicyBase):
    """Decoder input from a learned, board-independent token bank."""

    def __init__(self, config: NetworkConfig):
        super().__init__(config)
        self.action_tokens = nn.Parameter(
            torch.zeros(config.action_token_count, config.embed_dim))
        nn.init.trunc_normal_(self.action_tokens, std=0.02)

    def decoder_input(self, encoded, n_cells, n_actions):
        rows = self.action_tokens.unsqueeze(0).expand(encoded.shape[0], -1, -1)
        return resample_rows(rows, n_actions)


FAMILY_CLASSES = {
    NetworkFamily.ALPHAVIT: AlphaViT,
    NetworkFamily.ALPHAVID: AlphaViD,
    NetworkFamily.ALPHAVDA: AlphaVDA,
}
