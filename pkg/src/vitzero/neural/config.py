"""Network architecture configuration.

Defaults follow the reference hyperparameters: patch size 5 (stride 1,
padding floor(k/2) so the token count equals the cell count), encoder
embedding 512 with ffn 1024 and 16 heads, one decoder layer with the
same dimensions, 256 learnable action tokens, and a 9x9 base grid for
the 2D position embeddings. Head MLPs default to a hidden width of
5x the embedding dim, which reproduces the published parameter totals.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, asdict

from ..games import GameId, GameKind


class NetworkFamily(enum.Enum):
    ALPHAVIT = "alphavit"
    ALPHAVID = "alphavid"
    ALPHAVDA = "alphavda"
    ALPHAZERO = "alphazero"


# one-hot slot of each game family inside the static game token; the
# small-board variants share their parent game's slot
GAME_SLOT = {GameKind.CONNECT4: 0, GameKind.GOMOKU: 1, GameKind.OTHELLO: 2}


@dataclass(frozen=True)
class NetworkConfig:
    family: NetworkFamily
    t_history: int = 1
    patch_size: int = 5
    n_enc_layers: int = 4
    n_dec_layers: int = 1
    embed_dim: int = 512
    ffn_dim: int = 1024
    n_heads: int = 16
    head_hidden_dim: int = 0       # 0 -> 5 * embed_dim
    n_games: int = 3
    base_pos_h: int = 9
    base_pos_w: int = 9
    action_token_count: int = 256
    # resnet baseline only
    n_blocks: int = 3
    n_filters: int = 256
    kernel_size: int = 3
    fixed_game: GameId | None = None

    def __post_init__(self):
        if self.patch_size % 2 == 0 or self.patch_size < 1:
            raise ValueError("patch_size must be odd (k = 2n + 1)")
        if self.embed_dim % self.n_heads:
            raise ValueError("embed_dim must be divisible by n_heads")
        if self.t_history < 1:
            raise ValueError("t_history must be >= 1")
        if not 1 <= self.n_games <= self.embed_dim:
            raise ValueError("n_games must fit in the embedding dim")
        if self.family is NetworkFamily.ALPHAZERO and self.fixed_game is None:
            raise ValueError("the resnet baseline needs fixed_game (one board size)")

    @property
    def stride(self) -> int:
        return 1

    @property
    def padding(self) -> int:
        return self.patch_size // 2

    @property
    def in_channels(self) -> int:
        return 2 * self.t_history + 1

    @property
    def head_hidden(self) -> int:
        return self.head_hidden_dim or 5 * self.embed_dim

    def game_slot(self, game_id: GameId) -> int:
        slot = GAME_SLOT[game_id.game]
        if slot >= self.n_games:
            raise ValueError(f"{game_id.game.value} is outside this model's "
                             f"{self.n_games} game slots")
        return slot

    def to_dict(self) -> dict:
        d = asdict(self)
        d["family"] = self.family.value
        if self.fixed_game is not None:
            d["fixed_game"] = {"game": self.fixed_game.game.value,
                               "board_h": self.fixed_game.board_h,
                               "board_w": self.fixed_game.board_w}
        return d

    @staticmethod
    def from_dict(d: dict) -> "NetworkConfig":
        d = dict(d)
        d["family"] = NetworkFamily(d["family"])
        fg = d.get("fixed_game")
        if fg is not None:
            d["fixed_game"] = GameId(GameKind(fg["game"]), fg["board_h"], fg["board_w"])
        return NetworkConfig(**d)


def small_config(family: NetworkFamily, fixed_game: GameId | None = None,
                 embed_dim: int = 64, n_enc_layers: int = 2, n_heads: int = 4,
                 **overrides) -> NetworkConfig:
    """Desk-scale configuration used by tests and training milestones."""
    base = dict(
        family=family,
        patch_size=3,
        n_enc_layers=n_enc_layers,
        n_dec_layers=1,
        embed_dim=embed_dim,
        ffn_dim=2 * embed_dim,
        n_heads=n_heads,
        action_token_count=32,
        n_filters=32,
        n_blocks=2,
        fixed_game=fixed_game,
    )
    base.update(overrides)
    return NetworkConfig(**base)
