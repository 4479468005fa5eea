"""Search hyperparameters."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SearchParams:
    n_sim: int = 200
    c_puct: float = 1.25
    dirichlet_eps: float = 0.0   # 0.2 during self-play, 0 in evaluation
    dirichlet_alpha: float = 0.3

    def __post_init__(self):
        if self.n_sim < 1:
            raise ValueError("n_sim must be >= 1")
        if self.c_puct <= 0:
            raise ValueError("c_puct must be positive")
        if not 0.0 <= self.dirichlet_eps <= 1.0:
            raise ValueError("dirichlet_eps must be in [0, 1]")
