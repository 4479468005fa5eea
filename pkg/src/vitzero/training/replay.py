"""Training samples and the per-game bounded FIFO replay queue."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Sample:
    """One self-play position: feature planes, the search probabilities
    over the full action space (zero on illegal moves, sum 1), and the
    final winner's color back-filled after the game."""

    planes: np.ndarray      # (2T+1, H, W) int8
    pi: np.ndarray          # (action_space,) float32
    c_win: int              # +1 / -1 / 0
    game: str               # variant name

    def __post_init__(self):
        self.planes.setflags(write=False)
        self.pi.setflags(write=False)


class ReplayQueue:
    """Bounded FIFO of samples for one game; eviction is strictly
    oldest-first once capacity is reached."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self._items: deque[Sample] = deque(maxlen=capacity)

    def push(self, sample: Sample) -> None:
        self._items.append(sample)

    def extend(self, samples) -> None:
        self._items.extend(samples)

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self):
        return iter(self._items)

    def __getitem__(self, i: int) -> Sample:
        return self._items[i]

    def draw_batches(self, rng: np.random.Generator, batch_size: int) -> list[list[Sample]]:
        """One shuffled pass over the queue, split into len//batch_size
        batches (at least one batch whenever the queue is non-empty, so
        small desk-scale queues still train)."""
        n = len(self._items)
        if n == 0:
            return []
        order = rng.permutation(n)
        n_batches = max(1, n // batch_size)
        size = min(batch_size, n)
        items = self._items
        return [[items[int(j)] for j in order[b * size:(b + 1) * size]]
                for b in range(n_batches)]
