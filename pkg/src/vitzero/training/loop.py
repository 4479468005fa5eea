"""The iterated self-play / augmentation / learning loop.

Each iteration plays the configured number of self-play games per game
variant in lockstep (their searches share batched network evaluations;
per-game seeds make results independent of the batching), augments and
pushes them into that game's replay queue, then trains: every epoch
draws one pass of mini-batches from each queue and applies them in
round-robin game order with momentum SGD. A checkpoint is written per
iteration and training can resume from the latest one.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from ..games import GameId
from ..neural.checkpoint import load_checkpoint, save_checkpoint
from ..search.params import SearchParams
from .batchrun import BatchedNetworkEvaluator, self_play_batch
from .config import TrainConfig
from .losses import NonFiniteLossError, loss_terms
from .replay import ReplayQueue, Sample
from .selfplay import augment, bootstrap_queue


class TrainingDivergence(RuntimeError):
    """Loss or gradients became non-finite; training aborted."""


def make_optimizer(model, cfg: TrainConfig) -> torch.optim.SGD:
    # velocity <- momentum*velocity + grad + wd*w; w <- w - lr*velocity
    return torch.optim.SGD(model.parameters(), lr=cfg.learning_rate,
                           momentum=cfg.momentum, weight_decay=cfg.weight_decay)


def batch_tensors(samples: list[Sample]):
    planes = torch.from_numpy(np.stack([s.planes for s in samples])).float()
    pi = torch.from_numpy(np.stack([s.pi for s in samples])).float()
    c_win = torch.tensor([float(s.c_win) for s in samples])
    return planes, pi, c_win


def train_step(model, optimizer, planes, pi, c_win, game_id):
    """One SGD step on one mini-batch; returns (loss, mse, ce) floats."""
    model.train()
    optimizer.zero_grad(set_to_none=True)
    value, policy = model(planes, game_id)
    total, mse, ce = loss_terms(value, c_win, policy, pi)
    total.backward()
    optimizer.step()
    return float(total.detach()), float(mse.detach()), float(ce.detach())


@dataclass
class IterationMetrics:
    iteration: int
    game: str
    loss: float
    value_mse: float
    policy_ce: float
    queue: int

    def line(self) -> str:
        return (f"iter={self.iteration} game={self.game} loss={self.loss:.6f} "
                f"value_mse={self.value_mse:.6f} policy_ce={self.policy_ce:.6f} "
                f"queue={self.queue}")


def _rng(*entropy) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(list(entropy)))


def latest_checkpoint(run_dir: Path) -> tuple[int, Path] | None:
    best = None
    for p in Path(run_dir).glob("*.bin"):
        try:
            it = int(p.stem)
        except ValueError:
            continue
        if best is None or it > best[0]:
            best = (it, p)
    return best


MOMENTUM_PREFIX = "momentum/"


def _save_iteration(model, optimizer, run_dir: Path, iteration: int,
                    games: list[GameId], seed: int) -> Path:
    extra = {}
    for name, p in model.named_parameters():
        buf = optimizer.state.get(p, {}).get("momentum_buffer")
        if buf is not None:
            extra[MOMENTUM_PREFIX + name] = buf.detach().cpu().numpy()
    path = Path(run_dir) / f"{iteration}.bin"
    save_checkpoint(model, path,
                    meta={"iteration": iteration, "games": [g.name for g in games],
                          "seed": seed},
                    extra_arrays=extra)
    return path


def _restore_momentum(model, optimizer, extra_arrays: dict) -> None:
    params = dict(model.named_parameters())
    for key, arr in extra_arrays.items():
        if not key.startswith(MOMENTUM_PREFIX):
            continue
        p = params.get(key[len(MOMENTUM_PREFIX):])
        if p is not None:
            optimizer.state[p] = {"momentum_buffer":
                                  torch.from_numpy(np.array(arr, dtype=np.float32))}


def train_loop(model, games: list[GameId], cfg: TrainConfig, out_dir,
               run: str = "run", seed: int = 0, resume: bool = True,
               log=None) -> list[IterationMetrics]:
    """Train `model` on `games`; writes ckpt/<run>/<iter>.bin and a
    metrics log under out_dir, returns all per-iteration metrics."""
    if not games:
        raise ValueError("need at least one game")
    run_dir = Path(out_dir) / "ckpt" / run
    run_dir.mkdir(parents=True, exist_ok=True)
    log_path = Path(out_dir) / f"{run}.log"
    optimizer = make_optimizer(model, cfg)

    start_iter = 0
    if resume:
        found = latest_checkpoint(run_dir)
        if found is not None:
            it, path = found
            loaded, info = load_checkpoint(path)
            model.load_state_dict(loaded.state_dict())
            _restore_momentum(model, optimizer, info.extra_arrays)
            start_iter = it + 1

    queues = {g.name: ReplayQueue(cfg.queue_capacity) for g in games}
    evaluator = BatchedNetworkEvaluator(model)

    if start_iter == 0:
        for slot, g in enumerate(games):
            gp = cfg.for_game(g.name)
            bootstrap_queue(g, queues[g.name], _rng(seed, 0, slot),
                            min_fill=cfg.bootstrap_min_fill,
                            n_sim=cfg.bootstrap_sims, t_opening=gp.t_opening,
                            tau=gp.tau, t_history=cfg.t_history)

    all_metrics: list[IterationMetrics] = []
    emit = log if log is not None else (lambda line: None)

    for it in range(start_iter, cfg.n_iterations):
        t0 = time.time()
        model.eval()
        for slot, g in enumerate(games):
            gp = cfg.for_game(g.name)
            params = SearchParams(n_sim=gp.n_sim, c_puct=cfg.c_puct,
                                  dirichlet_eps=cfg.dirichlet_eps,
                                  dirichlet_alpha=cfg.dirichlet_alpha)
            entropies = [[seed, 1, it, slot, gi] for gi in range(gp.n_selfplay)]
            games_samples = self_play_batch(evaluator, g, gp.n_selfplay,
                                            entropies, params,
                                            t_opening=gp.t_opening, tau=gp.tau,
                                            t_history=cfg.t_history)
            for samples in games_samples:
                queues[g.name].extend(augment(samples, g))

        # learning: round-robin over the games' batch lists
        sums = {g.name: np.zeros(3) for g in games}
        counts = {g.name: 0 for g in games}
        try:
            for epoch in range(cfg.n_epochs):
                rng = _rng(seed, 2, it, epoch)
                per_game = [(g, queues[g.name].draw_batches(rng, cfg.batch_size))
                            for g in games]
                depth = max((len(b) for _, b in per_game), default=0)
                for bi in range(depth):
                    for g, batches in per_game:
                        if bi >= len(batches):
                            continue
                        planes, pi, c_win = batch_tensors(batches[bi])
                        l, mse, ce = train_step(model, optimizer, planes, pi,
                                                c_win, g)
                        sums[g.name] += (l, mse, ce)
                        counts[g.name] += 1
        except NonFiniteLossError as e:
            raise TrainingDivergence(str(e)) from e

        for g in games:
            n = max(counts[g.name], 1)
            m = IterationMetrics(it, g.name, *(sums[g.name] / n),
                                 queue=len(queues[g.name]))
            all_metrics.append(m)
            line = m.line()
            with open(log_path, "a") as f:
                f.write(line + "\n")
            emit(line)
        _save_iteration(model, optimizer, run_dir, it, games, seed)
        emit(f"iter={it} done in {time.time() - t0:.1f}s")
    return all_metrics
