"""Loss, gradients, self-play sampling, replay queues, and the training
loop."""

import math

import numpy as np
import pytest
import torch

from conftest import rng_for
from vitzero.games import (
    CONNECT4_5X4,
    GOMOKU_6X6,
    apply_index,
    initial_state,
    legal_indices,
    terminal_status,
)
from vitzero.neural import NetworkFamily, build_model, load_checkpoint, small_config
from vitzero.training import (
    GAME_TRAIN_DEFAULTS,
    ConfigFileError,
    NonFiniteLossError,
    ReplayQueue,
    Sample,
    TrainConfig,
    augment,
    batch_tensors,
    bootstrap_queue,
    compute_gradients,
    latest_checkpoint,
    loss,
    make_optimizer,
    parse_config_file,
    self_play,
    train_loop,
    train_step,
)


def tiny_model(family=NetworkFamily.ALPHAVIT, seed=3, **kw):
    return build_model(small_config(family, embed_dim=32, n_heads=2, **kw), seed=seed)


class FirstMoveAgent:
    """Deterministic stub: all visits on the first legal move."""

    def search_visits(self, state, rng):
        visits = np.zeros(state.id.action_space, dtype=np.int64)
        visits[legal_indices(state)[0]] = 8
        return visits


# -- loss ------------------------------------------------------------------------

def test_loss_zero_at_perfect_prediction():
    pi = np.array([0.0, 1.0, 0.0])
    assert loss(1.0, 1, pi, pi) == pytest.approx(0.0, abs=1e-9)


def test_loss_uniform_two_action_case():
    val = loss(0.0, 1, np.array([0.5, 0.5]), np.array([0.5, 0.5]))
    assert val == pytest.approx(1.0 + math.log(2.0), abs=1e-6)


def test_loss_nonnegative_when_p_equals_pi():
    rng = rng_for(2)
    for _ in range(25):
        pi = rng.random(7)
        pi /= pi.sum()
        assert loss(rng.uniform(-1, 1), rng.choice([-1, 0, 1]), pi, pi) >= 0.0


def test_loss_nonfinite_raises():
    with pytest.raises(NonFiniteLossError):
        loss(np.nan, 1, np.array([0.5, 0.5]), np.array([0.5, 0.5]))


def test_loss_clamps_zero_probabilities():
    val = loss(0.0, 0, np.array([0.0, 1.0]), np.array([0.0, 1.0]))
    assert math.isfinite(val)
    assert val == pytest.approx(0.0, abs=1e-9)


# -- gradients ----------------------------------------------------------------------

def test_gradients_match_finite_differences():
    torch.manual_seed(0)
    model = tiny_model().double()
    planes = torch.randn(2, 3, 4, 5, dtype=torch.float64,
                         generator=torch.Generator().manual_seed(1))
    pi = torch.zeros(2, 5, dtype=torch.float64)
    pi[:, 2] = 1.0
    c_win = torch.tensor([1.0, -1.0], dtype=torch.float64)
    _, grads = compute_gradients(model, planes, pi, c_win, CONNECT4_5X4)

    from vitzero.training import batch_loss

    rng = rng_for(11)
    params = dict(model.named_parameters())
    names = sorted(params)
    h = 1e-5
    for _ in range(10):
        name = names[rng.integers(len(names))]
        p = params[name]
        flat_idx = int(rng.integers(p.numel()))
        with torch.no_grad():
            orig = p.view(-1)[flat_idx].item()
            p.view(-1)[flat_idx] = orig + h
            up, _, _ = batch_loss(model, planes, pi, c_win, CONNECT4_5X4)
            p.view(-1)[flat_idx] = orig - h
            down, _, _ = batch_loss(model, planes, pi, c_win, CONNECT4_5X4)
            p.view(-1)[flat_idx] = orig
        numeric = (float(up) - float(down)) / (2 * h)
        analytic = float(grads[name].view(-1)[flat_idx])
        denom = max(abs(numeric), abs(analytic), 1e-8)
        assert abs(numeric - analytic) / denom < 1e-4, (name, numeric, analytic)


def test_gradients_exclude_static_game_tokens():
    model = tiny_model()
    planes = torch.randn(1, 3, 4, 5, generator=torch.Generator().manual_seed(2))
    pi = torch.full((1, 5), 0.2)
    _, grads = compute_gradients(model, planes, pi, torch.tensor([1.0]), CONNECT4_5X4)
    assert "game_tokens" not in grads
    assert "value_token" in grads


def test_gradients_deterministic():
    model = tiny_model()
    planes = torch.randn(1, 3, 4, 5, generator=torch.Generator().manual_seed(3))
    pi = torch.full((1, 5), 0.2)
    c = torch.tensor([1.0])
    l1, g1 = compute_gradients(model, planes, pi, c, CONNECT4_5X4)
    l2, g2 = compute_gradients(model, planes, pi, c, CONNECT4_5X4)
    assert l1 == l2
    assert all(torch.equal(g1[k], g2[k]) for k in g1)


# -- train_step -------------------------------------------------------------------------

def _one_batch(model, batch=4, seed=5):
    g = torch.Generator().manual_seed(seed)
    planes = torch.randn(batch, 3, 4, 5, generator=g)
    pi = torch.softmax(torch.randn(batch, 5, generator=g), dim=1)
    c_win = torch.tensor([1.0, -1.0, 0.0, 1.0][:batch])
    return planes, pi, c_win


def test_train_step_zero_lr_keeps_weights():
    model = tiny_model()
    before = {k: v.clone() for k, v in model.state_dict().items()}
    opt = torch.optim.SGD(model.parameters(), lr=0.0, momentum=0.9,
                          weight_decay=1e-4)
    train_step(model, opt, *_one_batch(model), CONNECT4_5X4)
    after = model.state_dict()
    for k in before:
        if "running" in k or "num_batches" in k:
            continue
        assert torch.equal(before[k], after[k]), k


def test_train_step_plain_gradient_when_no_momentum():
    model = tiny_model().double()
    planes, pi, c_win = _one_batch(model)
    planes, pi, c_win = planes.double(), pi.double(), c_win.double()
    _, grads = compute_gradients(model, planes, pi, c_win, CONNECT4_5X4)
    before = {k: v.clone() for k, v in model.named_parameters()}
    opt = torch.optim.SGD(model.parameters(), lr=0.125, momentum=0.0,
                          weight_decay=0.0)
    train_step(model, opt, planes, pi, c_win, CONNECT4_5X4)
    for name, p in model.named_parameters():
        expect = before[name] - 0.125 * grads[name]
        assert torch.allclose(p, expect, atol=1e-12), name


def test_train_step_reproducible():
    results = []
    for _ in range(2):
        model = tiny_model(seed=9)
        opt = torch.optim.SGD(model.parameters(), lr=0.01, momentum=0.9,
                              weight_decay=1e-4)
        train_step(model, opt, *_one_batch(model), CONNECT4_5X4)
        results.append({k: v.clone() for k, v in model.state_dict().items()})
    for k in results[0]:
        assert torch.equal(results[0][k], results[1][k]), k


def test_train_step_leaves_game_tokens_untouched():
    model = tiny_model()
    tokens = model.game_tokens.clone()
    opt = make_optimizer(model, TrainConfig())
    for _ in range(3):
        train_step(model, opt, *_one_batch(model), CONNECT4_5X4)
    assert torch.equal(model.game_tokens, tokens)


def test_value_gradient_vanishes_at_perfect_value_prediction():
    # with c_win set to the model's own value output, the squared-error
    # term is at its stationary point, so the value head's output layer
    # (touched by no other loss term) gets zero gradient
    model = tiny_model(seed=13).double()
    g = torch.Generator().manual_seed(31)
    planes = torch.randn(3, 3, 4, 5, generator=g, dtype=torch.float64)
    pi = torch.softmax(torch.randn(3, 5, generator=g, dtype=torch.float64), dim=1)
    with torch.no_grad():
        v, _ = model(planes, CONNECT4_5X4)
    _, grads = compute_gradients(model, planes, pi, v.clone(), CONNECT4_5X4)
    assert grads["value_head.fc2.weight"].abs().max() < 1e-12
    assert grads["value_head.fc2.bias"].abs().max() < 1e-12
    assert grads["policy_head.fc2.weight"].abs().max() > 0


def test_overfit_single_batch_halves_loss():
    model = tiny_model(seed=21)
    rng = rng_for(4)
    queue = ReplayQueue(4096)
    bootstrap_queue(CONNECT4_5X4, queue, rng, min_fill=32, n_sim=8,
                    t_opening=4, tau=100.0)
    batch = [queue[i] for i in range(32)]
    planes, pi, c_win = batch_tensors(batch)
    opt = torch.optim.SGD(model.parameters(), lr=0.02, momentum=0.9)
    first = train_step(model, opt, planes, pi, c_win, CONNECT4_5X4)[0]
    last = first
    for _ in range(199):
        last = train_step(model, opt, planes, pi, c_win, CONNECT4_5X4)[0]
    assert last <= 0.5 * first


# -- self-play ---------------------------------------------------------------------------

def test_self_play_samples_share_winner_and_count_plies():
    agent = FirstMoveAgent()
    samples = self_play(agent, CONNECT4_5X4, rng_for(0), t_opening=0, tau=1.0)
    # replay the deterministic game independently
    state = initial_state(CONNECT4_5X4)
    plies = 0
    while not terminal_status(state).is_terminal:
        state = apply_index(state, legal_indices(state)[0])
        plies += 1
    expect = terminal_status(state).c_win
    assert len(samples) == plies
    assert all(s.c_win == expect for s in samples)


def test_self_play_pi_legal_and_normalized():
    samples = self_play(UctStub(16), GOMOKU_6X6, rng_for(7), t_opening=6, tau=20.0)
    state = initial_state(GOMOKU_6X6)
    for s in samples:
        assert s.pi.shape == (36,)
        assert s.pi.sum() == pytest.approx(1.0, abs=1e-6)
        assert (s.pi >= 0).all()
    # first sample is the empty board: everything legal
    occupied = samples[1].planes[0] + samples[1].planes[1]
    illegal = occupied.reshape(-1).astype(bool)
    assert (samples[1].pi[illegal] == 0).all()


class UctStub:
    """Tiny rollout-MCTS agent for tests."""

    def __init__(self, n_sim):
        from vitzero.search import UctAgent
        self._agent = UctAgent(n_sim)

    def search_visits(self, state, rng):
        return self._agent.search_visits(state, rng)


def test_self_play_openings_follow_temperature():
    # with a huge tau the opening is near-uniform over legal moves;
    # verify the first move varies across seeds but is fixed after t_opening=0
    firsts = set()
    for seed in range(8):
        samples = self_play(FirstMoveAgent(), CONNECT4_5X4, rng_for(seed),
                            t_opening=2, tau=1000.0)
        occupied = samples[1].planes[0] + samples[1].planes[1]
        firsts.add(int(np.flatnonzero(occupied.reshape(-1))[0]))
    assert len(firsts) > 1


# -- augmentation -----------------------------------------------------------------------

def make_samples(n, game_id=GOMOKU_6X6, seed=1):
    rng = rng_for(seed)
    out = []
    state = initial_state(game_id)
    for _ in range(n):
        pi = rng.random(game_id.action_space).astype(np.float32)
        pi /= pi.sum()
        from vitzero.games import encode_planes

        out.append(Sample(encode_planes(state, [], 1), pi, +1, game_id.name))
        state = apply_index(state, legal_indices(state)[rng.integers(4)])
    return out


def test_augment_counts():
    assert len(augment(make_samples(10), GOMOKU_6X6)) == 80
    assert len(augment(make_samples(10, CONNECT4_5X4, 2), CONNECT4_5X4)) == 20


def test_augment_identity_and_sums():
    samples = make_samples(3)
    out = augment(samples, GOMOKU_6X6)
    for i, s in enumerate(samples):
        first = out[8 * i]
        assert (first.planes == s.planes).all()
        assert np.array_equal(first.pi, s.pi)
    for s in out:
        assert s.c_win == +1
        assert s.pi.sum() == pytest.approx(1.0, abs=1e-6)


# -- replay queue -------------------------------------------------------------------------

def test_replay_fifo_eviction():
    q = ReplayQueue(5)
    base = make_samples(8, CONNECT4_5X4, seed=3)
    for s in base:
        q.push(s)
    assert len(q) == 5
    kept = [q[i] for i in range(5)]
    assert all(k is b for k, b in zip(kept, base[3:]))


def test_replay_draw_batches_shapes():
    q = ReplayQueue(100)
    q.extend(make_samples(10, CONNECT4_5X4, seed=4))
    batches = q.draw_batches(rng_for(0), batch_size=4)
    assert len(batches) == 2 and all(len(b) == 4 for b in batches)
    small = q.draw_batches(rng_for(0), batch_size=64)
    assert len(small) == 1 and len(small[0]) == 10
    assert ReplayQueue(10).draw_batches(rng_for(0), 4) == []


def test_bootstrap_fills_queue():
    q = ReplayQueue(10_000)
    games = bootstrap_queue(CONNECT4_5X4, q, rng_for(5), min_fill=60, n_sim=8,
                            t_opening=4, tau=100.0)
    assert len(q) >= 60 and games >= 1
    assert all(s.game == "connect4_4x5" for s in q)
    assert all(s.planes.shape == (3, 4, 5) for s in q)


def test_bootstrap_capped_by_capacity():
    q = ReplayQueue(40)
    bootstrap_queue(CONNECT4_5X4, q, rng_for(6), min_fill=500, n_sim=4,
                    t_opening=4, tau=100.0)
    assert len(q) == 40


# -- config file ----------------------------------------------------------------------------

def test_game_train_defaults_table():
    c4 = GAME_TRAIN_DEFAULTS["connect4_6x7"]
    assert (c4.n_sim, c4.n_selfplay, c4.t_opening, c4.tau) == (200, 30, 6, 100.0)
    g9 = GAME_TRAIN_DEFAULTS["gomoku_9x9"]
    assert (g9.n_sim, g9.n_selfplay, g9.t_opening, g9.tau) == (400, 10, 8, 40.0)
    o6 = GAME_TRAIN_DEFAULTS["othello_6x6"]
    assert (o6.n_sim, o6.n_selfplay, o6.t_opening, o6.tau) == (200, 10, 4, 40.0)


def test_parse_config_file(tmp_path):
    p = tmp_path / "train.cfg"
    p.write_text(
        "# overrides\n"
        "num_iterations = 12\n"
        "learning_rate=0.05\n"
        "batch_size = 64\n"
        "connect4_4x5.num_simulations = 50\n"
        "connect4_4x5.tau = 25\n")
    cfg = parse_config_file(p)
    assert cfg.n_iterations == 12
    assert cfg.learning_rate == 0.05
    assert cfg.batch_size == 64
    gp = cfg.for_game("connect4_4x5")
    assert gp.n_sim == 50 and gp.tau == 25.0
    assert gp.n_selfplay == 30  # untouched default


def test_parse_config_file_rejects_unknown_keys(tmp_path):
    p = tmp_path / "bad.cfg"
    p.write_text("warp_factor = 9\n")
    with pytest.raises(ConfigFileError):
        parse_config_file(p)


def test_train_config_validation():
    with pytest.raises(ValueError):
        TrainConfig(n_iterations=0)
    with pytest.raises(ValueError):
        TrainConfig(learning_rate=-1)


# -- train_loop -------------------------------------------------------------------------------

def small_train_cfg(n_iterations=2, **kw):
    from vitzero.training import GameTrainParams

    base = dict(
        n_iterations=n_iterations,
        batch_size=32,
        bootstrap_min_fill=24,
        bootstrap_sims=4,
        queue_capacity=2000,
        game_params={
            "connect4_4x5": GameTrainParams(8, 2, 4, 100.0),
            "gomoku_6x6": GameTrainParams(8, 2, 6, 20.0),
        },
    )
    base.update(kw)
    return TrainConfig(**base)


def test_train_loop_writes_checkpoints_and_metrics(tmp_path):
    model = tiny_model(seed=1)
    metrics = train_loop(model, [CONNECT4_5X4], small_train_cfg(), tmp_path,
                         run="t1", seed=11)
    assert [(m.iteration, m.game) for m in metrics] == [
        (0, "connect4_4x5"), (1, "connect4_4x5")]
    assert (tmp_path / "ckpt" / "t1" / "0.bin").exists()
    assert (tmp_path / "ckpt" / "t1" / "1.bin").exists()
    log = (tmp_path / "t1.log").read_text().splitlines()
    assert log[0].startswith("iter=0 game=connect4_4x5 loss=")
    assert "queue=" in log[0]


def test_train_loop_deterministic(tmp_path):
    states = []
    for d in ("a", "b"):
        model = tiny_model(seed=5)
        train_loop(model, [CONNECT4_5X4], small_train_cfg(), tmp_path / d,
                   run="det", seed=3)
        states.append(model.state_dict())
    for k in states[0]:
        assert torch.equal(states[0][k], states[1][k]), k
    # the checkpoint files themselves are bit-identical
    fa = (tmp_path / "a" / "ckpt" / "det" / "1.bin").read_bytes()
    fb = (tmp_path / "b" / "ckpt" / "det" / "1.bin").read_bytes()
    assert fa == fb


def test_train_loop_threads_match_sequential(tmp_path):
    states = []
    for d, threads in (("s", 1), ("p", 2)):
        model = tiny_model(seed=5)
        train_loop(model, [CONNECT4_5X4], small_train_cfg(threads=threads),
                   tmp_path / d, run="thr", seed=3)
        states.append(model.state_dict())
    for k in states[0]:
        assert torch.equal(states[0][k], states[1][k]), k


def test_train_loop_resume_continues_numbering(tmp_path):
    model = tiny_model(seed=2)
    train_loop(model, [CONNECT4_5X4], small_train_cfg(2), tmp_path, run="r",
               seed=7)
    metrics = train_loop(model, [CONNECT4_5X4], small_train_cfg(4), tmp_path,
                         run="r", seed=7)
    assert [m.iteration for m in metrics] == [2, 3]
    found = latest_checkpoint(tmp_path / "ckpt" / "r")
    assert found[0] == 3
    _, info = load_checkpoint(found[1])
    assert info.meta["iteration"] == 3


def test_train_loop_multi_game_round_robin(tmp_path):
    model = tiny_model(seed=8)
    metrics = train_loop(model, [CONNECT4_5X4, GOMOKU_6X6], small_train_cfg(1),
                         tmp_path, run="mg", seed=5)
    assert [(m.iteration, m.game) for m in metrics] == [
        (0, "connect4_4x5"), (0, "gomoku_6x6")]
    assert all(m.queue <= 2000 for m in metrics)
    ckpt, info = load_checkpoint(tmp_path / "ckpt" / "mg" / "0.bin")
    assert info.meta["games"] == ["connect4_4x5", "gomoku_6x6"]


def test_train_loop_requires_games(tmp_path):
    with pytest.raises(ValueError):
        train_loop(tiny_model(), [], small_train_cfg(), tmp_path)
