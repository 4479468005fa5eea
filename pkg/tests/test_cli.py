"""The command-line interface: exit codes, determinism, and artifacts."""

import io

import pytest

from vitzero.cli import main

TRAIN_SMALL = ("train --games connect4_5x4 --family alphavit --small "
               "--iters 1 --sims 4 --selfplay-games 1").split()


def test_train_writes_expected_checkpoints(tmp_path, capsys):
    cfg = tmp_path / "train.cfg"
    cfg.write_text("bootstrap_min_fill = 12\nbootstrap_sims = 4\nbatch_size = 16\n")
    code = main(TRAIN_SMALL + ["--iters", "2", "--seed", "1", "--run", "t",
                               "--config", str(cfg), "--out", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "ckpt" / "t" / "0.bin").exists()
    assert (tmp_path / "ckpt" / "t" / "1.bin").exists()
    loglines = capsys.readouterr().out.splitlines()
    assert any(line.startswith("iter=0 game=connect4_4x5 loss=") for line in loglines)


def test_train_resume_continues_iterations(tmp_path):
    cfg = tmp_path / "train.cfg"
    cfg.write_text("bootstrap_min_fill = 12\nbootstrap_sims = 4\nbatch_size = 16\n")
    base = TRAIN_SMALL + ["--seed", "1", "--run", "r", "--config", str(cfg),
                          "--out", str(tmp_path)]
    assert main(base + ["--iters", "1"]) == 0
    assert main(base + ["--iters", "3"]) == 0
    names = sorted(int(p.stem) for p in (tmp_path / "ckpt" / "r").glob("*.bin"))
    assert names == [0, 1, 2]


def test_train_bad_game_exits_2(tmp_path):
    code = main("train --games tictactoe --iters 1".split() + ["--out", str(tmp_path)])
    assert code == 2


def test_train_alphazero_multi_game_exits_2(tmp_path):
    code = main("train --games connect4,gomoku --family alphazero --iters 1".split()
                + ["--out", str(tmp_path)])
    assert code == 2


def test_train_missing_config_exits_2(tmp_path):
    code = main(TRAIN_SMALL + ["--config", str(tmp_path / "nope.cfg"),
                               "--out", str(tmp_path)])
    assert code == 2


def test_train_divergence_exits_3(tmp_path, monkeypatch):
    import vitzero.training as training

    def explode(*a, **k):
        raise training.TrainingDivergence("boom")

    monkeypatch.setattr(training, "train_loop", explode)
    code = main(TRAIN_SMALL + ["--out", str(tmp_path)])
    assert code == 3


def test_tournament_writes_results_and_table(tmp_path, capsys):
    argv = ("tournament --game connect4_5x4 --agents mcts:8,random "
            "--tournaments 2 --seed 3").split() + ["--out", str(tmp_path)]
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert "agent" in out and "rating" in out
    results = (tmp_path / "tournament_connect4_4x5.txt").read_text().splitlines()
    assert len(results) == 2 * 2  # 2 tournaments x 1 pair x 2 games
    assert results[0].startswith("tournament=0 game=connect4_4x5 a=mcts:8 b=random")
    csv = (tmp_path / "ratings_connect4_4x5.csv").read_text().splitlines()
    assert len(csv) == 2 and all("," in line for line in csv)


def test_tournament_deterministic(tmp_path):
    argv = ("tournament --game connect4_5x4 --agents mcts:8,random "
            "--tournaments 2 --seed 3").split()
    assert main(argv + ["--out", str(tmp_path / "a")]) == 0
    assert main(argv + ["--out", str(tmp_path / "b")]) == 0
    fa = (tmp_path / "a" / "tournament_connect4_4x5.txt").read_text()
    fb = (tmp_path / "b" / "tournament_connect4_4x5.txt").read_text()
    assert fa == fb


def test_tournament_bad_agent_exits_2(tmp_path):
    code = main("tournament --game connect4 --agents mcts:8".split()
                + ["--out", str(tmp_path)])
    assert code == 2
    code = main("tournament --game connect4 --agents mcts:8,wizard:7".split()
                + ["--out", str(tmp_path)])
    assert code == 2


def test_play_full_session(tmp_path, monkeypatch, capsys):
    feed = io.StringIO("9\nnot-a-move\n" + "0\n1\n2\n3\n4\n" * 8)
    monkeypatch.setattr("builtins.input", lambda prompt="": feed.readline().strip())
    argv = ("play --game connect4_5x4 --agent random --seed 5".split()
            + ["--out", str(tmp_path)])
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert "could not parse" in out or "illegal move" in out
    assert "result:" in out
    records = list(tmp_path.glob("play_*.txt"))
    assert len(records) == 1
    assert records[0].read_text().strip().endswith(("result=+1", "result=-1", "result=0"))


def test_play_agent_first(tmp_path, monkeypatch, capsys):
    feed = io.StringIO("0\n1\n2\n3\n4\n" * 8)
    monkeypatch.setattr("builtins.input", lambda prompt="": feed.readline().strip())
    argv = ("play --game connect4_5x4 --agent random --human-first false "
            "--seed 2").split() + ["--out", str(tmp_path)]
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert "random plays" in out  # the agent moved first
    assert "result:" in out


def test_play_occupied_cell_reprompts(tmp_path, monkeypatch, capsys):
    moves = "0 0\n0 0\n" + "".join(f"{r} {c}\n" for r in range(6) for c in range(6))
    feed = io.StringIO(moves)
    monkeypatch.setattr("builtins.input", lambda prompt="": feed.readline().strip())
    argv = ("play --game gomoku_6x6 --agent random --seed 4".split()
            + ["--out", str(tmp_path)])
    assert main(argv) == 0
    assert "illegal move" in capsys.readouterr().out


def test_info_reports_checkpoint(tmp_path, capsys):
    from vitzero.neural import NetworkFamily, build_model, save_checkpoint, small_config

    model = build_model(small_config(NetworkFamily.ALPHAVIT), seed=0)
    path = tmp_path / "m.bin"
    save_checkpoint(model, path, meta={"iteration": 7, "games": ["gomoku_9x9"]})
    assert main(["info", str(path)]) == 0
    out = capsys.readouterr().out
    assert "family: alphavit" in out
    assert "iteration: 7" in out
    assert "games: gomoku_9x9" in out
    n = sum(p.numel() for p in model.parameters())
    assert f"parameters: {n}" in out


def test_info_missing_file_exits_2(tmp_path, capsys):
    assert main(["info", str(tmp_path / "ghost.bin")]) == 2


def test_info_corrupt_file_exits_2(tmp_path):
    bad = tmp_path / "bad.bin"
    bad.write_bytes(b"junk")
    assert main(["info", str(bad)]) == 2


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as e:
        main(["train"])  # missing --games
    assert e.value.code == 2


def test_env_var_default_out(tmp_path, monkeypatch):
    monkeypatch.setenv("VITZERO_OUT", str(tmp_path / "envout"))
    argv = ("tournament --game connect4_5x4 --agents mcts:4,random "
            "--tournaments 1 --seed 0").split()
    assert main(argv) == 0
    assert (tmp_path / "envout" / "tournament_connect4_4x5.txt").exists()
