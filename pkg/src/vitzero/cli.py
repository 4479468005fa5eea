"""Command-line entry point: training runs, tournaments, interactive
play, and checkpoint inspection.

Exit codes: 0 success, 2 usage/configuration error, 3 training
divergence. Every command takes --seed and is deterministic given it.
The default output directory comes from $VITZERO_OUT (falling back to
./vitzero_out).
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

from .games import (
    GameKind,
    IllegalMoveError,
    action_index,
    apply_move,
    initial_state,
    render_board,
    terminal_status,
    variant_by_name,
)
from .games.types import Action

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DIVERGED = 3


class CliError(Exception):
    """Configuration problem; reported on stderr with exit code 2."""


def default_out_dir() -> Path:
    return Path(os.environ.get("VITZERO_OUT", "vitzero_out"))


def _games_from(arg: str):
    names = [s.strip() for s in arg.split(",") if s.strip()]
    if not names:
        raise CliError("no game given")
    try:
        return [variant_by_name(n) for n in names]
    except KeyError as e:
        raise CliError(str(e)) from e


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vitzero",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("train", help="run the self-play training loop")
    t.add_argument("--games", "--game", dest="games", required=True,
                   help="comma-separated variant names, e.g. connect4,gomoku")
    t.add_argument("--family", default="alphavit",
                   choices=["alphavit", "alphavid", "alphavda", "alphazero"])
    t.add_argument("--iters", type=int, default=None, help="training iterations")
    t.add_argument("--layers", type=int, default=None, help="encoder layers")
    t.add_argument("--embed-dim", type=int, default=None)
    t.add_argument("--heads", type=int, default=None)
    t.add_argument("--ffn-dim", type=int, default=None)
    t.add_argument("--patch-size", type=int, default=None)
    t.add_argument("--sims", type=int, default=None,
                   help="override search simulations for every game")
    t.add_argument("--selfplay-games", type=int, default=None,
                   help="override self-play games per iteration for every game")
    t.add_argument("--small", action="store_true",
                   help="desk-scale network dimensions (embed 64, 2 layers)")
    t.add_argument("--config", default=None, help="key=value config file")
    t.add_argument("--run", default="run", help="run name under the output dir")
    t.add_argument("--out", default=None, help="output directory")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--threads", type=int, default=1)
    t.add_argument("--no-resume", action="store_true",
                   help="start from iteration 0 even if checkpoints exist")

    m = sub.add_parser("tournament", help="round-robin tournaments with Elo")
    m.add_argument("--games", "--game", dest="games", required=True)
    m.add_argument("--agents", required=True,
                   help="comma-separated agent descriptors, e.g. "
                        "mcts:100,minimax:3,random,alphavit:ckpt.bin")
    m.add_argument("--tournaments", type=int, default=50)
    m.add_argument("--games-per-pair", type=int, default=2)
    m.add_argument("--k-factor", type=float, default=8.0)
    m.add_argument("--net-sims", type=int, default=None,
                   help="simulations for checkpoint-backed agents")
    m.add_argument("--out", default=None)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("play", help="interactive game against an agent")
    p.add_argument("--game", required=True)
    p.add_argument("--agent", required=True)
    p.add_argument("--human-first", default="true", choices=["true", "false"])
    p.add_argument("--net-sims", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--seed", type=int, default=0)

    i = sub.add_parser("info", help="inspect a checkpoint")
    i.add_argument("checkpoint")
    return parser


# -- train ---------------------------------------------------------------------

def cmd_train(args) -> int:
    import torch

    from .neural import NetworkConfig, NetworkFamily, build_model, small_config
    from .training import (
        TrainConfig,
        TrainingDivergence,
        parse_config_file,
        train_loop,
    )

    games = _games_from(args.games)
    family = NetworkFamily(args.family)
    if family is NetworkFamily.ALPHAZERO and len(games) != 1:
        raise CliError("the resnet baseline trains on exactly one variant")

    cfg = TrainConfig()
    if args.config:
        if not Path(args.config).is_file():
            raise CliError(f"config file not found: {args.config}")
        cfg = parse_config_file(args.config, cfg)
    updates = {}
    if args.iters is not None:
        updates["n_iterations"] = args.iters
    if args.threads != 1:
        updates["threads"] = args.threads
    if updates:
        cfg = replace(cfg, **updates)
    if args.sims is not None or args.selfplay_games is not None:
        game_params = dict(cfg.game_params)
        for g in games:
            gp = cfg.for_game(g.name)
            if args.sims is not None:
                gp = replace(gp, n_sim=args.sims)
            if args.selfplay_games is not None:
                gp = replace(gp, n_selfplay=args.selfplay_games)
            game_params[g.name] = gp
        cfg = replace(cfg, game_params=game_params)

    fixed = games[0] if family is NetworkFamily.ALPHAZERO else None
    if args.small:
        net_cfg = small_config(family, fixed_game=fixed)
    else:
        net_cfg = NetworkConfig(family=family, fixed_game=fixed)
    overrides = {}
    if args.layers is not None:
        overrides["n_enc_layers"] = args.layers
    if args.embed_dim is not None:
        overrides["embed_dim"] = args.embed_dim
    if args.heads is not None:
        overrides["n_heads"] = args.heads
    if args.ffn_dim is not None:
        overrides["ffn_dim"] = args.ffn_dim
    if args.patch_size is not None:
        overrides["patch_size"] = args.patch_size
    if overrides:
        try:
            net_cfg = replace(net_cfg, **overrides)
        except ValueError as e:
            raise CliError(str(e)) from e

    out = Path(args.out) if args.out else default_out_dir()
    torch.manual_seed(args.seed)
    model = build_model(net_cfg, seed=args.seed)
    try:
        train_loop(model, games, cfg, out, run=args.run, seed=args.seed,
                   resume=not args.no_resume, log=print)
    except TrainingDivergence as e:
        print(f"training diverged: {e}", file=sys.stderr)
        return EXIT_DIVERGED
    return EXIT_OK


# -- tournament -----------------------------------------------------------------

def cmd_tournament(args) -> int:
    from .evaluation import round_robin
    from .search import parse_agent

    games = _games_from(args.games)
    descriptors = [s.strip() for s in args.agents.split(",") if s.strip()]
    if len(descriptors) < 2:
        raise CliError("need at least two agent descriptors")
    try:
        agents = [parse_agent(d, default_sims=args.net_sims) for d in descriptors]
    except (ValueError, OSError) as e:
        raise CliError(str(e)) from e

    out = Path(args.out) if args.out else default_out_dir()
    out.mkdir(parents=True, exist_ok=True)
    for game in games:
        report = round_robin(agents, game, n_tournaments=args.tournaments,
                             games_per_pair=args.games_per_pair,
                             k=args.k_factor, seed=args.seed,
                             threads=args.threads)
        results_path = out / f"tournament_{game.name}.txt"
        results_path.write_text("\n".join(report.result_lines) + "\n")
        csv_path = out / f"ratings_{game.name}.csv"
        csv_path.write_text(report.table.format_csv())
        print(f"game {game.name} ({args.tournaments} tournaments, "
              f"results in {results_path})")
        for a, b in report.skipped_pairs:
            print(f"  skipped pairing {a} vs {b} (variant not playable)")
        print(report.table.format_text())
    return EXIT_OK


# -- play -----------------------------------------------------------------------

def _parse_human_action(text: str, game) -> Action | None:
    parts = text.replace(",", " ").split()
    if not parts:
        return None
    if game.game is GameKind.CONNECT4:
        if len(parts) != 1 or not parts[0].lstrip("-").isdigit():
            return None
        return Action.drop(int(parts[0]))
    if parts[0].lower() == "pass":
        return Action.pass_()
    if len(parts) != 2 or not all(p.lstrip("-").isdigit() for p in parts):
        return None
    return Action.place(int(parts[0]), int(parts[1]))


def cmd_play(args) -> int:
    import numpy as np

    from .search import parse_agent

    game = _games_from(args.game)[0]
    try:
        agent = parse_agent(args.agent, default_sims=args.net_sims)
    except (ValueError, OSError) as e:
        raise CliError(str(e)) from e
    if not agent.can_play(game):
        raise CliError(f"{agent.name} cannot play {game.name}")

    human_color = +1 if args.human_first == "true" else -1
    rng = np.random.default_rng(args.seed)
    state = initial_state(game)
    moves: list[tuple[int, int, int]] = []
    prompt = ("column" if game.game is GameKind.CONNECT4 else
              "row col" + (" or 'pass'" if game.game is GameKind.OTHELLO else ""))

    while True:
        outcome = terminal_status(state)
        if outcome.is_terminal:
            break
        print(render_board(state))
        if state.to_move == human_color:
            try:
                raw = input(f"your move ({prompt}): ")
            except EOFError:
                print("session aborted")
                return EXIT_OK
            action = _parse_human_action(raw, game)
            if action is None:
                print(f"could not parse {raw!r}, expected {prompt}")
                continue
            try:
                nxt = apply_move(state, action)
            except (IllegalMoveError, ValueError) as e:
                print(f"illegal move: {e}")
                continue
        else:
            action = agent.move(state, rng)
            print(f"{agent.name} plays {action}")
            nxt = apply_move(state, action)
        moves.append((state.move_count, state.to_move, action_index(action, game)))
        state = nxt

    print(render_board(state))
    c_win = outcome.c_win
    if c_win == 0:
        print("result: draw")
    elif c_win == human_color:
        print("result: you win")
    else:
        print(f"result: {agent.name} wins")

    out = Path(args.out) if args.out else default_out_dir()
    out.mkdir(parents=True, exist_ok=True)
    from .games import format_match_record

    record_path = out / f"play_{game.name}_seed{args.seed}.txt"
    record_path.write_text(format_match_record(moves, c_win))
    print(f"match record written to {record_path}")
    return EXIT_OK


# -- info -----------------------------------------------------------------------

def cmd_info(args) -> int:
    from .neural import CheckpointError, manifest_parameter_count, read_manifest

    try:
        manifest = read_manifest(args.checkpoint)
    except CheckpointError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    meta = manifest.get("meta", {})
    n_params = manifest_parameter_count(manifest)
    print(f"family: {manifest['family']}")
    print(f"parameters: {n_params} ({n_params / 1e6:.2f}M)")
    print(f"iteration: {meta.get('iteration', 'unknown')}")
    games = meta.get("games")
    print(f"games: {','.join(games) if games else 'unknown'}")
    cfg = manifest.get("config", {})
    for key in sorted(cfg):
        if key != "family":
            print(f"config.{key}: {cfg[key]}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "train": cmd_train,
        "tournament": cmd_tournament,
        "play": cmd_play,
        "info": cmd_info,
    }
    try:
        return handlers[args.command](args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
