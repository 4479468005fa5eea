"""Round-robin tournaments with per-pairing Elo updates.

Every tournament plays each unordered agent pair for games_per_pair
games with first-player alternation; the pair's ratings are updated
once per pairing. Ratings start at 1500 and accumulate across the
tournaments of one run. Pairings an agent cannot play (wrong board
size) are skipped and excluded from both agents' game counts.

Matches depend only on their own seeds, never on the evolving ratings,
so with threads > 1 they run concurrently and the rating updates are
still applied sequentially in the fixed pairing order - the results are
identical to a single-threaded run.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..games import GameId
from .elo import DEFAULT_K, RatingTable
from .matches import play_match


@dataclass
class TournamentReport:
    game: GameId
    table: RatingTable
    result_lines: list[str] = field(default_factory=list)
    skipped_pairs: list[tuple[str, str]] = field(default_factory=list)


def _match_seed(seed: int, t: int, i: int, j: int, g: int) -> int:
    ss = np.random.SeedSequence([seed, t, i, j, g])
    return int(ss.generate_state(1, np.uint64)[0])


def round_robin(agents: list, game_id: GameId, n_tournaments: int = 50,
                games_per_pair: int = 2, k: float = DEFAULT_K, seed: int = 0,
                threads: int = 1, on_line=None) -> TournamentReport:
    if len(agents) < 2:
        raise ValueError("a round robin needs at least two agents")
    names = [a.name for a in agents]
    if len(set(names)) != len(names):
        raise ValueError(f"agent names must be unique, got {names}")
    table = RatingTable()
    for name in names:
        table.add_agent(name)
    report = TournamentReport(game=game_id, table=table)

    playable = []
    for t in range(n_tournaments):
        for i in range(len(agents)):
            for j in range(i + 1, len(agents)):
                a, b = agents[i], agents[j]
                if not (a.can_play(game_id) and b.can_play(game_id)):
                    if t == 0:
                        report.skipped_pairs.append((a.name, b.name))
                    continue
                for g in range(games_per_pair):
                    playable.append((t, i, j, g))

    def run_match(job):
        t, i, j, g = job
        match_seed = _match_seed(seed, t, i, j, g)
        rng = np.random.default_rng(match_seed)
        a, b = agents[i], agents[j]
        if g % 2 == 0:
            out = play_match(a, b, game_id, rng)
            score_a = out.score_a
        else:
            out = play_match(b, a, game_id, rng)
            score_a = 1.0 - out.score_a
        return match_seed, out, score_a

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = dict(zip(playable, pool.map(run_match, playable)))
    else:
        outcomes = {job: run_match(job) for job in playable}

    pending: dict[tuple, float] = {}
    for job in playable:
        t, i, j, g = job
        a, b = agents[i], agents[j]
        match_seed, out, score_a = outcomes[job]
        first = a.name if g % 2 == 0 else b.name
        second = b.name if g % 2 == 0 else a.name
        winner = ("draw" if out.result == "draw"
                  else (first if out.result == "a" else second))
        winner_tag = "draw" if winner == "draw" else ("a" if winner == a.name else "b")
        line = (f"tournament={t} game={game_id.name} a={a.name} "
                f"b={b.name} winner={winner_tag} moves={out.n_moves} "
                f"seed={match_seed}")
        report.result_lines.append(line)
        if on_line:
            on_line(line)
        pending[(t, i, j)] = pending.get((t, i, j), 0.0) + score_a
        if g == games_per_pair - 1:
            table.apply_pairing(a.name, b.name, pending.pop((t, i, j)),
                                games_per_pair, k)
    return report
