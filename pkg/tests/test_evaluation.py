"""Elo math, match execution, and round-robin tournaments."""

import pytest

from conftest import rng_for
from vitzero.games import CONNECT4, CONNECT4_5X4, GOMOKU, legal_indices
from vitzero.games.rules import action_from_index
from vitzero.evaluation import (
    INITIAL_RATING,
    IncompatibleAgentError,
    MatchSpec,
    RatingTable,
    elo_expected,
    elo_update,
    play_match,
    round_robin,
)
from vitzero.games import parse_match_record
from vitzero.search import Agent, MinimaxAgent, RandomAgent


class LowestMoveAgent(Agent):
    """Deterministic: always the lowest-index legal move."""

    def __init__(self, name):
        self.name = name

    def move(self, state, rng):
        return action_from_index(legal_indices(state)[0], state.id)


class PickyAgent(Agent):
    """Plays (deterministically) but only on one variant."""

    def __init__(self, name, game_id):
        self.name = name
        self.game_id = game_id

    def can_play(self, game_id):
        return game_id == self.game_id

    def move(self, state, rng):
        return action_from_index(legal_indices(state)[0], state.id)


# -- elo math --------------------------------------------------------------------

def test_elo_expected_closed_forms():
    assert elo_expected(1500, 1500) == pytest.approx(0.5, abs=1e-12)
    assert elo_expected(1900, 1500) == pytest.approx(10 / 11, abs=1e-12)
    assert elo_expected(1100, 1500) == pytest.approx(1 / 11, abs=1e-12)


def test_elo_expected_antisymmetry():
    rng = rng_for(0)
    for _ in range(200):
        ea, eb = rng.uniform(500, 2500, size=2)
        assert elo_expected(ea, eb) + elo_expected(eb, ea) == pytest.approx(1.0, abs=1e-12)
        assert 0.0 < elo_expected(ea, eb) < 1.0


def test_elo_update_closed_forms():
    assert elo_update(1500, 5, 10, 0.5, k=8) == 1500.0
    assert elo_update(1500, 10, 10, 0.5, k=8) == 1540.0
    assert elo_update(1500, 3.5, 7, 0.5, k=8) == 1500.0


def test_rating_table_pairing_zero_sum_exact():
    # drive three ratings through 1000 random pairings; the sum must
    # stay bit-for-bit at 4500 the whole way
    rng = rng_for(1)
    table = RatingTable()
    for name in ("a", "b", "c"):
        table.add_agent(name)
    for _ in range(1000):
        x, y = rng.choice(["a", "b", "c"], size=2, replace=False)
        n = int(rng.integers(1, 20))
        wins = int(rng.integers(0, 2 * n + 1)) / 2.0
        table.apply_pairing(str(x), str(y), wins, n)
        assert sum(table.ratings.values()) == 3 * INITIAL_RATING


# -- play_match ---------------------------------------------------------------------

def test_play_match_deterministic_record():
    out1 = play_match(RandomAgent(), RandomAgent(), GOMOKU, seed=42)
    out2 = play_match(RandomAgent(), RandomAgent(), GOMOKU, seed=42)
    assert out1.record == out2.record
    assert out1.result == out2.result
    moves, result = parse_match_record(out1.record)
    assert len(moves) == out1.n_moves
    assert moves[0][1] == +1  # first player opens


def test_play_match_random_vs_random_first_player_rate():
    wins_first = 0
    decisive = 0
    for seed in range(1000):
        out = play_match(RandomAgent(), RandomAgent(), GOMOKU, seed=seed)
        if out.result == "a":
            wins_first += 1
        if out.result != "draw":
            decisive += 1
    rate = wins_first / 1000
    assert 0.4 <= rate <= 0.75
    assert decisive > 900  # random gomoku rarely fills the board


def test_play_match_minimax_beats_random():
    wins = 0
    for seed in range(100):
        if seed % 2 == 0:
            out = play_match(MinimaxAgent(3), RandomAgent(), CONNECT4, seed=seed)
            wins += out.result == "a"
        else:
            out = play_match(RandomAgent(), MinimaxAgent(3), CONNECT4, seed=seed)
            wins += out.result == "b"
    assert wins >= 90


def test_play_match_rejects_incompatible_agent():
    picky = PickyAgent("picky", CONNECT4)
    with pytest.raises(IncompatibleAgentError):
        play_match(picky, RandomAgent(), CONNECT4_5X4, seed=0)


def test_match_spec_validation():
    with pytest.raises(ValueError, match="even"):
        MatchSpec(agents=("a", "b"), game=CONNECT4, games_per_pair=3,
                  alternate_first_player=True)
    MatchSpec(agents=("a", "b"), game=CONNECT4, games_per_pair=3,
              alternate_first_player=False)


# -- round_robin -----------------------------------------------------------------------

def test_round_robin_identical_deterministic_agents_stay_1500():
    agents = [LowestMoveAgent("lma1"), LowestMoveAgent("lma2")]
    report = round_robin(agents, CONNECT4_5X4, n_tournaments=5, games_per_pair=2,
                         seed=3)
    assert report.table.ratings["lma1"] == INITIAL_RATING
    assert report.table.ratings["lma2"] == INITIAL_RATING


def test_round_robin_rating_sum_conserved():
    agents = [RandomAgent(), LowestMoveAgent("lma"), MinimaxAgent(2)]
    report = round_robin(agents, CONNECT4_5X4, n_tournaments=4, seed=9)
    total = sum(report.table.ratings.values())
    assert total == 3 * INITIAL_RATING
    assert len(report.result_lines) == 4 * 3 * 2


def test_round_robin_dominant_agent_rated_highest():
    agents = [RandomAgent(), MinimaxAgent(3)]
    report = round_robin(agents, CONNECT4, n_tournaments=5, seed=1)
    standings = report.table.standings()
    assert standings[0][0] == "minimax:3"
    assert standings[0][1] > INITIAL_RATING > standings[1][1]


def test_round_robin_skips_incompatible_pairs():
    picky = PickyAgent("picky", CONNECT4)
    agents = [RandomAgent(), LowestMoveAgent("lma"), picky]
    report = round_robin(agents, CONNECT4_5X4, n_tournaments=2, seed=5)
    assert report.table.ratings["picky"] == INITIAL_RATING
    assert ("lma", "picky") in report.skipped_pairs or \
           ("picky", "lma") in report.skipped_pairs
    played = {tuple(sorted((rec[0], rec[1]))) for rec in report.table.match_log}
    assert played == {("lma", "random")}


def test_round_robin_reproducible():
    a = round_robin([RandomAgent(), LowestMoveAgent("lma")], CONNECT4_5X4,
                    n_tournaments=3, seed=11)
    b = round_robin([RandomAgent(), LowestMoveAgent("lma")], CONNECT4_5X4,
                    n_tournaments=3, seed=11)
    assert a.result_lines == b.result_lines
    assert a.table.ratings == b.table.ratings


def test_round_robin_results_line_format():
    report = round_robin([RandomAgent(), LowestMoveAgent("lma")], CONNECT4_5X4,
                         n_tournaments=1, seed=2)
    line = report.result_lines[0]
    fields = dict(kv.split("=", 1) for kv in line.split())
    assert fields["tournament"] == "0"
    assert fields["game"] == "connect4_4x5"
    assert fields["a"] == "random" and fields["b"] == "lma"
    assert fields["winner"] in ("a", "b", "draw")
    assert int(fields["moves"]) > 0
    assert int(fields["seed"]) >= 0


def test_round_robin_rejects_duplicate_names():
    with pytest.raises(ValueError, match="unique"):
        round_robin([RandomAgent(), RandomAgent()], CONNECT4_5X4)


def test_round_robin_threads_match_single():
    kw = dict(n_tournaments=3, games_per_pair=2, seed=17)
    one = round_robin([RandomAgent(), MinimaxAgent(2), LowestMoveAgent("lma")],
                      CONNECT4_5X4, threads=1, **kw)
    two = round_robin([RandomAgent(), MinimaxAgent(2), LowestMoveAgent("lma")],
                      CONNECT4_5X4, threads=3, **kw)
    assert one.result_lines == two.result_lines
    assert one.table.ratings == two.table.ratings
