"""Elo rating mathematics and the tournament rating table.

Expected score p(A beats B) = 1/(1 + 10^((e(B)-e(A))/400)); after a
series of N_G games the update is e'(A) = e(A) + K(N_win - N_G * p)
with K = 8 and draws counted as half wins.

The table applies the exact negated delta to the opponent and keeps
every rating on a 2^-20 grid (about a microrating), so both additions
are exact in floating point and a pairing never changes the rating sum
by even one bit. The quantization perturbs an update by < 5e-7 rating
points, far below anything a rating table resolves.
"""

from __future__ import annotations

from dataclasses import dataclass, field

INITIAL_RATING = 1500.0
DEFAULT_K = 8.0
RATING_QUANTUM = 2.0 ** -20


def elo_expected(e_a: float, e_b: float) -> float:
    """Probability that a player rated e_a beats one rated e_b."""
    return 1.0 / (1.0 + 10.0 ** ((e_b - e_a) / 400.0))


def elo_update(e_a: float, n_win: float, n_games: int, p: float,
               k: float = DEFAULT_K) -> float:
    """Rating after n_games with n_win wins (draws count 0.5) against
    expected per-game score p."""
    return e_a + k * (n_win - n_games * p)


@dataclass
class RatingTable:
    ratings: dict[str, float] = field(default_factory=dict)
    match_log: list[tuple] = field(default_factory=list)

    def add_agent(self, name: str) -> None:
        self.ratings.setdefault(name, INITIAL_RATING)

    def rating(self, name: str) -> float:
        return self.ratings[name]

    def apply_pairing(self, a: str, b: str, wins_a: float, n_games: int,
                      k: float = DEFAULT_K) -> None:
        """Batch update after one pairing; B receives exactly -delta(A),
        quantized so both additions are lossless."""
        p = elo_expected(self.ratings[a], self.ratings[b])
        delta = round(k * (wins_a - n_games * p) / RATING_QUANTUM) * RATING_QUANTUM
        self.ratings[a] += delta
        self.ratings[b] -= delta
        self.match_log.append((a, b, wins_a, n_games))

    def standings(self) -> list[tuple[str, float]]:
        return sorted(self.ratings.items(), key=lambda kv: (-kv[1], kv[0]))

    def format_text(self) -> str:
        rows = self.standings()
        width = max((len(name) for name, _ in rows), default=5)
        lines = [f"{'agent':<{width}}  rating"]
        for name, rating in rows:
            lines.append(f"{name:<{width}}  {rating:7.1f}")
        return "\n".join(lines) + "\n"

    def format_csv(self) -> str:
        return "".join(f"{name},{rating:.6f}\n" for name, rating in self.standings())
