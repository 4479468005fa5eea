"""Elo ratings, match execution, and round-robin tournaments."""

from .elo import DEFAULT_K, INITIAL_RATING, RatingTable, elo_expected, elo_update
from .matches import IncompatibleAgentError, MatchOutcome, MatchSpec, play_match
from .tournament import TournamentReport, round_robin

__all__ = [
    "DEFAULT_K", "INITIAL_RATING", "IncompatibleAgentError", "MatchOutcome",
    "MatchSpec", "RatingTable", "TournamentReport", "elo_expected", "elo_update",
    "play_match", "round_robin",
]
