"""Battle arena: side-by-side pipeline comparisons, votes, Elo leaderboard."""

from ragkit.arena.elo import INITIAL_RATING, K_FACTOR, expected_score, update_ratings
from ragkit.arena.models import (
    ArenaError,
    Battle,
    BattleState,
    LeaderboardEntry,
    PipelineConfig,
    Vote,
    VoteChoice,
)
from ragkit.arena.store import ArenaStore
from ragkit.arena.service import create_app, load_arena_config

__all__ = [
    "INITIAL_RATING",
    "K_FACTOR",
    "expected_score",
    "update_ratings",
    "ArenaError",
    "Battle",
    "BattleState",
    "Vote",
    "VoteChoice",
    "PipelineConfig",
    "LeaderboardEntry",
    "ArenaStore",
    "create_app",
    "load_arena_config",
]
