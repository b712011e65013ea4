"""Arena domain records: pipeline descriptors, battles, votes, leaderboard rows."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum

from ragkit.arena.elo import INITIAL_RATING
from ragkit.ragio import RagResponse


class ArenaError(RuntimeError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    pipeline_id: str
    retriever: dict = field(default_factory=lambda: {"k": 100, "k1": 0.9, "b": 0.4})
    reranker: dict = field(
        default_factory=lambda: {
            "backend": "identity",
            "window": 20,
            "stride": 10,
            "passes": 3,
            "top_k": 20,
        }
    )
    generator: dict = field(default_factory=lambda: {"backend": "mock", "template": "chatqa"})

    def to_dict(self) -> dict:
        return {
            "id": self.pipeline_id,
            "retriever": dict(self.retriever),
            "reranker": dict(self.reranker),
            "generator": dict(self.generator),
        }


class BattleState(str, Enum):
    CREATED = "created"
    RUNNING = "running"
    ANSWERED = "answered"
    VOTED = "voted"
    ERROR = "error"


class VoteChoice(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    TIE = "tie"
    BOTH_BAD = "both_bad"


@dataclass
class Vote:
    battle_id: str
    choice: VoteChoice
    voter: str
    timestamp: float


@dataclass
class Battle:
    battle_id: str
    topic: str
    left: str
    right: str
    blinded: bool
    side_order_seed: int
    state: BattleState = BattleState.CREATED
    responses: dict[str, RagResponse] = field(default_factory=dict)  # "left"/"right"
    failures: dict[str, str] = field(default_factory=dict)
    vote: Vote | None = None

    @property
    def left_is_a(self) -> bool:
        """Which configured side displays as side A (seeded, stable)."""
        if not self.blinded:
            return True
        return random.Random(self.side_order_seed).random() < 0.5


@dataclass
class LeaderboardEntry:
    pipeline_id: str
    wins: int = 0
    losses: int = 0
    ties: int = 0
    both_bad: int = 0
    rating: float = INITIAL_RATING

    def to_dict(self) -> dict:
        return {
            "pipeline_id": self.pipeline_id,
            "wins": self.wins,
            "losses": self.losses,
            "ties": self.ties,
            "both_bad": self.both_bad,
            "rating": self.rating,
        }
