"""Arena state: battle lifecycle, vote accounting, leaderboard, event log.

Persistence is an append-only JSONL event log (battle_created,
battle_answered, vote) replayed at startup; replaying the log from empty
state reproduces the live leaderboard exactly. Each battle's transitions
are serialized by a per-battle lock, so racing votes resolve to exactly
one acceptance.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from pathlib import Path
from typing import Mapping

from ragkit.arena.elo import update_ratings
from ragkit.arena.models import (
    ArenaError,
    Battle,
    BattleState,
    LeaderboardEntry,
    PipelineConfig,
    Vote,
    VoteChoice,
)
from ragkit.pipeline import Pipeline
from ragkit.ragio import RagResponse, to_dict as response_to_dict, deserialize, serialize
from ragkit.retrieval.store import SegmentStore


class ArenaStore:
    def __init__(
        self,
        pipelines: Mapping[str, Pipeline],
        configs: Mapping[str, PipelineConfig],
        segments: SegmentStore,
        event_log: str | Path | None = None,
        *,
        rng_seed: int | None = None,
    ):
        self.pipelines = dict(pipelines)
        self.configs = dict(configs)
        self.segments = segments
        self.battles: dict[str, Battle] = {}
        self.leaderboard: dict[str, LeaderboardEntry] = {}
        self._battle_locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        self._log_lock = threading.Lock()
        self._event_log = Path(event_log) if event_log else None
        import random

        self._rng = random.Random(rng_seed)
        if self._event_log and self._event_log.exists():
            self._replay(self._event_log)

    # -- event log ---------------------------------------------------------

    def _append_event(self, event: dict) -> None:
        if self._event_log is None:
            return
        with self._log_lock:
            with open(self._event_log, "a", encoding="utf-8") as f:
                f.write(json.dumps(event, ensure_ascii=False) + "\n")

    def _replay(self, path: Path) -> None:
        with open(path, "r", encoding="utf-8") as f:
            for line in f:
                if line.strip():
                    self.apply_event(json.loads(line))

    def apply_event(self, event: dict) -> None:
        """Apply one persisted event to in-memory state (no re-execution)."""
        etype = event["type"]
        if etype == "battle_created":
            b = event["battle"]
            battle = Battle(
                battle_id=b["battle_id"],
                topic=b["topic"],
                left=b["left"],
                right=b["right"],
                blinded=b["blinded"],
                side_order_seed=b["side_order_seed"],
            )
            self.battles[battle.battle_id] = battle
            self._battle_locks[battle.battle_id] = threading.Lock()
        elif etype == "battle_answered":
            battle = self.battles[event["battle_id"]]
            for side in ("left", "right"):
                raw = event["responses"].get(side)
                if raw is not None:
                    battle.responses[side] = deserialize(json.dumps(raw))
            battle.failures = dict(event.get("failures", {}))
            battle.state = BattleState(event["state"])
        elif etype == "vote":
            battle = self.battles[event["battle_id"]]
            vote = Vote(
                battle_id=event["battle_id"],
                choice=VoteChoice(event["choice"]),
                voter=event["voter"],
                timestamp=event["timestamp"],
            )
            battle.vote = vote
            battle.state = BattleState.VOTED
            self._apply_vote_to_leaderboard(battle, vote)
        else:
            raise ArenaError(f"unknown event type {etype!r}")

    # -- battle lifecycle ----------------------------------------------------

    def create_battle(self, topic: str, left: str, right: str, blinded: bool) -> Battle:
        if not topic.strip():
            raise ArenaError("topic must be non-empty")
        for pid in (left, right):
            if pid not in self.pipelines:
                raise ArenaError(f"unknown pipeline {pid!r}")
        battle = Battle(
            battle_id=uuid.uuid4().hex[:12],
            topic=topic,
            left=left,
            right=right,
            blinded=blinded,
            side_order_seed=self._rng.getrandbits(32),
        )
        with self._registry_lock:
            self.battles[battle.battle_id] = battle
            self._battle_locks[battle.battle_id] = threading.Lock()
        self._append_event(
            {
                "type": "battle_created",
                "battle": {
                    "battle_id": battle.battle_id,
                    "topic": battle.topic,
                    "left": battle.left,
                    "right": battle.right,
                    "blinded": battle.blinded,
                    "side_order_seed": battle.side_order_seed,
                },
            }
        )
        return battle

    def _get_battle(self, battle_id: str) -> tuple[Battle, threading.Lock]:
        try:
            return self.battles[battle_id], self._battle_locks[battle_id]
        except KeyError:
            raise ArenaError(f"unknown battle {battle_id!r}") from None

    def run_battle(self, battle_id: str) -> Battle:
        """Execute both pipelines; one side failing never kills the other."""
        battle, lock = self._get_battle(battle_id)
        with lock:
            if battle.state != BattleState.CREATED:
                raise ArenaError(f"battle {battle_id} already ran (state {battle.state.value})")
            battle.state = BattleState.RUNNING
        for side in ("left", "right"):
            pid = getattr(battle, side)
            try:
                resp = self.pipelines[pid].answer(
                    topic_id=battle.battle_id,
                    topic=battle.topic,
                    run_id=f"{battle.battle_id}:{side}",
                )
                battle.responses[side] = resp
            except Exception as exc:  # per-side isolation
                battle.failures[side] = str(exc)
        # state change and event append stay under the battle lock so the
        # log order (created < answered < vote) matches the state machine
        with lock:
            battle.state = BattleState.ERROR if len(battle.failures) == 2 else BattleState.ANSWERED
            self._append_event(
                {
                    "type": "battle_answered",
                    "battle_id": battle.battle_id,
                    "state": battle.state.value,
                    "responses": {
                        side: json.loads(serialize(resp)) if resp is not None else None
                        for side, resp in (
                            ("left", battle.responses.get("left")),
                            ("right", battle.responses.get("right")),
                        )
                    },
                    "failures": battle.failures,
                }
            )
        if battle.state == BattleState.ERROR:
            raise ArenaError(
                f"both sides failed: left: {battle.failures['left']}; "
                f"right: {battle.failures['right']}"
            )
        return battle

    def submit_vote(self, battle_id: str, choice: str, voter: str = "anonymous") -> dict:
        battle, lock = self._get_battle(battle_id)
        try:
            parsed = VoteChoice(choice)
        except ValueError:
            raise ArenaError(f"unknown vote choice {choice!r}") from None
        with lock:
            if battle.state == BattleState.VOTED:
                raise ArenaError("already voted")
            if battle.state != BattleState.ANSWERED:
                raise ArenaError(
                    f"cannot vote in state {battle.state.value} (battle must be answered)"
                )
            vote = Vote(
                battle_id=battle_id, choice=parsed, voter=voter, timestamp=time.time()
            )
            battle.vote = vote
            battle.state = BattleState.VOTED
            self._apply_vote_to_leaderboard(battle, vote)
            self._append_event(
                {
                    "type": "vote",
                    "battle_id": battle_id,
                    "choice": parsed.value,
                    "voter": voter,
                    "timestamp": vote.timestamp,
                }
            )
        return self.battle_payload(battle)

    # -- leaderboard ---------------------------------------------------------

    def _entry(self, pipeline_id: str) -> LeaderboardEntry:
        return self.leaderboard.setdefault(pipeline_id, LeaderboardEntry(pipeline_id))

    def _apply_vote_to_leaderboard(self, battle: Battle, vote: Vote) -> None:
        left, right = self._entry(battle.left), self._entry(battle.right)
        if vote.choice == VoteChoice.BOTH_BAD:
            left.both_bad += 1
            right.both_bad += 1
            return
        if vote.choice == VoteChoice.LEFT:
            outcome = "a_wins"
            left.wins += 1
            right.losses += 1
        elif vote.choice == VoteChoice.RIGHT:
            outcome = "b_wins"
            left.losses += 1
            right.wins += 1
        else:
            outcome = "tie"
            left.ties += 1
            right.ties += 1
        left.rating, right.rating = update_ratings(left.rating, right.rating, outcome)

    def leaderboard_snapshot(self) -> list[dict]:
        entries = sorted(
            self.leaderboard.values(), key=lambda e: (-e.rating, e.pipeline_id)
        )
        return [e.to_dict() for e in entries]

    # -- payloads --------------------------------------------------------

    def battle_payload(self, battle: Battle) -> dict:
        """API view of a battle; blinded battles carry no pipeline identity pre-vote."""
        label_of_side = {"left": "A", "right": "B"}
        if battle.blinded and not battle.left_is_a:
            label_of_side = {"left": "B", "right": "A"}
        revealed = (not battle.blinded) or battle.state == BattleState.VOTED
        sides = {}
        for side in ("left", "right"):
            resp = battle.responses.get(side)
            error = battle.failures.get(side)
            if error is not None and not revealed:
                error = "pipeline failed"  # backend names must not leak pre-vote
            sides[label_of_side[side]] = {
                "side": side,
                "response": response_to_dict(resp) if resp is not None else None,
                "error": error,
            }
        payload = {
            "battle_id": battle.battle_id,
            "topic": battle.topic,
            "state": battle.state.value,
            "blinded": battle.blinded,
            "sides": dict(sorted(sides.items())),
        }
        if battle.vote is not None:
            payload["vote"] = {
                "choice": battle.vote.choice.value,
                "voter": battle.vote.voter,
                "timestamp": battle.vote.timestamp,
            }
        if revealed:
            payload["pipelines"] = {
                label_of_side["left"]: battle.left,
                label_of_side["right"]: battle.right,
            }
        return payload

    def segment_preview(self, segment_id: str) -> dict:
        seg = self.segments.get(segment_id)
        if seg is None:
            raise KeyError(segment_id)
        return {
            "segment_id": seg.segment_id,
            "url": seg.url,
            "title": seg.title,
            "headings": seg.headings,
            "text": seg.text,
            "start_char": seg.start_char,
            "end_char": seg.end_char,
        }

    def run_single(self, topic: str, topic_id: str = "adhoc", pipeline_id: str | None = None) -> RagResponse:
        if pipeline_id is None:
            if not self.pipelines:
                raise ArenaError("no pipelines registered")
            pipeline_id = next(iter(self.pipelines))
        if pipeline_id not in self.pipelines:
            raise ArenaError(f"unknown pipeline {pipeline_id!r}")
        return self.pipelines[pipeline_id].answer(topic_id=topic_id, topic=topic)
