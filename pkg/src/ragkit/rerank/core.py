"""Sliding-window listwise reranking.

A pass processes windows back-to-front (the last ``window`` items first),
reorders each window by the backend's repaired permutation, and the stride
overlap carries each window's top items into the next one, bubbling the
best candidates toward the head of the list. Every operation returns a
permutation of its input ids.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Sequence

from ragkit.retrieval.trec import ScoredSegment


class RerankError(RuntimeError):
    pass


@dataclass(frozen=True)
class Candidate:
    segment_id: str
    title: str = ""
    text: str = ""


@dataclass
class RankedList:
    topic_id: str
    items: list[str] = field(default_factory=list)

    def to_scored(self) -> list[ScoredSegment]:
        """Assign 1/rank pseudo-scores after a rerank pass."""
        return [
            ScoredSegment(segment_id=sid, score=1.0 / (i + 1), rank=i + 1)
            for i, sid in enumerate(self.items)
        ]


@dataclass(frozen=True)
class WindowPlan:
    window: int = 20
    stride: int = 10
    passes: int = 3

    def __post_init__(self):
        if not 1 <= self.stride <= self.window:
            raise ValueError("need 1 <= stride <= window")
        if self.passes < 1:
            raise ValueError("passes must be >= 1")


def repair_permutation(raw: Sequence[int], window_size: int) -> list[int]:
    """Total repair: drop out-of-range and repeated positions, append missing."""
    seen: set[int] = set()
    perm: list[int] = []
    for pos in raw:
        if 0 <= pos < window_size and pos not in seen:
            seen.add(pos)
            perm.append(pos)
    for pos in range(window_size):
        if pos not in seen:
            perm.append(pos)
    return perm


_MENTION_RE = re.compile(r"\[(\d+)\]")


def parse_permutation(raw: str, window_size: int) -> list[int]:
    """Extract 1-based bracketed mentions ("[2] > [1]") into a repaired 0-based permutation."""
    mentions = [int(m) - 1 for m in _MENTION_RE.findall(raw)]
    return repair_permutation(mentions, window_size)


def _window_starts(n: int, window: int, stride: int) -> list[int]:
    if n <= window:
        return [0]
    starts = []
    s = n - window
    while s > 0:
        starts.append(s)
        s -= stride
    starts.append(0)
    return starts


def sliding_window_pass(
    ranked: RankedList,
    backend,
    plan: WindowPlan,
    *,
    topic: str = "",
    resolver: Callable[[str], Candidate] | None = None,
) -> RankedList:
    """One back-to-front sweep of backend-reordered windows."""
    if not ranked.items:
        raise RerankError("cannot rerank an empty list")
    resolver = resolver or (lambda sid: Candidate(segment_id=sid))
    items = list(ranked.items)
    for start in _window_starts(len(items), plan.window, plan.stride):
        window_items = items[start : start + plan.window]
        candidates = [resolver(sid) for sid in window_items]
        try:
            raw = backend.rank_window(topic, candidates)
        except Exception as exc:
            raise RerankError(
                f"backend {getattr(backend, 'name', '?')} failed on window "
                f"[{start}, {start + len(window_items)}) of topic {ranked.topic_id!r}: {exc}"
            ) from exc
        perm = repair_permutation(raw, len(window_items))
        items[start : start + plan.window] = [window_items[p] for p in perm]
    return RankedList(topic_id=ranked.topic_id, items=items)


def progressive_rerank(
    ranked: RankedList,
    backend,
    plan: WindowPlan,
    *,
    topic: str = "",
    resolver: Callable[[str], Candidate] | None = None,
) -> RankedList:
    """Apply ``plan.passes`` sliding-window passes, each consuming the last output."""
    current = ranked
    for _ in range(plan.passes):
        current = sliding_window_pass(
            current, backend, plan, topic=topic, resolver=resolver
        )
    return current


def truncate_top_k(ranked: RankedList, k: int = 20) -> RankedList:
    return RankedList(topic_id=ranked.topic_id, items=list(ranked.items[:k]))
