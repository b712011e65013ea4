"""TREC run file interchange: ``qid Q0 segment_id rank score run_tag``."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Union


class TrecRunError(ValueError):
    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


@dataclass(frozen=True)
class ScoredSegment:
    segment_id: str
    score: float
    rank: int


@dataclass
class TrecRun:
    run_tag: str
    topics: dict[str, list[ScoredSegment]] = field(default_factory=dict)


def write_trec_run(dest: Union[str, Path, IO[str]], run: TrecRun) -> None:
    """One line per hit; scores use repr so that read-after-write is exact."""
    def _write(out: IO[str]) -> None:
        for topic_id in run.topics:
            for hit in run.topics[topic_id]:
                out.write(
                    f"{topic_id} Q0 {hit.segment_id} {hit.rank} {hit.score!r} {run.run_tag}\n"
                )

    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8") as out:
            _write(out)
    else:
        _write(dest)


def read_trec_run(source: Union[str, Path, IO[str], Iterable[str]]) -> TrecRun:
    """Parse and validate a run file; ranks must be 1..k per topic, in order."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as f:
            return _parse(f)
    return _parse(source)


def _parse(lines: Iterable[str]) -> TrecRun:
    topics: dict[str, list[ScoredSegment]] = {}
    run_tag = ""
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 6:
            raise TrecRunError(f"expected 6 fields, got {len(parts)}", line_no)
        topic_id, q0, segment_id, rank_s, score_s, tag = parts
        if q0 != "Q0":
            raise TrecRunError(f"expected literal Q0, got {q0!r}", line_no)
        try:
            rank = int(rank_s)
            score = float(score_s)
        except ValueError as exc:
            raise TrecRunError(f"bad rank/score ({exc})", line_no) from exc
        hits = topics.setdefault(topic_id, [])
        if rank != len(hits) + 1:
            raise TrecRunError(
                f"rank {rank} out of order for topic {topic_id} (expected {len(hits) + 1})",
                line_no,
            )
        hits.append(ScoredSegment(segment_id=segment_id, score=score, rank=rank))
        run_tag = tag
    return TrecRun(run_tag=run_tag, topics=topics)
