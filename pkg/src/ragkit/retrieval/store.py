"""In-memory segment store keyed by segment id, loadable from segment JSONL."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Iterator

from ragkit.corpus.documents import Segment, read_segments_jsonl


class SegmentStore:
    def __init__(self, segments: Iterable[Segment] = ()):
        self._by_id: dict[str, Segment] = {}
        for seg in segments:
            self._by_id[seg.segment_id] = seg

    @classmethod
    def from_jsonl(cls, path: str | Path) -> "SegmentStore":
        with open(path, "r", encoding="utf-8") as f:
            return cls(read_segments_jsonl(f))

    def __len__(self) -> int:
        return len(self._by_id)

    def __contains__(self, segment_id: str) -> bool:
        return segment_id in self._by_id

    def __iter__(self) -> Iterator[Segment]:
        return iter(self._by_id.values())

    def get(self, segment_id: str) -> Segment | None:
        return self._by_id.get(segment_id)

    def __getitem__(self, segment_id: str) -> Segment:
        try:
            return self._by_id[segment_id]
        except KeyError:
            raise KeyError(f"unknown segment {segment_id!r}") from None
