"""Inverted index construction and on-disk persistence.

Disk layout (``index.bin``, little-endian, format v1):

    magic   4s   b"RKIX"
    version u32
    N       u32  number of segments
    total   u64  total token count
    N x [ id_len u16, id utf-8 bytes ]        ordinal -> segment_id
    N x [ length u32 ]                        tokens per segment
    T       u32  vocabulary size
    T x [ term_len u16, term utf-8 bytes, df u32, df x (ordinal u32, tf u32) ]

A ``index.json`` sidecar records the same stats in readable form. The
loaded index is immutable; readers need no locking.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from ragkit.corpus.documents import Segment
from ragkit.retrieval.analysis import analyze

_MAGIC = b"RKIX"
_VERSION = 1


@dataclass
class InvertedIndex:
    segment_ids: list[str]
    lengths: list[int]
    postings: dict[str, list[tuple[int, int]]]
    ordinal_of: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.ordinal_of:
            self.ordinal_of = {sid: i for i, sid in enumerate(self.segment_ids)}

    @property
    def doc_count(self) -> int:
        return len(self.segment_ids)

    @property
    def avg_len(self) -> float:
        return sum(self.lengths) / len(self.lengths) if self.lengths else 0.0

    def df(self, term: str) -> int:
        return len(self.postings.get(term, ()))


def build_index(segments: Iterable[Segment]) -> InvertedIndex:
    """Index analyzed segment text; raises on duplicates or an empty collection."""
    segment_ids: list[str] = []
    lengths: list[int] = []
    postings: dict[str, list[tuple[int, int]]] = {}
    seen: set[str] = set()
    for seg in segments:
        if seg.segment_id in seen:
            raise ValueError(f"duplicate segment_id {seg.segment_id!r}")
        seen.add(seg.segment_id)
        ordinal = len(segment_ids)
        segment_ids.append(seg.segment_id)
        terms = analyze(seg.text)
        lengths.append(len(terms))
        tf: dict[str, int] = {}
        for t in terms:
            tf[t] = tf.get(t, 0) + 1
        for t, count in tf.items():
            postings.setdefault(t, []).append((ordinal, count))
    if not segment_ids:
        raise ValueError("empty collection")
    # postings are appended in ordinal order already; keep the invariant explicit
    for plist in postings.values():
        plist.sort(key=lambda p: p[0])
    return InvertedIndex(segment_ids=segment_ids, lengths=lengths, postings=postings)


def save_index(index: InvertedIndex, directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    with open(directory / "index.bin", "wb") as f:
        f.write(struct.pack("<4sII", _MAGIC, _VERSION, index.doc_count))
        f.write(struct.pack("<Q", sum(index.lengths)))
        for sid in index.segment_ids:
            b = sid.encode("utf-8")
            f.write(struct.pack("<H", len(b)))
            f.write(b)
        f.write(struct.pack(f"<{index.doc_count}I", *index.lengths))
        terms = sorted(index.postings)
        f.write(struct.pack("<I", len(terms)))
        for term in terms:
            b = term.encode("utf-8")
            plist = index.postings[term]
            f.write(struct.pack("<H", len(b)))
            f.write(b)
            f.write(struct.pack("<I", len(plist)))
            for ordinal, tf in plist:
                f.write(struct.pack("<II", ordinal, tf))
    stats = {
        "format": "ragkit-index",
        "version": _VERSION,
        "doc_count": index.doc_count,
        "avg_len": index.avg_len,
        "total_tokens": sum(index.lengths),
        "vocab_size": len(index.postings),
        "total_postings": sum(len(p) for p in index.postings.values()),
    }
    (directory / "index.json").write_text(json.dumps(stats, indent=2) + "\n")


def load_index(directory: str | Path) -> InvertedIndex:
    directory = Path(directory)
    data = (directory / "index.bin").read_bytes()
    off = 0

    def take(fmt: str):
        nonlocal off
        size = struct.calcsize(fmt)
        vals = struct.unpack_from(fmt, data, off)
        off += size
        return vals

    magic, version, n = take("<4sII")
    if magic != _MAGIC:
        raise ValueError("not a ragkit index file")
    if version != _VERSION:
        raise ValueError(f"unsupported index version {version}")
    (_total,) = take("<Q")
    segment_ids = []
    for _ in range(n):
        (id_len,) = take("<H")
        segment_ids.append(data[off : off + id_len].decode("utf-8"))
        off += id_len
    lengths = list(take(f"<{n}I"))
    (vocab,) = take("<I")
    postings: dict[str, list[tuple[int, int]]] = {}
    for _ in range(vocab):
        (term_len,) = take("<H")
        term = data[off : off + term_len].decode("utf-8")
        off += term_len
        (df,) = take("<I")
        flat = take(f"<{2 * df}I")
        postings[term] = [(flat[2 * i], flat[2 * i + 1]) for i in range(df)]
    return InvertedIndex(segment_ids=segment_ids, lengths=lengths, postings=postings)
