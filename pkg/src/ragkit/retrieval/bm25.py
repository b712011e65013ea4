"""BM25 scoring and top-k search.

idf uses the non-negative ln(1 + (N - df + 0.5)/(df + 0.5)) form so that
adding a query-term occurrence to a segment never lowers its score. Score
accumulation iterates query terms in order (duplicates included) so that
results match a per-segment left-to-right evaluation bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from ragkit.retrieval.analysis import analyze
from ragkit.retrieval.index import InvertedIndex
from ragkit.retrieval.trec import ScoredSegment


@dataclass(frozen=True)
class BM25Params:
    k1: float = 0.9
    b: float = 0.4

    def __post_init__(self):
        if self.k1 < 0:
            raise ValueError("k1 must be >= 0")
        if not 0.0 <= self.b <= 1.0:
            raise ValueError("b must be in [0, 1]")


def idf(index: InvertedIndex, term: str) -> float:
    df = index.df(term)
    return math.log(1.0 + (index.doc_count - df + 0.5) / (df + 0.5))


def _contribution(tf: int, seg_len: int, avg_len: float, term_idf: float, params: BM25Params) -> float:
    norm = params.k1 * (1.0 - params.b + params.b * seg_len / avg_len)
    return term_idf * tf / (tf + norm)


def bm25_score(
    index: InvertedIndex,
    q_terms: Sequence[str],
    ordinal: int,
    params: BM25Params = BM25Params(),
) -> float:
    """Score one segment; absent terms contribute 0, repeats count per occurrence."""
    avg_len = index.avg_len
    seg_len = index.lengths[ordinal]
    score = 0.0
    for term in q_terms:
        tf = 0
        for o, f in index.postings.get(term, ()):
            if o == ordinal:
                tf = f
                break
        if tf:
            score += _contribution(tf, seg_len, avg_len, idf(index, term), params)
    return score


def search(
    index: InvertedIndex,
    topic: str,
    k: int = 100,
    params: BM25Params = BM25Params(),
) -> list[ScoredSegment]:
    """Top-k positive-scoring segments, ordered by (score desc, segment_id asc)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    q_terms = analyze(topic)
    avg_len = index.avg_len
    scores: dict[int, float] = {}
    for term in q_terms:
        plist = index.postings.get(term)
        if not plist:
            continue
        term_idf = idf(index, term)
        for ordinal, tf in plist:
            scores[ordinal] = scores.get(ordinal, 0.0) + _contribution(
                tf, index.lengths[ordinal], avg_len, term_idf, params
            )
    hits = [
        (score, index.segment_ids[ordinal])
        for ordinal, score in scores.items()
        if score > 0.0
    ]
    hits.sort(key=lambda h: (-h[0], h[1]))
    return [
        ScoredSegment(segment_id=sid, score=score, rank=i + 1)
        for i, (score, sid) in enumerate(hits[:k])
    ]
