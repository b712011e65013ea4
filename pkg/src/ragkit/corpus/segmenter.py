"""Sliding-window chunking of documents into overlapping sentence segments."""

from __future__ import annotations

from ragkit.corpus.documents import Document, Segment, make_segment_id
from ragkit.corpus.sentences import split_sentences


def segment_document(doc: Document, window: int = 10, stride: int = 5) -> list[Segment]:
    """Chunk a document into segments of up to ``window`` sentences.

    Windows start at sentence indices 0, stride, 2*stride, ... and
    generation stops after the first window that reaches the final
    sentence, so no fully-redundant trailing windows are emitted. Each
    segment's character span runs from the first to the last covered
    sentence, making ``doc.body[start_char:end_char] == text`` exact.
    """
    if not 1 <= stride <= window:
        raise ValueError("need 1 <= stride <= window")
    spans = split_sentences(doc.body)
    if not spans:
        return []
    segments: list[Segment] = []
    n = len(spans)
    for ordinal, start in enumerate(range(0, n, stride)):
        last = min(start + window, n) - 1
        start_char = spans[start][0]
        end_char = spans[last][1]
        segments.append(
            Segment(
                segment_id=make_segment_id(doc.doc_id, ordinal),
                doc_id=doc.doc_id,
                ordinal=ordinal,
                url=doc.url,
                title=doc.title,
                headings=doc.headings,
                text=doc.body[start_char:end_char],
                start_char=start_char,
                end_char=end_char,
            )
        )
        if start + window >= n:
            break
    return segments
