"""Document/segment records and their JSONL wire formats.

Documents arrive as JSONL with fields ``docid, url, title, headings, body``.
Segments are written back out as JSONL with ``docid`` holding the segment id
(``<doc_id>#<ordinal>``), the copied parent metadata, the chunk text under
``segment``, and its ``start_char``/``end_char`` character span in the parent
body.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Union


class CorpusError(ValueError):
    """Malformed corpus input; carries the offending 1-based line number."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


@dataclass(frozen=True)
class Document:
    doc_id: str
    url: str = ""
    title: str = ""
    headings: str = ""
    body: str = ""


@dataclass(frozen=True)
class Segment:
    segment_id: str
    doc_id: str
    ordinal: int
    url: str
    title: str
    headings: str
    text: str
    start_char: int
    end_char: int


def make_segment_id(doc_id: str, ordinal: int) -> str:
    return f"{doc_id}#{ordinal}"


def parse_segment_id(segment_id: str) -> tuple[str, int]:
    """Split ``<doc_id>#<ordinal>`` back into its parts."""
    doc_id, sep, ordinal = segment_id.rpartition("#")
    if not sep or not ordinal.isdigit():
        raise CorpusError(f"bad segment id {segment_id!r}")
    return doc_id, int(ordinal)


Source = Union[IO[bytes], IO[str], Iterable[Union[bytes, str]]]


def parse_document_stream(source: Source) -> Iterator[Document]:
    """Yield Documents from a JSONL stream, in file order.

    Each line must be a JSON object with at least ``docid`` and ``body``;
    ``url``/``title``/``headings`` default to empty strings. Malformed
    lines and repeated doc ids raise :class:`CorpusError` with the line
    number.
    """
    seen: set[str] = set()
    for line_no, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        if not raw.strip():
            continue
        try:
            record = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"not valid JSON ({exc.msg})", line_no) from exc
        if not isinstance(record, dict):
            raise CorpusError("expected a JSON object", line_no)
        for key in ("docid", "body"):
            if key not in record:
                raise CorpusError(f"missing required field {key!r}", line_no)
        doc_id = str(record["docid"])
        if not doc_id:
            raise CorpusError("empty docid", line_no)
        if doc_id in seen:
            raise CorpusError(f"duplicate docid {doc_id!r}", line_no)
        seen.add(doc_id)
        yield Document(
            doc_id=doc_id,
            url=str(record.get("url") or ""),
            title=str(record.get("title") or ""),
            headings=str(record.get("headings") or ""),
            body=str(record["body"]),
        )


def segment_to_record(seg: Segment) -> dict:
    return {
        "docid": seg.segment_id,
        "url": seg.url,
        "title": seg.title,
        "headings": seg.headings,
        "segment": seg.text,
        "start_char": seg.start_char,
        "end_char": seg.end_char,
    }


def write_segments_jsonl(out: IO[str], segments: Iterable[Segment]) -> int:
    """Write segments in the segmented-collection schema; returns the count."""
    n = 0
    for seg in segments:
        out.write(json.dumps(segment_to_record(seg), ensure_ascii=False) + "\n")
        n += 1
    return n


def read_segments_jsonl(source: Source) -> Iterator[Segment]:
    for line_no, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        if not raw.strip():
            continue
        try:
            record = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"not valid JSON ({exc.msg})", line_no) from exc
        try:
            segment_id = str(record["docid"])
            doc_id, ordinal = parse_segment_id(segment_id)
            yield Segment(
                segment_id=segment_id,
                doc_id=doc_id,
                ordinal=ordinal,
                url=str(record.get("url") or ""),
                title=str(record.get("title") or ""),
                headings=str(record.get("headings") or ""),
                text=str(record["segment"]),
                start_char=int(record["start_char"]),
                end_char=int(record["end_char"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CorpusError(f"bad segment record ({exc})", line_no) from exc
