"""The RAG request/response contract: validation and JSON (de)serialization.

A response carries ``references`` (ordered segment ids, at most 20),
``answer`` (sentences with zero-based citation indices into the
references), and ``response_length`` (the total Unicode character count
of the sentence texts, with no inter-sentence separators), wrapped in a
``run_id``/``topic_id`` envelope for batch run files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Iterator, Sequence, Union

MAX_REFERENCES = 20

_ENVELOPE_KEYS = {"run_id", "topic_id", "references", "answer", "response_length"}
_SENTENCE_KEYS = {"text", "citations"}


class RagIOError(ValueError):
    pass


@dataclass(frozen=True)
class AnswerSentence:
    text: str
    citations: tuple[int, ...] = ()


@dataclass(frozen=True)
class RagRequest:
    topic_id: str
    topic: str

    def __post_init__(self):
        if not self.topic_id:
            raise RagIOError("topic_id must be non-empty")
        if not self.topic:
            raise RagIOError("topic must be non-empty")


@dataclass(frozen=True)
class RagResponse:
    run_id: str
    topic_id: str
    references: tuple[str, ...]
    answer: tuple[AnswerSentence, ...]
    response_length: int


def compute_response_length(answer: Sequence[AnswerSentence]) -> int:
    """Sum of Unicode scalar counts of the sentence texts; separators excluded."""
    return sum(len(s.text) for s in answer)


def validate(resp: RagResponse) -> list[str]:
    """Return every invariant violation; an empty list means the record is valid."""
    violations: list[str] = []
    if len(resp.references) > MAX_REFERENCES:
        violations.append(
            f"references has {len(resp.references)} entries (max {MAX_REFERENCES})"
        )
    if len(set(resp.references)) != len(resp.references):
        violations.append("references contains duplicates")
    n_refs = len(resp.references)
    for i, sentence in enumerate(resp.answer):
        if not sentence.text:
            violations.append(f"answer[{i}] has empty text")
        cits = list(sentence.citations)
        if cits != sorted(set(cits)):
            violations.append(f"answer[{i}] citations not sorted/deduplicated: {cits}")
        for c in cits:
            if not 0 <= c < n_refs:
                violations.append(
                    f"answer[{i}] citation out of range: {c} (references has {n_refs})"
                )
    expected = compute_response_length(resp.answer)
    if resp.response_length != expected:
        violations.append(
            f"response_length mismatch: expected {expected}, got {resp.response_length}"
        )
    return violations


def to_dict(resp: RagResponse) -> dict:
    return {
        "run_id": resp.run_id,
        "topic_id": resp.topic_id,
        "references": list(resp.references),
        "answer": [
            {"text": s.text, "citations": list(s.citations)} for s in resp.answer
        ],
        "response_length": resp.response_length,
    }


def serialize(resp: RagResponse) -> str:
    return json.dumps(to_dict(resp), ensure_ascii=False)


def _from_dict(record: dict) -> RagResponse:
    keys = set(record)
    missing = _ENVELOPE_KEYS - keys
    unknown = keys - _ENVELOPE_KEYS
    if missing or unknown:
        parts = []
        if missing:
            parts.append(f"missing keys: {sorted(missing)}")
        if unknown:
            parts.append(f"unknown keys: {sorted(unknown)}")
        raise RagIOError("; ".join(parts))
    answer = []
    for i, s in enumerate(record["answer"]):
        skeys = set(s)
        if skeys != _SENTENCE_KEYS:
            raise RagIOError(
                f"answer[{i}]: missing keys: {sorted(_SENTENCE_KEYS - skeys)}; "
                f"unknown keys: {sorted(skeys - _SENTENCE_KEYS)}"
            )
        answer.append(
            AnswerSentence(text=str(s["text"]), citations=tuple(int(c) for c in s["citations"]))
        )
    return RagResponse(
        run_id=str(record["run_id"]),
        topic_id=str(record["topic_id"]),
        references=tuple(str(r) for r in record["references"]),
        answer=tuple(answer),
        response_length=int(record["response_length"]),
    )


def deserialize(text: str) -> RagResponse:
    try:
        record = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RagIOError(f"not valid JSON: {exc.msg}") from exc
    if not isinstance(record, dict):
        raise RagIOError("expected a JSON object")
    return _from_dict(record)


def write_batch(dest: Union[str, Path, IO[str]], responses: Iterable[RagResponse]) -> int:
    """Write the batch run file: one serialized response per line."""
    def _write(out: IO[str]) -> int:
        n = 0
        for resp in responses:
            out.write(serialize(resp) + "\n")
            n += 1
        return n

    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8") as out:
            return _write(out)
    return _write(dest)


def read_batch(source: Union[str, Path, IO[str]]) -> Iterator[RagResponse]:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as f:
            yield from [deserialize(line) for line in f if line.strip()]
        return
    for line in source:
        if line.strip():
            yield deserialize(line)
