"""Turning raw model output into sentence-level citations.

Inline mode handles IEEE-style bracket markers: ``[3]``, ``[1, 4]``, and
``[2]-[5]`` ranges; marker groups are stripped from the sentence text and
anything unparseable stays literal. Span mode unions each span's cited
context numbers over every sentence the span overlaps. Both produce
1-based context numbers that ``to_zero_based`` maps onto the references
list, dropping (and counting) anything out of range.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from ragkit.corpus.sentences import split_sentences
from ragkit.ragio import AnswerSentence

_UNIT = r"\[\d+(?:\s*,\s*\d+)*\]"
_GROUP_RE = re.compile(rf"\s*{_UNIT}(?:\s*[,\-–]\s*{_UNIT})*")
_UNIT_RE = re.compile(r"\[([^\]]*)\]")
_WS_RUN_RE = re.compile(r"\s{2,}")


@dataclass(frozen=True)
class SpanCitation:
    start_char: int
    end_char: int
    context_numbers: tuple[int, ...]  # 1-based


@dataclass(frozen=True)
class RawGeneration:
    text: str
    span_citations: tuple[SpanCitation, ...] | None = None


class SpanError(ValueError):
    pass


def _parse_group(group: str) -> set[int]:
    numbers: set[int] = set()
    prev_last: int | None = None
    prev_end = 0
    for m in _UNIT_RE.finditer(group):
        unit_numbers = [int(x) for x in re.findall(r"\d+", m.group(1))]
        separator = group[prev_end : m.start()]
        if (
            prev_last is not None
            and ("-" in separator or "–" in separator)
            and len(unit_numbers) == 1
            and prev_last <= unit_numbers[0]
        ):
            numbers.update(range(prev_last, unit_numbers[0] + 1))
        else:
            numbers.update(unit_numbers)
        prev_last = unit_numbers[-1]
        prev_end = m.end()
    return numbers


def strip_citation_markers(sentence: str) -> tuple[str, set[int], list[tuple[int, str]]]:
    """Remove marker groups from one sentence.

    Returns (stripped text, cited 1-based numbers, removed groups as
    (offset-in-stripped-text, matched text) so the original can be
    reconstructed by re-insertion).
    """
    parts: list[str] = []
    numbers: set[int] = set()
    groups: list[tuple[int, str]] = []
    consumed = 0
    out_len = 0
    for m in _GROUP_RE.finditer(sentence):
        parts.append(sentence[consumed : m.start()])
        out_len += m.start() - consumed
        groups.append((out_len, m.group(0)))
        numbers |= _parse_group(m.group(0))
        consumed = m.end()
    parts.append(sentence[consumed:])
    return "".join(parts), numbers, groups


def reinsert_markers(stripped: str, groups: list[tuple[int, str]]) -> str:
    """Inverse of strip_citation_markers for the same sentence."""
    out = stripped
    for offset, group in reversed(groups):
        out = out[:offset] + group + out[offset:]
    return out


def parse_inline_citations(text: str) -> list[AnswerSentence]:
    """Sentence-split the text and attach each sentence's bracket citations.

    Returned citations are 1-based context numbers; sentences that are
    empty once markers are stripped are dropped.
    """
    out: list[AnswerSentence] = []
    for start, end in split_sentences(text):
        stripped, numbers, _ = strip_citation_markers(text[start:end])
        clean = _WS_RUN_RE.sub(" ", stripped).strip()
        if not clean:
            continue
        out.append(AnswerSentence(text=clean, citations=tuple(sorted(numbers))))
    return out


def map_span_citations(raw: RawGeneration) -> list[AnswerSentence]:
    """Attach span citations to every sentence whose character range they overlap."""
    spans = raw.span_citations or ()
    for span in spans:
        if not 0 <= span.start_char < span.end_char <= len(raw.text):
            raise SpanError(
                f"span [{span.start_char}, {span.end_char}) outside text of length {len(raw.text)}"
            )
    out: list[AnswerSentence] = []
    for start, end in split_sentences(raw.text):
        numbers: set[int] = set()
        for span in spans:
            if span.start_char < end and span.end_char > start:
                numbers.update(span.context_numbers)
        sentence = raw.text[start:end]
        clean = _WS_RUN_RE.sub(" ", sentence).strip()
        if clean:
            out.append(AnswerSentence(text=clean, citations=tuple(sorted(numbers))))
    return out


def to_zero_based(
    sentences: Sequence[AnswerSentence], references: Sequence[str]
) -> tuple[list[AnswerSentence], int]:
    """Map 1-based context numbers to 0-based reference indices.

    Out-of-range citations are dropped; the second element counts the drops.
    """
    n = len(references)
    dropped = 0
    mapped: list[AnswerSentence] = []
    for s in sentences:
        kept = []
        for c in s.citations:
            if 1 <= c <= n:
                kept.append(c - 1)
            else:
                dropped += 1
        mapped.append(AnswerSentence(text=s.text, citations=tuple(sorted(set(kept)))))
    return mapped, dropped


_TERMINAL_RE = re.compile(r"[.?!]+[\"'‘’“”)\]]*$")


def insert_markers(sentence: str, numbers: Sequence[int], style: str = "units") -> str:
    """Append bracket markers (1-based numbers) before the final punctuation.

    Styles: ``units`` -> " [1], [3]", ``compact`` -> " [1, 3]",
    ``ranges`` -> contiguous runs as " [1]-[3]". Test/mocking helper: the
    inverse of the inline parser's stripping.
    """
    numbers = sorted(numbers)
    if not numbers:
        return sentence
    if style == "compact":
        marker = " [" + ", ".join(str(n) for n in numbers) + "]"
    elif style == "ranges":
        runs: list[list[int]] = [[numbers[0]]]
        for n in numbers[1:]:
            if n == runs[-1][-1] + 1:
                runs[-1].append(n)
            else:
                runs.append([n])
        marker = " " + ", ".join(
            f"[{r[0]}]-[{r[-1]}]" if len(r) > 1 else f"[{r[0]}]" for r in runs
        )
    elif style == "units":
        marker = " " + ", ".join(f"[{n}]" for n in numbers)
    else:
        raise ValueError(f"unknown marker style {style!r}")
    m = _TERMINAL_RE.search(sentence)
    if m:
        return sentence[: m.start()] + marker + sentence[m.start() :]
    return sentence + marker
