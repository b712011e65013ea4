"""Prompt -> backend -> parsed, zero-based cited answer."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from ragkit.corpus.documents import Segment
from ragkit.generation.citations import (
    map_span_citations,
    parse_inline_citations,
    to_zero_based,
)
from ragkit.generation.prompts import render_chatqa_prompt
from ragkit.ragio import AnswerSentence

logger = logging.getLogger(__name__)


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class GenerationOutput:
    references: tuple[str, ...]
    sentences: tuple[AnswerSentence, ...]
    dropped_citations: int


def generate(topic: str, segments: Sequence[Segment], backend) -> GenerationOutput:
    """Run one topic through the augmented-generation stage.

    References are the segment ids in rank order; citation handling is
    dispatched on the backend's ``citation_mode`` capability flag.
    """
    segments = list(segments)
    bundle = render_chatqa_prompt(topic, segments)
    raw = backend.generate(topic, segments, bundle)
    if not raw.text.strip():
        raise GenerationError("empty answer")
    if backend.citation_mode == "span":
        pre = map_span_citations(raw)
    elif backend.citation_mode == "inline":
        pre = parse_inline_citations(raw.text)
    else:
        raise GenerationError(f"unknown citation mode {backend.citation_mode!r}")
    references = tuple(seg.segment_id for seg in segments)
    sentences, dropped = to_zero_based(pre, references)
    if dropped:
        logger.warning(
            "dropped %d out-of-range citations from backend %s", dropped, backend.name
        )
    return GenerationOutput(
        references=references, sentences=tuple(sentences), dropped_citations=dropped
    )
