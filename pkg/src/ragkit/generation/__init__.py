"""Citation-grounded answer generation over reranked segments."""

from ragkit.generation.prompts import PromptBundle, PromptError, render_chatqa_prompt
from ragkit.generation.citations import (
    RawGeneration,
    SpanCitation,
    SpanError,
    insert_markers,
    map_span_citations,
    parse_inline_citations,
    reinsert_markers,
    strip_citation_markers,
    to_zero_based,
)
from ragkit.generation.backends import (
    ChatGenerationBackend,
    GenerationBackend,
    GenerationBackendError,
    MockExtractiveBackend,
    resolve_generation_backend,
)
from ragkit.generation.generate import GenerationError, GenerationOutput, generate
from ragkit.ragio import AnswerSentence

__all__ = [
    "PromptBundle",
    "PromptError",
    "render_chatqa_prompt",
    "RawGeneration",
    "SpanCitation",
    "SpanError",
    "AnswerSentence",
    "parse_inline_citations",
    "map_span_citations",
    "to_zero_based",
    "strip_citation_markers",
    "reinsert_markers",
    "insert_markers",
    "GenerationBackend",
    "GenerationBackendError",
    "MockExtractiveBackend",
    "ChatGenerationBackend",
    "resolve_generation_backend",
    "GenerationError",
    "GenerationOutput",
    "generate",
]
