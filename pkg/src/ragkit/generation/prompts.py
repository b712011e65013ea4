"""Prompt rendering for the augmented-generation stage.

Templates live as versioned text assets under ``templates/``; the user
prompt numbers each context ``[i] {title}: {text}`` in reranked order and
repeats the instruction line after the contexts.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib.resources import files


class PromptError(ValueError):
    pass


@dataclass(frozen=True)
class PromptBundle:
    system: str
    user: str
    context_count: int
    mapping: dict[int, str]  # 1-based context number -> segment_id


@lru_cache(maxsize=None)
def _template(name: str) -> str:
    text = files("ragkit.generation").joinpath(f"templates/{name}").read_text("utf-8")
    return text.rstrip("\n")


def render_chatqa_prompt(topic: str, segments) -> PromptBundle:
    """Fill the ChatQA-style template with the topic and numbered contexts."""
    segments = list(segments)
    if not segments:
        raise PromptError("cannot render a prompt with no context segments")
    if len(segments) > 20:
        raise PromptError(f"at most 20 context segments supported, got {len(segments)}")
    contexts = "\n".join(
        f"[{i}] {seg.title}: {seg.text}" for i, seg in enumerate(segments, start=1)
    )
    user = (
        _template("chatqa.user.txt")
        .replace("{question}", topic)
        .replace("{contexts}", contexts)
    )
    return PromptBundle(
        system=_template("chatqa.system.txt"),
        user=user,
        context_count=len(segments),
        mapping={i: seg.segment_id for i, seg in enumerate(segments, start=1)},
    )
