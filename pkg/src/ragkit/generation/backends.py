"""Generation backends: an offline extractive mock and chat-API adapters.

A backend declares ``citation_mode`` ("inline" or "span") so that span-level
citers and bracket-marker citers share one downstream pipeline.
"""

from __future__ import annotations

import os
import time
from typing import Callable, Protocol, Sequence

import httpx

from ragkit.corpus.documents import Segment
from ragkit.corpus.sentences import split_sentences
from ragkit.generation.citations import RawGeneration, insert_markers
from ragkit.generation.prompts import PromptBundle


class GenerationBackendError(RuntimeError):
    pass


class GenerationBackend(Protocol):
    name: str
    citation_mode: str  # "inline" | "span"

    def generate(
        self, topic: str, segments: Sequence[Segment], bundle: PromptBundle
    ) -> RawGeneration:
        ...


class MockExtractiveBackend:
    """Deterministic offline generator: copies sentence i of context i, citing [i].

    Copied sentences are normalized so the inline parser sees the same
    boundaries: the first letter is uppercased and a period is appended
    when the source sentence lacks terminal punctuation. Contexts whose
    text has no sentences are skipped.
    """

    name = "mock-extractive"
    citation_mode = "inline"

    def generate(
        self, topic: str, segments: Sequence[Segment], bundle: PromptBundle
    ) -> RawGeneration:
        parts: list[str] = []
        for i, seg in enumerate(segments, start=1):
            spans = split_sentences(seg.text)
            if not spans:
                continue
            start, end = spans[min(i, len(spans)) - 1]
            sentence = " ".join(seg.text[start:end].split())
            if sentence and sentence[0].isalpha():
                sentence = sentence[0].upper() + sentence[1:]
            had_terminal = sentence.endswith((".", "?", "!"))
            sentence = insert_markers(sentence, [i])
            if not had_terminal:
                sentence += "."
            parts.append(sentence)
        return RawGeneration(text=" ".join(parts))


def _with_retries(
    request: Callable[[], httpx.Response], attempts: int, backoff: float
) -> httpx.Response:
    last_error: Exception | None = None
    for attempt in range(attempts):
        try:
            response = request()
            if response.status_code >= 500:
                raise GenerationBackendError(f"server error {response.status_code}")
            return response
        except (httpx.TransportError, GenerationBackendError) as exc:
            last_error = exc
            if attempt < attempts - 1:
                time.sleep(backoff * 2**attempt)
    raise GenerationBackendError(f"request failed after {attempts} attempts: {last_error}")


class ChatGenerationBackend:
    """Chat-completions adapter; the model cites inline with bracket markers."""

    citation_mode = "inline"

    def __init__(
        self,
        model: str,
        api_base: str,
        *,
        name: str | None = None,
        api_key_env: str = "RAGKIT_API_KEY",
        temperature: float = 0.0,
        timeout: float = 120.0,
        attempts: int = 3,
        backoff: float = 0.25,
        client: httpx.Client | None = None,
    ):
        self.name = name or f"chat:{model}"
        self.model = model
        self.url = api_base.rstrip("/") + "/chat/completions"
        self.api_key_env = api_key_env
        self.temperature = temperature
        self.attempts = attempts
        self.backoff = backoff
        self._client = client or httpx.Client(timeout=timeout)

    def generate(
        self, topic: str, segments: Sequence[Segment], bundle: PromptBundle
    ) -> RawGeneration:
        headers = {}
        key = os.environ.get(self.api_key_env, "")
        if key:
            headers["Authorization"] = f"Bearer {key}"
        payload = {
            "model": self.model,
            "temperature": self.temperature,
            "messages": [
                {"role": "system", "content": bundle.system},
                {"role": "user", "content": bundle.user},
            ],
        }
        response = _with_retries(
            lambda: self._client.post(self.url, json=payload, headers=headers),
            self.attempts,
            self.backoff,
        )
        content = response.json()["choices"][0]["message"]["content"]
        return RawGeneration(text=content)


def resolve_generation_backend(spec: str, api_key_env: str | None = None) -> GenerationBackend:
    """Map a CLI backend spec (mock | chat:<model>@<api_base>) to a backend."""
    if spec == "mock":
        return MockExtractiveBackend()
    if spec.startswith("chat:"):
        rest = spec.split(":", 1)[1]
        if "@" not in rest:
            raise ValueError("chat backend spec must look like chat:<model>@<api_base>")
        model, base = rest.split("@", 1)
        if api_key_env:
            return ChatGenerationBackend(model, base, api_key_env=api_key_env)
        return ChatGenerationBackend(model, base)
    raise ValueError(f"unknown generation backend {spec!r}")
