"""Rerank backends: deterministic test oracles plus HTTP adapters.

Backends receive (topic, ordered window of candidates) and return raw
0-based positions; the caller repairs them into a bijection. HTTP
backends retry transient failures with exponential backoff (3 attempts)
before giving up.
"""

from __future__ import annotations

import os
import threading
import time
from importlib.resources import files
from typing import Callable, Mapping, Protocol, Sequence

import httpx

from ragkit.rerank.core import Candidate, parse_permutation

_MAX_WINDOW = 100


class RerankBackendError(RuntimeError):
    pass


class RerankBackend(Protocol):
    name: str
    max_window: int

    def rank_window(self, topic: str, candidates: Sequence[Candidate]) -> list[int]:
        ...


class IdentityBackend:
    name = "identity"
    max_window = _MAX_WINDOW

    def rank_window(self, topic: str, candidates: Sequence[Candidate]) -> list[int]:
        return list(range(len(candidates)))


class MockOracleBackend:
    """Ranks by a hidden per-segment score; ships with the offline test rig.

    ``scores`` maps segment_id -> gold score (higher is better); a callable
    works too. Ties keep the incoming window order.
    """

    name = "mock"
    max_window = _MAX_WINDOW

    def __init__(self, scores: Mapping[str, float] | Callable[[str], float]):
        if callable(scores):
            self._score = scores
        else:
            self._score = lambda sid: scores[sid]

    def rank_window(self, topic: str, candidates: Sequence[Candidate]) -> list[int]:
        return sorted(
            range(len(candidates)),
            key=lambda i: (-self._score(candidates[i].segment_id), i),
        )


def _default_mock_scores(segment_id: str) -> float:
    # stable, key-free stand-in score so `--backend mock` works offline
    import hashlib

    digest = hashlib.blake2b(segment_id.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little") / 2**64


def _with_retries(request: Callable[[], httpx.Response], attempts: int, backoff: float) -> httpx.Response:
    last_error: Exception | None = None
    for attempt in range(attempts):
        try:
            response = request()
            if response.status_code >= 500:
                raise RerankBackendError(f"server error {response.status_code}")
            return response
        except (httpx.TransportError, RerankBackendError) as exc:
            last_error = exc
            if attempt < attempts - 1:
                time.sleep(backoff * 2**attempt)
    raise RerankBackendError(f"request failed after {attempts} attempts: {last_error}")


class HttpRerankBackend:
    """POST {topic, candidates:[{id,title,text}]} -> {"permutation": [ints]}."""

    max_window = _MAX_WINDOW

    def __init__(
        self,
        url: str,
        *,
        name: str = "http",
        timeout: float = 30.0,
        attempts: int = 3,
        backoff: float = 0.25,
        max_concurrency: int = 4,
        client: httpx.Client | None = None,
    ):
        self.name = name
        self.url = url
        self.attempts = attempts
        self.backoff = backoff
        self._limit = threading.Semaphore(max_concurrency)
        self._client = client or httpx.Client(timeout=timeout)

    def rank_window(self, topic: str, candidates: Sequence[Candidate]) -> list[int]:
        payload = {
            "topic": topic,
            "candidates": [
                {"id": c.segment_id, "title": c.title, "text": c.text}
                for c in candidates
            ],
        }
        with self._limit:
            response = _with_retries(
                lambda: self._client.post(self.url, json=payload), self.attempts, self.backoff
            )
        body = response.json()
        perm = body.get("permutation")
        if not isinstance(perm, list):
            raise RerankBackendError(f"malformed backend response: {body!r}")
        return [int(p) for p in perm]


def _listwise_prompt(topic: str, candidates: Sequence[Candidate]) -> str:
    template = files("ragkit.rerank").joinpath("templates/listwise.txt").read_text("utf-8")
    passages = "\n".join(
        f"[{i + 1}] {c.title}: {c.text}" for i, c in enumerate(candidates)
    )
    return (
        template.replace("{query}", topic)
        .replace("{passages}", passages)
        .replace("{num}", str(len(candidates)))
    )


class ChatRerankBackend:
    """Adapter for chat-completion APIs producing "[2] > [1]" style rankings."""

    max_window = 20

    def __init__(
        self,
        model: str,
        api_base: str,
        *,
        name: str | None = None,
        api_key_env: str = "RAGKIT_API_KEY",
        timeout: float = 60.0,
        attempts: int = 3,
        backoff: float = 0.25,
        max_concurrency: int = 4,
        client: httpx.Client | None = None,
    ):
        self.name = name or f"chat:{model}"
        self.model = model
        self.url = api_base.rstrip("/") + "/chat/completions"
        self.api_key_env = api_key_env
        self.attempts = attempts
        self.backoff = backoff
        self._limit = threading.Semaphore(max_concurrency)
        self._client = client or httpx.Client(timeout=timeout)

    def rank_window(self, topic: str, candidates: Sequence[Candidate]) -> list[int]:
        headers = {}
        key = os.environ.get(self.api_key_env, "")
        if key:
            headers["Authorization"] = f"Bearer {key}"
        payload = {
            "model": self.model,
            "temperature": 0,
            "messages": [{"role": "user", "content": _listwise_prompt(topic, candidates)}],
        }
        with self._limit:
            response = _with_retries(
                lambda: self._client.post(self.url, json=payload, headers=headers),
                self.attempts,
                self.backoff,
            )
        content = response.json()["choices"][0]["message"]["content"]
        return parse_permutation(content, len(candidates))


def resolve_rerank_backend(spec: str, api_key_env: str | None = None) -> RerankBackend:
    """Map a CLI backend spec (identity | mock | http:<url> | chat:<model>@<base>) to a backend."""
    if spec == "identity":
        return IdentityBackend()
    if spec == "mock":
        return MockOracleBackend(_default_mock_scores)
    if spec.startswith(("http://", "https://")):
        return HttpRerankBackend(spec)
    if spec.startswith("http:"):
        return HttpRerankBackend(spec.split(":", 1)[1])
    if spec.startswith("chat:"):
        rest = spec.split(":", 1)[1]
        if "@" not in rest:
            raise ValueError("chat backend spec must look like chat:<model>@<api_base>")
        model, base = rest.split("@", 1)
        if api_key_env:
            return ChatRerankBackend(model, base, api_key_env=api_key_env)
        return ChatRerankBackend(model, base)
    raise ValueError(f"unknown rerank backend {spec!r}")
