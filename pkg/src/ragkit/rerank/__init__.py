"""Listwise reranking over sliding windows with pluggable backends."""

from ragkit.rerank.core import (
    Candidate,
    RankedList,
    RerankError,
    WindowPlan,
    parse_permutation,
    progressive_rerank,
    repair_permutation,
    sliding_window_pass,
    truncate_top_k,
)
from ragkit.rerank.backends import (
    ChatRerankBackend,
    HttpRerankBackend,
    IdentityBackend,
    MockOracleBackend,
    RerankBackend,
    RerankBackendError,
    resolve_rerank_backend,
)

__all__ = [
    "Candidate",
    "RankedList",
    "RerankError",
    "WindowPlan",
    "parse_permutation",
    "repair_permutation",
    "sliding_window_pass",
    "progressive_rerank",
    "truncate_top_k",
    "RerankBackend",
    "RerankBackendError",
    "IdentityBackend",
    "MockOracleBackend",
    "HttpRerankBackend",
    "ChatRerankBackend",
    "resolve_rerank_backend",
]
