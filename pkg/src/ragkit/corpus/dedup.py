"""Near-duplicate removal: LSH candidates, exact verification, union-find classes.

Candidate pairs from banded MinHash signatures are verified against the
exact shingle Jaccard before any merge, so LSH false positives never link
documents. Verified pairs are closed into equivalence classes and the
lexicographically smallest doc id survives as each class representative.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ragkit.corpus.documents import Document
from ragkit.corpus.shingling import (
    HashFamily,
    MinHashSignature,
    ShingleSet,
    exact_jaccard,
    lsh_candidate_pairs,
    shingle,
)


@dataclass(frozen=True)
class EquivalenceClass:
    members: frozenset[str]
    representative: str


@dataclass(frozen=True)
class DedupReport:
    docs_in: int
    docs_kept: int
    classes: int
    reduction_pct: float

    def to_dict(self) -> dict:
        return {
            "docs_in": self.docs_in,
            "docs_kept": self.docs_kept,
            "classes": self.classes,
            "reduction_pct": self.reduction_pct,
        }


@dataclass(frozen=True)
class DedupConfig:
    shingle_n: int = 9
    num_perms: int = 128
    bands: int = 32
    rows: int = 4
    jaccard_threshold: float = 0.9
    seed: int = 0

    def __post_init__(self):
        if self.shingle_n < 1:
            raise ValueError("shingle_n must be >= 1")
        if self.bands * self.rows != self.num_perms:
            raise ValueError("bands*rows must equal num_perms")
        if not 0.0 < self.jaccard_threshold <= 1.0:
            raise ValueError("jaccard_threshold must be in (0, 1]")


class _UnionFind:
    def __init__(self):
        self.parent: dict[str, str] = {}

    def find(self, x: str) -> str:
        root = x
        while self.parent.setdefault(root, root) != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: str, y: str) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            # smaller id wins so roots double as representatives
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx


def deduplicate(
    docs: Iterable[Document], cfg: DedupConfig = DedupConfig()
) -> tuple[list[str], list[EquivalenceClass], DedupReport]:
    """Remove near-duplicates; returns (kept ids in input order, classes, report).

    A document is dropped only when it verified (exact shingle Jaccard >=
    threshold) against some member of its class along the union-find merge
    chain, and its class representative is kept instead.
    """
    family = HashFamily(cfg.num_perms, cfg.seed)
    order: list[str] = []
    shingle_sets: dict[str, ShingleSet] = {}
    signatures: list[MinHashSignature] = []
    for doc in docs:
        order.append(doc.doc_id)
        ss = shingle(doc.body, cfg.shingle_n, doc_id=doc.doc_id)
        shingle_sets[doc.doc_id] = ss
        signatures.append(MinHashSignature(doc.doc_id, family.signature(ss.shingles)))

    candidates = lsh_candidate_pairs(signatures, cfg.bands, cfg.rows)
    uf = _UnionFind()
    for a, b in candidates:
        if exact_jaccard(shingle_sets[a], shingle_sets[b]) >= cfg.jaccard_threshold:
            uf.union(a, b)

    members_by_root: dict[str, set[str]] = {}
    for doc_id in uf.parent:
        members_by_root.setdefault(uf.find(doc_id), set()).add(doc_id)

    classes = [
        EquivalenceClass(members=frozenset(members), representative=min(members))
        for members in members_by_root.values()
        if len(members) > 1
    ]
    classes.sort(key=lambda c: c.representative)

    dropped = {m for c in classes for m in c.members if m != c.representative}
    kept = [doc_id for doc_id in order if doc_id not in dropped]

    docs_in = len(order)
    reduction = 100.0 * (docs_in - len(kept)) / docs_in if docs_in else 0.0
    report = DedupReport(
        docs_in=docs_in,
        docs_kept=len(kept),
        classes=len(classes),
        reduction_pct=reduction,
    )
    return kept, classes, report
