"""Word-shingle fingerprints, MinHash signatures, and LSH candidate pairing.

Shingles are 64-bit blake2b fingerprints of lowercased word n-grams.
Signatures use multiply-add universal hashing over 2**64 (one seeded
(a, b) pair per permutation, a odd); the per-slot collision probability
approximates the Jaccard similarity of the shingle sets.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from typing import Iterable

import numpy as np

MAX_U64 = 0xFFFFFFFFFFFFFFFF


@dataclass(frozen=True)
class ShingleSet:
    doc_id: str
    shingles: frozenset[int]


@dataclass(frozen=True)
class MinHashSignature:
    doc_id: str
    sig: tuple[int, ...]


def _fingerprint(gram: str) -> int:
    return int.from_bytes(hashlib.blake2b(gram.encode("utf-8"), digest_size=8).digest(), "little")


def shingle(text: str, n: int = 9, *, doc_id: str = "") -> ShingleSet:
    """Fingerprint every contiguous n-token window of the lowercased text.

    Texts with fewer than ``n`` whitespace tokens yield the empty set.
    """
    if n < 1:
        raise ValueError("shingle size must be >= 1")
    tokens = text.lower().split()
    grams = {
        _fingerprint(" ".join(tokens[i : i + n])) for i in range(len(tokens) - n + 1)
    }
    return ShingleSet(doc_id=doc_id, shingles=frozenset(grams))


class HashFamily:
    """Seeded family of 64-bit multiply-add hash functions, one per permutation."""

    def __init__(self, num_perms: int, seed: int):
        if num_perms < 1:
            raise ValueError("num_perms must be >= 1")
        rng = random.Random(seed)
        self.num_perms = num_perms
        self.a = np.array([rng.getrandbits(64) | 1 for _ in range(num_perms)], dtype=np.uint64)
        self.b = np.array([rng.getrandbits(64) for _ in range(num_perms)], dtype=np.uint64)

    def signature(self, shingles: Iterable[int]) -> tuple[int, ...]:
        xs = np.fromiter(shingles, dtype=np.uint64)
        if xs.size == 0:
            return (MAX_U64,) * self.num_perms
        with np.errstate(over="ignore"):
            hashed = self.a[:, None] * xs[None, :] + self.b[:, None]
        return tuple(int(v) for v in hashed.min(axis=1))


def minhash_signature(s: ShingleSet, num_perms: int, seed: int) -> MinHashSignature:
    """Per-slot minima of the seeded hash family over the shingle set.

    Empty sets map to the all-sentinel (max uint64) signature so that two
    empty documents compare as identical.
    """
    family = HashFamily(num_perms, seed)
    return MinHashSignature(doc_id=s.doc_id, sig=family.signature(s.shingles))


def estimate_jaccard(a: MinHashSignature, b: MinHashSignature) -> float:
    """Fraction of equal signature slots."""
    if len(a.sig) != len(b.sig):
        raise ValueError("signature lengths differ")
    equal = sum(1 for x, y in zip(a.sig, b.sig) if x == y)
    return equal / len(a.sig)


def exact_jaccard(a: ShingleSet, b: ShingleSet) -> float:
    """|a n b| / |a u b|; two empty sets count as identical (1.0)."""
    if not a.shingles and not b.shingles:
        return 1.0
    union = len(a.shingles | b.shingles)
    return len(a.shingles & b.shingles) / union


def lsh_candidate_pairs(
    signatures: Iterable[MinHashSignature], bands: int, rows: int
) -> set[tuple[str, str]]:
    """Unordered doc-id pairs whose signatures agree on every row of >= 1 band."""
    sigs = list(signatures)
    buckets: dict[tuple[int, tuple[int, ...]], list[str]] = {}
    for s in sigs:
        if bands * rows != len(s.sig):
            raise ValueError(
                f"bands*rows ({bands}*{rows}) must equal signature length {len(s.sig)}"
            )
        for band in range(bands):
            key = (band, s.sig[band * rows : (band + 1) * rows])
            buckets.setdefault(key, []).append(s.doc_id)
    pairs: set[tuple[str, str]] = set()
    for members in buckets.values():
        if len(members) < 2:
            continue
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                x, y = members[i], members[j]
                if x != y:
                    pairs.add((x, y) if x < y else (y, x))
    return pairs
