"""Corpus ingest, near-duplicate removal, and sliding-window segmentation."""

from ragkit.corpus.documents import (
    CorpusError,
    Document,
    Segment,
    make_segment_id,
    parse_document_stream,
    parse_segment_id,
    read_segments_jsonl,
    write_segments_jsonl,
)
from ragkit.corpus.shingling import (
    MinHashSignature,
    ShingleSet,
    estimate_jaccard,
    exact_jaccard,
    lsh_candidate_pairs,
    minhash_signature,
    shingle,
)
from ragkit.corpus.dedup import DedupConfig, DedupReport, EquivalenceClass, deduplicate
from ragkit.corpus.sentences import split_sentences
from ragkit.corpus.segmenter import segment_document

__all__ = [
    "CorpusError",
    "Document",
    "Segment",
    "make_segment_id",
    "parse_document_stream",
    "parse_segment_id",
    "read_segments_jsonl",
    "write_segments_jsonl",
    "ShingleSet",
    "MinHashSignature",
    "shingle",
    "minhash_signature",
    "estimate_jaccard",
    "exact_jaccard",
    "lsh_candidate_pairs",
    "DedupConfig",
    "DedupReport",
    "EquivalenceClass",
    "deduplicate",
    "split_sentences",
    "segment_document",
]
