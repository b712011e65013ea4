"""End-to-end retrieval-augmented generation toolkit.

Pipeline stages: corpus dedup + segmentation, BM25 retrieval, listwise
reranking, citation-grounded answer generation, plus a topic-curation
toolkit and a pairwise battle arena with a REST API.
"""

__version__ = "0.1.0"
