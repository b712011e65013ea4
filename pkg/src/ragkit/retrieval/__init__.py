"""BM25 retrieval over an inverted segment index, plus TREC run file I/O."""

from ragkit.retrieval.analysis import analyze, porter_stem, STOPWORDS
from ragkit.retrieval.index import InvertedIndex, build_index, load_index, save_index
from ragkit.retrieval.bm25 import BM25Params, bm25_score, idf, search
from ragkit.retrieval.trec import ScoredSegment, TrecRun, TrecRunError, read_trec_run, write_trec_run
from ragkit.retrieval.store import SegmentStore

__all__ = [
    "analyze",
    "porter_stem",
    "STOPWORDS",
    "InvertedIndex",
    "build_index",
    "save_index",
    "load_index",
    "BM25Params",
    "bm25_score",
    "idf",
    "search",
    "ScoredSegment",
    "TrecRun",
    "TrecRunError",
    "read_trec_run",
    "write_trec_run",
    "SegmentStore",
]
