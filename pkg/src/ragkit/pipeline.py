"""End-to-end pipeline: retrieve -> progressively rerank -> generate.

One Pipeline instance wires an index, a segment store, and the two
backends; ``answer`` yields a validated RagResponse per topic. Topics
with zero retrieval hits produce an empty-but-valid record so batch runs
always cover every topic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ragkit.generation.backends import GenerationBackend
from ragkit.generation.generate import generate
from ragkit.ragio import RagResponse, compute_response_length, validate
from ragkit.rerank.backends import RerankBackend
from ragkit.rerank.core import Candidate, RankedList, WindowPlan, progressive_rerank, truncate_top_k
from ragkit.retrieval.bm25 import BM25Params, search
from ragkit.retrieval.index import InvertedIndex
from ragkit.retrieval.store import SegmentStore


class PipelineError(RuntimeError):
    pass


@dataclass
class Pipeline:
    pipeline_id: str
    index: InvertedIndex
    store: SegmentStore
    rerank_backend: RerankBackend
    gen_backend: GenerationBackend
    retrieve_k: int = 100
    bm25: BM25Params = field(default_factory=BM25Params)
    plan: WindowPlan = field(default_factory=WindowPlan)
    rerank_top_k: int = 20

    def answer(self, topic_id: str, topic: str, run_id: str | None = None) -> RagResponse:
        run_id = run_id if run_id is not None else self.pipeline_id
        hits = search(self.index, topic, k=self.retrieve_k, params=self.bm25)
        if not hits:
            empty = RagResponse(
                run_id=run_id, topic_id=topic_id, references=(), answer=(), response_length=0
            )
            return empty
        ranked = RankedList(topic_id=topic_id, items=[h.segment_id for h in hits])
        reranked = progressive_rerank(
            ranked,
            self.rerank_backend,
            self.plan,
            topic=topic,
            resolver=self._candidate,
        )
        top = truncate_top_k(reranked, self.rerank_top_k)
        segments = [self.store[sid] for sid in top.items]
        output = generate(topic, segments, self.gen_backend)
        resp = RagResponse(
            run_id=run_id,
            topic_id=topic_id,
            references=output.references,
            answer=output.sentences,
            response_length=compute_response_length(output.sentences),
        )
        violations = validate(resp)
        if violations:
            raise PipelineError(
                f"pipeline produced an invalid record for topic {topic_id!r}: {violations}"
            )
        return resp

    def _candidate(self, segment_id: str) -> Candidate:
        seg = self.store[segment_id]
        return Candidate(segment_id=segment_id, title=seg.title, text=seg.text)
