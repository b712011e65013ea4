"""REST service over the arena store, plus YAML config wiring.

Endpoints: POST /api/rag, GET /api/pipelines, POST /api/arena/battles
(creates and runs the battle), GET /api/arena/battles/{id},
POST /api/arena/battles/{id}/vote, GET /api/arena/leaderboard,
GET /api/segments/{id}.
"""

from __future__ import annotations

from pathlib import Path

import yaml
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from ragkit.arena.models import ArenaError, PipelineConfig
from ragkit.arena.store import ArenaStore
from ragkit.generation.backends import resolve_generation_backend
from ragkit.pipeline import Pipeline
from ragkit.ragio import to_dict as response_to_dict
from ragkit.rerank.backends import resolve_rerank_backend
from ragkit.rerank.core import WindowPlan
from ragkit.retrieval.bm25 import BM25Params
from ragkit.retrieval.index import load_index
from ragkit.retrieval.store import SegmentStore


class RagBody(BaseModel):
    topic: str
    topic_id: str = "adhoc"
    pipeline: str | None = None


class BattleBody(BaseModel):
    topic: str
    left: str
    right: str
    blinded: bool = True


class VoteBody(BaseModel):
    choice: str
    voter: str = "anonymous"


def create_app(store: ArenaStore) -> FastAPI:
    app = FastAPI(title="ragkit arena")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.post("/api/rag")
    def run_rag(body: RagBody):
        try:
            resp = store.run_single(body.topic, topic_id=body.topic_id, pipeline_id=body.pipeline)
        except ArenaError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return response_to_dict(resp)

    @app.get("/api/pipelines")
    def list_pipelines():
        return [store.configs[pid].to_dict() for pid in sorted(store.configs)]

    @app.post("/api/arena/battles")
    def create_battle(body: BattleBody):
        try:
            battle = store.create_battle(body.topic, body.left, body.right, body.blinded)
            store.run_battle(battle.battle_id)
        except ArenaError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return store.battle_payload(battle)

    @app.get("/api/arena/battles/{battle_id}")
    def get_battle(battle_id: str):
        try:
            battle, _ = store._get_battle(battle_id)
        except ArenaError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return store.battle_payload(battle)

    @app.post("/api/arena/battles/{battle_id}/vote")
    def vote(battle_id: str, body: VoteBody):
        try:
            return store.submit_vote(battle_id, body.choice, body.voter)
        except ArenaError as exc:
            status = 404 if "unknown battle" in str(exc) else 409
            raise HTTPException(status_code=status, detail=str(exc))

    @app.get("/api/arena/leaderboard")
    def leaderboard():
        return store.leaderboard_snapshot()

    @app.get("/api/segments/{segment_id:path}")
    def segment(segment_id: str):
        try:
            return store.segment_preview(segment_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown segment {segment_id!r}")

    return app


def _build_pipeline(entry: dict, index, segments: SegmentStore) -> tuple[Pipeline, PipelineConfig]:
    retr = entry.get("retriever", {})
    rr = entry.get("reranker", {})
    gen = entry.get("generator", {})
    config = PipelineConfig(
        pipeline_id=entry["id"],
        retriever={"k": retr.get("k", 100), "k1": retr.get("k1", 0.9), "b": retr.get("b", 0.4)},
        reranker={
            "backend": rr.get("backend", "identity"),
            "window": rr.get("window", 20),
            "stride": rr.get("stride", 10),
            "passes": rr.get("passes", 3),
            "top_k": rr.get("top_k", 20),
        },
        generator={"backend": gen.get("backend", "mock"), "template": gen.get("template", "chatqa")},
    )
    pipeline = Pipeline(
        pipeline_id=config.pipeline_id,
        index=index,
        store=segments,
        rerank_backend=resolve_rerank_backend(
            config.reranker["backend"], api_key_env=rr.get("api_key_env")
        ),
        gen_backend=resolve_generation_backend(
            config.generator["backend"], api_key_env=gen.get("api_key_env")
        ),
        retrieve_k=config.retriever["k"],
        bm25=BM25Params(k1=config.retriever["k1"], b=config.retriever["b"]),
        plan=WindowPlan(
            window=config.reranker["window"],
            stride=config.reranker["stride"],
            passes=config.reranker["passes"],
        ),
        rerank_top_k=config.reranker["top_k"],
    )
    return pipeline, config


def load_arena_config(path: str | Path) -> ArenaStore:
    """Build an ArenaStore from a YAML config declaring paths and pipelines."""
    path = Path(path)
    cfg = yaml.safe_load(path.read_text("utf-8"))
    base = path.parent

    def _resolve(p: str) -> Path:
        candidate = Path(p)
        return candidate if candidate.is_absolute() else base / candidate

    index = load_index(_resolve(cfg["index"]))
    segments = SegmentStore.from_jsonl(_resolve(cfg["segments"]))
    pipelines: dict[str, Pipeline] = {}
    configs: dict[str, PipelineConfig] = {}
    for entry in cfg.get("pipelines", []):
        pipeline, config = _build_pipeline(entry, index, segments)
        if config.pipeline_id in pipelines:
            raise ArenaError(f"duplicate pipeline id {config.pipeline_id!r}")
        pipelines[config.pipeline_id] = pipeline
        configs[config.pipeline_id] = config
    event_log = cfg.get("event_log")
    return ArenaStore(
        pipelines,
        configs,
        segments,
        event_log=_resolve(event_log) if event_log else None,
        rng_seed=cfg.get("blinding_seed"),
    )
