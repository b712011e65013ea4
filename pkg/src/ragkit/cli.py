"""``ragkit`` command line: every pipeline stage plus an end-to-end runner.

Every command that writes an artifact drops a ``<output>.manifest.json``
beside it recording the run id, full parameter snapshot (seeds and backend
names included), and sha256 digests of the inputs, so a rerun with the
same manifest and mock backends reproduces the output byte for byte.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from ragkit import __version__
from ragkit.arena.service import create_app, load_arena_config
from ragkit.corpus.dedup import DedupConfig, deduplicate
from ragkit.corpus.documents import (
    parse_document_stream,
    read_segments_jsonl,
    write_segments_jsonl,
)
from ragkit.corpus.segmenter import segment_document
from ragkit.generation.backends import resolve_generation_backend
from ragkit.generation.generate import generate
from ragkit.pipeline import Pipeline
from ragkit.ragio import RagResponse, compute_response_length, serialize, validate
from ragkit.rerank.backends import resolve_rerank_backend
from ragkit.rerank.core import Candidate, RankedList, WindowPlan, progressive_rerank, truncate_top_k
from ragkit.retrieval.bm25 import BM25Params, search
from ragkit.retrieval.index import build_index, load_index, save_index
from ragkit.retrieval.store import SegmentStore
from ragkit.retrieval.trec import TrecRun, read_trec_run, write_trec_run
from ragkit.topics import (
    DEFAULT_RAGGY_KEEP,
    diversity_sample,
    load_topics,
    parse_category,
    raggy_filter,
    report_stats,
)


def _sha256(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(output: str | Path, run_id: str, config: dict, inputs: list[str | Path]) -> None:
    manifest = {
        "run_id": run_id,
        "tool": "ragkit",
        "version": __version__,
        "created_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "config": config,
        "input_digests": {str(p): _sha256(p) for p in inputs},
        "output": str(output),
        "output_digest": _sha256(output),
    }
    Path(f"{output}.manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def _cmd_corpus_dedup(args) -> int:
    cfg = DedupConfig(
        shingle_n=args.shingle,
        num_perms=args.perms,
        bands=args.bands,
        rows=args.rows,
        jaccard_threshold=args.threshold,
        seed=args.seed,
    )
    with open(args.input, "rb") as f:
        kept, classes, report = deduplicate(parse_document_stream(f), cfg)
    kept_set = set(kept)
    with open(args.input, "rb") as fin, open(args.output, "w", encoding="utf-8") as fout:
        for line_no, line in enumerate(fin, start=1):
            if not line.strip():
                continue
            doc_id = str(json.loads(line)["docid"])
            if doc_id in kept_set:
                fout.write(line.decode("utf-8").rstrip("\n") + "\n")
    if args.classes:
        with open(args.classes, "w", encoding="utf-8") as f:
            for c in classes:
                f.write(
                    json.dumps(
                        {"representative": c.representative, "members": sorted(c.members)}
                    )
                    + "\n"
                )
    if args.report:
        Path(args.report).write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    _write_manifest(
        args.output,
        run_id="dedup",
        config={
            "shingle": args.shingle,
            "perms": args.perms,
            "bands": args.bands,
            "rows": args.rows,
            "threshold": args.threshold,
            "seed": args.seed,
        },
        inputs=[args.input],
    )
    print(
        f"dedup: {report.docs_in} docs in, {report.docs_kept} kept, "
        f"{report.classes} classes, {report.reduction_pct:.2f}% reduction"
    )
    return 0


def _cmd_corpus_segment(args) -> int:
    n_docs = n_segs = 0
    with open(args.input, "rb") as fin, open(args.output, "w", encoding="utf-8") as fout:
        for doc in parse_document_stream(fin):
            segs = segment_document(doc, window=args.window, stride=args.stride)
            n_docs += 1
            n_segs += write_segments_jsonl(fout, segs)
    _write_manifest(
        args.output,
        run_id="segment",
        config={"window": args.window, "stride": args.stride},
        inputs=[args.input],
    )
    print(f"segment: {n_docs} docs -> {n_segs} segments")
    return 0


def _cmd_index_build(args) -> int:
    with open(args.segments, "r", encoding="utf-8") as f:
        index = build_index(read_segments_jsonl(f))
    save_index(index, args.output)
    _write_manifest(
        Path(args.output) / "index.bin",
        run_id="index",
        config={},
        inputs=[args.segments],
    )
    print(f"index: {index.doc_count} segments, {len(index.postings)} terms")
    return 0


def _cmd_search(args) -> int:
    index = load_index(args.index)
    params = BM25Params(k1=args.k1, b=args.b)
    run = TrecRun(run_tag=args.run_tag)
    for topic in load_topics(args.topics):
        run.topics[topic.topic_id] = search(index, topic.text, k=args.k, params=params)
    write_trec_run(args.output, run)
    _write_manifest(
        args.output,
        run_id=args.run_tag,
        config={"k": args.k, "k1": args.k1, "b": args.b},
        inputs=[args.topics],
    )
    print(f"search: {len(run.topics)} topics -> {args.output}")
    return 0


def _cmd_rerank(args) -> int:
    run = read_trec_run(args.run)
    store = SegmentStore.from_jsonl(args.segments)
    backend = resolve_rerank_backend(args.backend)
    topics = {t.topic_id: t.text for t in load_topics(args.topics)}
    plan = WindowPlan(window=args.window, stride=args.stride, passes=args.passes)

    def resolver(sid: str) -> Candidate:
        seg = store[sid]
        return Candidate(segment_id=sid, title=seg.title, text=seg.text)

    out = TrecRun(run_tag=args.run_tag)
    for topic_id, hits in run.topics.items():
        ranked = RankedList(topic_id=topic_id, items=[h.segment_id for h in hits])
        reranked = progressive_rerank(
            ranked, backend, plan, topic=topics.get(topic_id, ""), resolver=resolver
        )
        out.topics[topic_id] = truncate_top_k(reranked, args.top_k).to_scored()
    write_trec_run(args.output, out)
    _write_manifest(
        args.output,
        run_id=args.run_tag,
        config={
            "backend": args.backend,
            "window": args.window,
            "stride": args.stride,
            "passes": args.passes,
            "top_k": args.top_k,
        },
        inputs=[args.run, args.topics],
    )
    print(f"rerank: {len(out.topics)} topics -> {args.output}")
    return 0


def _cmd_generate(args) -> int:
    run = read_trec_run(args.run)
    store = SegmentStore.from_jsonl(args.segments)
    backend = resolve_generation_backend(args.backend)
    topics = {t.topic_id: t.text for t in load_topics(args.topics)}
    n = 0
    with open(args.output, "w", encoding="utf-8") as out:
        for topic_id, hits in run.topics.items():
            segments = [store[h.segment_id] for h in hits]
            result = generate(topics.get(topic_id, ""), segments, backend)
            resp = RagResponse(
                run_id=args.run_id,
                topic_id=topic_id,
                references=result.references,
                answer=result.sentences,
                response_length=compute_response_length(result.sentences),
            )
            out.write(serialize(resp) + "\n")
            n += 1
    _write_manifest(
        args.output,
        run_id=args.run_id,
        config={"backend": args.backend},
        inputs=[args.run, args.topics],
    )
    print(f"generate: {n} topics -> {args.output}")
    return 0


def run_end_to_end(args) -> int:
    """Retrieve -> rerank -> generate for every topic; always writes a record per topic."""
    index = load_index(args.index)
    store = SegmentStore.from_jsonl(args.segments)
    pipeline = Pipeline(
        pipeline_id=args.run_id,
        index=index,
        store=store,
        rerank_backend=resolve_rerank_backend(args.rerank_backend),
        gen_backend=resolve_generation_backend(args.gen_backend),
        retrieve_k=args.retrieve_k,
        bm25=BM25Params(k1=args.k1, b=args.b),
        plan=WindowPlan(window=args.window, stride=args.stride, passes=args.passes),
        rerank_top_k=args.top_k,
    )
    topics = load_topics(args.topics)

    def one(topic) -> tuple[str, RagResponse | None, str | None]:
        try:
            resp = pipeline.answer(topic.topic_id, topic.text, run_id=args.run_id)
            return topic.topic_id, resp, None
        except Exception as exc:
            return topic.topic_id, None, str(exc)

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(one, topics))
    else:
        results = [one(t) for t in topics]

    failures: list[dict] = []
    zero_hits: list[str] = []
    n_written = 0
    with open(args.output, "w", encoding="utf-8") as out:
        for topic_id, resp, error in results:
            if resp is None:
                failures.append({"topic_id": topic_id, "error": error})
                continue
            violations = validate(resp)
            if violations:
                failures.append({"topic_id": topic_id, "error": f"invalid record: {violations}"})
                continue
            if not resp.references:
                zero_hits.append(topic_id)
            out.write(serialize(resp) + "\n")
            n_written += 1

    _write_manifest(
        args.output,
        run_id=args.run_id,
        config={
            "retrieve_k": args.retrieve_k,
            "k1": args.k1,
            "b": args.b,
            "rerank_backend": args.rerank_backend,
            "window": args.window,
            "stride": args.stride,
            "passes": args.passes,
            "top_k": args.top_k,
            "gen_backend": args.gen_backend,
            "jobs": args.jobs,
        },
        inputs=[args.topics, args.segments],
    )
    summary = {
        "run_id": args.run_id,
        "topics": len(topics),
        "written": n_written,
        "zero_hit_topics": zero_hits,
        "failures": failures,
    }
    print(json.dumps(summary), file=sys.stderr)
    if failures:
        return 2 if n_written else 1
    return 0


def _topics_with_sidecar(args):
    return load_topics(args.topics, sidecar=args.sidecar)


def _cmd_topics_sample(args) -> int:
    picked = diversity_sample(_topics_with_sidecar(args), args.k)
    out = sys.stdout if args.output is None else open(args.output, "w", encoding="utf-8")
    try:
        for t in picked:
            out.write(f"{t.topic_id}\t{t.text}\n")
    finally:
        if args.output is not None:
            out.close()
    return 0


def _cmd_topics_stats(args) -> int:
    stats = report_stats(_topics_with_sidecar(args))
    print(
        json.dumps(
            {
                "category_pct": stats.category_pct,
                "first_word_pct": stats.first_word_pct,
                "attribute_pct": stats.attribute_pct,
            },
            indent=2,
        )
    )
    return 0


def _cmd_topics_filter(args) -> int:
    keep = (
        frozenset(parse_category(c) for c in args.keep.split(","))
        if args.keep
        else DEFAULT_RAGGY_KEEP
    )
    kept = raggy_filter(_topics_with_sidecar(args), keep=keep)
    out = sys.stdout if args.output is None else open(args.output, "w", encoding="utf-8")
    try:
        for t in kept:
            out.write(f"{t.topic_id}\t{t.text}\n")
    finally:
        if args.output is not None:
            out.close()
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    store = load_arena_config(args.config)
    app = create_app(store)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ragkit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"ragkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    corpus = sub.add_parser("corpus", help="dedup and segment document collections")
    corpus_sub = corpus.add_subparsers(dest="subcommand", required=True)

    dd = corpus_sub.add_parser("dedup", help="remove near-duplicate documents")
    dd.add_argument("--input", required=True)
    dd.add_argument("--output", required=True)
    dd.add_argument("--classes", help="equivalence-class dump (JSONL)")
    dd.add_argument("--report", help="dedup report (JSON)")
    dd.add_argument("--shingle", type=int, default=9)
    dd.add_argument("--perms", type=int, default=128)
    dd.add_argument("--bands", type=int, default=32)
    dd.add_argument("--rows", type=int, default=4)
    dd.add_argument("--threshold", type=float, default=0.9)
    dd.add_argument("--seed", type=int, default=0)
    dd.set_defaults(func=_cmd_corpus_dedup)

    sg = corpus_sub.add_parser("segment", help="chunk documents into segments")
    sg.add_argument("--input", required=True)
    sg.add_argument("--output", required=True)
    sg.add_argument("--window", type=int, default=10)
    sg.add_argument("--stride", type=int, default=5)
    sg.set_defaults(func=_cmd_corpus_segment)

    idx = sub.add_parser("index", help="inverted index operations")
    idx_sub = idx.add_subparsers(dest="subcommand", required=True)
    ib = idx_sub.add_parser("build", help="build an index from segments JSONL")
    ib.add_argument("--segments", required=True)
    ib.add_argument("--output", required=True)
    ib.set_defaults(func=_cmd_index_build)

    se = sub.add_parser("search", help="BM25 top-k retrieval")
    se.add_argument("--index", required=True)
    se.add_argument("--topics", required=True)
    se.add_argument("--k", type=int, default=100)
    se.add_argument("--k1", type=float, default=0.9)
    se.add_argument("--b", type=float, default=0.4)
    se.add_argument("--run-tag", default="bm25")
    se.add_argument("--output", required=True)
    se.set_defaults(func=_cmd_search)

    rr = sub.add_parser("rerank", help="listwise rerank of a TREC run")
    rr.add_argument("--run", required=True)
    rr.add_argument("--segments", required=True)
    rr.add_argument("--topics", required=True)
    rr.add_argument("--backend", default="identity", help="identity | mock | http:<url> | chat:<model>@<base>")
    rr.add_argument("--window", type=int, default=20)
    rr.add_argument("--stride", type=int, default=10)
    rr.add_argument("--passes", type=int, default=3)
    rr.add_argument("--top-k", type=int, default=20)
    rr.add_argument("--run-tag", default="reranked")
    rr.add_argument("--output", required=True)
    rr.set_defaults(func=_cmd_rerank)

    ge = sub.add_parser("generate", help="cited answer generation from a reranked run")
    ge.add_argument("--run", required=True)
    ge.add_argument("--segments", required=True)
    ge.add_argument("--topics", required=True)
    ge.add_argument("--backend", default="mock", help="mock | chat:<model>@<base>")
    ge.add_argument("--run-id", default="ragkit")
    ge.add_argument("--output", required=True)
    ge.set_defaults(func=_cmd_generate)

    rn = sub.add_parser("run", help="end-to-end retrieve->rerank->generate batch run")
    rn.add_argument("--topics", required=True)
    rn.add_argument("--index", required=True)
    rn.add_argument("--segments", required=True)
    rn.add_argument("--retrieve-k", type=int, default=100)
    rn.add_argument("--k1", type=float, default=0.9)
    rn.add_argument("--b", type=float, default=0.4)
    rn.add_argument("--rerank-backend", default="identity")
    rn.add_argument("--window", type=int, default=20)
    rn.add_argument("--stride", type=int, default=10)
    rn.add_argument("--passes", type=int, default=3)
    rn.add_argument("--top-k", type=int, default=20)
    rn.add_argument("--gen-backend", default="mock")
    rn.add_argument("--run-id", default="ragkit")
    rn.add_argument("--jobs", type=int, default=1)
    rn.add_argument("--output", required=True)
    rn.set_defaults(func=run_end_to_end)

    tp = sub.add_parser("topics", help="topic collection tools")
    tp_sub = tp.add_subparsers(dest="subcommand", required=True)
    ts = tp_sub.add_parser("sample", help="diversity-maximizing sample")
    ts.add_argument("--topics", required=True)
    ts.add_argument("--sidecar")
    ts.add_argument("--k", type=int, required=True)
    ts.add_argument("--output")
    ts.set_defaults(func=_cmd_topics_sample)
    tt = tp_sub.add_parser("stats", help="category/first-word/attribute histograms")
    tt.add_argument("--topics", required=True)
    tt.add_argument("--sidecar")
    tt.set_defaults(func=_cmd_topics_stats)
    tf = tp_sub.add_parser("filter", help="keep long-form/aggregative categories")
    tf.add_argument("--topics", required=True)
    tf.add_argument("--sidecar")
    tf.add_argument("--keep", help="comma-separated category names")
    tf.add_argument("--output")
    tf.set_defaults(func=_cmd_topics_filter)

    sv = sub.add_parser("serve", help="arena REST service")
    sv.add_argument("--config", required=True)
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--port", type=int, default=8000)
    sv.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 1
    except Exception as exc:
        print(f"ragkit: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
