"""Synthetic corpus/topic builders shared across the test suite.

Vocabulary avoids splitter abbreviations, single letters, digits, and
bracket characters so generated sentences round-trip through the
sentence splitter and the citation parser.
"""

from __future__ import annotations

import random

from ragkit.corpus.documents import Document, Segment, make_segment_id
from ragkit.corpus.segmenter import segment_document

VOCAB = (
    "apple river stone cloud meadow harbor lantern forest ember copper "
    "violet thunder marble willow canyon breeze saddle timber anchor "
    "garnet hollow spruce quartz raven meadowlark pebble drift current "
    "summit valley lantern beacon cinder harvest orchard thicket bramble "
    "fern moss lichen granite basalt shale delta estuary lagoon reef "
    "tundra prairie steppe mesa butte gorge rapids cascade glacier "
    "aurora zenith nadir solstice equinox comet nebula quasar pulsar "
    "meteor crater dune oasis mirage monsoon typhoon cyclone zephyr "
    "gale tempest squall frost rime sleet hail drizzle deluge torrent"
).split()


def make_sentence(rng: random.Random, n_words: int | None = None) -> str:
    n = n_words or rng.randint(4, 12)
    words = [rng.choice(VOCAB) for _ in range(n)]
    words[0] = words[0].capitalize()
    return " ".join(words) + "."


def make_body(rng: random.Random, n_sentences: int) -> str:
    return " ".join(make_sentence(rng) for _ in range(n_sentences))


def make_document(rng: random.Random, doc_id: str, n_sentences: int) -> Document:
    return Document(
        doc_id=doc_id,
        url=f"http://example.test/{doc_id}",
        title=f"Title of {doc_id}",
        headings=f"Heading {doc_id}",
        body=make_body(rng, n_sentences),
    )


def make_segments(rng: random.Random, n_docs: int, max_sentences: int = 12) -> list[Segment]:
    segments: list[Segment] = []
    for i in range(n_docs):
        doc = make_document(rng, f"doc{i:04d}", rng.randint(1, max_sentences))
        segments.extend(segment_document(doc))
    return segments


def make_segment(segment_id: str, text: str, title: str = "", url: str = "") -> Segment:
    """Free-standing segment for tests that build them directly."""
    doc_id, _, ordinal = segment_id.rpartition("#")
    return Segment(
        segment_id=segment_id,
        doc_id=doc_id or segment_id,
        ordinal=int(ordinal) if ordinal.isdigit() else 0,
        url=url,
        title=title,
        headings="",
        text=text,
        start_char=0,
        end_char=len(text),
    )


def planted_duplicate_corpus(
    rng: random.Random,
    n_docs: int = 1000,
    n_clusters: int = 50,
    base_tokens: int = 408,
    cluster_sizes: tuple[int, ...] = (2, 3, 4),
) -> tuple[list[Document], list[set[str]]]:
    """Corpus with planted near-duplicate clusters.

    Cluster members share a 408-token base with single-token edits at
    well-separated positions, giving pairwise 9-gram-shingle Jaccard
    >= (S-18)/(S+18) ~ 0.914 within a cluster and ~0 across docs.
    Returns (documents in shuffled order, planted clusters as id sets).
    """
    mutation_positions = (50, 150, 250)
    sizes = [cluster_sizes[i % len(cluster_sizes)] for i in range(n_clusters)]
    docs: list[Document] = []
    clusters: list[set[str]] = []
    doc_no = 0

    def new_doc(body_tokens: list[str]) -> Document:
        nonlocal doc_no
        doc = Document(doc_id=f"doc{doc_no:05d}", body=" ".join(body_tokens))
        doc_no += 1
        return doc

    for size in sizes:
        base = [rng.choice(VOCAB) for _ in range(base_tokens)]
        members = [new_doc(list(base))]
        for v in range(size - 1):
            mutated = list(base)
            mutated[mutation_positions[v]] = f"variant{doc_no}token"
            members.append(new_doc(mutated))
        docs.extend(members)
        clusters.append({d.doc_id for d in members})

    while doc_no < n_docs:
        docs.append(new_doc([rng.choice(VOCAB) for _ in range(base_tokens)]))

    rng.shuffle(docs)
    return docs, clusters
