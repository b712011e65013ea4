"""Topic collections: loading, category taxonomy, intrinsic attributes,
long-form filtering, and diversity-maximizing sampling.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, Sequence

logger = logging.getLogger(__name__)

ATTRIBUTE_NAMES = (
    "ambiguity",
    "incompleteness",
    "assumptive",
    "multi_faceted",
    "knowledge_intensive",
    "subjective",
    "reasoning_intensive",
    "harmful",
)

ATTRIBUTE_THRESHOLD = 5.0


class TopicsError(ValueError):
    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class TopicCategory(Enum):
    SIMPLE = "Simple"
    SIMPLE_WITH_CONDITION = "SimpleWithCondition"
    SET = "Set"
    AGGREGATION = "Aggregation"
    COMPARISON = "Comparison"
    MULTI_HOP = "MultiHop"
    FALSE_PREMISE = "FalsePremise"


_CATEGORY_ALIASES = {
    "simple": TopicCategory.SIMPLE,
    "simplewithcondition": TopicCategory.SIMPLE_WITH_CONDITION,
    "simplewithcond": TopicCategory.SIMPLE_WITH_CONDITION,
    "simplewcond": TopicCategory.SIMPLE_WITH_CONDITION,
    "set": TopicCategory.SET,
    "aggregation": TopicCategory.AGGREGATION,
    "comparison": TopicCategory.COMPARISON,
    "multihop": TopicCategory.MULTI_HOP,
    "falsepremise": TopicCategory.FALSE_PREMISE,
}


def parse_category(label: str) -> TopicCategory:
    key = "".join(ch for ch in label.lower() if ch.isalnum())
    try:
        return _CATEGORY_ALIASES[key]
    except KeyError:
        raise TopicsError(f"unknown topic category {label!r}") from None


@dataclass(frozen=True)
class AttributeVector:
    scores: tuple[float, ...]

    def __post_init__(self):
        if len(self.scores) != len(ATTRIBUTE_NAMES):
            raise TopicsError(
                f"expected {len(ATTRIBUTE_NAMES)} attribute scores, got {len(self.scores)}"
            )
        for name, score in zip(ATTRIBUTE_NAMES, self.scores):
            if not 0.0 <= score <= 10.0:
                raise TopicsError(f"attribute {name} out of range: {score}")

    def as_dict(self) -> dict[str, float]:
        return dict(zip(ATTRIBUTE_NAMES, self.scores))


def l1_norm(v: AttributeVector) -> float:
    return sum(abs(x) for x in v.scores)


def l1_distance(a: AttributeVector, b: AttributeVector) -> float:
    return sum(abs(x - y) for x, y in zip(a.scores, b.scores))


@dataclass(frozen=True)
class Topic:
    topic_id: str
    text: str
    category: TopicCategory | None = None
    attributes: AttributeVector | None = None

    def __post_init__(self):
        if not self.text:
            raise TopicsError(f"topic {self.topic_id!r} has empty text")


def load_topics(path: str | Path, sidecar: str | Path | None = None) -> list[Topic]:
    """Read ``topic_id<TAB>text`` lines, optionally merging a JSONL sidecar
    of ``{topic_id, category?, attributes?}`` records. Sidecar ids that match
    no topic produce a warning.
    """
    base: dict[str, dict] = {}
    order: list[str] = []
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise TopicsError(
                    f"expected exactly one tab separating id and text, got {len(parts) - 1}",
                    line_no,
                )
            topic_id, text = parts
            if not topic_id.strip():
                raise TopicsError("empty topic id", line_no)
            if topic_id in base:
                raise TopicsError(f"duplicate topic id {topic_id!r}", line_no)
            base[topic_id] = {"text": text}
            order.append(topic_id)

    if sidecar is not None:
        with open(sidecar, "r", encoding="utf-8") as f:
            for line_no, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise TopicsError(f"not valid JSON ({exc.msg})", line_no) from exc
                topic_id = str(record.get("topic_id", ""))
                if topic_id not in base:
                    logger.warning("sidecar line %d: unknown topic id %r", line_no, topic_id)
                    continue
                if "category" in record and record["category"] is not None:
                    try:
                        base[topic_id]["category"] = parse_category(str(record["category"]))
                    except TopicsError as exc:
                        raise TopicsError(str(exc), line_no) from None
                if "attributes" in record and record["attributes"] is not None:
                    try:
                        vec = AttributeVector(tuple(float(x) for x in record["attributes"]))
                    except TopicsError as exc:
                        raise TopicsError(str(exc), line_no) from None
                    base[topic_id]["attributes"] = vec

    return [
        Topic(
            topic_id=tid,
            text=base[tid]["text"],
            category=base[tid].get("category"),
            attributes=base[tid].get("attributes"),
        )
        for tid in order
    ]


def attribute_labels(v: AttributeVector, threshold: float = ATTRIBUTE_THRESHOLD) -> set[str]:
    """Names of attributes scoring at or above the threshold (boundary inclusive)."""
    return {name for name, score in zip(ATTRIBUTE_NAMES, v.scores) if score >= threshold}


DEFAULT_RAGGY_KEEP = frozenset(
    {
        TopicCategory.AGGREGATION,
        TopicCategory.SIMPLE_WITH_CONDITION,
        TopicCategory.SET,
        TopicCategory.COMPARISON,
        TopicCategory.MULTI_HOP,
    }
)


def raggy_filter(
    topics: Iterable[Topic],
    keep: frozenset[TopicCategory] | set[TopicCategory] = DEFAULT_RAGGY_KEEP,
    keep_predicate: Callable[[Topic], bool] | None = None,
) -> list[Topic]:
    """Keep long-form/aggregative topics; the category keep-set is configurable."""
    if keep_predicate is None:
        def keep_predicate(t: Topic) -> bool:
            if t.category is None:
                raise TopicsError(f"topic {t.topic_id!r} has no category label")
            return t.category in keep

    return [t for t in topics if keep_predicate(t)]


def diversity_sample(pool: Sequence[Topic], k: int) -> list[Topic]:
    """Farthest-point traversal in attribute space.

    Seeds with the maximum-l1-norm topic, then greedily picks the topic
    maximizing its minimum l1 distance to the already-sampled set; ties
    break by ascending topic_id.
    """
    pool = list(pool)
    if k > len(pool):
        raise TopicsError(f"cannot sample {k} topics from a pool of {len(pool)}")
    for t in pool:
        if t.attributes is None:
            raise TopicsError(f"topic {t.topic_id!r} has no attributes")
    if k == 0:
        return []

    remaining = list(pool)
    seed = _argmax_by_id(remaining, lambda t: l1_norm(t.attributes))
    picked = [seed]
    remaining.remove(seed)
    min_dist = {t.topic_id: l1_distance(t.attributes, seed.attributes) for t in remaining}
    while len(picked) < k:
        best = _argmax_by_id(remaining, lambda t: min_dist[t.topic_id])
        picked.append(best)
        remaining.remove(best)
        del min_dist[best.topic_id]
        for t in remaining:
            d = l1_distance(t.attributes, best.attributes)
            if d < min_dist[t.topic_id]:
                min_dist[t.topic_id] = d
    return picked


def _argmax_by_id(topics: Sequence[Topic], metric: Callable[[Topic], float]) -> Topic:
    best = max(metric(t) for t in topics)
    return min((t for t in topics if metric(t) == best), key=lambda t: t.topic_id)


@dataclass(frozen=True)
class TopicStats:
    category_pct: dict[str, float]
    first_word_pct: dict[str, float]
    attribute_pct: dict[str, float]


def _pct_histogram(counts: dict[str, int], total: int) -> dict[str, float]:
    if not total:
        return {}
    return {
        key: round(100.0 * count / total, 1)
        for key, count in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    }


def report_stats(topics: Iterable[Topic]) -> TopicStats:
    """Category, first-word, and attribute-label histograms (percent, 1 decimal).

    Category/attribute percentages are over the topics carrying those
    annotations; attribute labels are multi-label so they need not sum
    to 100.
    """
    cat_counts: dict[str, int] = {}
    word_counts: dict[str, int] = {}
    attr_counts: dict[str, int] = {}
    n_total = n_cat = n_attr = 0
    for t in topics:
        n_total += 1
        first = t.text.split()[0].lower() if t.text.split() else ""
        word_counts[first] = word_counts.get(first, 0) + 1
        if t.category is not None:
            n_cat += 1
            cat_counts[t.category.value] = cat_counts.get(t.category.value, 0) + 1
        if t.attributes is not None:
            n_attr += 1
            for label in attribute_labels(t.attributes):
                attr_counts[label] = attr_counts.get(label, 0) + 1
    return TopicStats(
        category_pct=_pct_histogram(cat_counts, n_cat),
        first_word_pct=_pct_histogram(word_counts, n_total),
        attribute_pct=_pct_histogram(attr_counts, n_attr),
    )
