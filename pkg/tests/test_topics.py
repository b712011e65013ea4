import json
import random

import pytest

from ragkit.topics import (
    ATTRIBUTE_NAMES,
    DEFAULT_RAGGY_KEEP,
    AttributeVector,
    Topic,
    TopicCategory,
    TopicsError,
    attribute_labels,
    diversity_sample,
    l1_distance,
    l1_norm,
    load_topics,
    parse_category,
    raggy_filter,
    report_stats,
)


def vec(*scores):
    return AttributeVector(tuple(float(s) for s in scores))


def topic_with_attrs(topic_id, *scores, text="What is this?"):
    return Topic(topic_id=topic_id, text=text, attributes=vec(*scores))


class TestLoadTopics:
    def test_two_line_tsv(self, tmp_path):
        p = tmp_path / "topics.tsv"
        p.write_text("t1\thow do rivers form?\nt2\twhy is the sky blue?\n")
        topics = load_topics(p)
        assert [t.topic_id for t in topics] == ["t1", "t2"]
        assert topics[0].text == "how do rivers form?"

    def test_internal_tab_rejected(self, tmp_path):
        p = tmp_path / "topics.tsv"
        p.write_text("t1\thas\tinternal tab\n")
        with pytest.raises(TopicsError, match="line 1"):
            load_topics(p)

    def test_malformed_line_number(self, tmp_path):
        p = tmp_path / "topics.tsv"
        p.write_text("t1\tfine\njust-one-field\n")
        with pytest.raises(TopicsError, match="line 2"):
            load_topics(p)

    def test_sidecar_merge(self, tmp_path):
        p = tmp_path / "topics.tsv"
        p.write_text("t1\ta?\nt2\tb?\n")
        s = tmp_path / "side.jsonl"
        s.write_text(
            json.dumps({"topic_id": "t1", "category": "Aggregation"})
            + "\n"
            + json.dumps({"topic_id": "t2", "attributes": [1, 2, 3, 4, 5, 6, 7, 0]})
            + "\n"
        )
        topics = load_topics(p, sidecar=s)
        assert topics[0].category == TopicCategory.AGGREGATION
        assert topics[1].attributes == vec(1, 2, 3, 4, 5, 6, 7, 0)

    def test_sidecar_unknown_id_warns(self, tmp_path, caplog):
        p = tmp_path / "topics.tsv"
        p.write_text("t1\ta?\n")
        s = tmp_path / "side.jsonl"
        s.write_text(json.dumps({"topic_id": "ghost", "category": "Set"}) + "\n")
        with caplog.at_level("WARNING"):
            load_topics(p, sidecar=s)
        assert "ghost" in caplog.text

    def test_attribute_out_of_range_rejected(self, tmp_path):
        p = tmp_path / "topics.tsv"
        p.write_text("t1\ta?\n")
        s = tmp_path / "side.jsonl"
        s.write_text(json.dumps({"topic_id": "t1", "attributes": [11, 0, 0, 0, 0, 0, 0, 0]}) + "\n")
        with pytest.raises(TopicsError, match="out of range"):
            load_topics(p, sidecar=s)


class TestAttributeLabels:
    def test_all_zero(self):
        assert attribute_labels(vec(0, 0, 0, 0, 0, 0, 0, 0)) == set()

    def test_boundary_inclusive(self):
        v = vec(0, 0, 0, 0, 5.0, 0, 0, 0)
        assert attribute_labels(v) == {"knowledge_intensive"}

    def test_direct_thresholding(self):
        v = vec(6, 1, 2, 8, 9, 3, 7, 0)
        assert attribute_labels(v) == {
            "ambiguity",
            "multi_faceted",
            "knowledge_intensive",
            "reasoning_intensive",
        }

    def test_monotone_in_scores(self):
        rng = random.Random(51)
        for _ in range(100):
            scores = [rng.uniform(0, 10) for _ in range(8)]
            before = attribute_labels(vec(*scores))
            i = rng.randrange(8)
            scores[i] = min(10.0, scores[i] + rng.uniform(0, 5))
            after = attribute_labels(vec(*scores))
            assert before <= after


class TestRaggyFilter:
    def _topic(self, tid, category):
        return Topic(topic_id=tid, text="x?", category=category)

    def test_default_keep_set(self):
        kept = raggy_filter(
            [
                self._topic("t1", TopicCategory.AGGREGATION),
                self._topic("t2", TopicCategory.SIMPLE),
                self._topic("t3", TopicCategory.MULTI_HOP),
            ]
        )
        assert [t.topic_id for t in kept] == ["t1", "t3"]

    def test_unlabeled_topic_rejected_under_default(self):
        with pytest.raises(TopicsError, match="no category"):
            raggy_filter([Topic(topic_id="t", text="x?")])

    def test_configurable_keep(self):
        kept = raggy_filter(
            [self._topic("t1", TopicCategory.SIMPLE)],
            keep={TopicCategory.SIMPLE},
        )
        assert len(kept) == 1

    def test_default_set_contents(self):
        assert DEFAULT_RAGGY_KEEP == {
            TopicCategory.AGGREGATION,
            TopicCategory.SIMPLE_WITH_CONDITION,
            TopicCategory.SET,
            TopicCategory.COMPARISON,
            TopicCategory.MULTI_HOP,
        }

    def test_category_parse_aliases(self):
        assert parse_category("Simple w/ cond.") == TopicCategory.SIMPLE_WITH_CONDITION
        assert parse_category("multi-hop") == TopicCategory.MULTI_HOP
        assert parse_category("False premise") == TopicCategory.FALSE_PREMISE
        with pytest.raises(TopicsError):
            parse_category("unheard-of")


def brute_force_next_pick(remaining, picked):
    """Oracle: exhaustively find the max-min-l1 candidate (ties by id)."""
    best = None
    best_key = None
    for t in remaining:
        dmin = min(l1_distance(t.attributes, p.attributes) for p in picked)
        key = (-dmin, t.topic_id)
        if best_key is None or key < best_key:
            best, best_key = t, key
    return best


class TestDiversitySample:
    def test_full_pool_is_permutation(self):
        pool = [topic_with_attrs(f"t{i}", *([i] + [0] * 7)) for i in range(5)]
        picked = diversity_sample(pool, 5)
        assert sorted(t.topic_id for t in picked) == sorted(t.topic_id for t in pool)

    def test_one_dimensional_example(self):
        pool = [
            topic_with_attrs("a", 0, 0, 0, 0, 0, 0, 0, 0),
            topic_with_attrs("b", 3, 0, 0, 0, 0, 0, 0, 0),
            topic_with_attrs("c", 10, 0, 0, 0, 0, 0, 0, 0),
        ]
        picked = diversity_sample(pool, 2)
        assert [t.topic_id for t in picked] == ["c", "a"]

    def test_missing_attributes_rejected(self):
        with pytest.raises(TopicsError, match="no attributes"):
            diversity_sample([Topic("t", "x?")], 1)

    def test_k_larger_than_pool_rejected(self):
        with pytest.raises(TopicsError):
            diversity_sample([topic_with_attrs("t", *[1] * 8)], 2)

    def test_every_step_matches_brute_force(self):
        rng = random.Random(52)
        for _ in range(20):
            n = rng.randint(2, 12)
            pool = [
                topic_with_attrs(f"t{i:02d}", *[rng.uniform(0, 10) for _ in range(8)])
                for i in range(n)
            ]
            k = rng.randint(1, n)
            picked = diversity_sample(pool, k)
            # seed: max l1 norm, ties by id
            best_norm = max(l1_norm(t.attributes) for t in pool)
            expected_seed = min(
                (t for t in pool if l1_norm(t.attributes) == best_norm),
                key=lambda t: t.topic_id,
            )
            assert picked[0] == expected_seed
            for step in range(1, k):
                remaining = [t for t in pool if t not in picked[:step]]
                assert picked[step] == brute_force_next_pick(remaining, picked[:step])

    def test_deterministic_under_pool_order(self):
        rng = random.Random(53)
        pool = [
            topic_with_attrs(f"t{i:02d}", *[rng.uniform(0, 10) for _ in range(8)])
            for i in range(10)
        ]
        shuffled = list(pool)
        rng.shuffle(shuffled)
        assert [t.topic_id for t in diversity_sample(pool, 6)] == [
            t.topic_id for t in diversity_sample(shuffled, 6)
        ]


class TestReportStats:
    def test_first_word_quarter(self):
        topics = [
            Topic("t1", "what is x?"),
            Topic("t2", "how is y?"),
            Topic("t3", "why is z?"),
            Topic("t4", "is it w?"),
        ]
        stats = report_stats(topics)
        assert stats.first_word_pct["what"] == 25.0

    def test_empty_input(self):
        stats = report_stats([])
        assert stats.category_pct == {} and stats.first_word_pct == {} and stats.attribute_pct == {}

    def test_percentages_sum_to_100(self):
        rng = random.Random(54)
        cats = list(TopicCategory)
        topics = [
            Topic(f"t{i}", f"{rng.choice(['what', 'how', 'why'])} q?", category=rng.choice(cats))
            for i in range(37)
        ]
        stats = report_stats(topics)
        assert abs(sum(stats.category_pct.values()) - 100.0) <= 0.1 + 1e-9
        assert abs(sum(stats.first_word_pct.values()) - 100.0) <= 0.1 + 1e-9

    def test_attribute_histogram_multi_label(self):
        topics = [
            topic_with_attrs("t1", 9, 0, 0, 9, 9, 0, 0, 0),
            topic_with_attrs("t2", 0, 0, 0, 9, 0, 0, 0, 0),
        ]
        stats = report_stats(topics)
        assert stats.attribute_pct["multi_faceted"] == 100.0
        assert stats.attribute_pct["ambiguity"] == 50.0

    def test_one_decimal_rounding(self):
        topics = [Topic(f"t{i}", "what q?") for i in range(3)] + [Topic("t9", "how q?")]
        # 3/4 and 1/4 are exact; use 1/3 split for rounding behavior
        third = [Topic("a", "what q?"), Topic("b", "how q?"), Topic("c", "why q?")]
        stats = report_stats(third)
        assert stats.first_word_pct["what"] == 33.3
