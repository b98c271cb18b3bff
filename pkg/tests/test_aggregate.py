from __future__ import annotations

import pytest

from newsalyze.aggregate import (
    build_histograms,
    color_class_for,
    overview,
    snippet_text,
)
from newsalyze.concepts import Concept
from newsalyze.errors import DataError
from newsalyze.tsc import PolarityResult


def concept(concept_id: str, members: dict[str, list[str]]) -> Concept:
    # members: article_id -> mention ids
    all_ids = tuple(mid for ids in members.values() for mid in ids)
    return Concept(
        concept_id=concept_id,
        canonical_label=concept_id.title(),
        members=all_ids,
        frequency=len(all_ids),
        per_article_frequency={aid: len(ids) for aid, ids in members.items() if ids},
    )


def result(mention_id: str, score: float) -> PolarityResult:
    label = "negative" if score < -0.1 else "positive" if score > 0.1 else "neutral"
    return PolarityResult(
        mention_id=mention_id, score=score, label=label, confidence=0.5, scorer="lexicon"
    )


def test_mean_and_strong_positive():
    # concept with two mentions scored +0.4 and +0.6 -> mean 0.5 -> strong-positive
    c = concept("trump", {"a1": ["m1", "m2"]})
    results = {"m1": result("m1", 0.4), "m2": result("m2", 0.6)}
    hists = build_histograms(
        ["a1"], [c], results, neutral_band=0.1, mention_article={"m1": "a1", "m2": "a1"}
    )
    bar = hists["a1"].bars[0]
    assert bar.mean_polarity == pytest.approx(0.5)
    assert bar.color_class == "strong-positive"
    assert bar.count == 2
    assert bar.height == 1.0


def test_absent_concept_is_zero_neutral_bar():
    c1 = concept("trump", {"a1": ["m1"]})
    c2 = concept("iran", {"a2": ["m2"]})
    results = {"m1": result("m1", 0.2), "m2": result("m2", -0.2)}
    hists = build_histograms(
        ["a1", "a2"],
        [c1, c2],
        results,
        neutral_band=0.1,
        mention_article={"m1": "a1", "m2": "a2"},
    )
    gap = hists["a1"].bars[1]  # iran in a1
    assert (gap.count, gap.height, gap.mean_polarity, gap.color_class) == (0, 0.0, 0.0, "neutral")


def test_single_mention_normalization_anchor():
    c = concept("trump", {"a1": ["m1"]})
    hists = build_histograms(
        ["a1"], [c], {"m1": result("m1", -1.0)}, neutral_band=0.1, mention_article={"m1": "a1"}
    )
    bar = hists["a1"].bars[0]
    assert bar.height == 1.0
    assert bar.mean_polarity == -1.0
    assert bar.color_class == "strong-negative"


def test_heights_normalized_topic_wide():
    c = concept("trump", {"a1": ["m1", "m2", "m3", "m4"], "a2": ["m5"]})
    results = {f"m{i}": result(f"m{i}", 0.0) for i in range(1, 6)}
    mention_article = {f"m{i}": "a1" for i in range(1, 5)} | {"m5": "a2"}
    hists = build_histograms(
        ["a1", "a2"], [c], results, neutral_band=0.1, mention_article=mention_article
    )
    assert hists["a1"].bars[0].height == 1.0  # 4/4, the topic-wide max
    assert hists["a2"].bars[0].height == 0.25  # 1/4 of the same denominator


def test_unscored_mention_is_hard_error():
    c = concept("trump", {"a1": ["m1"]})
    with pytest.raises(DataError):
        build_histograms(["a1"], [c], {}, neutral_band=0.1, mention_article={"m1": "a1"})


def test_concept_order_shared_across_articles(fixture_store):
    bundle = fixture_store.get_bundle("deal")
    orders = {hist.concept_order for hist in bundle.histograms.values()}
    assert len(orders) == 1
    for hist in bundle.histograms.values():
        assert [b.concept_id for b in hist.bars] == list(hist.concept_order)


def test_topic_wide_max_is_exactly_one(fixture_store, expected):
    for topic_id, exp in expected.items():
        bundle = fixture_store.get_bundle(topic_id)
        heights = [b.height for h in bundle.histograms.values() for b in h.bars]
        assert all(0.0 <= h <= 1.0 for h in heights)
        assert max(heights) == 1.0
        counts = [b.count for h in bundle.histograms.values() for b in h.bars]
        assert max(counts) == exp["max_bar_count"]


def test_color_class_thresholds():
    band = 0.1
    assert color_class_for(-0.5, band) == "strong-negative"
    assert color_class_for(-0.49, band) == "negative"
    assert color_class_for(-0.1, band) == "neutral"
    assert color_class_for(0.0, band) == "neutral"
    assert color_class_for(0.1, band) == "neutral"
    assert color_class_for(0.11, band) == "positive"
    assert color_class_for(0.49, band) == "positive"
    assert color_class_for(0.5, band) == "strong-positive"


def test_snippet_shorter_body_is_whole_body():
    assert snippet_text("short body") == "short body"


def test_snippet_cuts_at_word_boundary():
    body = ("word " * 60).strip()  # 299 chars of 4-letter words
    snippet = snippet_text(body)
    assert len(snippet) <= 200
    assert not snippet.endswith(" ")
    # never cuts a word in half: snippet + next char is a boundary in the body
    assert body[len(snippet)] == " " or body.startswith(snippet)


def test_snippet_exact_boundary_at_limit():
    body = "a" * 199 + " " + "b" * 300
    assert snippet_text(body) == "a" * 199


def test_overview_entries_ordered_by_outlet_then_id(fixture_store):
    config, articles = fixture_store.load_topic("deal")
    bundle = fixture_store.get_bundle("deal")
    entries = overview(articles, bundle.histograms)
    outlets = [snippet.outlet for snippet, _ in entries]
    assert outlets == sorted(outlets)
    for snippet, hist in entries:
        assert snippet.article_id == hist.article_id
        assert len(snippet.snippet) <= 200


def test_rebuild_from_bundle_is_identical(fixture_store):
    bundle = fixture_store.get_bundle("deal")
    from newsalyze.concepts import rank

    top = rank(bundle.concepts, bundle.params_used.top_k_concepts)
    mention_article = {
        m.mention_id: aid for aid, pairs in bundle.mentions_by_article.items() for m, _ in pairs
    }
    results = {r.mention_id: r for pairs in bundle.mentions_by_article.values() for _, r in pairs}
    rebuilt = build_histograms(
        sorted(bundle.histograms),
        top,
        results,
        neutral_band=bundle.params_used.neutral_band,
        mention_article=mention_article,
    )
    assert rebuilt == bundle.histograms
