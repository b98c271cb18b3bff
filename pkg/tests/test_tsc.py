from __future__ import annotations

import random

import pytest

from newsalyze.errors import DataError
from newsalyze.preprocess import Mention, Token, annotate_topic
from newsalyze.tsc import label_for_score, score_lexicon, score_topic

from .oracles import oracle_lexicon_score


def build_sentence(surfaces: list[str], mention_range: tuple[int, int]):
    """Tokens laid out with single spaces plus a mention covering [start, end] tokens."""
    tokens = []
    pos = 0
    spans = []
    for i, surface in enumerate(surfaces):
        spans.append((pos, pos + len(surface)))
        tokens.append(
            Token(
                index=i,
                span=(pos, pos + len(surface)),
                surface=surface,
                is_capitalized=surface[:1].isupper(),
                is_sentence_initial=i == 0,
            )
        )
        pos += len(surface) + 1
    first, last = mention_range
    mention = Mention(
        mention_id="a1:m0",
        article_id="a1",
        sentence_index=0,
        span=(spans[first][0], spans[last][1]),
        surface=" ".join(surfaces[first : last + 1]),
        head=surfaces[last],
        kind="other",
    )
    return tokens, mention


def test_single_hit_distance_weight():
    # praised at distance 1 from the mention: 0.8 * 1/(1+1) = 0.4
    tokens, mention = build_sentence(["Trump", "praised", "the", "deal"], (0, 0))
    result = score_lexicon(tokens, mention, {"praised": 0.8}, neutral_band=0.1)
    assert result.score == pytest.approx(0.4, abs=1e-12)
    assert result.label == "positive"
    assert result.confidence == pytest.approx(1 / 3)
    assert result.scorer == "lexicon"


def test_no_hits_is_neutral_zero_confidence():
    tokens, mention = build_sentence(["Trump", "signed", "the", "paper"], (0, 0))
    result = score_lexicon(tokens, mention, {"praised": 0.8}, neutral_band=0.1)
    assert result.score == 0.0
    assert result.label == "neutral"
    assert result.confidence == 0.0


def test_negation_flips_sign():
    # "did not praise": negation 1 token before the hit, within the default window
    tokens, mention = build_sentence(["Trump", "did", "not", "praise", "the", "deal"], (0, 0))
    result = score_lexicon(tokens, mention, {"praise": 0.8}, neutral_band=0.1)
    # d(praise -> Trump) = 3, so the un-negated value would be +0.2
    assert result.score == pytest.approx(-0.8 / 4, abs=1e-12)
    assert result.label == "negative"


def test_negation_window_zero_never_flips():
    tokens, mention = build_sentence(["Trump", "not", "praise"], (0, 0))
    result = score_lexicon(
        tokens, mention, {"praise": 0.8}, negation_window=0, neutral_band=0.1
    )
    assert result.score > 0


def test_negation_flip_is_exact_for_hit_before_mention():
    # hit precedes the mention, so inserting "not" shifts both equally
    plain_tokens, plain_mention = build_sentence(["praised", "Trump", "today"], (1, 1))
    base = score_lexicon(plain_tokens, plain_mention, {"praised": 0.8}, neutral_band=0.1)
    neg_tokens, neg_mention = build_sentence(["not", "praised", "Trump", "today"], (2, 2))
    flipped = score_lexicon(neg_tokens, neg_mention, {"praised": 0.8}, neutral_band=0.1)
    assert flipped.score == pytest.approx(-base.score, abs=1e-15)


def test_lexicon_symmetry():
    surfaces = ["Critics", "condemned", "Trump", "over", "a", "brave", "plan"]
    lexicon = {"condemned": -0.8, "brave": 0.6}
    mirrored = {term: -value for term, value in lexicon.items()}
    tokens, mention = build_sentence(surfaces, (2, 2))
    a = score_lexicon(tokens, mention, lexicon, neutral_band=0.1)
    b = score_lexicon(tokens, mention, mirrored, neutral_band=0.1)
    assert b.score == pytest.approx(-a.score, abs=1e-15)
    assert {a.label, b.label} == {"negative", "positive"}


def test_self_tokens_excluded_by_default():
    tokens, mention = build_sentence(["brave", "Trump", "won"], (0, 1))
    excluded = score_lexicon(tokens, mention, {"brave": 0.6}, neutral_band=0.1)
    assert excluded.score == 0.0
    included = score_lexicon(
        tokens, mention, {"brave": 0.6}, neutral_band=0.1, include_self_tokens=True
    )
    assert included.score == pytest.approx(0.6)  # distance 0 to itself
    assert included.scorer == "lexicon+self"


def test_clamping_and_bounds():
    surfaces = ["great", "great", "great", "Trump", "great", "great", "great"]
    tokens, mention = build_sentence(surfaces, (3, 3))
    result = score_lexicon(tokens, mention, {"great": 0.9}, neutral_band=0.1)
    assert result.score == 1.0
    assert result.confidence == 1.0


def test_mention_outside_sentence_is_error():
    tokens, _ = build_sentence(["some", "words"], (0, 0))
    _, far_mention = build_sentence(["x"] * 40, (39, 39))
    with pytest.raises(DataError):
        score_lexicon(tokens, far_mention, {}, neutral_band=0.1)


def test_label_thresholds():
    assert label_for_score(-0.11, 0.1) == "negative"
    assert label_for_score(-0.1, 0.1) == "neutral"
    assert label_for_score(0.1, 0.1) == "neutral"
    assert label_for_score(0.11, 0.1) == "positive"


def test_locality_mutating_other_sentences():
    gaz = {"Trump": "person"}
    base = {"a1": "He praised Trump today. The weather was dull and gray."}
    changed = {"a1": "He praised Trump today. The horrific disaster ruined everything."}
    lexicon = {"praised": 0.7, "horrific": -0.9, "disaster": -0.8, "dull": -0.3}
    results = {}
    for key, bodies in (("base", base), ("changed", changed)):
        annotations = annotate_topic(bodies, gaz)
        scored = score_topic(annotations, bodies, lexicon)
        (mention,) = [m for m in annotations["a1"].mentions if m.surface == "Trump"]
        results[key] = scored[mention.mention_id].score
    assert results["base"] == results["changed"]


def test_score_topic_covers_every_mention(fixture_store):
    bundle = fixture_store.get_bundle("deal")
    for pairs in bundle.mentions_by_article.values():
        for mention, result in pairs:
            assert result.mention_id == mention.mention_id
            assert -1.0 <= result.score <= 1.0
            assert result.label == label_for_score(result.score, bundle.params_used.neutral_band)


def test_matches_oracle_on_random_sentences():
    rng = random.Random(2024)
    fillers = ["the", "a", "of", "report", "plan", "city", "meeting", "votes", "word"]
    hits = ["praised", "condemned", "brave", "reckless", "hopeful", "weak", "fair"]
    lexicon = {
        "praised": 0.7,
        "condemned": -0.8,
        "brave": 0.6,
        "reckless": -0.8,
        "hopeful": 0.5,
        "weak": -0.6,
        "fair": 0.4,
    }
    negations = ["not", "no", "never", "without", "didn't"]
    for _ in range(100):
        n = rng.randint(2, 15)
        surfaces = [rng.choice(fillers) for _ in range(n)]
        for _ in range(rng.randint(0, 4)):
            surfaces[rng.randrange(n)] = rng.choice(hits)
        for _ in range(rng.randint(0, 2)):
            surfaces[rng.randrange(n)] = rng.choice(negations)
        m_len = 1 if n < 3 else rng.choice([1, 2])
        m_start = rng.randrange(0, n - m_len + 1)
        for k in range(m_len):
            surfaces[m_start + k] = ["Target", "Name"][k]
        window = rng.randint(0, 4)
        tokens, mention = build_sentence(surfaces, (m_start, m_start + m_len - 1))
        result = score_lexicon(
            tokens, mention, lexicon, negation_window=window, neutral_band=0.1
        )
        expected_score, expected_hits = oracle_lexicon_score(
            surfaces, set(range(m_start, m_start + m_len)), lexicon, window
        )
        assert result.score == pytest.approx(expected_score, abs=1e-12)
        assert result.confidence == pytest.approx(min(1.0, expected_hits / 3), abs=1e-12)
