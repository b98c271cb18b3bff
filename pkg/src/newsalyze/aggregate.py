"""Per-article framing histograms over a topic's top concepts.

Bar height encodes mention frequency normalized topic-wide (the tallest bar
in the topic is exactly 1.0); bar color encodes the mean polarity of the
concept's mentions within the article, bucketed into five classes. Concept
order and the normalization denominator are topic-global so any two
histograms from one topic are directly comparable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from .concepts import Concept
from .errors import DataError
from .tsc import PolarityResult

if TYPE_CHECKING:
    from .store import Article

COLOR_CLASSES = ("strong-negative", "negative", "neutral", "positive", "strong-positive")


def color_class_for(mean_polarity: float, neutral_band: float) -> str:
    if mean_polarity <= -0.5:
        return "strong-negative"
    if mean_polarity < -neutral_band:
        return "negative"
    if mean_polarity <= neutral_band:
        return "neutral"
    if mean_polarity < 0.5:
        return "positive"
    return "strong-positive"


@dataclass(frozen=True)
class Bar:
    concept_id: str
    count: int
    height: float
    mean_polarity: float
    color_class: str

    @classmethod
    def from_dict(cls, data: dict) -> Bar:
        return cls(
            concept_id=data["concept_id"],
            count=data["count"],
            height=data["height"],
            mean_polarity=data["mean_polarity"],
            color_class=data["color_class"],
        )

    def to_dict(self) -> dict:
        return {
            "concept_id": self.concept_id,
            "count": self.count,
            "height": self.height,
            "mean_polarity": self.mean_polarity,
            "color_class": self.color_class,
        }


@dataclass(frozen=True)
class FramingHistogram:
    article_id: str
    concept_order: tuple[str, ...]
    bars: tuple[Bar, ...]

    @classmethod
    def from_dict(cls, data: dict) -> FramingHistogram:
        return cls(
            article_id=data["article_id"],
            concept_order=tuple(data["concept_order"]),
            bars=tuple(Bar.from_dict(b) for b in data["bars"]),
        )

    def to_dict(self) -> dict:
        return {
            "article_id": self.article_id,
            "concept_order": list(self.concept_order),
            "bars": [b.to_dict() for b in self.bars],
        }


def build_histograms(
    article_ids: Sequence[str],
    top_concepts: Sequence[Concept],
    polarity_results: dict[str, PolarityResult],
    *,
    neutral_band: float,
    mention_article: dict[str, str],
) -> dict[str, FramingHistogram]:
    """One histogram per article, all sharing the rank order of `top_concepts`.

    An unscored mention in a top concept is a pipeline ordering bug and
    raises immediately.
    """
    concept_order = tuple(c.concept_id for c in top_concepts)

    scores: dict[tuple[str, str], list[float]] = {}
    for concept in top_concepts:
        for mention_id in concept.members:
            article_id = mention_article.get(mention_id)
            if article_id is None:
                raise DataError(f"mention {mention_id!r} has no known article")
            result = polarity_results.get(mention_id)
            if result is None:
                raise DataError(f"mention {mention_id!r} reached aggregation unscored")
            scores.setdefault((article_id, concept.concept_id), []).append(result.score)

    max_count = 0
    for article_id in article_ids:
        for concept in top_concepts:
            max_count = max(max_count, concept.per_article_frequency.get(article_id, 0))

    histograms: dict[str, FramingHistogram] = {}
    for article_id in article_ids:
        bars = []
        for concept in top_concepts:
            count = concept.per_article_frequency.get(article_id, 0)
            if count == 0:
                bars.append(
                    Bar(
                        concept_id=concept.concept_id,
                        count=0,
                        height=0.0,
                        mean_polarity=0.0,
                        color_class="neutral",
                    )
                )
                continue
            member_scores = scores[(article_id, concept.concept_id)]
            mean = sum(member_scores) / len(member_scores)
            bars.append(
                Bar(
                    concept_id=concept.concept_id,
                    count=count,
                    height=count / max_count,
                    mean_polarity=mean,
                    color_class=color_class_for(mean, neutral_band),
                )
            )
        histograms[article_id] = FramingHistogram(
            article_id=article_id, concept_order=concept_order, bars=tuple(bars)
        )
    return histograms


SNIPPET_LIMIT = 200


def snippet_text(body: str, limit: int = SNIPPET_LIMIT) -> str:
    """First `limit` characters of the body, cut back to a word boundary."""
    if len(body) <= limit:
        return body
    cut = body[:limit]
    if not body[limit].isspace():
        boundary = max(cut.rfind(ch) for ch in (" ", "\n", "\t"))
        if boundary > 0:
            cut = cut[:boundary]
    return cut.rstrip()


@dataclass(frozen=True)
class ArticleSnippet:
    article_id: str
    outlet: str
    title: str
    published: str | None
    snippet: str


def overview(
    articles: Sequence["Article"],
    histograms: dict[str, FramingHistogram],
) -> list[tuple[ArticleSnippet, FramingHistogram]]:
    """Topic overview entries, ordered by outlet name then article_id."""
    entries: list[tuple[ArticleSnippet, FramingHistogram]] = []
    for article in sorted(articles, key=lambda a: (a.outlet, a.article_id)):
        histogram = histograms.get(article.article_id)
        if histogram is None:
            raise DataError(f"article {article.article_id!r} has no histogram")
        entries.append(
            (
                ArticleSnippet(
                    article_id=article.article_id,
                    outlet=article.outlet,
                    title=article.title,
                    published=article.published,
                    snippet=snippet_text(article.body),
                ),
                histogram,
            )
        )
    return entries
