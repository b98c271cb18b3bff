"""On-disk persistence of topics, articles, and analysis results.

Layout (one directory per topic, human-inspectable JSON):

    <root>/topics/<topic_id>/config.json
    <root>/topics/<topic_id>/articles/<article_id>.json
    <root>/topics/<topic_id>/analysis/bundle.json

Single-writer, multiple-reader: the pipeline writes, the server reads
immutable snapshots. All writes are atomic (write-temp-then-rename).
Character offsets throughout count Unicode scalar values, never bytes.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from urllib.parse import urlparse

from . import ENGINE_VERSION
from .aggregate import FramingHistogram
from .concepts import Concept
from .errors import (
    DataError,
    IOFailure,
    NotAnalyzedError,
    StaleBundleError,
    UnknownArticleError,
    UnknownTopicError,
)
from .preprocess import Mention
from .tsc import PolarityResult

_TOPIC_ID_RE = re.compile(r"^[a-z0-9-]+$")
_ARTICLE_ID_HEX_CHARS = 16


def compute_article_id(url: str, body: str) -> str:
    """Content hash used as article id: first 16 hex chars of SHA-256 over url + "\\n" + body."""
    digest = hashlib.sha256((url + "\n" + body).encode("utf-8")).hexdigest()
    return digest[:_ARTICLE_ID_HEX_CHARS]


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise DataError(message)


def _valid_absolute_url(url: str) -> bool:
    parsed = urlparse(url)
    return parsed.scheme in ("http", "https") and bool(parsed.netloc)


@dataclass(frozen=True)
class AnalysisParams:
    top_k_concepts: int = 6
    merge_threshold: float = 0.85
    negation_window: int = 3
    neutral_band: float = 0.1

    def __post_init__(self) -> None:
        _require(self.top_k_concepts > 0, "top_k_concepts must be a positive integer")
        _require(0.0 <= self.merge_threshold <= 1.0, "merge_threshold must lie in [0, 1]")
        _require(self.negation_window >= 0, "negation_window must be nonnegative")
        _require(self.neutral_band >= 0.0, "neutral_band must be nonnegative")

    @classmethod
    def from_dict(cls, data: dict | None) -> AnalysisParams:
        data = data or {}
        defaults = cls()
        return cls(
            top_k_concepts=int(data.get("top_k_concepts", defaults.top_k_concepts)),
            merge_threshold=float(data.get("merge_threshold", defaults.merge_threshold)),
            negation_window=int(data.get("negation_window", defaults.negation_window)),
            neutral_band=float(data.get("neutral_band", defaults.neutral_band)),
        )

    def to_dict(self) -> dict:
        return {
            "top_k_concepts": self.top_k_concepts,
            "merge_threshold": self.merge_threshold,
            "negation_window": self.negation_window,
            "neutral_band": self.neutral_band,
        }


@dataclass(frozen=True)
class TopicConfig:
    topic_id: str
    title: str
    sources: tuple[tuple[str, str], ...]  # (outlet_name, url)
    analysis_params: AnalysisParams = field(default_factory=AnalysisParams)

    def __post_init__(self) -> None:
        _require(bool(self.topic_id), "topic_id must be nonempty")
        _require(
            _TOPIC_ID_RE.match(self.topic_id) is not None,
            f"topic_id must match [a-z0-9-]+, got {self.topic_id!r}",
        )
        _require(len(self.sources) > 0, "sources must be nonempty")
        for outlet, url in self.sources:
            _require(bool(outlet), "source outlet_name must be nonempty")
            _require(_valid_absolute_url(url), f"source url is not an absolute URL: {url!r}")

    @classmethod
    def from_dict(cls, data: dict) -> TopicConfig:
        sources = tuple(
            (entry["outlet_name"], entry["url"]) for entry in data.get("sources", [])
        )
        return cls(
            topic_id=data["topic_id"],
            title=data.get("title", data["topic_id"]),
            sources=sources,
            analysis_params=AnalysisParams.from_dict(data.get("analysis_params")),
        )

    def to_dict(self) -> dict:
        return {
            "topic_id": self.topic_id,
            "title": self.title,
            "sources": [{"outlet_name": o, "url": u} for o, u in self.sources],
            "analysis_params": self.analysis_params.to_dict(),
        }


@dataclass(frozen=True)
class Article:
    article_id: str
    topic_id: str
    outlet: str
    url: str
    title: str
    published: str | None
    body: str
    fetched_at: str

    def __post_init__(self) -> None:
        _require(bool(self.body), "article body must be nonempty")
        _require(
            self.article_id == compute_article_id(self.url, self.body),
            "article_id is not the content hash of (url, body)",
        )

    @classmethod
    def from_dict(cls, data: dict) -> Article:
        return cls(
            article_id=data["article_id"],
            topic_id=data["topic_id"],
            outlet=data["outlet"],
            url=data["url"],
            title=data["title"],
            published=data.get("published"),
            body=data["body"],
            fetched_at=data["fetched_at"],
        )

    def to_dict(self) -> dict:
        return {
            "article_id": self.article_id,
            "topic_id": self.topic_id,
            "outlet": self.outlet,
            "url": self.url,
            "title": self.title,
            "published": self.published,
            "body": self.body,
            "fetched_at": self.fetched_at,
        }


@dataclass(frozen=True)
class AnalysisBundle:
    """Complete analysis output for one topic; rewritten wholesale on re-analysis."""

    topic_id: str
    concepts: tuple[Concept, ...]
    mentions_by_article: dict[str, tuple[tuple[Mention, PolarityResult], ...]]
    histograms: dict[str, FramingHistogram]
    params_used: AnalysisParams
    engine_version: str = ENGINE_VERSION

    def validate(self) -> None:
        """Check internal consistency (concept partition, histogram references)."""
        all_mention_ids: set[str] = set()
        for pairs in self.mentions_by_article.values():
            for mention, result in pairs:
                _require(
                    mention.mention_id not in all_mention_ids,
                    f"duplicate mention id {mention.mention_id!r}",
                )
                all_mention_ids.add(mention.mention_id)
                _require(
                    result.mention_id == mention.mention_id,
                    "polarity result does not reference its mention",
                )
        claimed: set[str] = set()
        for concept in self.concepts:
            for mid in concept.members:
                _require(mid not in claimed, f"mention {mid!r} in more than one concept")
                _require(mid in all_mention_ids, f"concept member {mid!r} is not a known mention")
                claimed.add(mid)
        _require(
            claimed == all_mention_ids,
            "concepts do not partition the mention set",
        )
        concept_ids = {c.concept_id for c in self.concepts}
        for hist in self.histograms.values():
            for bar in hist.bars:
                _require(
                    bar.concept_id in concept_ids,
                    f"histogram bar references unknown concept {bar.concept_id!r}",
                )

    @classmethod
    def from_dict(cls, data: dict) -> AnalysisBundle:
        mentions_by_article = {
            article_id: tuple(
                (Mention.from_dict(pair["mention"]), PolarityResult.from_dict(pair["polarity"]))
                for pair in pairs
            )
            for article_id, pairs in data["mentions_by_article"].items()
        }
        histograms = {
            article_id: FramingHistogram.from_dict(h)
            for article_id, h in data["histograms"].items()
        }
        return cls(
            topic_id=data["topic_id"],
            concepts=tuple(Concept.from_dict(c) for c in data["concepts"]),
            mentions_by_article=mentions_by_article,
            histograms=histograms,
            params_used=AnalysisParams.from_dict(data["params_used"]),
            engine_version=data["engine_version"],
        )

    def to_dict(self) -> dict:
        return {
            "topic_id": self.topic_id,
            "concepts": [c.to_dict() for c in self.concepts],
            "mentions_by_article": {
                article_id: [
                    {"mention": m.to_dict(), "polarity": p.to_dict()} for m, p in pairs
                ]
                for article_id, pairs in sorted(self.mentions_by_article.items())
            },
            "histograms": {
                article_id: h.to_dict() for article_id, h in sorted(self.histograms.items())
            },
            "params_used": self.params_used.to_dict(),
            "engine_version": self.engine_version,
        }


def _dump_json(data: dict) -> str:
    return json.dumps(data, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


class Store:
    """File-backed store rooted at a directory; creates it lazily on first write."""

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)

    # -- paths -------------------------------------------------------------

    def _topic_dir(self, topic_id: str) -> Path:
        return self.root / "topics" / topic_id

    def _config_path(self, topic_id: str) -> Path:
        return self._topic_dir(topic_id) / "config.json"

    def _article_path(self, topic_id: str, article_id: str) -> Path:
        return self._topic_dir(topic_id) / "articles" / f"{article_id}.json"

    def _bundle_path(self, topic_id: str) -> Path:
        return self._topic_dir(topic_id) / "analysis" / "bundle.json"

    def _write_atomic(self, path: Path, text: str) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        try:
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(text)
            os.replace(tmp, path)
        except OSError as exc:
            raise IOFailure(f"failed writing {path}: {exc}") from exc

    def _read_json(self, path: Path) -> dict:
        try:
            with open(path, encoding="utf-8") as handle:
                return json.load(handle)
        except OSError as exc:
            raise IOFailure(f"failed reading {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise DataError(f"corrupt JSON at {path}: {exc}") from exc

    # -- topics ------------------------------------------------------------

    def put_topic(self, config: TopicConfig) -> None:
        self._write_atomic(self._config_path(config.topic_id), _dump_json(config.to_dict()))

    def get_topic(self, topic_id: str) -> TopicConfig:
        path = self._config_path(topic_id)
        if not path.exists():
            raise UnknownTopicError(topic_id)
        return TopicConfig.from_dict(self._read_json(path))

    def list_topics(self) -> list[str]:
        topics_dir = self.root / "topics"
        if not topics_dir.is_dir():
            return []
        return sorted(
            entry.name
            for entry in topics_dir.iterdir()
            if entry.is_dir() and (entry / "config.json").exists()
        )

    # -- articles ----------------------------------------------------------

    def put_article(self, article: Article) -> str:
        """Store an article; idempotent (same content hashes to the same id)."""
        if not self._config_path(article.topic_id).exists():
            raise UnknownTopicError(article.topic_id)
        path = self._article_path(article.topic_id, article.article_id)
        if not path.exists():
            self._write_atomic(path, _dump_json(article.to_dict()))
        return article.article_id

    def has_article(self, topic_id: str, article_id: str) -> bool:
        return self._article_path(topic_id, article_id).exists()

    def load_topic(self, topic_id: str) -> tuple[TopicConfig, list[Article]]:
        """All stored articles for a topic, sorted ascending by article_id."""
        config = self.get_topic(topic_id)
        articles_dir = self._topic_dir(topic_id) / "articles"
        articles: list[Article] = []
        if articles_dir.is_dir():
            for path in sorted(articles_dir.glob("*.json")):
                articles.append(Article.from_dict(self._read_json(path)))
        articles.sort(key=lambda a: a.article_id)
        return config, articles

    def find_article(self, article_id: str) -> tuple[str, Article]:
        """Locate an article by id across all topics."""
        for topic_id in self.list_topics():
            path = self._article_path(topic_id, article_id)
            if path.exists():
                return topic_id, Article.from_dict(self._read_json(path))
        raise UnknownArticleError(article_id)

    # -- analysis bundles ----------------------------------------------------

    def put_bundle(self, bundle: AnalysisBundle) -> None:
        config = self.get_topic(bundle.topic_id)
        del config
        bundle.validate()
        _, articles = self.load_topic(bundle.topic_id)
        known = {a.article_id for a in articles}
        referenced = set(bundle.mentions_by_article) | set(bundle.histograms)
        unknown = referenced - known
        if unknown:
            raise DataError(
                f"bundle references article ids not in the store: {sorted(unknown)}"
            )
        self._write_atomic(self._bundle_path(bundle.topic_id), _dump_json(bundle.to_dict()))

    def get_bundle(self, topic_id: str) -> AnalysisBundle:
        if not self._config_path(topic_id).exists():
            raise UnknownTopicError(topic_id)
        path = self._bundle_path(topic_id)
        if not path.exists():
            raise NotAnalyzedError(topic_id)
        bundle = AnalysisBundle.from_dict(self._read_json(path))
        if bundle.engine_version != ENGINE_VERSION:
            raise StaleBundleError(topic_id, bundle.engine_version, ENGINE_VERSION)
        return bundle

    def has_bundle(self, topic_id: str) -> bool:
        return self._bundle_path(topic_id).exists()
