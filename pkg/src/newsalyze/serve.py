"""Read-only HTTP API over the store for the reader UI and other clients.

Responses are pure functions of the store snapshot: same store state yields
byte-identical bodies (payloads carry no timestamps). The snapshot is
reloaded when the store's on-disk fingerprint changes or on an explicit
local-only POST /api/reload. Payload shapes are published as JSON schemas
under newsalyze/schemas/.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse
from fastapi.staticfiles import StaticFiles

from .aggregate import color_class_for, overview
from .concepts import Concept, rank
from .errors import NotAnalyzedError, StaleBundleError
from .store import AnalysisBundle, Article, Store, TopicConfig

_LOCAL_HOSTS = frozenset({"127.0.0.1", "::1", "localhost", "testclient"})


@dataclass(frozen=True)
class _TopicSnapshot:
    config: TopicConfig
    articles: tuple[Article, ...]
    bundle: AnalysisBundle | None
    bundle_error: str | None  # "not_analyzed" or "stale_bundle"


class Snapshot:
    """Immutable view of the whole store, plus the fingerprint it was read at."""

    def __init__(self, topics: dict[str, _TopicSnapshot], fingerprint: tuple) -> None:
        self.topics = topics
        self.fingerprint = fingerprint
        self.article_topic: dict[str, str] = {}
        for topic_id, snap in topics.items():
            for article in snap.articles:
                self.article_topic[article.article_id] = topic_id


def _store_fingerprint(root: Path) -> tuple:
    entries = []
    topics_dir = root / "topics"
    if topics_dir.is_dir():
        for path in sorted(topics_dir.rglob("*.json")):
            try:
                stat = path.stat()
            except OSError:
                continue
            entries.append((str(path.relative_to(root)), stat.st_mtime_ns, stat.st_size))
    return tuple(entries)


def load_snapshot(store: Store) -> Snapshot:
    fingerprint = _store_fingerprint(store.root)
    topics: dict[str, _TopicSnapshot] = {}
    for topic_id in store.list_topics():
        config, articles = store.load_topic(topic_id)
        bundle = None
        bundle_error = None
        try:
            bundle = store.get_bundle(topic_id)
        except NotAnalyzedError:
            bundle_error = "not_analyzed"
        except StaleBundleError:
            bundle_error = "stale_bundle"
        if bundle is not None and set(bundle.histograms) != {a.article_id for a in articles}:
            # articles ingested since the last analysis: bundle no longer covers the topic
            bundle = None
            bundle_error = "stale_bundle"
        topics[topic_id] = _TopicSnapshot(
            config=config,
            articles=tuple(articles),
            bundle=bundle,
            bundle_error=bundle_error,
        )
    return Snapshot(topics, fingerprint)


# -- payload builders (pure) --------------------------------------------------


def _top_concepts(bundle: AnalysisBundle) -> list[Concept]:
    return rank(bundle.concepts, bundle.params_used.top_k_concepts)


def topics_payload(snapshot: Snapshot) -> list[dict]:
    return [
        {
            "topic_id": topic_id,
            "title": snap.config.title,
            "article_count": len(snap.articles),
            "analyzed": snap.bundle is not None,
        }
        for topic_id, snap in sorted(snapshot.topics.items())
    ]


def overview_payload(snap: _TopicSnapshot) -> dict:
    bundle = snap.bundle
    assert bundle is not None
    top = _top_concepts(bundle)
    articles = []
    for snippet, histogram in overview(snap.articles, bundle.histograms):
        articles.append(
            {
                "article_id": snippet.article_id,
                "outlet": snippet.outlet,
                "title": snippet.title,
                "published": snippet.published,
                "snippet": snippet.snippet,
                "histogram": histogram.to_dict(),
            }
        )
    return {
        "topic_id": snap.config.topic_id,
        "title": snap.config.title,
        "concepts": [
            {
                "concept_id": c.concept_id,
                "canonical_label": c.canonical_label,
                "frequency": c.frequency,
            }
            for c in top
        ],
        "articles": articles,
    }


def annotated_payload(snap: _TopicSnapshot, article: Article) -> dict:
    bundle = snap.bundle
    assert bundle is not None
    neutral_band = bundle.params_used.neutral_band
    top_ids = {c.concept_id for c in _top_concepts(bundle)}
    concept_of_mention: dict[str, Concept] = {}
    for concept in bundle.concepts:
        if concept.concept_id in top_ids:
            for mention_id in concept.members:
                concept_of_mention[mention_id] = concept

    annotations = []
    for mention, result in bundle.mentions_by_article.get(article.article_id, ()):
        concept = concept_of_mention.get(mention.mention_id)
        if concept is None:
            continue
        annotations.append(
            {
                "span": list(mention.span),
                "concept_id": concept.concept_id,
                "canonical_label": concept.canonical_label,
                "score": result.score,
                "label": result.label,
                "color_class": color_class_for(result.score, neutral_band),
            }
        )
    annotations.sort(key=lambda a: a["span"])
    return {
        "article_id": article.article_id,
        "topic_id": article.topic_id,
        "outlet": article.outlet,
        "url": article.url,
        "title": article.title,
        "published": article.published,
        "body": article.body,
        "annotations": annotations,
    }


# -- app ----------------------------------------------------------------------


def _json_response(payload, status_code: int = 200) -> Response:
    body = json.dumps(payload, ensure_ascii=False, sort_keys=True, separators=(",", ":"))
    return Response(content=body, status_code=status_code, media_type="application/json")


def _error(status_code: int, code: str, message: str) -> Response:
    return _json_response({"error": code, "message": message}, status_code)


def create_app(
    store: Store | str | Path,
    *,
    ui_dir: str | Path | None = None,
    cors_origins: tuple[str, ...] = ("*",),
) -> FastAPI:
    if not isinstance(store, Store):
        store = Store(store)

    app = FastAPI(title="newsalyze", docs_url=None, redoc_url=None)
    if cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(cors_origins),
            allow_methods=["GET", "POST"],
            allow_headers=["*"],
        )

    state = {"snapshot": load_snapshot(store)}
    lock = threading.Lock()

    def current_snapshot(force: bool = False) -> Snapshot:
        with lock:
            if force or state["snapshot"].fingerprint != _store_fingerprint(store.root):
                state["snapshot"] = load_snapshot(store)
            return state["snapshot"]

    @app.get("/api/topics")
    def list_topics() -> Response:
        return _json_response(topics_payload(current_snapshot()))

    @app.get("/api/topics/{topic_id}/overview")
    def topic_overview(topic_id: str) -> Response:
        snapshot = current_snapshot()
        snap = snapshot.topics.get(topic_id)
        if snap is None:
            return _error(404, "unknown_topic", f"no topic {topic_id!r}")
        if snap.bundle is None:
            return _error(409, snap.bundle_error or "not_analyzed", f"topic {topic_id!r} has no analysis bundle")
        return _json_response(overview_payload(snap))

    @app.get("/api/articles/{article_id}/annotated")
    def annotated_article(article_id: str) -> Response:
        snapshot = current_snapshot()
        topic_id = snapshot.article_topic.get(article_id)
        if topic_id is None:
            return _error(404, "unknown_article", f"no article {article_id!r}")
        snap = snapshot.topics[topic_id]
        if snap.bundle is None:
            return _error(409, snap.bundle_error or "not_analyzed", f"topic {topic_id!r} has no analysis bundle")
        article = next(a for a in snap.articles if a.article_id == article_id)
        return _json_response(annotated_payload(snap, article))

    @app.post("/api/reload")
    def reload_snapshot(request: Request) -> Response:
        host = request.client.host if request.client else ""
        if host not in _LOCAL_HOSTS:
            return _error(403, "forbidden", "reload is local-only")
        current_snapshot(force=True)
        return _json_response({"reloaded": True})

    if ui_dir is not None:
        index = Path(ui_dir) / "index.html"

        @app.get("/topic/{topic_id}")
        def ui_topic(topic_id: str) -> FileResponse:
            return FileResponse(index)

        @app.get("/article/{article_id}")
        def ui_article(article_id: str) -> FileResponse:
            return FileResponse(index)

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
