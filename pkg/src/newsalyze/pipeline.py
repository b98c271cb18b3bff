"""End-to-end orchestration: ingest -> preprocess -> concepts -> polarity -> histograms."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import resources
from .aggregate import build_histograms
from .concepts import merge, rank
from .errors import NewsalyzeError
from .ingest import extract, fetch
from .preprocess import annotate_topic
from .store import AnalysisBundle, AnalysisParams, Store, TopicConfig
from .tsc import DEFAULT_REMOTE_TIMEOUT, score_topic

logger = logging.getLogger(__name__)

FETCH_CONCURRENCY = 4


@dataclass(frozen=True)
class IngestReport:
    url: str
    outlet: str
    article_id: str | None
    error: str | None
    created: bool = False

    @property
    def ok(self) -> bool:
        return self.article_id is not None


def ingest_topic(
    store: Store,
    config: TopicConfig,
    offline_dir: str | Path | None = None,
    *,
    max_in_flight: int = FETCH_CONCURRENCY,
) -> list[IngestReport]:
    """Fetch, extract, and store every configured URL; never raises per-URL."""
    store.put_topic(config)

    job = _FetchJob(config, offline_dir)
    if len(config.sources) > 1:
        with ThreadPoolExecutor(max_workers=max_in_flight) as pool:
            reports = list(pool.map(job, config.sources))
    else:
        reports = [job(source) for source in config.sources]

    final: list[IngestReport] = []
    for report, article in reports:
        if article is not None:
            created = not store.has_article(config.topic_id, article.article_id)
            store.put_article(article)
            report = IngestReport(
                url=report.url,
                outlet=report.outlet,
                article_id=report.article_id,
                error=None,
                created=created,
            )
        final.append(report)
    return final


class _FetchJob:
    """Fetch+extract worker; storing happens single-threaded in the caller."""

    def __init__(self, config: TopicConfig, offline_dir: str | Path | None) -> None:
        self.config = config
        self.offline_dir = offline_dir

    def __call__(self, source: tuple[str, str]):
        outlet, url = source
        try:
            raw = fetch(url, self.offline_dir)
            article = extract(raw, topic_id=self.config.topic_id, outlet=outlet)
        except NewsalyzeError as exc:
            logger.warning("ingest failed for %s: %s", url, exc)
            return IngestReport(url=url, outlet=outlet, article_id=None, error=str(exc)), None
        return (
            IngestReport(url=url, outlet=outlet, article_id=article.article_id, error=None),
            article,
        )


def analyze_topic(
    store: Store,
    topic_id: str,
    *,
    params: AnalysisParams | None = None,
    scorer: str = "lexicon",
    endpoint: str | None = None,
    include_self_tokens: bool = False,
    remote_timeout: float = DEFAULT_REMOTE_TIMEOUT,
    gazetteer: dict[str, str] | None = None,
    lexicon: dict[str, float] | None = None,
) -> AnalysisBundle:
    """Run the full analysis for one topic and persist the resulting bundle."""
    config, articles = store.load_topic(topic_id)
    effective = params or config.analysis_params

    bodies = {a.article_id: a.body for a in articles}
    annotations = annotate_topic(bodies, gazetteer or resources.load_gazetteer())
    all_mentions = [m for aid in sorted(annotations) for m in annotations[aid].mentions]

    results = score_topic(
        annotations,
        bodies,
        lexicon if lexicon is not None else resources.load_lexicon(),
        scorer=scorer,
        endpoint=endpoint,
        negation_window=effective.negation_window,
        neutral_band=effective.neutral_band,
        include_self_tokens=include_self_tokens,
        timeout=remote_timeout,
    )

    concepts = merge(all_mentions, effective.merge_threshold)
    top = rank(concepts, effective.top_k_concepts)
    histograms = build_histograms(
        [a.article_id for a in articles],
        top,
        results,
        neutral_band=effective.neutral_band,
        mention_article={m.mention_id: m.article_id for m in all_mentions},
    )

    bundle = AnalysisBundle(
        topic_id=topic_id,
        concepts=tuple(concepts),
        mentions_by_article={
            aid: tuple((m, results[m.mention_id]) for m in annotations[aid].mentions)
            for aid in sorted(annotations)
        },
        histograms=histograms,
        params_used=effective,
    )
    store.put_bundle(bundle)
    return bundle
