from __future__ import annotations

import json
from pathlib import Path

import pytest

from newsalyze.pipeline import analyze_topic, ingest_topic
from newsalyze.store import Store, TopicConfig

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"
TOPIC_IDS = ("deal", "summit")


def load_topic_config(topic_id: str) -> TopicConfig:
    data = json.loads((FIXTURES / "topics" / f"{topic_id}.json").read_text(encoding="utf-8"))
    return TopicConfig.from_dict(data)


def build_analyzed_store(root: Path) -> Store:
    """Ingest and analyze the whole fixture corpus into a fresh store."""
    store = Store(root)
    for topic_id in TOPIC_IDS:
        ingest_topic(store, load_topic_config(topic_id), FIXTURES)
        analyze_topic(store, topic_id)
    return store


@pytest.fixture(scope="session")
def fixture_store(tmp_path_factory) -> Store:
    return build_analyzed_store(tmp_path_factory.mktemp("store"))


@pytest.fixture(scope="session")
def expected() -> dict[str, dict]:
    return {
        topic_id: json.loads(
            (FIXTURES / "expected" / f"{topic_id}.json").read_text(encoding="utf-8")
        )
        for topic_id in TOPIC_IDS
    }


def outlet_index(store: Store, topic_id: str) -> dict[str, str]:
    """outlet name -> article_id for one topic."""
    _, articles = store.load_topic(topic_id)
    return {a.outlet: a.article_id for a in articles}
