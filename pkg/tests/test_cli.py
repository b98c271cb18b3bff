from __future__ import annotations

import csv
import json
import os

import pytest

from newsalyze.cli import EXIT_DATA, EXIT_IO, EXIT_OK, EXIT_USAGE, main, store_lock
from newsalyze.errors import StoreLockedError
from newsalyze.store import AnalysisBundle, Store

from .conftest import FIXTURES


def run(*args: str) -> int:
    return main(list(args))


@pytest.fixture()
def store_dir(tmp_path):
    return tmp_path / "store"


def ingest(store_dir, topic: str = "deal") -> int:
    return run(
        "--store",
        str(store_dir),
        "ingest",
        "--topic",
        str(FIXTURES / "topics" / f"{topic}.json"),
        "--offline",
        str(FIXTURES),
    )


def test_ingest_stores_all_fixture_urls(store_dir, capsys):
    assert ingest(store_dir) == EXIT_OK
    err = capsys.readouterr().err
    assert err.count("[stored]") == 4
    _, articles = Store(store_dir).load_topic("deal")
    assert len(articles) == 4


def test_ingest_rerun_is_idempotent(store_dir, capsys):
    ingest(store_dir)
    capsys.readouterr()
    assert ingest(store_dir) == EXIT_OK
    err = capsys.readouterr().err
    assert err.count("[exists]") == 4
    assert err.count("[stored]") == 0
    _, articles = Store(store_dir).load_topic("deal")
    assert len(articles) == 4


def test_ingest_all_urls_failing_exits_nonzero(store_dir, tmp_path, capsys):
    config = {
        "topic_id": "ghost",
        "title": "Ghost",
        "sources": [{"outlet_name": "O", "url": "https://ghost.example/missing"}],
    }
    path = tmp_path / "ghost.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    code = run(
        "--store", str(store_dir), "ingest", "--topic", str(path), "--offline", str(FIXTURES)
    )
    assert code == EXIT_IO
    assert "[failed]" in capsys.readouterr().err


def test_ingest_malformed_config_is_data_error(store_dir, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    code = run("--store", str(store_dir), "ingest", "--topic", str(path))
    assert code == EXIT_DATA


def test_analyze_writes_bundle_and_prints_table(store_dir, capsys):
    ingest(store_dir)
    assert run("--store", str(store_dir), "analyze", "--topic", "deal") == EXIT_OK
    out = capsys.readouterr().out
    assert "concept" in out and "freq" in out
    assert "Trump" in out
    store = Store(store_dir)
    bundle = store.get_bundle("deal")
    bundle.validate()


def test_analyze_unknown_topic_is_data_error(store_dir):
    assert run("--store", str(store_dir), "analyze", "--topic", "nope") == EXIT_DATA


def test_analyze_top_k_overrides_config(store_dir):
    ingest(store_dir)
    assert run("--store", str(store_dir), "analyze", "--topic", "deal", "--top-k", "2") == EXIT_OK
    bundle = Store(store_dir).get_bundle("deal")
    assert bundle.params_used.top_k_concepts == 2
    for hist in bundle.histograms.values():
        assert len(hist.bars) == 2


def test_export_json_round_trips(store_dir, tmp_path):
    ingest(store_dir)
    run("--store", str(store_dir), "analyze", "--topic", "deal")
    out = tmp_path / "bundle.json"
    assert (
        run("--store", str(store_dir), "export", "--topic", "deal", "--format", "json", "--out", str(out))
        == EXIT_OK
    )
    restored = AnalysisBundle.from_dict(json.loads(out.read_text(encoding="utf-8")))
    assert restored == Store(store_dir).get_bundle("deal")


def test_export_csv_row_count(store_dir, tmp_path):
    ingest(store_dir)
    run("--store", str(store_dir), "analyze", "--topic", "deal")
    out = tmp_path / "bundle.csv"
    run("--store", str(store_dir), "export", "--topic", "deal", "--format", "csv", "--out", str(out))
    with open(out, encoding="utf-8") as handle:
        rows = list(csv.DictReader(handle))
    # one row per (article, top-k concept): 4 articles x 6 concepts
    assert len(rows) == 24
    assert set(rows[0]) == {
        "article_id",
        "outlet",
        "concept_id",
        "canonical_label",
        "count",
        "height",
        "mean_polarity",
        "color_class",
    }


def test_bad_format_flag_is_usage_error(store_dir, capsys):
    code = run(
        "--store", str(store_dir), "export", "--topic", "deal", "--format", "xml", "--out", "x"
    )
    assert code == EXIT_USAGE


def test_missing_subcommand_is_usage_error(capsys):
    assert run("--store", "s") == EXIT_USAGE


def test_export_before_analyze_is_data_error(store_dir, tmp_path):
    ingest(store_dir)
    code = run(
        "--store",
        str(store_dir),
        "export",
        "--topic",
        "deal",
        "--format",
        "json",
        "--out",
        str(tmp_path / "x.json"),
    )
    assert code == EXIT_DATA


def test_analyze_remote_scorer_via_endpoint(store_dir):
    from .stub_scorer import StubScorer

    ingest(store_dir)
    with StubScorer("valid") as stub:
        code = run(
            "--store",
            str(store_dir),
            "analyze",
            "--topic",
            "deal",
            "--scorer",
            "remote",
            "--endpoint",
            stub.endpoint,
        )
    assert code == EXIT_OK
    bundle = Store(store_dir).get_bundle("deal")
    scorers = {r.scorer for pairs in bundle.mentions_by_article.values() for _, r in pairs}
    assert scorers == {"remote"}


def test_analyze_remote_without_endpoint_is_usage_error(store_dir):
    ingest(store_dir)
    assert run("--store", str(store_dir), "analyze", "--topic", "deal", "--scorer", "remote") == EXIT_USAGE


def test_store_lock_excludes_second_writer(store_dir):
    store_dir.mkdir(parents=True)
    with store_lock(store_dir):
        with pytest.raises(StoreLockedError):
            with store_lock(store_dir):
                pass
    # released on exit
    with store_lock(store_dir):
        pass


def test_stale_lock_from_dead_pid_is_reclaimed(store_dir):
    store_dir.mkdir(parents=True)
    (store_dir / ".lock").write_text("999999999", encoding="utf-8")  # no such pid
    with store_lock(store_dir):
        assert (store_dir / ".lock").read_text(encoding="utf-8") == str(os.getpid())
