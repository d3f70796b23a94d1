#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import sys
import os
import logging

import pytest

# Add parent directory to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

# Configure logging
logging.basicConfig(
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    level=logging.INFO
)
logger = logging.getLogger("database_test")

from config import config
from database import database


@pytest.fixture
def archive(tmp_path, monkeypatch):
    monkeypatch.setattr(config, "DB_PATH", str(tmp_path / "archive" / "runs.db"))
    database.init_db()
    return tmp_path


def test_run_lifecycle(archive):
    run_id = database.start_run("wulff", '{"phi": "pnorm:2"}', seed=7)
    assert run_id is not None
    assert database.add_artifact(run_id, "polytope", "/tmp/wulff.json") is not None
    assert database.finish_run(run_id, 0)

    runs = database.get_recent_runs()
    assert len(runs) == 1
    assert runs[0]["command"] == "wulff"
    assert runs[0]["seed"] == 7
    assert runs[0]["exit_code"] == 0
    assert runs[0]["finished_at"] >= runs[0]["started_at"]

    artifacts = database.get_run_artifacts(run_id)
    assert [(a["kind"], a["path"]) for a in artifacts] == [("polytope", "/tmp/wulff.json")]


def test_recent_runs_are_newest_first(archive):
    ids = [database.start_run(f"cmd{k}", "{}") for k in range(5)]
    recent = database.get_recent_runs(limit=3)
    assert [r["id"] for r in recent] == ids[::-1][:3]


def test_missing_run_id_is_ignored(archive):
    assert database.finish_run(None, 0) is False
    assert database.add_artifact(None, "table", "x.csv") is None
    assert database.finish_run(12345, 0) is False


def test_unavailable_archive_is_not_fatal(tmp_path, monkeypatch):
    # a directory where the database file should be
    blocked = tmp_path / "blocked.db"
    blocked.mkdir()
    monkeypatch.setattr(config, "DB_PATH", str(blocked))
    assert database.start_run("wulff", "{}") is None
    assert database.get_recent_runs() == []
