#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""history: list archived runs."""

import datetime
import logging

from database import database

logger = logging.getLogger(__name__)


def cmd_history(args):
    runs = database.get_recent_runs(args.limit)
    if not runs:
        print("No archived runs.")
        return 0
    for run in runs:
        started = datetime.datetime.fromtimestamp(run["started_at"]).isoformat(timespec="seconds")
        code = "running" if run["exit_code"] is None else f"exit {run['exit_code']}"
        print(f"#{run['id']:<5} {started}  {run['command']:<13} seed={run['seed']}  {code}")
        if args.artifacts:
            for artifact in database.get_run_artifacts(run["id"]):
                print(f"        {artifact['kind']:<8} {artifact['path']}")
    return 0


def register_history_handlers(subparsers):
    parser = subparsers.add_parser("history", help="list archived runs")
    parser.add_argument("--limit", type=int, default=20)
    parser.add_argument("--artifacts", action="store_true", help="also list each run's files")
    parser.set_defaults(func=cmd_history)
