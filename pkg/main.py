#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import argparse
import logging
import os
import sys

from config import config
from database.database import init_db
from handlers import register_handlers

logger = logging.getLogger(__name__)

LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def _add_global_arguments(parser, default):
    parser.add_argument("--out", default=default(None), help="output directory for run artifacts")
    parser.add_argument("--seed", type=int, default=default(None), help=f"random seed (default {config.DEFAULT_SEED})")
    parser.add_argument("--jobs", type=int, default=default(config.JOBS), help="worker processes for trials and sweeps")
    parser.add_argument("--reproducible", action="store_true", default=default(False),
                        help="stable output directory and no timestamps in SVG files")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="winterbottom",
        description="Wulff and Winterbottom shapes, substrate energies and their numerical verification.")
    _add_global_arguments(parser, lambda value: value)
    subparsers = parser.add_subparsers(dest="command", required=True)
    register_handlers(subparsers)
    # the global flags may also follow the sub-command
    for sub in subparsers.choices.values():
        _add_global_arguments(sub, lambda value: argparse.SUPPRESS)
    return parser


def main(argv=None):
    """Parse the command line, run one sub-command and return its exit code."""
    logging.basicConfig(
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        level=LOG_LEVELS[config.LOG_LEVEL]
    )

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits with 2 on bad usage, which is also our config-error code
        return int(e.code or 0)
    if args.jobs is not None and args.jobs < 1:
        logger.error("--jobs must be a positive integer")
        return 2

    os.makedirs(config.DATA_DIR, exist_ok=True)
    try:
        init_db()
    except Exception as e:
        logger.error(f"Run archive unavailable: {e}")

    logger.debug(f"Running {args.command}")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
