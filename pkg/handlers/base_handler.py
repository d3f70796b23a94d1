#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Shared plumbing for the command handlers: exit codes, arguments, archiving."""

import datetime
import logging
import os
import traceback

from config import config
from database import database
from geometry.errors import (CompleteWetting, ConfigError, InvalidShape, NonCoercive, NotDifferentiable,
                             NumericalDegeneracy, OracleTooLarge, RegimeError, Unbounded)
from utils.io_utils import dumps, ensure_dir
from utils.schemas import parse_phi

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_CONSTRUCTION = 3
EXIT_COMPLETE_WETTING = 4
EXIT_VERIFICATION = 5


class RunContext:
    """Output directory and archive entry of one command run."""

    def __init__(self, command, args, run_id=None):
        self.command = command
        self.args = args
        self.run_id = run_id
        self.reproducible = bool(getattr(args, "reproducible", False))
        if getattr(args, "out", None):
            out_dir = args.out
        elif self.reproducible:
            out_dir = os.path.join(config.RUNS_DIR, command)
        else:
            stamp = datetime.datetime.now().strftime("%Y%m%d-%H%M%S")
            out_dir = os.path.join(config.RUNS_DIR, f"{command}-{stamp}")
        self.out_dir = out_dir

    def path(self, filename, kind=None):
        """Path of an artifact in the output directory, recorded in the archive."""
        ensure_dir(self.out_dir)
        return self.record(os.path.join(self.out_dir, filename), kind)

    def record(self, path, kind=None):
        directory = os.path.dirname(path)
        if directory:
            ensure_dir(directory)
        database.add_artifact(self.run_id, kind or os.path.splitext(path)[1].lstrip("."), path)
        return path


def add_common_arguments(parser, volume=True):
    parser.add_argument("--phi", required=True,
                        help="anisotropy: pnorm:P, weighted:[[..]], support:[[..]], crystalline:[[..]], JSON or file")
    parser.add_argument("--dim", type=int, default=None, choices=(2, 3), help="dimension (default from --phi, else 2)")
    parser.add_argument("--lambda", dest="lam", type=float, required=True, help="relative adhesion coefficient")
    if volume:
        parser.add_argument("--volume", type=float, default=1.0, help="target volume (default 1)")


def load_phi(args):
    return parse_phi(args.phi, getattr(args, "dim", None))


def _archived_config(args):
    return dumps({k: v for k, v in vars(args).items() if not callable(v)})


def run_command(command, func, args):
    """
    Run one handler inside an archive entry and map failures to exit codes.

    Returns:
        int: process exit code
    """
    run_id = database.start_run(command, _archived_config(args), getattr(args, "seed", None))
    ctx = RunContext(command, args, run_id)
    try:
        code = func(args, ctx) or EXIT_OK
    except (ConfigError, OracleTooLarge) as e:
        logger.error(f"Configuration error: {e}")
        code = EXIT_CONFIG
    except CompleteWetting as e:
        logger.error(str(e))
        code = EXIT_COMPLETE_WETTING
    except RegimeError as e:
        logger.error(f"Regime error: {e}")
        code = EXIT_CONFIG
    except (Unbounded, NumericalDegeneracy, NonCoercive, InvalidShape, NotDifferentiable) as e:
        logger.error(f"Construction failed: {e}")
        code = EXIT_CONSTRUCTION
    except ValueError as e:
        logger.error(f"Invalid input: {e}")
        code = EXIT_CONFIG
    except Exception as e:
        logger.error(f"Unexpected error in {command}: {str(e)}")
        logger.error(traceback.format_exc())
        code = EXIT_FAILURE
    database.finish_run(run_id, code)
    logger.info(f"{command} finished with exit code {code}")
    return code
