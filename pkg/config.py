#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Configuration module for the Winterbottom toolkit."""

import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

LOG_LEVELS = ("error", "info", "debug")
SYMDIFF_BACKENDS = ("auto", "exact", "raster")


class Config:
    """Configuration class for the toolkit."""

    # Logging
    LOG_LEVEL = os.getenv("WINTERBOTTOM_LOG", "info").strip().lower()

    # Directories
    BASE_DIR = os.path.dirname(os.path.abspath(__file__))
    DATA_DIR = os.getenv("WINTERBOTTOM_DATA_DIR", os.path.join(BASE_DIR, "DATA"))
    RUNS_DIR = os.path.join(DATA_DIR, "runs")

    # Run archive
    DB_PATH = os.getenv("WINTERBOTTOM_DB_PATH", os.path.join(DATA_DIR, "runs.db"))

    # Direction sampling for coercivity estimates
    DIRECTIONS_2D = int(os.getenv("WINTERBOTTOM_DIRECTIONS_2D", 4096))
    DIRECTIONS_3D = int(os.getenv("WINTERBOTTOM_DIRECTIONS_3D", 8192))

    # Direction sampling for Wulff constructions
    WULFF_DIRECTIONS_2D = int(os.getenv("WINTERBOTTOM_WULFF_DIRECTIONS_2D", 1024))
    WULFF_DIRECTIONS_3D = int(os.getenv("WINTERBOTTOM_WULFF_DIRECTIONS_3D", 2048))

    # Tolerances
    DEDUP_TOL = float(os.getenv("WINTERBOTTOM_DEDUP_TOL", 1e-12))
    CONSTRAINT_TOL = float(os.getenv("WINTERBOTTOM_CONSTRAINT_TOL", 1e-9))
    SNAP_TOL = 1e-12
    X0_MARGIN = 1e-6

    # Parallelism for trials and sweeps
    JOBS = int(os.getenv("WINTERBOTTOM_JOBS", 1))

    # Symmetric difference backend and raster resolution (diam / divisions)
    SYMDIFF_BACKEND = os.getenv("WINTERBOTTOM_SYMDIFF_BACKEND", "auto").strip().lower()
    RASTER_DIVISIONS = int(os.getenv("WINTERBOTTOM_RASTER_DIVISIONS", 2000))

    # Seed used when the command line does not pass one
    DEFAULT_SEED = int(os.getenv("WINTERBOTTOM_SEED", 7))


# Create a config instance
config = Config()

# Validate essential configuration
if config.LOG_LEVEL not in LOG_LEVELS:
    raise ValueError(f"WINTERBOTTOM_LOG must be one of {LOG_LEVELS}, got {config.LOG_LEVEL!r}")
if config.SYMDIFF_BACKEND not in SYMDIFF_BACKENDS:
    raise ValueError(f"WINTERBOTTOM_SYMDIFF_BACKEND must be one of {SYMDIFF_BACKENDS}")
if min(config.DIRECTIONS_2D, config.WULFF_DIRECTIONS_2D) < 8 or min(config.DIRECTIONS_3D, config.WULFF_DIRECTIONS_3D) < 32:
    raise ValueError("Direction counts must be at least 8 (2D) and 32 (3D). Please check your .env file.")
if config.JOBS < 1:
    raise ValueError("WINTERBOTTOM_JOBS must be a positive integer.")
