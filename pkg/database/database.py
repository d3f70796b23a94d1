#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Run archive: one row per command-line run and one per artifact it wrote."""

import os
import sqlite3
import logging
import time
from contextlib import contextmanager
from config import config

logger = logging.getLogger(__name__)


def init_db():
    """Initialize the archive tables if they don't exist."""
    directory = os.path.dirname(config.DB_PATH)
    if directory:
        os.makedirs(directory, exist_ok=True)

    try:
        with get_connection() as conn:
            cursor = conn.cursor()

            cursor.execute('''
                CREATE TABLE IF NOT EXISTS runs (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    command TEXT NOT NULL,
                    config_json TEXT NOT NULL,
                    seed INTEGER,
                    exit_code INTEGER,
                    started_at REAL NOT NULL,
                    finished_at REAL
                )
            ''')

            cursor.execute('''
                CREATE TABLE IF NOT EXISTS artifacts (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    run_id INTEGER NOT NULL,
                    kind TEXT NOT NULL,
                    path TEXT NOT NULL,
                    FOREIGN KEY (run_id) REFERENCES runs (id) ON DELETE CASCADE
                )
            ''')

            cursor.execute("PRAGMA foreign_keys = ON")

            conn.commit()
            logger.debug(f"Run archive ready at {config.DB_PATH}")
    except sqlite3.Error as e:
        logger.error(f"Error initializing run archive: {e}")
        raise


@contextmanager
def get_connection():
    """Context manager for archive connections."""
    connection = None
    try:
        connection = sqlite3.connect(config.DB_PATH)
        connection.row_factory = sqlite3.Row
        yield connection
    except sqlite3.Error as e:
        logger.error(f"Database error: {e}")
        raise
    finally:
        if connection:
            connection.close()


def start_run(command, config_json, seed=None):
    """Record the start of a run and return its id (None if the archive is unavailable)."""
    try:
        with get_connection() as conn:
            cursor = conn.cursor()
            cursor.execute(
                "INSERT INTO runs (command, config_json, seed, started_at) VALUES (?, ?, ?, ?)",
                (command, config_json, seed, time.time())
            )
            conn.commit()
            return cursor.lastrowid
    except sqlite3.Error as e:
        logger.error(f"Error recording run start: {e}")
        return None


def finish_run(run_id, exit_code):
    if run_id is None:
        return False
    try:
        with get_connection() as conn:
            cursor = conn.cursor()
            cursor.execute(
                "UPDATE runs SET exit_code = ?, finished_at = ? WHERE id = ?",
                (exit_code, time.time(), run_id)
            )
            conn.commit()
            return cursor.rowcount == 1
    except sqlite3.Error as e:
        logger.error(f"Error recording run end: {e}")
        return False


def add_artifact(run_id, kind, path):
    if run_id is None:
        return None
    try:
        with get_connection() as conn:
            cursor = conn.cursor()
            cursor.execute(
                "INSERT INTO artifacts (run_id, kind, path) VALUES (?, ?, ?)",
                (run_id, kind, path)
            )
            conn.commit()
            return cursor.lastrowid
    except sqlite3.Error as e:
        logger.error(f"Error adding artifact: {e}")
        return None


def get_recent_runs(limit=20):
    """Most recent runs first."""
    try:
        with get_connection() as conn:
            cursor = conn.cursor()
            cursor.execute("SELECT * FROM runs ORDER BY id DESC LIMIT ?", (limit,))
            return cursor.fetchall()
    except sqlite3.Error as e:
        logger.error(f"Error getting runs: {e}")
        return []


def get_run_artifacts(run_id):
    try:
        with get_connection() as conn:
            cursor = conn.cursor()
            cursor.execute("SELECT * FROM artifacts WHERE run_id = ? ORDER BY id", (run_id,))
            return cursor.fetchall()
    except sqlite3.Error as e:
        logger.error(f"Error getting artifacts: {e}")
        return []
