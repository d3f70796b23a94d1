#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Handlers initialization module."""

from handlers.wulff_handler import register_wulff_handlers
from handlers.winterbottom_handler import register_winterbottom_handlers
from handlers.optimize_handler import register_optimize_handlers
from handlers.oracle_handler import register_oracle_handlers
from handlers.stability_handler import register_stability_handlers
from handlers.wetting_handler import register_wetting_handlers
from handlers.history_handler import register_history_handlers


def register_handlers(subparsers):
    """Register all sub-commands."""
    register_wulff_handlers(subparsers)
    register_winterbottom_handlers(subparsers)
    register_optimize_handlers(subparsers)
    register_oracle_handlers(subparsers)
    register_stability_handlers(subparsers)
    register_wetting_handlers(subparsers)
    register_history_handlers(subparsers)
