#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""oracle: exhaustive minimum over small polyominoes."""

import logging

from handlers.base_handler import add_common_arguments, load_phi, run_command
from optimization.oracle import brute_force_pixels
from utils.io_utils import write_json

logger = logging.getLogger(__name__)


def cmd_oracle(args, ctx):
    phi = load_phi(args)
    if phi.dim != 2:
        raise ValueError("The pixel oracle is planar only")
    result = brute_force_pixels(phi, args.lam, args.cells)
    write_json(ctx.path("oracle.json", "report"),
               {**result.to_dict(), "phi": phi.to_dict(), "lambda": args.lam, "cells": args.cells})

    print(f"minimum {result.energy:.12g} over {result.n_shapes} placements")
    for shape in result.minimizers:
        print(f"  {shape.width}x{shape.height} offset {shape.offset}: {' / '.join(shape.rows)}")
    return 0


def register_oracle_handlers(subparsers):
    parser = subparsers.add_parser("oracle", help="brute-force minimum over polyominoes")
    add_common_arguments(parser, volume=False)
    parser.add_argument("--cells", type=int, required=True, help="number of unit cells (at most 10)")
    parser.set_defaults(func=lambda args: run_command("oracle", cmd_oracle, args))
