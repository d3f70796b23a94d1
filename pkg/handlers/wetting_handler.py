#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""wetting: energies of flat boxes spreading over the substrate."""

import logging

from geometry.convex_geometry import classify_regime
from handlers.base_handler import add_common_arguments, load_phi, run_command
from shapes.shapes_energy import wetting_demo, wetting_slope
from utils.io_utils import write_csv

logger = logging.getLogger(__name__)


def cmd_wetting(args, ctx):
    phi = load_phi(args)
    regime = classify_regime(phi, args.lam)
    rows = wetting_demo(phi, args.lam, args.volume, args.R)
    write_csv(ctx.path("wetting.csv", "table"), [{"R": r.R, "energy": r.energy} for r in rows], ["R", "energy"])

    print(f"regime {regime.label.value}")
    for row in rows:
        print(f"R={row.R:g}  F={row.energy:.12g}")
    print(f"slope {wetting_slope(rows, phi.dim):.6g} per unit of R^(d-1)")
    return 0


def register_wetting_handlers(subparsers):
    parser = subparsers.add_parser("wetting", help="energies of flat boxes of growing base")
    add_common_arguments(parser)
    parser.add_argument("--R", type=float, nargs="+", default=[1.0, 10.0, 100.0], help="box base sizes")
    parser.set_defaults(func=lambda args: run_command("wetting", cmd_wetting, args))
