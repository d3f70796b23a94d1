#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""wulff: build and export the Wulff shape of an anisotropy."""

import logging

from geometry.convex_geometry import build_wulff
from handlers.base_handler import run_command
from utils.io_utils import write_json, write_off, write_svg
from utils.schemas import parse_phi

logger = logging.getLogger(__name__)


def cmd_wulff(args, ctx):
    phi = parse_phi(args.phi, args.dim)
    wulff = build_wulff(phi, args.n)

    out = ctx.record(args.output, "polytope") if args.output else ctx.path("wulff.json", "polytope")
    write_json(out, {**wulff.to_dict(), "volume": wulff.volume, "phi": phi.to_dict()})
    if wulff.dim == 2:
        write_svg(ctx.path("wulff.svg"), wulff, scale=args.scale, reproducible=ctx.reproducible)
    else:
        write_off(ctx.path("wulff.off"), wulff)

    print(f"volume {wulff.volume:.12g}")
    print(f"facets {len(wulff.normals)}")
    return 0


def register_wulff_handlers(subparsers):
    parser = subparsers.add_parser("wulff", help="construct the Wulff shape of an anisotropy")
    parser.add_argument("--phi", required=True, help="anisotropy description")
    parser.add_argument("--dim", type=int, default=None, choices=(2, 3))
    parser.add_argument("--n", type=int, default=None, help="sampled directions for smooth densities")
    parser.add_argument("-o", "--output", default=None, help="polytope JSON path")
    parser.add_argument("--scale", type=float, default=100.0, help="SVG pixels per unit")
    parser.set_defaults(func=lambda args: run_command("wulff", cmd_wulff, args))
