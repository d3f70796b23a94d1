#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""stability: asymmetry against deficit along a perturbation family."""

import logging
import math

from config import config
from handlers.base_handler import add_common_arguments, load_phi, run_command
from optimization.stability import FAMILIES, loglog_slope, stability_sweep
from utils.io_utils import write_csv, write_json, write_scatter_svg

logger = logging.getLogger(__name__)

COLUMNS = ["family", "param", "asymmetry", "deficit", "ratio", "tau_star"]


def cmd_stability(args, ctx):
    phi = load_phi(args)
    seed = config.DEFAULT_SEED if args.seed is None else args.seed
    seeds = [seed + k for k in range(args.seeds)] if args.seeds else None
    sweep = stability_sweep(phi, args.lam, args.volume, args.family, n=args.n, seed=seed, seeds=seeds,
                            n_directions=args.directions, jobs=args.jobs, backend=args.backend)

    write_csv(ctx.path("stability.csv", "table"), [r.to_row() for r in sweep.records], COLUMNS)
    usable = [r for r in sweep.records if r.ratio is not None and r.asymmetry > 0]
    if usable:
        write_scatter_svg(ctx.path("stability.svg", "plot"), [r.deficit for r in usable],
                          [r.asymmetry ** 2 for r in usable], "deficit", "asymmetry squared",
                          title=f"{args.family} perturbations")
    slope = loglog_slope(sweep.records)
    summary = {
        "phi": phi.to_dict(),
        "lambda": args.lam,
        "volume": args.volume,
        "family": args.family,
        "records": len(sweep.records),
        "c_hat": None if math.isnan(sweep.c_hat) else sweep.c_hat,
        "loglog_slope": None if math.isnan(slope) else slope,
        "reference_energy": sweep.reference_energy,
        "backend": sweep.records[0].backend if sweep.records else None,
    }
    write_json(ctx.path("summary.json", "report"), summary)

    print(f"records {len(sweep.records)}")
    print(f"C_hat {sweep.c_hat:.8g}")
    return 0


def register_stability_handlers(subparsers):
    parser = subparsers.add_parser("stability", help="empirical stability constant over a perturbation family")
    add_common_arguments(parser)
    parser.add_argument("--family", choices=FAMILIES, default="rect")
    parser.add_argument("--n", type=int, default=20, help="number of perturbation amplitudes")
    parser.add_argument("--seeds", type=int, default=0, help="noise family: repeat every amplitude over this many seeds")
    parser.add_argument("--directions", type=int, default=None, help="sampled directions for the reference shape")
    parser.add_argument("--backend", choices=("auto", "exact", "raster"), default=None)
    parser.set_defaults(func=lambda args: run_command("stability", cmd_stability, args))
