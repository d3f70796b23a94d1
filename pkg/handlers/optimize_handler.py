#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""optimize: numerical minimization from random starts checked against the Winterbottom shape."""

import logging

from config import config
from geometry.errors import ConfigError
from handlers.base_handler import EXIT_VERIFICATION, run_command
from optimization.optimizer import verify_theorem_main
from utils.io_utils import write_csv, write_json, write_svg
from utils.schemas import load_run_config, parse_phi

logger = logging.getLogger(__name__)


def _settings(args):
    """Settings from the run-config file when given, else from the flags."""
    if args.config:
        run = load_run_config(args.config)
        return {"phi": run.phi.build(), "lam": run.lambda_, "volume": run.volume, "nvertices": run.nvertices,
                "trials": run.trials, "seed": run.seed}
    if args.phi is None or args.lam is None:
        raise ConfigError("optimize needs --phi and --lambda, or --config")
    return {"phi": parse_phi(args.phi, args.dim), "lam": args.lam, "volume": args.volume,
            "nvertices": args.nvertices, "trials": args.trials,
            "seed": config.DEFAULT_SEED if args.seed is None else args.seed}


def cmd_optimize(args, ctx):
    settings = _settings(args)
    phi, lam, volume = settings["phi"], settings["lam"], settings["volume"]
    seeds = [settings["seed"] + k for k in range(settings["trials"])]
    options = {"max_iter": args.max_iter} if phi.is_smooth else {"schedule": (args.t0, args.cooling, args.steps)}

    report = verify_theorem_main(phi, lam, volume, seeds=seeds, n_vertices=settings["nvertices"],
                                 jobs=args.jobs, **options)

    for result in report.results:
        rows = [{"iteration": i, "energy": e} for i, e in enumerate(result.trace)]
        write_csv(ctx.path(f"trace_seed{result.seed}.csv", "trace"), rows, ["iteration", "energy"])
    best = min(report.results, key=lambda r: r.energy)
    write_json(ctx.path("final_shape.json", "shape"), best.shape.to_dict())
    write_svg(ctx.path("final_shape.svg"), best.shape, scale=args.scale, reproducible=ctx.reproducible)
    write_json(ctx.path("report.json", "report"), {**report.to_dict(), "phi": phi.to_dict(), "lambda": lam})

    print(f"reference {report.reference:.10g}")
    print(f"median {report.median_energy:.10g}  min {report.min_energy:.10g}")
    print(f"best asymmetry {report.best_asymmetry:.3e}")
    print("PASS" if report.passed else "FAIL")
    return 0 if report.passed else EXIT_VERIFICATION


def register_optimize_handlers(subparsers):
    parser = subparsers.add_parser("optimize", help="minimize the energy over polygons and verify optimality")
    parser.add_argument("--phi", default=None, help="anisotropy description")
    parser.add_argument("--dim", type=int, default=None, choices=(2,))
    parser.add_argument("--lambda", dest="lam", type=float, default=None, help="relative adhesion coefficient")
    parser.add_argument("--volume", type=float, default=1.0)
    parser.add_argument("--config", default=None, help="run-config JSON (overrides the flags above)")
    parser.add_argument("--nvertices", type=int, default=64)
    parser.add_argument("--trials", type=int, default=5)
    parser.add_argument("--max-iter", dest="max_iter", type=int, default=100_000, help="descent iteration cap")
    parser.add_argument("--t0", type=float, default=0.05, help="annealing start temperature")
    parser.add_argument("--cooling", type=float, default=0.9999, help="annealing cooling factor")
    parser.add_argument("--steps", type=int, default=200_000, help="annealing steps")
    parser.add_argument("--scale", type=float, default=100.0, help="SVG pixels per unit")
    parser.set_defaults(func=lambda args: run_command("optimize", cmd_optimize, args))
