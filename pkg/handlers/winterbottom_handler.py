#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""winterbottom: the equilibrium shape on the substrate at a given volume."""

import logging

from geometry.convex_geometry import (Regime, build_wulff, classify_regime, winterbottom,
                                      winterbottom_with_volume, young_law_check)
from geometry.errors import CompleteWetting, InvalidShape, NotDifferentiable
from handlers.base_handler import add_common_arguments, load_phi, run_command
from shapes.shapes_energy import SubstrateShape, energy_F
from utils.io_utils import write_json, write_off, write_svg

logger = logging.getLogger(__name__)


def cmd_winterbottom(args, ctx):
    phi = load_phi(args)
    regime = classify_regime(phi, args.lam)
    if regime.label is Regime.COMPLETE_WETTING:
        raise CompleteWetting(f"complete wetting: lambda = {args.lam} <= -phi(e_d) = {regime.lower:.6g}; "
                              f"the energy is unbounded below and no minimizer exists")

    wulff = build_wulff(phi, args.n)
    truncated = winterbottom(wulff, args.lam)
    polytope = winterbottom_with_volume(truncated, args.lam, args.volume)
    shape = SubstrateShape.from_polytope(polytope)
    energy = energy_F(shape, phi, args.lam)

    young = None
    if regime.label is Regime.PARTIAL_WETTING:
        try:
            young = young_law_check(phi, polytope, args.lam)
        except (NotDifferentiable, InvalidShape) as e:
            logger.info(f"Young's law residual not reported: {e}")

    report = {
        "phi": phi.to_dict(),
        "lambda": args.lam,
        "volume": args.volume,
        "regime": regime.label.value,
        "thresholds": list(regime.thresholds),
        "energy": energy.to_dict(),
        "young_residual": young,
    }
    if regime.label is Regime.COMPLETE_DRYING:
        # any vertical lift of the Wulff shape is a minimizer
        report["bottom_facet_measure"] = polytope.bottom_facet_measure()

    write_json(ctx.path("shape.json", "shape"), shape.to_dict())
    write_json(ctx.path("report.json", "report"), report)
    if polytope.dim == 2:
        write_svg(ctx.path("shape.svg"), polytope, scale=args.scale, reproducible=ctx.reproducible)
    else:
        write_off(ctx.path("shape.off"), polytope)

    print(f"regime {regime.label.value}")
    print(f"energy {energy.total:.12g} (free {energy.free_surface:.12g}, contact {energy.contact:.12g})")
    if young is not None:
        print(f"young residual {young:.3e}")
    return 0


def register_winterbottom_handlers(subparsers):
    parser = subparsers.add_parser("winterbottom", help="Winterbottom shape of a given volume")
    add_common_arguments(parser)
    parser.add_argument("--n", type=int, default=None, help="sampled directions for smooth densities")
    parser.add_argument("--scale", type=float, default=100.0, help="SVG pixels per unit")
    parser.set_defaults(func=lambda args: run_command("winterbottom", cmd_winterbottom, args))
