#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Exhaustive search over small polyominoes."""

import logging
import math
from dataclasses import dataclass, field
from typing import List

from geometry.convex_geometry import build_wulff, winterbottom
from geometry.errors import OracleTooLarge
from shapes.pixel_shapes import PixelShape, pixel_energy

logger = logging.getLogger(__name__)

MAX_CELLS = 10
TIE_TOL = 1e-12
_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))


@dataclass
class OracleResult:
    energy: float
    minimizers: List[PixelShape] = field(default_factory=list)
    n_shapes: int = 0

    def to_dict(self):
        return {"energy": self.energy, "n_shapes": self.n_shapes,
                "minimizers": [p.to_dict() for p in self.minimizers]}


def _normalize(cells):
    min_c = min(c for c, _ in cells)
    min_r = min(r for _, r in cells)
    return frozenset((c - min_c, r - min_r) for c, r in cells)


def enumerate_polyominoes(n_cells):
    """
    All fixed polyominoes with n_cells cells, each translated so that its
    lowest row and leftmost column are 0.
    """
    if n_cells < 1:
        raise ValueError("Need at least one cell")
    if n_cells > MAX_CELLS:
        raise OracleTooLarge(f"Exhaustive search is limited to {MAX_CELLS} cells, got {n_cells}")
    level = {frozenset({(0, 0)})}
    for _ in range(n_cells - 1):
        grown = set()
        for shape in level:
            for c, r in shape:
                for dc, dr in _STEPS:
                    cell = (c + dc, r + dr)
                    if cell not in shape:
                        grown.add(_normalize(shape | {cell}))
        level = grown
    logger.debug(f"{len(level)} fixed polyominoes with {n_cells} cells")
    return sorted(level, key=sorted)


def brute_force_pixels(phi, lam, n_cells):
    """
    Minimum substrate energy over every polyomino of n_cells cells.

    Each polyomino is tried resting on H and lifted off it by one row; any
    higher lift has the same energy as the latter.

    Returns:
        OracleResult with every minimizer within TIE_TOL
    """
    polyominoes = enumerate_polyominoes(n_cells)
    best = math.inf
    scored = []
    for cells in polyominoes:
        for offset in (0, 1):
            shape = PixelShape.from_cells(cells, offset)
            energy = pixel_energy(shape, phi, lam).total
            scored.append((energy, shape))
            best = min(best, energy)
    minimizers = [shape for energy, shape in scored if energy <= best + TIE_TOL]
    logger.info(f"Oracle n={n_cells} lambda={lam}: minimum {best:.12g}, {len(minimizers)} minimizer(s)")
    return OracleResult(energy=best, minimizers=minimizers, n_shapes=len(scored))


def pixelized_winterbottom(phi, lam, n_cells):
    """
    The w x h rectangle of n_cells cells resting on H whose aspect ratio is
    closest (in log scale) to the Winterbottom rectangle of phi.
    """
    truncated = winterbottom(build_wulff(phi), lam)
    lo, hi = truncated.vertices.min(axis=0), truncated.vertices.max(axis=0)
    target = math.log((hi[0] - lo[0]) / (hi[1] - lo[1]))
    factors = [(w, n_cells // w) for w in range(1, n_cells + 1) if n_cells % w == 0]
    width, height = min(factors, key=lambda wh: (abs(math.log(wh[0] / wh[1]) - target), -wh[0]))
    return PixelShape.from_cells([(c, r) for c in range(width) for r in range(height)])
