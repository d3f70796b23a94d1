#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Unit-cell shapes for the brute-force oracle."""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage
from shapely.geometry import box
from shapely.ops import unary_union

from geometry.errors import InvalidShape
from shapes.shapes_energy import EnergyBreakdown, SubstrateShape

logger = logging.getLogger(__name__)

_E1 = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])


@dataclass(frozen=True, eq=False)
class PixelShape:
    """
    Occupied unit cells, ``cells[row, col]`` with row 0 nearest the substrate.

    ``offset`` lifts the whole pattern: with offset 0 the bottom row rests on H.
    """

    cells: np.ndarray
    offset: int = 0

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=bool)
        if cells.ndim != 2 or not cells.any():
            raise InvalidShape("Pixel shape must be a non-empty 2D occupancy grid")
        if self.offset < 0:
            raise InvalidShape("Pixel shape cannot sit below the substrate")
        object.__setattr__(self, "cells", _crop(cells))
        _, components = ndimage.label(self.cells)
        if components != 1:
            raise InvalidShape(f"Pixel shape is not edge-connected ({components} components)")

    @classmethod
    def from_rows(cls, rows, offset=0):
        """Rows listed top first, as in the JSON form."""
        grid = [[ch == "1" for ch in row] for row in rows]
        if len({len(r) for r in grid}) != 1:
            raise InvalidShape("Pixel rows must have equal width")
        return cls(np.array(grid[::-1], dtype=bool), offset)

    @classmethod
    def from_cells(cls, coords, offset=0):
        """From a collection of (col, row) pairs."""
        coords = np.array(sorted(coords), dtype=int)
        coords -= coords.min(axis=0)
        grid = np.zeros((coords[:, 1].max() + 1, coords[:, 0].max() + 1), dtype=bool)
        grid[coords[:, 1], coords[:, 0]] = True
        return cls(grid, offset)

    @property
    def width(self):
        return int(self.cells.shape[1])

    @property
    def height(self):
        return int(self.cells.shape[0])

    @property
    def volume(self):
        return int(self.cells.sum())

    @property
    def rows(self):
        return ["".join("1" if c else "0" for c in row) for row in self.cells[::-1]]

    def to_dict(self):
        return {"width": self.width, "rows": self.rows, "offset": self.offset}

    def to_substrate_shape(self):
        rows, cols = np.nonzero(self.cells)
        union = unary_union([box(c, r + self.offset, c + 1, r + self.offset + 1) for r, c in zip(rows, cols)])
        return SubstrateShape.from_shapely(union.simplify(0))

    def __repr__(self):
        return f"PixelShape({'/'.join(self.rows)}, offset={self.offset})"


def _crop(cells):
    rows = np.flatnonzero(cells.any(axis=1))
    cols = np.flatnonzero(cells.any(axis=0))
    return cells[rows[0]:rows[-1] + 1, cols[0]:cols[-1] + 1].copy()


def pixel_edge_counts(shape):
    """
    Boundary unit edges per outward normal.

    Returns:
        dict with keys right, left, up, down and contact (bottom edges on H)
    """
    padded = np.pad(shape.cells, 1)
    inner = padded[1:-1, 1:-1]
    right = int((inner & ~padded[1:-1, 2:]).sum())
    left = int((inner & ~padded[1:-1, :-2]).sum())
    up = int((inner & ~padded[2:, 1:-1]).sum())
    down = int((inner & ~padded[:-2, 1:-1]).sum())
    contact = int(shape.cells[0].sum()) if shape.offset == 0 else 0
    return {"right": right, "left": left, "up": up, "down": down - contact, "contact": contact}


def pixel_energy(shape, phi, lam):
    """Edge-count form of the substrate energy for a pixel shape."""
    if phi.dim != 2:
        raise ValueError("Pixel energies need a planar anisotropy")
    counts = pixel_edge_counts(shape)
    weights = phi.evaluate(_E1)
    terms = [counts["right"] * weights[0], counts["left"] * weights[1],
             counts["up"] * weights[2], counts["down"] * weights[3]]
    free_surface = math.fsum(terms)
    free_perimeter = counts["right"] + counts["left"] + counts["up"] + counts["down"]
    contact = lam * counts["contact"]
    return EnergyBreakdown(free_surface=free_surface, contact=contact, total=free_surface + contact,
                           contact_measure=float(counts["contact"]), free_perimeter=float(free_perimeter))


def random_polyomino(rng, n_cells, offset=0):
    """Grow an edge-connected pixel shape one random neighbour at a time."""
    cells = {(0, 0)}
    while len(cells) < n_cells:
        frontier = sorted({(c + dc, r + dr) for c, r in cells for dc, dr in ((1, 0), (-1, 0), (0, 1), (0, -1))} - cells)
        cells.add(frontier[rng.integers(len(frontier))])
    return PixelShape.from_cells(cells, offset)
