#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Raster approximations of planar areas drawn with Pillow."""

import logging
import math

import numpy as np
from PIL import Image, ImageDraw
from shapely.geometry import MultiPolygon

logger = logging.getLogger(__name__)


def _parts(geometry):
    if isinstance(geometry, MultiPolygon):
        return list(geometry.geoms)
    return [geometry]


def rasterize(geometry, origin, cell, size):
    """
    Boolean mask of the cells whose centre lies in geometry.

    Args:
        geometry: shapely Polygon or MultiPolygon
        origin: lower-left corner of the grid
        cell: cell size
        size: (width, height) in cells
    """
    image = Image.new("1", size, 0)
    draw = ImageDraw.Draw(image)
    ox, oy = origin

    def to_pixels(coords):
        return [((x - ox) / cell - 0.5, (y - oy) / cell - 0.5) for x, y in coords]

    for part in _parts(geometry):
        draw.polygon(to_pixels(part.exterior.coords), fill=1)
        for hole in part.interiors:
            draw.polygon(to_pixels(hole.coords), fill=0)
    return np.array(image, dtype=bool)


def raster_symmetric_difference(a, b, cell):
    """
    Area of a xor b counted on a grid of the given cell size.

    Returns:
        (area, error bound 4 * cell * (perimeter(a) + perimeter(b)))
    """
    if cell <= 0:
        raise ValueError(f"Cell size must be positive, got {cell}")
    minx = min(a.bounds[0], b.bounds[0]) - 2 * cell
    miny = min(a.bounds[1], b.bounds[1]) - 2 * cell
    maxx = max(a.bounds[2], b.bounds[2]) + 2 * cell
    maxy = max(a.bounds[3], b.bounds[3]) + 2 * cell
    size = (int(math.ceil((maxx - minx) / cell)), int(math.ceil((maxy - miny) / cell)))
    mask_a = rasterize(a, (minx, miny), cell, size)
    mask_b = rasterize(b, (minx, miny), cell, size)
    area = float(np.count_nonzero(mask_a ^ mask_b)) * cell * cell
    bound = 4 * cell * (a.length + b.length)
    logger.debug(f"Raster symmetric difference on {size[0]}x{size[1]} cells: {area:.6g} (+/- {bound:.3g})")
    return area, bound
