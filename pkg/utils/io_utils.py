#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Reading and writing run artifacts: JSON, CSV, SVG and OFF files."""

import csv
import datetime
import json
import logging
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from geometry.convex_geometry import ConvexPolytope, polytope_from_points  # noqa: E402
from geometry.errors import InvalidShape  # noqa: E402
from shapes.pixel_shapes import PixelShape  # noqa: E402
from shapes.shapes_energy import SubstrateShape  # noqa: E402

logger = logging.getLogger(__name__)

plt.rcParams["svg.hashsalt"] = "winterbottom"


def ensure_dir(path):
    os.makedirs(path, exist_ok=True)
    return path


def _json_default(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def dumps(data):
    return json.dumps(data, indent=2, sort_keys=True, default=_json_default)


def write_json(path, data):
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(data))
        f.write("\n")
    logger.debug(f"Wrote {path}")
    return path


def read_json(path):
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def write_csv(path, rows, columns):
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    logger.debug(f"Wrote {len(rows)} rows to {path}")
    return path


def read_csv(path):
    with open(path, "r", encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


# -- shapes ------------------------------------------------------------------

def shape_from_dict(data):
    """SubstrateShape from its JSON form (docs/formats.md)."""
    try:
        if int(data.get("dim", 2)) == 3:
            return SubstrateShape.from_polytope(polytope_from_points(np.array(data["vertices"], dtype=float), 3))
        if "polygons" in data:
            return SubstrateShape.from_polygons([(np.array(p["outer"], dtype=float),
                                                  [np.array(h, dtype=float) for h in p.get("holes", [])])
                                                 for p in data["polygons"]])
        return SubstrateShape.from_polygon(np.array(data["vertices"], dtype=float))
    except (KeyError, TypeError) as e:
        raise InvalidShape(f"Malformed shape JSON: {e}") from e


def pixel_shape_from_dict(data):
    rows = data["rows"]
    if "width" in data and any(len(row) != int(data["width"]) for row in rows):
        raise InvalidShape(f"Pixel rows do not match width {data['width']}")
    return PixelShape.from_rows(rows, int(data.get("offset", 0)))


def _rings(item):
    if isinstance(item, ConvexPolytope):
        return [item.vertices]
    return [ring for outer, holes in item.polygons for ring in (outer,) + tuple(holes)]


def polygon_svg(item, scale=100.0, reproducible=False, margin=10.0):
    """
    SVG drawing of a planar shape or polytope with the substrate line.

    ``scale`` converts shape units to pixels; the y axis points up.
    """
    rings = _rings(item)
    points = np.vstack(rings)
    lo, hi = points.min(axis=0), points.max(axis=0)
    width = (hi[0] - lo[0]) * scale + 2 * margin
    height = (hi[1] - lo[1]) * scale + 2 * margin

    def px(p):
        return f"{(p[0] - lo[0]) * scale + margin:.6f},{(hi[1] - p[1]) * scale + margin:.6f}"

    path = " ".join("M " + " L ".join(px(p) for p in ring) + " Z" for ring in rings)
    ground_y = (hi[1] - 0.0) * scale + margin
    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    if not reproducible:
        lines.append(f"<!-- generated {datetime.datetime.now().isoformat(timespec='seconds')} -->")
    lines += [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.3f}" height="{height:.3f}" '
        f'viewBox="0 0 {width:.3f} {height:.3f}">',
        f'  <line x1="0" y1="{ground_y:.6f}" x2="{width:.3f}" y2="{ground_y:.6f}" stroke="#888" stroke-width="1"/>',
        f'  <path d="{path}" fill="#9ecae1" fill-rule="evenodd" stroke="#08519c" stroke-width="1"/>',
        "</svg>",
    ]
    return "\n".join(lines) + "\n"


def write_svg(path, item, scale=100.0, reproducible=False):
    with open(path, "w", encoding="utf-8") as f:
        f.write(polygon_svg(item, scale=scale, reproducible=reproducible))
    return path


def write_off(path, polytope):
    """Object File Format for a 3D polytope."""
    if polytope.dim != 3:
        raise ValueError("OFF output needs a 3D polytope")
    lines = ["OFF", f"{len(polytope.vertices)} {len(polytope.facets)} 0"]
    lines += [" ".join(repr(float(c)) for c in v) for v in polytope.vertices]
    lines += [f"{len(f)} " + " ".join(str(i) for i in f) for f in polytope.facets]
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")
    return path


def write_scatter_svg(path, x, y, xlabel, ylabel, title=None):
    """Log-log scatter plot saved as SVG without a date stamp."""
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.loglog(x, y, "o", markersize=4)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
