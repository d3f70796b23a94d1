#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Candidate shapes resting on the substrate and their interfacial energies."""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from shapely.geometry import MultiPolygon, Polygon
from shapely.geometry.polygon import orient

from config import config
from geometry.convex_geometry import (ConvexPolytope, build_wulff, polytope_from_points,
                                      winterbottom, winterbottom_with_volume)
from geometry.errors import CompleteWetting, InvalidShape

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnergyBreakdown:
    free_surface: float
    contact: float
    total: float
    contact_measure: float
    free_perimeter: float

    def to_dict(self):
        return {"free_surface": self.free_surface, "contact": self.contact, "total": self.total,
                "contact_measure": self.contact_measure, "free_perimeter": self.free_perimeter}


@dataclass(frozen=True)
class JensenBound:
    lhs: float
    rhs: float

    @property
    def holds(self):
        return self.lhs >= self.rhs - config.CONSTRAINT_TOL


@dataclass(frozen=True)
class WettingRow:
    R: float
    energy: float


@dataclass(frozen=True, eq=False)
class SubstrateShape:
    """
    A set E in the closed upper half space, stored through its boundary.

    2D shapes are lists of (outer, holes) rings, outer rings ccw and holes cw;
    3D shapes are convex polytopes.  ``normals``/``measures``/``on_substrate``
    hold one row per boundary facet (edge or face).
    """

    dim: int
    polygons: Tuple[Tuple[np.ndarray, Tuple[np.ndarray, ...]], ...]
    polytope: Optional[ConvexPolytope]
    normals: np.ndarray
    measures: np.ndarray
    on_substrate: np.ndarray
    volume: float

    # -- construction -----------------------------------------------------

    @classmethod
    def from_polygon(cls, outer, holes=()):
        return cls.from_polygons([(outer, holes)])

    @classmethod
    def from_polygons(cls, polygons):
        rings = []
        for outer, holes in polygons:
            geom = orient(Polygon(_snap(outer), [_snap(h) for h in holes]), sign=1.0)
            rings.append(geom)
        return cls._from_shapely_polygons(rings)

    @classmethod
    def from_shapely(cls, geom):
        if isinstance(geom, Polygon):
            parts = [geom]
        elif isinstance(geom, MultiPolygon):
            parts = list(geom.geoms)
        else:
            raise InvalidShape(f"Cannot build a shape from {geom.geom_type}")
        return cls._from_shapely_polygons([orient(p, sign=1.0) for p in parts])

    @classmethod
    def _from_shapely_polygons(cls, parts):
        polygons = []
        for part in parts:
            if part.is_empty or not part.is_valid:
                raise InvalidShape("Polygon is empty, self-intersecting or otherwise invalid")
            outer = _open_ring(part.exterior.coords)
            holes = tuple(_open_ring(h.coords) for h in part.interiors)
            polygons.append((outer, holes))

        geometry = MultiPolygon(parts) if len(parts) > 1 else parts[0]
        if len(parts) > 1 and not geometry.is_valid:
            raise InvalidShape("Polygons overlap")
        volume = float(geometry.area)

        normals, measures, contact = [], [], []
        for outer, holes in polygons:
            for ring in (outer,) + holes:
                n, m, c = ring_facets(ring)
                normals.append(n)
                measures.append(m)
                contact.append(c)
        shape = cls(2, tuple(polygons), None, np.vstack(normals), np.concatenate(measures),
                    np.concatenate(contact), volume)
        shape._validate()
        return shape

    @classmethod
    def from_polytope(cls, polytope):
        """Convex polytope (2D or 3D) in the upper half space."""
        if polytope.empty:
            raise InvalidShape("Empty polytope")
        if polytope.dim == 2:
            return cls.from_polygon(polytope.vertices)

        vertices = _snap(polytope.vertices)
        if not np.array_equal(vertices, polytope.vertices):
            polytope = ConvexPolytope(3, vertices, polytope.normals, polytope.offsets,
                                      polytope.volume, polytope.facets)
        measures = polytope.facet_measures()
        contact = np.array([bool(np.all(vertices[list(f), -1] == 0.0)) for f in polytope.facets])
        shape = cls(3, (), polytope, polytope.normals.copy(), measures, contact, float(polytope.volume))
        shape._validate()
        return shape

    def _validate(self):
        if np.min(self.vertices[:, -1]) < -config.SNAP_TOL:
            raise InvalidShape("Shape leaves the upper half space")
        if self.volume <= 0:
            raise InvalidShape("Shape has no volume")
        residual = np.linalg.norm(self.normals.T @ self.measures)
        if residual > config.CONSTRAINT_TOL * max(1.0, self.perimeter):
            raise InvalidShape(f"Boundary does not close (Gauss-Green residual {residual:.3e})")

    # -- geometry ---------------------------------------------------------

    @property
    def vertices(self):
        if self.dim == 3:
            return self.polytope.vertices
        return np.vstack([ring for outer, holes in self.polygons for ring in (outer,) + holes])

    @property
    def perimeter(self):
        return float(self.measures.sum())

    @property
    def diameter(self):
        pts = self.vertices
        return float(np.max(np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)))

    @property
    def bounds(self):
        pts = self.vertices
        return pts.min(axis=0), pts.max(axis=0)

    @property
    def contact_measure(self):
        return float(self.measures[self.on_substrate].sum())

    @property
    def is_convex(self):
        if self.dim == 3:
            return True
        if len(self.polygons) != 1 or self.polygons[0][1]:
            return False
        geom = self.to_shapely()
        return abs(geom.convex_hull.area - geom.area) <= config.CONSTRAINT_TOL * max(1.0, geom.area)

    def gauss_green_residual(self):
        return float(np.linalg.norm(self.normals.T @ self.measures))

    def to_shapely(self):
        if self.dim != 2:
            raise InvalidShape("Only 2D shapes have a planar polygon representation")
        parts = [Polygon(outer, holes) for outer, holes in self.polygons]
        return parts[0] if len(parts) == 1 else MultiPolygon(parts)

    def map_vertices(self, fn):
        """New shape with every vertex sent through fn (an (N, d) -> (N, d) map)."""
        if self.dim == 3:
            return SubstrateShape.from_polytope(polytope_from_points(fn(self.polytope.vertices), 3))
        return SubstrateShape.from_polygons([(fn(outer), [fn(h) for h in holes])
                                             for outer, holes in self.polygons])

    def translated(self, shift):
        shift = np.asarray(shift, dtype=float)
        return self.map_vertices(lambda pts: pts + shift)

    def to_dict(self):
        if self.dim == 3:
            return {"dim": 3, "vertices": self.polytope.vertices.tolist(),
                    "facets": [list(f) for f in self.polytope.facets]}
        return {"dim": 2, "polygons": [{"outer": outer.tolist(), "holes": [h.tolist() for h in holes]}
                                       for outer, holes in self.polygons]}


def _snap(points):
    pts = np.array(points, dtype=float)
    heights = pts[:, -1]
    heights[np.abs(heights) <= config.SNAP_TOL] = 0.0
    return pts


def _open_ring(coords):
    ring = np.array(coords, dtype=float)
    if len(ring) > 1 and np.array_equal(ring[0], ring[-1]):
        ring = ring[:-1]
    return ring


def ring_facets(ring):
    """Outward normals, lengths and contact flags of the edges of one ring."""
    nxt = np.roll(ring, -1, axis=0)
    edges = nxt - ring
    lengths = np.hypot(edges[:, 0], edges[:, 1])
    keep = lengths > 0
    edges, lengths = edges[keep], lengths[keep]
    normals = np.column_stack([edges[:, 1], -edges[:, 0]]) / lengths[:, None]
    # An edge only partly on H has zero-length contact and counts as free.
    contact = (ring[keep, 1] == 0.0) & (nxt[keep, 1] == 0.0)
    return normals, lengths, contact


# -- energies ----------------------------------------------------------------

def energy_F(shape, phi, lam):
    """
    Free surface energy plus lambda times the contact measure.

    Args:
        shape: SubstrateShape
        phi: density for the free boundary
        lam: relative adhesion coefficient

    Returns:
        EnergyBreakdown
    """
    if phi.dim != shape.dim:
        raise ValueError("Shape and anisotropy dimensions differ")
    free_mask = ~shape.on_substrate
    weighted = phi.evaluate(shape.normals[free_mask]) * shape.measures[free_mask]
    free_surface = math.fsum(weighted)
    contact_measure = math.fsum(shape.measures[shape.on_substrate])
    contact = lam * contact_measure
    return EnergyBreakdown(free_surface=free_surface, contact=contact, total=free_surface + contact,
                           contact_measure=contact_measure,
                           free_perimeter=math.fsum(shape.measures[free_mask]))


def perimeter_P(shape, psi):
    """Integral of psi(nu) over the whole boundary, facets on H included."""
    return math.fsum(psi.evaluate(shape.normals) * shape.measures)


def jensen_lower_bound(shape, phi):
    """Free surface term against phi(e_d) times the contact measure."""
    e_d = np.zeros(shape.dim)
    e_d[-1] = 1.0
    lhs = energy_F(shape, phi, 0.0).free_surface
    return JensenBound(lhs=lhs, rhs=phi(e_d) * shape.contact_measure)


def rescale(shape, r, anchor=None):
    """
    Dilate about a point on H: x -> anchor + r (x - anchor).

    The default anchor is the ground projection of the vertex centroid.
    """
    if r <= 0:
        raise ValueError(f"Scale factor must be positive, got {r}")
    if anchor is None:
        anchor = shape.vertices.mean(axis=0)
        anchor[-1] = 0.0
    anchor = np.asarray(anchor, dtype=float)
    if anchor[-1] != 0.0:
        raise ValueError("Rescaling anchor must lie on the substrate")
    return shape.map_vertices(lambda pts: anchor + r * (pts - anchor))


def wetting_demo(phi, lam, volume, R_list):
    """
    Energies of the flat boxes (0, R)^(d-1) x (0, v / R^(d-1)).

    Returns:
        list[WettingRow]
    """
    if volume <= 0:
        raise ValueError("Volume must be positive")
    rows = []
    for R in R_list:
        R = float(R)
        height = volume / R ** (phi.dim - 1)
        if phi.dim == 2:
            box = rectangle(0.0, R, 0.0, height)
        else:
            corners = np.array([[x, y, z] for x in (0.0, R) for y in (0.0, R) for z in (0.0, height)])
            box = SubstrateShape.from_polytope(polytope_from_points(corners, 3))
        rows.append(WettingRow(R=R, energy=energy_F(box, phi, lam).total))
    logger.debug(f"Wetting demo lambda={lam}: {[(row.R, round(row.energy, 6)) for row in rows]}")
    return rows


def wetting_slope(rows, dim=2):
    """Energy change per unit of R^(d-1) between the last two rows."""
    if len(rows) < 2:
        return float("nan")
    a, b = rows[-2], rows[-1]
    return (b.energy - a.energy) / (b.R ** (dim - 1) - a.R ** (dim - 1))


# -- shape factories ---------------------------------------------------------

def rectangle(x0, x1, y0, y1):
    return SubstrateShape.from_polygon(np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]], dtype=float))


def half_disk(radius, n_arc=512):
    """Polygonal half disk centred at the origin, n_arc edges on the arc."""
    angles = np.linspace(0.0, np.pi, n_arc + 1)
    arc = radius * np.column_stack([np.cos(angles), np.sin(angles)])
    arc[0, 1] = arc[-1, 1] = 0.0
    return SubstrateShape.from_polygon(arc)


def random_star_polygon(rng, n_vertices, volume, roughness=0.3, modes=3):
    """
    Random polygon on H, star-shaped about the origin, with the given area.

    Ground vertices sit on [-a, a] x {0}; the rest follow a random smooth
    radius profile over the upper half plane.
    """
    n_ground = max(2, n_vertices // 4)
    n_arc = n_vertices - n_ground
    theta = np.linspace(0.0, np.pi, n_arc)
    radius = np.ones_like(theta)
    for k in range(1, modes + 1):
        a, b = rng.uniform(-1.0, 1.0, size=2)
        radius += roughness / modes * (a * np.cos(k * theta) + b * np.sin(k * theta))
    arc = radius[:, None] * np.column_stack([np.cos(theta), np.sin(theta)])
    arc[0, 1] = arc[-1, 1] = 0.0
    left, right = arc[-1, 0], arc[0, 0]
    ground_x = np.linspace(left, right, n_ground + 2)[1:-1]
    ground = np.column_stack([ground_x, np.zeros(n_ground)])
    ring = np.vstack([arc, ground])
    area = ring_area(ring)
    ring *= math.sqrt(volume / area)
    return SubstrateShape.from_polygon(ring)


def ring_area(ring):
    x, y = ring[:, 0], ring[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def winterbottom_shape(phi, lam, volume, n_directions=None, wulff=None):
    """W_(lambda, phi)(v) as a SubstrateShape."""
    wulff = build_wulff(phi, n_directions) if wulff is None else wulff
    truncated = winterbottom(wulff, lam)
    if truncated.empty:
        raise CompleteWetting(f"complete wetting: lambda = {lam} leaves nothing of the Wulff shape")
    return SubstrateShape.from_polytope(winterbottom_with_volume(truncated, lam, volume))


def minimal_energy(phi, lam, volume, n_directions=None):
    """F of the Winterbottom shape; scales like v^((d-1)/d)."""
    return energy_F(winterbottom_shape(phi, lam, volume, n_directions), phi, lam).total
