#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Wulff and Winterbottom polytopes, wetting regimes and Young's law."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError, cKDTree

from config import config
from geometry.anisotropy import sample_directions
from geometry.errors import CompleteWetting, InvalidShape, NotDifferentiable, NumericalDegeneracy, RegimeError, Unbounded

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ConvexPolytope:
    """
    Convex body in dimension 2 or 3 kept in both representations.

    vertices are ccw in 2D; ``normals``/``offsets`` describe
    {x: x.n_i <= b_i}; ``facets`` lists the vertex indices of each
    halfspace's face (edges in 2D, ccw polygons seen from outside in 3D).
    """

    dim: int
    vertices: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray
    volume: float
    facets: Tuple[Tuple[int, ...], ...] = ()
    empty: bool = False

    @classmethod
    def empty_polytope(cls, dim):
        return cls(dim=dim, vertices=np.zeros((0, dim)), normals=np.zeros((0, dim)),
                   offsets=np.zeros(0), volume=0.0, empty=True)

    @property
    def halfspaces(self):
        return list(zip(self.normals, self.offsets))

    @property
    def diameter(self):
        if len(self.vertices) < 2:
            return 0.0
        return float(np.max(np.linalg.norm(self.vertices[:, None, :] - self.vertices[None, :, :], axis=2)))

    def facet_measures(self):
        """Edge lengths (2D) or facet areas (3D), aligned with ``normals``."""
        measures = []
        for facet, normal in zip(self.facets, self.normals):
            pts = self.vertices[list(facet)]
            measures.append(_face_measure(pts, normal))
        return np.array(measures)

    def contains(self, points, tol=None):
        tol = config.CONSTRAINT_TOL if tol is None else tol
        points = np.atleast_2d(points)
        if self.empty:
            return np.zeros(len(points), dtype=bool)
        return np.all(points @ self.normals.T <= self.offsets + tol, axis=1)

    def translated(self, shift):
        shift = np.asarray(shift, dtype=float)
        return ConvexPolytope(self.dim, self.vertices + shift, self.normals,
                              self.offsets + self.normals @ shift, self.volume, self.facets, self.empty)

    def scaled(self, factor, anchor=None):
        anchor = np.zeros(self.dim) if anchor is None else np.asarray(anchor, dtype=float)
        vertices = anchor + factor * (self.vertices - anchor)
        offsets = factor * self.offsets + (1.0 - factor) * (self.normals @ anchor)
        return ConvexPolytope(self.dim, vertices, self.normals, offsets,
                              self.volume * factor ** self.dim, self.facets, self.empty)

    def bottom_facet_measure(self):
        """Measure of the face with outward normal -e_d (0 when it is a point/edge)."""
        if self.empty:
            return 0.0
        down = np.zeros(self.dim)
        down[-1] = -1.0
        hits = np.flatnonzero(np.all(np.abs(self.normals - down) <= 1e-12, axis=1))
        if len(hits) == 0:
            return 0.0
        return float(self.facet_measures()[hits[0]])

    def to_dict(self):
        return {"dim": self.dim, "vertices": self.vertices.tolist(),
                "facets": [list(f) for f in self.facets] if self.dim == 3 else None}


class Regime(Enum):
    COMPLETE_DRYING = "complete drying"
    PARTIAL_WETTING = "partial wetting"
    COMPLETE_WETTING = "complete wetting"


@dataclass(frozen=True)
class RegimeLabel:
    label: Regime
    lower: float
    upper: float

    @property
    def thresholds(self):
        return (self.lower, self.upper)


def _face_measure(pts, normal):
    if len(pts) == 2:
        return float(np.linalg.norm(pts[1] - pts[0]))
    total = np.zeros(3)
    for a, b in zip(pts, np.roll(pts, -1, axis=0)):
        total += np.cross(a, b)
    return float(abs(total @ normal) / 2.0)


def _dedup(points, tol):
    """Collapse points closer than tol (relative to the point cloud scale)."""
    scale = max(1.0, float(np.max(np.abs(points)))) if len(points) else 1.0
    tree = cKDTree(points)
    keep = np.ones(len(points), dtype=bool)
    for i, j in sorted(tree.query_pairs(tol * scale)):
        if keep[i] and keep[j]:
            keep[j] = False
    return points[keep]


def polytope_from_points(points, dim=None):
    """
    Convex hull of a point cloud as a ConvexPolytope.

    Raises:
        NumericalDegeneracy: when the hull is not full-dimensional
    """
    points = np.asarray(points, dtype=float)
    dim = dim or points.shape[1]
    if len(points) <= dim:
        raise NumericalDegeneracy(f"{len(points)} points cannot span a {dim}D body")
    points = _dedup(points, config.DEDUP_TOL)
    try:
        hull = ConvexHull(points)
    except QhullError as e:
        raise NumericalDegeneracy(f"Degenerate hull: {e}")

    if dim == 2:
        verts = points[hull.vertices]
        verts = _drop_collinear(verts)
        edges = np.roll(verts, -1, axis=0) - verts
        lengths = np.linalg.norm(edges, axis=1)
        normals = np.column_stack([edges[:, 1], -edges[:, 0]]) / lengths[:, None]
        offsets = np.einsum("ij,ij->i", normals, verts)
        n = len(verts)
        facets = tuple((i, (i + 1) % n) for i in range(n))
        return ConvexPolytope(2, verts, normals, offsets, float(hull.volume), facets)

    used = np.unique(hull.simplices)
    index = {int(k): i for i, k in enumerate(used)}
    verts = points[used]
    groups = {}
    for simplex, eq in zip(hull.simplices, hull.equations):
        key = tuple(np.round(eq[:3], 9))
        groups.setdefault(key, {"eqs": [], "ids": set()})
        groups[key]["eqs"].append(eq)
        groups[key]["ids"].update(index[int(k)] for k in simplex)

    normals, offsets, facets = [], [], []
    for group in groups.values():
        eq = np.mean(group["eqs"], axis=0)
        normal = eq[:3] / np.linalg.norm(eq[:3])
        ids = np.array(sorted(group["ids"]))
        facets.append(tuple(int(i) for i in _order_face(verts[ids], normal, ids)))
        normals.append(normal)
        offsets.append(float(np.max(verts[ids] @ normal)))
    return ConvexPolytope(3, verts, np.array(normals), np.array(offsets), float(hull.volume), tuple(facets))


def _drop_collinear(verts):
    changed = True
    while changed and len(verts) > 3:
        prev = np.roll(verts, 1, axis=0)
        nxt = np.roll(verts, -1, axis=0)
        a, b = verts - prev, nxt - verts
        cross = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
        scale = np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1)
        flat = np.abs(cross) <= config.DEDUP_TOL * np.maximum(scale, 1e-300)
        changed = bool(flat.any())
        if changed:
            # drop one at a time so neighbours are re-tested
            verts = np.delete(verts, int(np.flatnonzero(flat)[0]), axis=0)
    return verts


def _order_face(pts, normal, ids):
    centre = pts.mean(axis=0)
    u = pts[0] - centre
    u -= (u @ normal) * normal
    u /= np.linalg.norm(u)
    w = np.cross(normal, u)
    angles = np.arctan2((pts - centre) @ w, (pts - centre) @ u)
    return ids[np.argsort(angles)]


def chebyshev_center(normals, offsets):
    """Centre and radius of the largest ball inside {x: N x <= b}."""
    dim = normals.shape[1]
    cost = np.zeros(dim + 1)
    cost[-1] = -1.0
    A_ub = np.hstack([normals, np.linalg.norm(normals, axis=1)[:, None]])
    bounds = [(None, None)] * dim + [(0.0, None)]
    result = linprog(cost, A_ub=A_ub, b_ub=offsets, bounds=bounds, method="highs")
    if result.status == 3:
        raise Unbounded("Halfspace system is unbounded")
    if not result.success:
        return np.zeros(dim), 0.0
    return result.x[:dim], float(result.x[-1])


def intersect_halfspaces(normals, offsets, interior=None):
    """
    Polytope {x: x.n_i <= b_i} via the dual hull of n_i / (b_i - n_i.c).

    Args:
        normals: (k, d) array
        offsets: (k,) array
        interior: strictly interior point c; found by a Chebyshev LP if omitted

    Returns:
        ConvexPolytope (flagged empty when the interior is empty)
    """
    normals = np.asarray(normals, dtype=float)
    offsets = np.asarray(offsets, dtype=float)
    dim = normals.shape[1]

    if interior is None:
        interior, radius = chebyshev_center(normals, offsets)
        if radius <= config.CONSTRAINT_TOL:
            logger.debug("Halfspace intersection has empty interior")
            return ConvexPolytope.empty_polytope(dim)
    interior = np.asarray(interior, dtype=float)

    slack = offsets - normals @ interior
    if np.any(slack <= 0):
        raise NumericalDegeneracy("Interior point is not strictly inside every halfspace")
    dual = normals / slack[:, None]
    dual = np.unique(dual, axis=0)
    try:
        hull = ConvexHull(dual)
    except QhullError as e:
        raise NumericalDegeneracy(f"Dual hull failed: {e}")
    if np.any(hull.equations[:, -1] >= -config.DEDUP_TOL):
        raise Unbounded("Directions do not surround the origin; intersection is unbounded")

    # Each dual facet {y: a.y + off = 0} is a primal vertex x with x.y = 1.
    primal = -hull.equations[:, :-1] / hull.equations[:, -1:]
    return polytope_from_points(primal + interior, dim)


def build_wulff(phi, n_directions=None):
    """
    Wulff polytope {x: x.nu <= phi(nu)} over a direction set.

    Polyhedral densities use their exact facet normals only; smooth ones are
    sampled (uniform angles / Fibonacci sphere) with any exact normals added.

    Raises:
        Unbounded: for non-coercive densities
    """
    if not phi.coercive or phi.coercivity_c <= 0:
        raise Unbounded(f"Density is not coercive (c = {phi.coercivity_c:.3g}); Wulff shape unbounded")
    dim = phi.dim
    minimum = 8 if dim == 2 else 32
    if n_directions is None:
        n_directions = config.WULFF_DIRECTIONS_2D if dim == 2 else config.WULFF_DIRECTIONS_3D
    if n_directions < minimum:
        raise ValueError(f"At least {minimum} directions are needed in {dim}D")

    exact = phi.exact_normals()
    if phi.is_polyhedral:
        directions = exact
    else:
        directions = sample_directions(dim, n_directions)
        if len(exact):
            directions = np.unique(np.vstack([directions, exact]), axis=0)
    offsets = phi.evaluate(directions)
    wulff = intersect_halfspaces(directions, offsets, interior=np.zeros(dim))
    logger.info(f"Wulff shape built from {len(directions)} directions: "
                f"{len(wulff.vertices)} vertices, volume {wulff.volume:.9g}")
    return wulff


def _clip_polygon(vertices, height):
    """Sutherland-Hodgman clip of a ccw polygon against x_2 >= height."""
    out = []
    n = len(vertices)
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        inside_a, inside_b = a[1] >= height, b[1] >= height
        if inside_a:
            out.append(a)
        if inside_a != inside_b:
            t = (height - a[1]) / (b[1] - a[1])
            out.append(np.array([a[0] + t * (b[0] - a[0]), height]))
    return np.array(out)


def winterbottom(wulff, lam):
    """
    Truncation W ∩ {x_d >= -lambda}.

    Returns the Wulff polytope unchanged when the cut misses it and an empty
    polytope when nothing survives (lambda <= -max x_d = -phi(e_d)).
    """
    if wulff.empty:
        return wulff
    heights = wulff.vertices[:, -1]
    if -lam >= heights.max():
        logger.info(f"lambda = {lam}: truncation is empty (complete wetting)")
        return ConvexPolytope.empty_polytope(wulff.dim)
    if -lam <= heights.min():
        return wulff

    if wulff.dim == 2:
        clipped = _clip_polygon(wulff.vertices, -lam)
        return polytope_from_points(clipped, 2)

    down = np.zeros(3)
    down[-1] = -1.0
    normals = np.vstack([wulff.normals, down])
    offsets = np.append(wulff.offsets, lam)
    return intersect_halfspaces(normals, offsets)


def winterbottom_with_volume(truncated, lam, volume):
    """
    (v / |W_lambda|)^(1/d) * (W_lambda + lambda*e_d): the shape resting on H.
    """
    if truncated.empty or truncated.volume <= 0:
        raise ValueError("Winterbottom truncation is empty; no shape with positive volume exists")
    if volume <= 0:
        raise ValueError(f"Volume must be positive, got {volume}")
    d = truncated.dim
    lift = np.zeros(d)
    lift[-1] = lam
    factor = (volume / truncated.volume) ** (1.0 / d)
    lifted = truncated.translated(lift)
    vertices = factor * lifted.vertices
    heights = vertices[:, -1]
    heights[np.abs(heights) <= config.SNAP_TOL * max(1.0, factor)] = 0.0
    return ConvexPolytope(d, vertices, lifted.normals, factor * lifted.offsets,
                          truncated.volume * factor ** d, truncated.facets)


def support_function(polytope, nu):
    """
    Support value max_x x.nu and the vertices attaining it (within tolerance).
    """
    if polytope.empty:
        raise ValueError("Support function of an empty polytope is undefined")
    nu = np.asarray(nu, dtype=float)
    scores = polytope.vertices @ nu
    value = float(scores.max())
    argmax = polytope.vertices[scores >= value - config.CONSTRAINT_TOL]
    return value, argmax


def classify_regime(phi, lam):
    """Complete drying / partial wetting / complete wetting label for lambda."""
    d = phi.dim
    e_d = np.zeros(d)
    e_d[-1] = 1.0
    lower, upper = -phi(e_d), phi(-e_d)
    if lam >= upper:
        label = Regime.COMPLETE_DRYING
    elif lam <= lower:
        label = Regime.COMPLETE_WETTING
    else:
        label = Regime.PARTIAL_WETTING
    return RegimeLabel(label, lower, upper)


def require_partial_wetting(phi, lam):
    """
    Raises:
        CompleteWetting: lambda <= -phi(e_d)
        RegimeError: lambda >= phi(-e_d)
    """
    regime = classify_regime(phi, lam)
    if regime.label is Regime.COMPLETE_WETTING:
        raise CompleteWetting(f"complete wetting: lambda = {lam} <= -phi(e_d) = {regime.lower:.6g}")
    if regime.label is Regime.COMPLETE_DRYING:
        raise RegimeError(f"complete drying: lambda = {lam} >= phi(-e_d) = {regime.upper:.6g}")
    return regime


def young_law_check(phi, shape, lam):
    """
    Largest |grad phi(nu).(-e_d) - lambda| over free facets meeting the
    contact line of a Winterbottom polytope resting on H.

    Raises:
        NotDifferentiable: for non-smooth densities
        InvalidShape: when the polytope has no contact facet
    """
    if not phi.is_smooth:
        raise NotDifferentiable(f"Young's law check needs a smooth density, got {phi.kind}")
    heights = shape.vertices[:, -1]
    on_h = set(np.flatnonzero(heights == 0.0).tolist())
    if len(on_h) < shape.dim:
        raise InvalidShape("Shape does not rest on the substrate with a contact facet")

    residuals = []
    for facet, normal in zip(shape.facets, shape.normals):
        ids = set(facet)
        if ids <= on_h or not ids & on_h:
            continue
        grad = phi.gradient(normal)
        residuals.append(abs(-grad[-1] - lam))
    if not residuals:
        raise InvalidShape("No free facet meets the contact line")
    residual = float(max(residuals))
    logger.debug(f"Young's law residual {residual:.3e} over {len(residuals)} contact facets")
    return residual


def shift_polytope(polytope, x0):
    """W_phi - x0, the Wulff shape of the shifted density."""
    return polytope.translated(-np.asarray(x0, dtype=float))


def shift_translation(truncated_volume, x0):
    """
    Horizontal vector tau with W_(lambda', phi_x0)(1) = W_(lambda, phi)(1) + tau.

    Args:
        truncated_volume: |W_(lambda, phi)|
        x0: shift point
    """
    x0 = np.asarray(x0, dtype=float)
    horizontal = -x0.copy()
    horizontal[-1] = 0.0
    return truncated_volume ** (-1.0 / len(x0)) * horizontal
