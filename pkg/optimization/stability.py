#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Asymmetry index, energy deficit and empirical stability constants."""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy.optimize import minimize_scalar
from shapely.affinity import translate
from shapely.geometry import LinearRing

from config import config
from geometry.convex_geometry import require_partial_wetting
from geometry.errors import InvalidShape
from shapes.shapes_energy import SubstrateShape, energy_F, ring_area, winterbottom_shape
from utils.raster_utils import raster_symmetric_difference

logger = logging.getLogger(__name__)

FAMILIES = ("rect", "noise", "shear")
DEFICIT_FLOOR = 1e-12
GRID_POINTS = 64
NOISE_REFERENCE_DIRECTIONS = 64


@dataclass(frozen=True)
class AsymmetryResult:
    value: float
    tau_star: float
    backend: str


@dataclass(frozen=True)
class StabilityRecord:
    family: str
    param: float
    asymmetry: float
    deficit: float
    ratio: Optional[float]
    tau_star: float
    backend: str

    def to_row(self):
        return {"family": self.family, "param": self.param, "asymmetry": self.asymmetry,
                "deficit": self.deficit, "ratio": "" if self.ratio is None else self.ratio,
                "tau_star": self.tau_star}


@dataclass
class SweepResult:
    records: List[StabilityRecord]
    c_hat: float
    reference_energy: float

    def ratios(self):
        return [r.ratio for r in self.records if r.ratio is not None]


# -- symmetric differences ---------------------------------------------------

def _resolve_backend(backend):
    backend = (backend or config.SYMDIFF_BACKEND).lower()
    if backend not in ("auto", "exact", "raster"):
        raise ValueError(f"Unknown symmetric difference backend {backend!r}")
    # shapely overlays are exact for any valid polygon, convex or not
    return "exact" if backend == "auto" else backend


def _geometry_symdiff(a, b, backend, cell):
    if backend == "exact":
        return a.area + b.area - 2 * a.intersection(b).area
    return raster_symmetric_difference(a, b, cell)[0]


def symmetric_difference(a, b, cell=None, backend=None):
    """
    |A xor B| for planar shapes.

    Returns:
        (area, backend used)
    """
    if a.dim != 2 or b.dim != 2:
        raise ValueError("Symmetric differences are computed for planar shapes only")
    backend = _resolve_backend(backend)
    ga, gb = a.to_shapely(), b.to_shapely()
    if cell is None:
        cell = max(a.diameter, b.diameter) / config.RASTER_DIVISIONS
    return _geometry_symdiff(ga, gb, backend, cell), backend


def symmetric_difference_area(a, b, cell=None, backend=None):
    return symmetric_difference(a, b, cell, backend)[0]


# -- asymmetry ---------------------------------------------------------------

def asymmetry(shape, phi, lam, volume, reference=None, backend=None, cell=None):
    """
    Minimum over horizontal tau of |E xor (W + tau)| with W the Winterbottom
    shape of the given volume.

    tau_star is reported as the translation taking E onto its closest
    translate of W, so E = W + s gives tau_star = -s.

    Raises:
        RegimeError: outside partial wetting
        ValueError: when |E| differs from volume
    """
    if shape.dim != 2:
        raise ValueError("Asymmetry is computed for planar shapes only")
    require_partial_wetting(phi, lam)
    if abs(shape.volume - volume) > 1e-9 * max(1.0, volume):
        raise ValueError(f"Shape area {shape.volume:.12g} does not match volume {volume:.12g}")
    if reference is None:
        reference = winterbottom_shape(phi, lam, volume)

    backend = _resolve_backend(backend)
    ge, gw = shape.to_shapely(), reference.to_shapely()
    diam = max(shape.diameter, reference.diameter)
    cell = diam / config.RASTER_DIVISIONS if cell is None else cell

    def objective(s):
        return _geometry_symdiff(ge, translate(gw, xoff=s), backend, cell)

    lo = ge.bounds[0] - gw.bounds[2]
    hi = ge.bounds[2] - gw.bounds[0]
    grid = np.linspace(lo, hi, GRID_POINTS)
    values = np.array([objective(s) for s in grid])
    k = int(np.argmin(values))
    left, right = grid[max(k - 1, 0)], grid[min(k + 1, GRID_POINTS - 1)]
    result = minimize_scalar(objective, bounds=(left, right), method="bounded",
                             options={"xatol": 1e-9 * diam})
    best_s, best = (result.x, result.fun) if result.fun <= values[k] else (grid[k], values[k])
    value = max(0.0, float(best))
    logger.debug(f"Asymmetry {value:.6e} at shift {best_s:.9f} ({backend})")
    return AsymmetryResult(value=value, tau_star=-float(best_s), backend=backend)


def stability_record(shape, phi, lam, volume, family, param, reference, reference_energy, backend=None):
    result = asymmetry(shape, phi, lam, volume, reference=reference, backend=backend)
    deficit = energy_F(shape, phi, lam).total - reference_energy
    if deficit < -config.CONSTRAINT_TOL:
        logger.warning(f"Negative deficit {deficit:.3e} for {family}={param}; the reference is not minimal")
    ratio = None
    if deficit > DEFICIT_FLOOR:
        ratio = (result.value / volume) ** 2 * reference_energy / deficit
    return StabilityRecord(family=family, param=float(param), asymmetry=result.value, deficit=deficit,
                           ratio=ratio, tau_star=result.tau_star, backend=result.backend)


# -- perturbation families ---------------------------------------------------

def _outer_ring(shape):
    if len(shape.polygons) != 1 or shape.polygons[0][1]:
        raise InvalidShape("Perturbation families need a single polygon without holes")
    return shape.polygons[0][0].copy()


def stretch_shape(shape, t):
    """Horizontal stretch by t and vertical squeeze by 1/t about the contact centre."""
    ring = _outer_ring(shape)
    cx = 0.5 * (ring[:, 0].min() + ring[:, 0].max())
    ring[:, 0] = cx + t * (ring[:, 0] - cx)
    ring[:, 1] = ring[:, 1] / t
    return SubstrateShape.from_polygon(ring)


def shear_shape(shape, s):
    ring = _outer_ring(shape)
    ring[:, 0] = ring[:, 0] + s * ring[:, 1]
    return SubstrateShape.from_polygon(ring)


def noise_pattern(shape, seed):
    rng = np.random.default_rng(seed)
    return rng.normal(size=_outer_ring(shape).shape)


def noisy_shape(shape, eps, pattern, volume):
    """
    Vertices moved by eps * diam * pattern, kept in the upper half plane and
    dilated back to the given area.  Vertices on H only move horizontally.
    """
    ring = _outer_ring(shape)
    on_ground = ring[:, 1] == 0.0
    move = eps * shape.diameter * pattern
    move[on_ground, 1] = 0.0
    ring = ring + move
    ring[:, 1] = np.maximum(ring[:, 1], 0.0)
    area = ring_area(ring)
    if area <= 0 or not LinearRing(ring).is_simple:
        raise InvalidShape(f"Noise amplitude {eps} folds the polygon")
    anchor = np.array([ring[:, 0].mean(), 0.0])
    return SubstrateShape.from_polygon(anchor + math.sqrt(volume / area) * (ring - anchor))


def default_params(family, n):
    if family == "rect":
        return np.linspace(1.01, 2.0, n)
    if family == "noise":
        return np.logspace(-3, -1, n)
    if family == "shear":
        return np.linspace(0.01, 1.0, n)
    raise ValueError(f"Unknown perturbation family {family!r}; choose from {FAMILIES}")


def perturb(reference, family, param, volume, seed=None):
    if family == "rect":
        return stretch_shape(reference, param)
    if family == "shear":
        return shear_shape(reference, param)
    if family == "noise":
        seed = config.DEFAULT_SEED if seed is None else seed
        return noisy_shape(reference, param, noise_pattern(reference, seed), volume)
    raise ValueError(f"Unknown perturbation family {family!r}; choose from {FAMILIES}")


def _sweep_task(args):
    phi, lam, volume, family, param, seed, reference, reference_energy, backend = args
    try:
        shape = perturb(reference, family, param, volume, seed)
    except InvalidShape as e:
        logger.warning(f"Skipping {family}={param}: {e}")
        return None
    return stability_record(shape, phi, lam, volume, family, param, reference, reference_energy, backend)


def stability_sweep(phi, lam, volume, family, n=20, params=None, seed=None, seeds=None,
                    n_directions=None, jobs=None, backend=None):
    """
    Asymmetry and deficit along a perturbation family of the Winterbottom shape.

    Args:
        family: "rect" (stretch by t), "noise" (vertex noise of amplitude eps)
            or "shear" (x += s * y)
        n: number of parameter values when params is not given
        seeds: for the noise family, one record per seed at every amplitude
        n_directions: directions of the reference shape; the noise family
            defaults to NOISE_REFERENCE_DIRECTIONS so that amplitudes up to
            a few percent of the diameter stay below the edge length

    Returns:
        SweepResult with c_hat the largest ratio over records with a
        deficit above DEFICIT_FLOOR
    """
    if family not in FAMILIES:
        raise ValueError(f"Unknown perturbation family {family!r}; choose from {FAMILIES}")
    require_partial_wetting(phi, lam)
    params = default_params(family, n) if params is None else np.asarray(params, dtype=float)
    if n_directions is None and family == "noise":
        n_directions = NOISE_REFERENCE_DIRECTIONS
    reference = winterbottom_shape(phi, lam, volume, n_directions)
    reference_energy = energy_F(reference, phi, lam).total

    seed_list = list(seeds) if seeds is not None else [seed]
    tasks = [(phi, lam, volume, family, float(p), s, reference, reference_energy, backend)
             for p in params for s in seed_list]
    jobs = config.JOBS if jobs is None else jobs
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_sweep_task, tasks))
    else:
        records = [_sweep_task(task) for task in tasks]
    records = [r for r in records if r is not None]

    ratios = [r.ratio for r in records if r.ratio is not None]
    c_hat = max(ratios) if ratios else float("nan")
    logger.info(f"Stability sweep {family}: {len(records)} records, C_hat = {c_hat:.6g}")
    return SweepResult(records=records, c_hat=c_hat, reference_energy=reference_energy)


def loglog_slope(records):
    """Fitted slope of log(asymmetry^2) against log(deficit) over the smaller half of the deficits."""
    usable = sorted((r for r in records if r.ratio is not None and r.asymmetry > 0), key=lambda r: r.deficit)
    usable = usable[:max(2, len(usable) // 2)]
    if len(usable) < 2:
        return float("nan")
    x = np.log([r.deficit for r in usable])
    y = np.log([r.asymmetry ** 2 for r in usable])
    return float(np.polyfit(x, y, 1)[0])
