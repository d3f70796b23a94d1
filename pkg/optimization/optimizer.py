#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Fixed-volume minimization of the substrate energy over planar polygons."""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List

import numpy as np
from scipy.optimize import minimize_scalar
from shapely.geometry import LinearRing

from config import config
from geometry.convex_geometry import require_partial_wetting
from geometry.errors import InvalidShape, NumericalDegeneracy
from optimization.stability import asymmetry
from shapes.shapes_energy import (SubstrateShape, energy_F, random_star_polygon, ring_area,
                                  winterbottom_shape)

logger = logging.getLogger(__name__)

ARMIJO_C = 1e-4
FD_STEP = 1e-6
STALL_WINDOW = 10
STALL_TOL = 1e-9
MAX_ITER = 100_000
MAX_RETRIES = 5
TARGET_ACCEPTANCE = 0.44
STRETCH_SHARE = 0.02
STRETCH_SIGMA = 0.05
STRETCH_BOUND = 0.5
POLISH_ROUNDS = 5
POLISH_SWEEPS = 20


@dataclass
class OptimizationResult:
    shape: SubstrateShape
    energy: float
    trace: List[float]
    iterations: int
    converged: bool
    method: str
    seed: int


@dataclass
class VerificationReport:
    method: str
    reference: float
    energies: List[float]
    asymmetries: List[float]
    seeds: List[int]
    volume: float
    passed: bool = False
    results: List[OptimizationResult] = field(default_factory=list, repr=False)

    @property
    def min_energy(self):
        return min(self.energies)

    @property
    def median_energy(self):
        return float(np.median(self.energies))

    @property
    def best_asymmetry(self):
        return min(self.asymmetries)

    def to_dict(self):
        return {"method": self.method, "reference": self.reference, "volume": self.volume,
                "energies": self.energies, "asymmetries": self.asymmetries, "seeds": self.seeds,
                "min_energy": self.min_energy, "median_energy": self.median_energy,
                "best_asymmetry": self.best_asymmetry, "passed": self.passed}


# -- ring helpers ------------------------------------------------------------

def _edge_energies(start, end, phi, lam):
    """Energy of the edges start[j] -> end[j]; ccw rings have outward (dy, -dx)."""
    edges = end - start
    lengths = np.hypot(edges[:, 0], edges[:, 1])
    safe = np.where(lengths > 0, lengths, 1.0)
    normals = np.column_stack([edges[:, 1], -edges[:, 0]]) / safe[:, None]
    normals[lengths == 0] = (0.0, 1.0)
    contact = (start[:, 1] == 0.0) & (end[:, 1] == 0.0)
    weights = np.where(contact, lam, phi.evaluate(normals))
    return weights * lengths


def ring_energy(ring, phi, lam):
    return math.fsum(_edge_energies(ring, np.roll(ring, -1, axis=0), phi, lam))


def _local_energy(points, prev, nxt, phi, lam):
    return _edge_energies(prev, points, phi, lam) + _edge_energies(points, nxt, phi, lam)


def _is_simple(ring):
    return ring_area(ring) > 0 and LinearRing(ring).is_simple


def _restore_volume(ring, volume):
    """Dilate about the ground projection of the vertex centroid to area volume."""
    area = ring_area(ring)
    if area <= 0:
        return None
    anchor = np.array([ring[:, 0].mean(), 0.0])
    return anchor + math.sqrt(volume / area) * (ring - anchor)


def _clamp(ring):
    ring[:, 1] = np.where(ring[:, 1] <= config.SNAP_TOL, 0.0, ring[:, 1])
    return ring


def energy_gradient(ring, phi, lam, h):
    """
    Central finite differences of the energy in each vertex coordinate.

    Vertices on H only see a one-sided upward difference in y, kept when it
    points into the interior of the feasible set.

    Returns:
        gradient array and a mask of the free coordinates
    """
    prev = np.roll(ring, 1, axis=0)
    nxt = np.roll(ring, -1, axis=0)
    grad = np.zeros_like(ring)
    free = np.ones_like(ring, dtype=bool)
    on_ground = ring[:, 1] == 0.0
    for k in (0, 1):
        step = np.zeros(2)
        step[k] = h
        plus = _local_energy(ring + step, prev, nxt, phi, lam)
        minus = _local_energy(ring - step, prev, nxt, phi, lam)
        grad[:, k] = (plus - minus) / (2 * h)
    base = _local_energy(ring, prev, nxt, phi, lam)
    lift = (_local_energy(ring + np.array([0.0, h]), prev, nxt, phi, lam) - base) / h
    grad[on_ground, 1] = np.minimum(lift[on_ground], 0.0)
    free[on_ground, 1] = lift[on_ground] < 0
    return grad, free


def area_gradient(ring):
    prev = np.roll(ring, 1, axis=0)
    nxt = np.roll(ring, -1, axis=0)
    return 0.5 * np.column_stack([nxt[:, 1] - prev[:, 1], prev[:, 0] - nxt[:, 0]])


def _project(grad, free, ring):
    g = np.where(free, grad, 0.0)
    a = np.where(free, area_gradient(ring), 0.0)
    aa = float(np.sum(a * a))
    if aa > 0:
        g = g - float(np.sum(g * a)) / aa * a
    return np.where(free, g, 0.0)


def _collapse_contact(ring):
    """
    Drop the interior vertices of every run of consecutive ground vertices and
    split the longest free edges until the vertex count is restored.

    Energy and area are unchanged; only the two ends of each contact segment
    stay on H, so they can slide along it.
    """
    ground = ring[:, 1] == 0.0
    inner = ground & np.roll(ground, 1) & np.roll(ground, -1)
    if not inner.any() or np.count_nonzero(~inner) < 3:
        return ring
    n = len(ring)
    points = list(ring[~inner])
    while len(points) < n:
        m = len(points)
        best, best_length = None, 0.0
        for i in range(m):
            a, b = points[i], points[(i + 1) % m]
            if a[1] == 0.0 and b[1] == 0.0:
                continue
            length = float(np.hypot(*(b - a)))
            if length > best_length:
                best, best_length = i, length
        if best is None:
            return ring
        points.insert(best + 1, 0.5 * (points[best] + points[(best + 1) % m]))
    return np.array(points)


# -- initialisation ----------------------------------------------------------

def _subdivide(ring, n_vertices):
    ring = [np.asarray(p, dtype=float) for p in ring]
    while len(ring) < n_vertices:
        lengths = [np.linalg.norm(ring[(i + 1) % len(ring)] - ring[i]) for i in range(len(ring))]
        i = int(np.argmax(lengths))
        midpoint = 0.5 * (ring[i] + ring[(i + 1) % len(ring)])
        ring.insert(i + 1, midpoint)
    return np.array(ring)


def prepare_ring(init, n_vertices, volume, rng):
    """
    Outer ring of init refined to n_vertices and dilated to the given area.

    Raises:
        InvalidShape: for multi-part shapes or shapes with holes
        NumericalDegeneracy: when no simple ring is found after perturbing
    """
    if init.dim != 2 or len(init.polygons) != 1 or init.polygons[0][1]:
        raise InvalidShape("Polygon optimization needs a single planar polygon without holes")
    ring = _subdivide(init.polygons[0][0], n_vertices)
    scale = init.diameter
    for attempt in range(MAX_RETRIES + 1):
        candidate = _restore_volume(_clamp(ring.copy()), volume)
        if candidate is not None and _is_simple(candidate):
            return _collapse_contact(candidate)
        logger.warning(f"Initial polygon is degenerate, perturbing (attempt {attempt + 1})")
        noise = rng.normal(scale=1e-3 * scale, size=ring.shape)
        noise[ring[:, 1] == 0.0, 1] = 0.0
        ring = ring + noise
    raise NumericalDegeneracy(f"No simple initial polygon after {MAX_RETRIES} perturbations")


# -- descent -----------------------------------------------------------------

def optimize_polygon(phi, lam, volume, n_vertices=64, init=None, seed=None, max_iter=MAX_ITER):
    """
    Projected descent on vertex coordinates at fixed area.

    Each step moves against the finite-difference gradient projected onto the
    area-preserving directions, clamps to x_d >= 0 and dilates back to the
    target area.  Step sizes follow an Armijo backtracking rule.  Before
    every step the contact segments are collapsed to their two end vertices
    (_collapse_contact) so the contact line can recede along H.

    Args:
        phi: planar anisotropy
        lam: relative adhesion coefficient
        volume: target area
        n_vertices: vertex count (at least 8)
        init: starting shape, a random star polygon when None
        seed: seed for the random start and perturbations
        max_iter: iteration cap

    Returns:
        OptimizationResult whose trace is non-increasing
    """
    if phi.dim != 2:
        raise ValueError("Polygon optimization is planar only")
    if n_vertices < 8:
        raise ValueError(f"Need at least 8 vertices, got {n_vertices}")
    require_partial_wetting(phi, lam)
    seed = config.DEFAULT_SEED if seed is None else seed
    rng = np.random.default_rng(seed)
    if init is None:
        init = random_star_polygon(rng, n_vertices, volume)
    ring = prepare_ring(init, n_vertices, volume, rng)

    energy = ring_energy(ring, phi, lam)
    trace = [energy]
    alpha = None
    converged = False
    iteration = 0
    for iteration in range(1, max_iter + 1):
        ring = _collapse_contact(ring)
        diam = float(np.ptp(ring, axis=0).max())
        grad, free = energy_gradient(ring, phi, lam, FD_STEP * diam)
        direction = _project(grad, free, ring)
        norm_sq = float(np.sum(direction * direction))
        largest = float(np.abs(direction).max())
        if largest == 0.0:
            converged = True
            break
        alpha = 0.05 * diam / largest if alpha is None else min(2 * alpha, 0.05 * diam / largest)

        accepted = None
        while alpha * largest > 1e-14 * diam:
            trial = _restore_volume(_clamp(ring - alpha * direction), volume)
            if trial is not None and _is_simple(trial):
                trial_energy = ring_energy(trial, phi, lam)
                if trial_energy <= energy - ARMIJO_C * alpha * norm_sq and trial_energy < energy:
                    accepted = (trial, trial_energy)
                    break
            alpha *= 0.5
        if accepted is None:
            converged = True
            break
        ring, energy = accepted
        trace.append(energy)

        if len(trace) > STALL_WINDOW:
            past = trace[-STALL_WINDOW - 1]
            if past - energy <= STALL_TOL * abs(past):
                converged = True
                break
        if iteration % 1000 == 0:
            logger.debug(f"descent iteration {iteration}: energy {energy:.12g}")

    logger.info(f"Descent (seed {seed}) stopped after {iteration} iterations at energy {energy:.10g}")
    return OptimizationResult(shape=SubstrateShape.from_polygon(ring), energy=energy, trace=trace, iterations=iteration,
                              converged=converged, method="descent", seed=seed)


# -- annealing ---------------------------------------------------------------

def _local_area(points, prev, nxt):
    """Shoelace terms of the two edges meeting at each point."""
    return 0.5 * (prev[:, 0] * points[:, 1] - points[:, 0] * prev[:, 1]
                  + points[:, 0] * nxt[:, 1] - nxt[:, 0] * points[:, 1])


def _propose_vertex(ring, i, sigma, rng):
    old = ring[i]
    new = old + rng.normal(scale=sigma, size=2)
    if old[1] == 0.0 and rng.random() < 0.5:
        new[1] = 0.0
    if new[1] <= config.SNAP_TOL:
        new[1] = 0.0
    return new


def _place_vertex(ring, i, new, volume):
    """Ring with vertex i moved to new and dilated back, or None if it is not simple."""
    candidate = ring.copy()
    candidate[i] = new
    candidate = _restore_volume(candidate, volume)
    if candidate is None or not _is_simple(candidate):
        return None
    return candidate


def stretch_ring(ring, s):
    """Area-preserving (x, y) -> (xm + s (x - xm), y / s) about the mean abscissa xm."""
    center = ring[:, 0].mean()
    return np.column_stack([center + s * (ring[:, 0] - center), ring[:, 1] / s])


def best_stretch(ring, energy, phi, lam):
    """
    Minimize the energy over area-preserving stretches of the ring.

    Returns:
        (ring, energy), unchanged unless some stretch is strictly better
    """
    def objective(t):
        return ring_energy(stretch_ring(ring, math.exp(t)), phi, lam)

    result = minimize_scalar(objective, bounds=(-STRETCH_BOUND, STRETCH_BOUND), method="bounded",
                             options={"xatol": 1e-10})
    if result.fun < energy:
        return stretch_ring(ring, math.exp(result.x)), float(result.fun)
    return ring, energy


def polish_ring(ring, energy, phi, lam, volume, rng, sigma):
    """
    Greedy finish: alternate the best stretch with sweeps of downhill vertex
    moves at a shrinking step size.
    """
    n = len(ring)
    for _ in range(POLISH_ROUNDS):
        ring, energy = best_stretch(ring, energy, phi, lam)
        step = sigma
        for _ in range(POLISH_SWEEPS):
            for i in rng.permutation(n):
                candidate = _place_vertex(ring, i, _propose_vertex(ring, i, step, rng), volume)
                if candidate is None:
                    continue
                candidate_energy = ring_energy(candidate, phi, lam)
                if candidate_energy < energy:
                    ring, energy = candidate, candidate_energy
            step *= 0.7
    return ring, energy


def anneal_polygon(phi, lam, volume, n_vertices=64, schedule=(0.05, 0.9999, 200_000), seed=None, init=None,
                   polish=True):
    """
    Metropolis search over single-vertex moves at fixed area.

    A small share of the proposals stretches the whole polygon horizontally
    at fixed area instead.  With ``polish`` the best polygon is finished by
    polish_ring.

    Args:
        schedule: (initial temperature, cooling factor per step, steps);
            a zero temperature gives greedy descent

    Returns:
        OptimizationResult holding the best shape seen; the trace records the
        current energy every 100 steps
    """
    if phi.dim != 2:
        raise ValueError("Polygon annealing is planar only")
    if n_vertices < 8:
        raise ValueError(f"Need at least 8 vertices, got {n_vertices}")
    require_partial_wetting(phi, lam)
    temperature, cooling, steps = float(schedule[0]), float(schedule[1]), int(schedule[2])
    if temperature < 0 or not 0 < cooling <= 1 or steps < 0:
        raise ValueError(f"Invalid annealing schedule {schedule}")
    seed = config.DEFAULT_SEED if seed is None else seed
    rng = np.random.default_rng(seed)
    if init is None:
        init = random_star_polygon(rng, n_vertices, volume)
    ring = prepare_ring(init, n_vertices, volume, rng)
    n = len(ring)

    energy = ring_energy(ring, phi, lam)
    best_ring, best_energy = ring.copy(), energy
    trace = [energy]
    sigma = 0.05 * math.sqrt(volume)
    accepted_in_window = 0

    for step in range(1, steps + 1):
        u = rng.random()
        threshold = -temperature * math.log(u) if temperature > 0 and u > 0 else 0.0
        candidate = None
        vertex_move = rng.random() >= STRETCH_SHARE
        if not vertex_move:
            candidate = stretch_ring(ring, math.exp(rng.normal(scale=STRETCH_SIGMA)))
        else:
            i = int(rng.integers(n))
            old = ring[i]
            new = _propose_vertex(ring, i, sigma, rng)
            prev, nxt = ring[[i - 1]], ring[[(i + 1) % n]]
            delta_e = (_local_energy(new[None, :], prev, nxt, phi, lam) - _local_energy(old[None, :], prev, nxt, phi, lam))[0]
            delta_a = (_local_area(new[None, :], prev, nxt) - _local_area(old[None, :], prev, nxt))[0]
            new_area = volume + delta_a
            if new_area > 0:
                estimate = math.sqrt(volume / new_area) * (energy + delta_e)
                if estimate - energy <= threshold + 1e-9 * abs(energy):
                    candidate = _place_vertex(ring, i, new, volume)

        if candidate is not None:
            candidate_energy = ring_energy(candidate, phi, lam)
            if candidate_energy <= energy or (temperature > 0 and candidate_energy - energy <= threshold):
                ring, energy = candidate, candidate_energy
                accepted_in_window += vertex_move
                if energy < best_energy:
                    best_ring, best_energy = ring.copy(), energy

        temperature *= cooling
        if step % 100 == 0:
            rate = accepted_in_window / 100
            sigma *= 1.1 if rate > TARGET_ACCEPTANCE else 0.9
            sigma = min(max(sigma, 1e-9 * math.sqrt(volume)), math.sqrt(volume))
            accepted_in_window = 0
            trace.append(energy)

    if polish:
        before = best_energy
        best_ring, best_energy = polish_ring(best_ring, best_energy, phi, lam, volume, rng, 0.01 * math.sqrt(volume))
        logger.debug(f"Polish lowered the energy from {before:.10g} to {best_energy:.10g}")
    logger.info(f"Annealing (seed {seed}) finished {steps} steps, best energy {best_energy:.10g}")
    return OptimizationResult(shape=SubstrateShape.from_polygon(best_ring), energy=best_energy, trace=trace, iterations=steps,
                              converged=True, method="anneal", seed=seed)


# -- verification ------------------------------------------------------------

def _run_trial(args):
    phi, lam, volume, n_vertices, seed, method, options = args
    if method == "descent":
        return optimize_polygon(phi, lam, volume, n_vertices, seed=seed, **options)
    return anneal_polygon(phi, lam, volume, n_vertices, seed=seed, **options)


def verify_theorem_main(phi, lam, volume, trials=5, seeds=None, n_vertices=32, jobs=None,
                        energy_factor=1.01, asymmetry_factor=0.05, **options):
    """
    Run independent minimizations from random starts and compare with the
    Winterbottom shape of the same area.

    Passes when the median final energy is within energy_factor of the
    reference and the closest final shape is within asymmetry_factor * volume
    of a horizontal translate of it.

    Returns:
        VerificationReport
    """
    require_partial_wetting(phi, lam)
    seeds = list(seeds) if seeds is not None else [config.DEFAULT_SEED + k for k in range(trials)]
    method = "descent" if phi.is_smooth else "anneal"
    reference_shape = winterbottom_shape(phi, lam, volume)
    reference = energy_F(reference_shape, phi, lam).total

    jobs = config.JOBS if jobs is None else jobs
    tasks = [(phi, lam, volume, n_vertices, s, method, options) for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_trial, tasks))
    else:
        results = [_run_trial(task) for task in tasks]

    energies = [r.energy for r in results]
    asymmetries = [asymmetry(r.shape, phi, lam, volume, reference=reference_shape).value for r in results]
    report = VerificationReport(method=method, reference=reference, energies=energies,
                                asymmetries=asymmetries, seeds=seeds, volume=volume, results=results)
    report.passed = (report.median_energy <= energy_factor * reference
                     and report.best_asymmetry <= asymmetry_factor * volume)
    log = logger.info if report.passed else logger.warning
    log(f"Verification {'passed' if report.passed else 'failed'}: median {report.median_energy:.8g} "
        f"vs reference {reference:.8g}, best asymmetry {report.best_asymmetry:.3e}")
    return report
