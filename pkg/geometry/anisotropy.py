#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Anisotropic surface tension densities.

An :class:`Anisotropy` is a positively 1-homogeneous function on R^d
(d = 2 or 3).  Besides the convex base kinds it carries the two substrate
modifications used throughout the toolkit: the lambda-modification, which
replaces the value on the downward ray -t*e_d by lambda*t, and the x0-shift
phi(nu) - x0.nu.  Both are stored as a :class:`ModificationRecord` on top of
a convex base, so nesting always normalizes to a single record.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.spatial import ConvexHull
from scipy.spatial import QhullError

from config import config
from geometry.errors import NonCoercive, NonFiniteInput, NotDifferentiable, RegimeError

logger = logging.getLogger(__name__)

BASE_KINDS = ("pnorm", "weighted", "support", "crystalline")


def sample_directions(dim, n=None):
    """
    Unit directions used for sampling estimates and Wulff constructions.

    Args:
        dim: 2 or 3
        n: number of directions (defaults to the configured count)

    Returns:
        np.ndarray: (n, dim) unit vectors; uniform angles in 2D, a Fibonacci
        sphere in 3D
    """
    if dim == 2:
        n = n or config.DIRECTIONS_2D
        angles = 2.0 * np.pi * np.arange(n) / n
        dirs = np.column_stack([np.cos(angles), np.sin(angles)])
    elif dim == 3:
        n = n or config.DIRECTIONS_3D
        k = np.arange(n) + 0.5
        z = 1.0 - 2.0 * k / n
        r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
        theta = np.pi * (1.0 + math.sqrt(5.0)) * k
        dirs = np.column_stack([r * np.cos(theta), r * np.sin(theta), z])
    else:
        raise ValueError(f"Only dimensions 2 and 3 are supported, got {dim}")

    # Axis directions come out with 1e-16 residue; make them exact.
    dirs[np.abs(dirs) < 1e-15] = 0.0
    return dirs / np.linalg.norm(dirs, axis=1)[:, None]


def _basis(dim, k):
    e = np.zeros(dim)
    e[k] = 1.0
    return e


def _hull_normals(points):
    """Outward facet normals of conv(points), 0 assumed interior."""
    try:
        hull = ConvexHull(points)
    except QhullError as e:
        raise NonCoercive(f"Vector set does not span a full-dimensional body: {e}")
    normals = hull.equations[:, :-1]
    return np.unique(np.round(normals, 14), axis=0)


@dataclass(frozen=True)
class ModificationRecord:
    """lambda-modification and/or x0-shift applied on top of a convex base."""

    lambda_: Optional[float] = None
    x0: Optional[tuple] = None

    @property
    def variant(self):
        if self.lambda_ is not None and self.x0 is not None:
            return "both"
        return "lambda" if self.lambda_ is not None else "shifted"


@dataclass(frozen=True, eq=False)
class Anisotropy:
    """A positively 1-homogeneous surface tension density."""

    kind: str
    dim: int
    p: Optional[float] = None
    matrix: Optional[np.ndarray] = None
    vectors: Optional[np.ndarray] = None
    base: Optional["Anisotropy"] = None
    modification: Optional[ModificationRecord] = None
    coercivity_c: float = 0.0
    coercive: bool = False

    # -- construction -----------------------------------------------------

    @classmethod
    def pnorm(cls, p, dim=2):
        p = float(p)
        if not (p >= 1.0):
            raise ValueError(f"p must lie in [1, inf], got {p}")
        return _with_coercivity(cls(kind="pnorm", dim=int(dim), p=p))

    @classmethod
    def weighted(cls, matrix):
        A = np.array(matrix, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] not in (2, 3):
            raise ValueError(f"Weighted norm needs a square 2x2 or 3x3 matrix, got shape {A.shape}")
        if abs(np.linalg.det(A)) < 1e-14:
            raise ValueError("Weighted norm matrix must be invertible")
        A.setflags(write=False)
        return _with_coercivity(cls(kind="weighted", dim=A.shape[0], matrix=A))

    @classmethod
    def support(cls, vertices):
        """Support function of conv(vertices); may be non-coercive."""
        V = _vector_array(vertices)
        return _with_coercivity(cls(kind="support", dim=V.shape[1], vectors=V))

    @classmethod
    def crystalline(cls, generators):
        """max_i w_i.nu over a finite set whose hull contains 0 in its interior."""
        W = _vector_array(generators)
        phi = _with_coercivity(cls(kind="crystalline", dim=W.shape[1], vectors=W))
        if not phi.coercive:
            raise NonCoercive("Crystalline generators must surround the origin")
        return phi

    # -- evaluation -------------------------------------------------------

    def evaluate(self, nus):
        """Evaluate on an (N, d) array of directions."""
        nus = np.asarray(nus, dtype=float)
        if nus.ndim == 1:
            nus = nus[None, :]
        if nus.shape[1] != self.dim:
            raise ValueError(f"Expected {self.dim}-vectors, got shape {nus.shape}")
        if not np.all(np.isfinite(nus)):
            raise NonFiniteInput("Direction has non-finite components")

        if self.kind == "pnorm":
            if math.isinf(self.p):
                return np.max(np.abs(nus), axis=1)
            if self.p == 1.0:
                return np.sum(np.abs(nus), axis=1)
            if self.p == 2.0:
                return np.linalg.norm(nus, axis=1)
            # Scale by the max component so large p does not overflow.
            scale = np.max(np.abs(nus), axis=1)
            safe = np.where(scale > 0, scale, 1.0)
            return scale * np.sum(np.abs(nus / safe[:, None]) ** self.p, axis=1) ** (1.0 / self.p)
        if self.kind == "weighted":
            return np.linalg.norm(nus @ self.matrix.T, axis=1)
        if self.kind in ("support", "crystalline"):
            return np.max(nus @ self.vectors.T, axis=1)

        values = self.base.evaluate(nus)
        record = self.modification
        if record.x0 is not None:
            values = values - nus @ np.asarray(record.x0)
        if record.lambda_ is not None:
            ray = on_downward_ray(nus)
            values = np.where(ray, record.lambda_ * (-nus[:, -1]), values)
        return values

    def value(self, nu):
        return float(self.evaluate(np.asarray(nu, dtype=float)[None, :])[0])

    __call__ = value

    def gradient(self, nu):
        """
        Gradient of the density at nu.

        Raises:
            NotDifferentiable: for nu = 0, p in {1, inf}, ridge directions of
            polytopal kinds and the downward ray of a lambda-modified density
        """
        nu = np.asarray(nu, dtype=float)
        if not np.all(np.isfinite(nu)):
            raise NonFiniteInput("Direction has non-finite components")
        if not np.any(nu):
            raise NotDifferentiable("Anisotropy is not differentiable at 0")

        if self.kind == "pnorm":
            if self.p == 1.0 or math.isinf(self.p):
                raise NotDifferentiable(f"p = {self.p} norm is not differentiable")
            norm = self.value(nu)
            return np.sign(nu) * (np.abs(nu) / norm) ** (self.p - 1.0)
        if self.kind == "weighted":
            Anu = self.matrix @ nu
            return self.matrix.T @ Anu / np.linalg.norm(Anu)
        if self.kind in ("support", "crystalline"):
            scores = self.vectors @ nu
            top = np.flatnonzero(scores >= scores.max() - config.CONSTRAINT_TOL)
            if len(top) > 1:
                raise NotDifferentiable(f"{self.kind} density has a ridge at {nu.tolist()}")
            return self.vectors[top[0]].copy()

        record = self.modification
        if record.lambda_ is not None and on_downward_ray(nu[None, :])[0]:
            raise NotDifferentiable("lambda-modified density jumps on the downward ray")
        grad = self.base.gradient(nu)
        if record.x0 is not None:
            grad = grad - np.asarray(record.x0)
        return grad

    # -- structural properties --------------------------------------------

    @property
    def is_convex(self):
        return self.kind != "modified" or self.modification.lambda_ is None

    @property
    def is_smooth(self):
        """True when a gradient exists away from 0 (and the downward ray)."""
        kind = self.base.kind if self.kind == "modified" else self.kind
        p = self.base.p if self.kind == "modified" else self.p
        return kind == "weighted" or (kind == "pnorm" and 1.0 < p < math.inf)

    @property
    def is_polyhedral(self):
        if self.kind == "modified":
            return self.base.is_polyhedral
        return self.kind in ("support", "crystalline") or (self.kind == "pnorm" and self.p in (1.0, math.inf))

    @property
    def lambda_mod(self):
        return None if self.modification is None else self.modification.lambda_

    @property
    def shift(self):
        if self.modification is None or self.modification.x0 is None:
            return np.zeros(self.dim)
        return np.asarray(self.modification.x0, dtype=float)

    def exact_normals(self):
        """Facet normals of the Wulff shape that are known in closed form."""
        d = self.dim
        if self.kind == "pnorm" and self.p == 1.0:
            axes = np.eye(d)
            return np.vstack([axes, -axes])
        if self.kind == "pnorm" and math.isinf(self.p):
            signs = np.array(np.meshgrid(*[[-1.0, 1.0]] * d)).T.reshape(-1, d)
            return signs / math.sqrt(d)
        if self.kind in ("support", "crystalline"):
            return _hull_normals(self.vectors)
        if self.kind == "modified":
            normals = self.base.exact_normals()
            if self.modification.lambda_ is not None:
                down = -_basis(d, d - 1)
                normals = down[None, :] if normals.size == 0 else np.vstack([normals, down])
            return normals
        return np.zeros((0, d))

    def to_dict(self):
        """JSON description of the density (see docs/formats.md)."""
        base = self.base if self.kind == "modified" else self
        if base.kind == "pnorm":
            data = {"kind": "pnorm", "p": "inf" if math.isinf(base.p) else base.p, "dim": base.dim}
        elif base.kind == "weighted":
            data = {"kind": "weighted", "A": base.matrix.tolist()}
        elif base.kind == "support":
            data = {"kind": "support", "vertices": base.vectors.tolist()}
        else:
            data = {"kind": "crystalline", "w": base.vectors.tolist()}
        if self.kind == "modified":
            if self.modification.lambda_ is not None:
                data["lambda_mod"] = self.modification.lambda_
            if self.modification.x0 is not None:
                data["shift"] = list(self.modification.x0)
        return data

    def __repr__(self):
        return f"Anisotropy({self.to_dict()})"


def _vector_array(vectors):
    V = np.array(vectors, dtype=float)
    if V.ndim != 2 or V.shape[1] not in (2, 3) or len(V) == 0:
        raise ValueError(f"Expected a non-empty list of 2D or 3D vectors, got shape {V.shape}")
    if not np.all(np.isfinite(V)):
        raise NonFiniteInput("Vector list has non-finite components")
    V.setflags(write=False)
    return V


def on_downward_ray(nus):
    """Exact test nu = -t*e_d, t > 0: horizontal components identically zero."""
    nus = np.atleast_2d(nus)
    return np.all(nus[:, :-1] == 0.0, axis=1) & (nus[:, -1] < 0.0)


def estimate_coercivity(phi, n=None):
    """min of phi over sampled unit directions."""
    dirs = sample_directions(phi.dim, n)
    return float(np.min(phi.evaluate(dirs)))


def _with_coercivity(phi):
    c = estimate_coercivity(phi)
    return replace(phi, coercivity_c=c, coercive=c > 0.0)


def make_phi_lambda(phi, lam):
    """
    The lambda-modified density: lambda*t on nu = -t*e_d, phi elsewhere.

    Args:
        phi: convex base density (or an x0-shifted one)
        lam: relative adhesion coefficient

    Returns:
        Anisotropy: modified density, in general not convex
    """
    lam = float(lam)
    base = phi.base if phi.kind == "modified" else phi
    x0 = phi.modification.x0 if phi.kind == "modified" else None
    record = ModificationRecord(lambda_=lam, x0=x0)
    c_base = estimate_coercivity(_shifted_only(base, x0))
    if lam > 0:
        c, coercive = min(c_base, lam), c_base > 0
    else:
        c, coercive = lam, False
    logger.debug(f"phi_lambda built: lambda={lam}, coercivity={c:.6g}, coercive={coercive}")
    return Anisotropy(kind="modified", dim=phi.dim, base=base, modification=record,
                      coercivity_c=c, coercive=coercive)


def _shifted_only(base, x0):
    if x0 is None:
        return base
    return Anisotropy(kind="modified", dim=base.dim, base=base, modification=ModificationRecord(x0=tuple(x0)))


def make_phi_shifted(phi, x0):
    """
    The shifted density phi(nu) - x0.nu.

    A lambda-modified input keeps its ray value consistently:
    (phi_lambda)_x0 = (phi_x0)_(lambda + x0.e_d).

    Raises:
        NonCoercive: when the sampled coercivity constant is not positive,
        i.e. x0 is not an interior point of the Wulff shape
    """
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    if x0.shape != (phi.dim,):
        raise ValueError(f"x0 must be a {phi.dim}-vector")
    if not np.all(np.isfinite(x0)):
        raise NonFiniteInput("x0 has non-finite components")
    if not np.any(x0):
        return phi

    base = phi.base if phi.kind == "modified" else phi
    old = phi.modification if phi.kind == "modified" else ModificationRecord()
    total = x0 + (np.asarray(old.x0) if old.x0 is not None else 0.0)
    lam = None if old.lambda_ is None else old.lambda_ + float(x0[-1])

    eps = estimate_coercivity(_shifted_only(base, tuple(total.tolist())))
    if eps <= 0.0:
        raise NonCoercive(f"x0 = {total.tolist()} is not interior to the Wulff shape (epsilon = {eps:.3g})")

    record = ModificationRecord(lambda_=lam, x0=tuple(total.tolist()))
    if lam is None:
        c, coercive = eps, True
    elif lam > 0:
        c, coercive = min(eps, lam), True
    else:
        c, coercive = lam, False
    logger.debug(f"phi shifted by {total.tolist()}: epsilon={eps:.6g}")
    return Anisotropy(kind="modified", dim=phi.dim, base=base, modification=record,
                      coercivity_c=c, coercive=coercive)


def choose_x0(phi, lam, wulff=None):
    """
    Interior point x0 of W_phi turning lambda into a positive coefficient.

    Bisects along t*x_bar, t in (0, 1), where x_bar is the centre of the top
    face of W_phi, until lambda' = lambda + x0.e_d and the coercivity of the
    shifted density both clear the configured margin.

    Args:
        phi: convex coercive density
        lam: adhesion coefficient in the partial wetting interval
        wulff: precomputed Wulff polytope of phi (built when omitted)

    Returns:
        np.ndarray: the point x0
    """
    d = phi.dim
    e_d = _basis(d, d - 1)
    lower, upper = -phi(e_d), phi(-e_d)
    if not lower < lam < upper:
        raise RegimeError(f"lambda = {lam} outside the partial wetting interval ({lower:.6g}, {upper:.6g})")

    margin = config.X0_MARGIN
    # phi_x0(-e_d) - lambda' equals phi(-e_d) - lambda for every x0
    if upper - lam < margin:
        raise RegimeError(f"lambda = {lam} is within {margin} of the drying threshold {upper:.6g}; "
                          f"no shift widens that gap")
    if lam >= margin:
        return np.zeros(d)

    if wulff is None:
        from geometry.convex_geometry import build_wulff
        wulff = build_wulff(phi)
    from geometry.convex_geometry import support_function
    _, top = support_function(wulff, e_d)
    x_bar = top.mean(axis=0)

    dirs = sample_directions(d)
    base_values = phi.evaluate(dirs)
    lo, hi = 0.0, 1.0
    for step in range(200):
        t = 0.5 * (lo + hi)
        x0 = t * x_bar
        lam_shifted = lam + x0[-1]
        eps = float(np.min(base_values - dirs @ x0))
        if lam_shifted < margin:
            lo = t
        elif eps < margin:
            hi = t
        else:
            logger.debug(f"choose_x0: t={t:.9f} after {step + 1} bisections, lambda'={lam_shifted:.6g}, eps={eps:.6g}")
            return x0
    raise RegimeError(f"No admissible x0 found for lambda = {lam}; interval too narrow for margin {margin}")


def convex_envelope(phi, wulff):
    """
    phi** as the support function of the Wulff polytope of phi.

    Args:
        phi: any density (its Wulff polytope is supplied by the caller)
        wulff: ConvexPolytope, the Wulff shape of phi

    Returns:
        Anisotropy: support kind over the polytope vertices
    """
    if wulff.empty or len(wulff.vertices) == 0:
        raise ValueError("Convex envelope needs a non-empty Wulff polytope")
    if wulff.dim != phi.dim:
        raise ValueError("Polytope and anisotropy dimensions differ")
    return Anisotropy.support(wulff.vertices)
