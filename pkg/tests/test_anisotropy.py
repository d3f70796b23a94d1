#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Tests for surface tension densities and their substrate modifications."""

import sys
import os
import math
import logging

import numpy as np
import pytest

# Add parent directory to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

# Configure logging
logging.basicConfig(
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    level=logging.INFO
)
logger = logging.getLogger("anisotropy_test")

from geometry.anisotropy import (Anisotropy, choose_x0, convex_envelope, make_phi_lambda,
                                 make_phi_shifted, on_downward_ray, sample_directions)
from geometry.convex_geometry import build_wulff
from geometry.errors import NonCoercive, NonFiniteInput, NotDifferentiable, RegimeError, Unbounded


def test_base_values():
    """Closed-form values of the base kinds."""
    cases = [
        # (density, direction, expected, description)
        (Anisotropy.pnorm(1), (3.0, 4.0), 7.0, "l1"),
        (Anisotropy.pnorm(2), (3.0, 4.0), 5.0, "l2"),
        (Anisotropy.pnorm(math.inf), (3.0, -4.0), 4.0, "l-infinity"),
        (Anisotropy.pnorm(3), (1.0, 1.0), 2 ** (1 / 3), "l3"),
        (Anisotropy.weighted([[2, 0], [0, 1]]), (1.0, 0.0), 2.0, "weighted diag(2,1)"),
        (Anisotropy.crystalline([[1, 1], [-1, 1], [-1, -1], [1, -1]]), (0.3, -0.4), 0.7, "crystalline square"),
        (Anisotropy.pnorm(2, dim=3), (1.0, 2.0, 2.0), 3.0, "l2 in 3D"),
    ]
    for phi, nu, expected, description in cases:
        logger.info(f"{description}: phi({nu}) = {phi(nu)}")
        assert phi(nu) == pytest.approx(expected, rel=1e-12), description


def test_homogeneity_and_batch_evaluation():
    rng = np.random.default_rng(1)
    phi = Anisotropy.weighted([[1.5, 0.2], [0.0, 0.7]])
    nus = rng.normal(size=(50, 2))
    scaled = phi.evaluate(2.5 * nus)
    assert np.allclose(scaled, 2.5 * phi.evaluate(nus), rtol=1e-13)
    assert np.allclose(phi.evaluate(nus), [phi(nu) for nu in nus])


def test_large_p_does_not_overflow():
    phi = Anisotropy.pnorm(400)
    assert phi((1e3, 1e3)) == pytest.approx(1e3 * 2 ** (1 / 400))


def test_non_finite_direction_is_rejected():
    with pytest.raises(NonFiniteInput):
        Anisotropy.pnorm(2)((float("nan"), 1.0))
    with pytest.raises(NonFiniteInput):
        Anisotropy.pnorm(2).gradient(np.array([math.inf, 0.0]))


def test_coercivity():
    assert Anisotropy.pnorm(2).coercive
    assert Anisotropy.pnorm(1).coercivity_c == pytest.approx(1.0)
    # support of a triangle away from the origin is not coercive, but allowed
    phi = Anisotropy.support([[1, 0], [2, 0], [1, 1]])
    assert not phi.coercive
    with pytest.raises(Unbounded):
        build_wulff(phi)
    with pytest.raises(NonCoercive):
        Anisotropy.crystalline([[1, 0], [2, 0], [1, 1]])


def test_gradients():
    assert np.allclose(Anisotropy.pnorm(2).gradient([3.0, 4.0]), [0.6, 0.8])
    assert np.allclose(Anisotropy.weighted([[2, 0], [0, 1]]).gradient([1.0, 0.0]), [2.0, 0.0])
    assert np.allclose(Anisotropy.crystalline([[1, 1], [-1, 1], [-1, -1], [1, -1]]).gradient([0.3, 0.4]), [1, 1])
    with pytest.raises(NotDifferentiable):
        Anisotropy.pnorm(1).gradient([0.3, 0.4])
    with pytest.raises(NotDifferentiable):
        Anisotropy.pnorm(2).gradient([0.0, 0.0])
    with pytest.raises(NotDifferentiable):
        Anisotropy.crystalline([[1, 1], [-1, 1], [-1, -1], [1, -1]]).gradient([1.0, 0.0])


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(3)
    phi = Anisotropy.pnorm(3)
    for nu in rng.normal(size=(20, 2)):
        h = 1e-6
        fd = np.array([(phi(nu + h * e) - phi(nu - h * e)) / (2 * h) for e in np.eye(2)])
        assert np.allclose(phi.gradient(nu), fd, atol=1e-6)


def test_lambda_modification_replaces_downward_ray_only():
    phi = Anisotropy.pnorm(2)
    phi_lam = make_phi_lambda(phi, 0.5)
    assert phi_lam((0.0, -1.0)) == pytest.approx(0.5)
    assert phi_lam((0.0, -2.0)) == pytest.approx(1.0)
    # off the ray the base value is kept, however close to it
    assert phi_lam((1e-18, -1.0)) == pytest.approx(1.0)
    assert phi_lam((0.0, 1.0)) == pytest.approx(1.0)
    assert phi_lam.coercive and phi_lam.coercivity_c == pytest.approx(0.5)
    assert not phi_lam.is_convex
    with pytest.raises(NotDifferentiable):
        phi_lam.gradient(np.array([0.0, -1.0]))


def test_nonpositive_lambda_is_not_coercive():
    for lam in (0.0, -0.3):
        phi_lam = make_phi_lambda(Anisotropy.pnorm(2), lam)
        assert not phi_lam.coercive
        with pytest.raises(Unbounded):
            build_wulff(phi_lam)


def test_downward_ray_test_is_exact():
    nus = np.array([[0.0, -1.0], [-0.0, -3.0], [1e-300, -1.0], [0.0, 1.0]])
    assert on_downward_ray(nus).tolist() == [True, True, False, False]


def test_shifted_density():
    phi = Anisotropy.pnorm(2)
    shifted = make_phi_shifted(phi, [0.2, 0.1])
    assert shifted((1.0, 0.0)) == pytest.approx(0.8)
    assert shifted((0.0, -1.0)) == pytest.approx(1.1)
    assert shifted.coercivity_c == pytest.approx(1.0 - math.hypot(0.2, 0.1), abs=1e-5)
    assert np.allclose(shifted.gradient([0.0, 1.0]), [-0.2, 0.9])
    assert make_phi_shifted(phi, [0.0, 0.0]) is phi
    with pytest.raises(NonCoercive):
        make_phi_shifted(phi, [2.0, 0.0])


def test_shift_of_lambda_modified_density_moves_lambda():
    phi_lam = make_phi_lambda(Anisotropy.pnorm(2), 0.3)
    both = make_phi_shifted(phi_lam, [0.1, 0.2])
    assert both.modification.variant == "both"
    assert both.lambda_mod == pytest.approx(0.5)
    assert both((0.0, -1.0)) == pytest.approx(0.5)
    assert both((1.0, 0.0)) == pytest.approx(0.9)


def test_choose_x0():
    phi = Anisotropy.pnorm(2)
    assert np.all(choose_x0(phi, 0.4) == 0.0)
    x0 = choose_x0(phi, -0.5)
    assert np.allclose(x0, [0.0, 0.75], atol=1e-9)
    shifted = make_phi_lambda(make_phi_shifted(phi, x0), -0.5 + x0[-1])
    assert shifted.coercive
    with pytest.raises(RegimeError):
        choose_x0(phi, -1.0)
    with pytest.raises(RegimeError):
        choose_x0(phi, 1.5)
    # no shift can move lambda away from the drying threshold
    assert np.all(choose_x0(phi, 0.99) == 0.0)
    with pytest.raises(RegimeError):
        choose_x0(phi, 1.0 - 1e-8)


def test_convex_envelope_of_lambda_modified_l1():
    phi_lam = make_phi_lambda(Anisotropy.pnorm(1), 0.5)
    envelope = convex_envelope(phi_lam, build_wulff(phi_lam))
    for nu, expected in [((0, 1), 1.0), ((1, 0), 1.0), ((0, -1), 0.5), ((1, -1), 1.5)]:
        assert envelope(np.array(nu, dtype=float)) == pytest.approx(expected)
    # the envelope never exceeds the density
    dirs = sample_directions(2, 360)
    assert np.all(envelope.evaluate(dirs) <= phi_lam.evaluate(dirs) + 1e-12)


def test_to_dict():
    assert Anisotropy.pnorm(math.inf).to_dict() == {"kind": "pnorm", "p": "inf", "dim": 2}
    data = make_phi_lambda(Anisotropy.weighted([[2, 0], [0, 1]]), 0.3).to_dict()
    assert data == {"kind": "weighted", "A": [[2.0, 0.0], [0.0, 1.0]], "lambda_mod": 0.3}


def test_sample_directions_hit_axes_exactly():
    dirs = sample_directions(2, 64)
    assert any(np.array_equal(d, [0.0, -1.0]) for d in dirs)
    assert np.allclose(np.linalg.norm(sample_directions(3, 100), axis=1), 1.0)
