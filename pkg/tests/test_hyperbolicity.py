"""Tests for the spectral distance-to-unit-circle computation."""

import math

import numpy as np
import pytest

from orbitlab import (
    InvalidInputError,
    PolynomialMap,
    gamma_linear,
    is_gamma_hyperbolic,
    orbit,
    orbit_hyperbolicity,
)


def eigen_oracle(m):
    """For normal matrices gamma equals min_j ||lambda_j| - 1|."""
    lams = np.linalg.eigvals(m)
    return float(np.min(np.abs(np.abs(lams) - 1.0)))


def test_identity_is_on_the_circle():
    hv = gamma_linear(np.eye(3))
    assert abs(hv.gamma) < 1e-12


def test_doubling_matrix():
    hv = gamma_linear(2.0 * np.eye(2))
    assert abs(hv.gamma - 1.0) < 1e-10
    assert hv.argmin_phase == pytest.approx(0.0, abs=1e-9)


def test_diagonal_oracle():
    m = np.diag([3.0, 0.25])
    # distances to the circle: 2 and 0.75
    assert gamma_linear(m).gamma == pytest.approx(0.75, abs=1e-10)


def test_rotation_is_not_hyperbolic():
    th = 0.7
    rot = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
    assert gamma_linear(rot).gamma < 1e-8


def test_symmetric_random_match_eigen_oracle(rng):
    for _ in range(60):
        d = int(rng.integers(2, 7))
        a = rng.normal(size=(d, d))
        m = (a + a.T) / 2.0
        hv = gamma_linear(m)
        assert hv.gamma == pytest.approx(eigen_oracle(m), abs=1e-8)


def test_dense_phase_grid_oracle(rng):
    """gamma is the min over phases of the smallest singular value; compare
    against a brute-force fine grid for generic (non-normal) matrices."""
    for _ in range(10):
        m = rng.normal(size=(3, 3))
        hv = gamma_linear(m)
        phases = np.linspace(0.0, 1.0, 4001)
        brute = min(
            float(np.linalg.svd(m - np.exp(2j * math.pi * p) * np.eye(3), compute_uv=False)[-1])
            for p in phases
        )
        assert hv.gamma <= brute + 1e-12
        assert hv.gamma >= brute - 1e-6


def test_certified_tolerance_tracks_grid():
    hv_coarse = gamma_linear(np.diag([2.0, 0.5]), phase_grid=64)
    hv_fine = gamma_linear(np.diag([2.0, 0.5]), phase_grid=1024)
    assert hv_fine.certified_tolerance < hv_coarse.certified_tolerance
    assert hv_coarse.certified_tolerance == pytest.approx(math.pi / 64)


def test_is_gamma_hyperbolic_threshold():
    m = np.diag([2.0, 2.0])
    assert is_gamma_hyperbolic(m, 0.5)
    assert is_gamma_hyperbolic(m, 1.0)  # gamma(m) == 1, inclusive comparison
    assert not is_gamma_hyperbolic(m, 1.001)
    assert is_gamma_hyperbolic(np.eye(2), 0.0)  # gamma == 0 >= 0
    with pytest.raises(InvalidInputError):
        is_gamma_hyperbolic(m, -0.1)


def test_rejects_nonsquare():
    with pytest.raises(InvalidInputError):
        gamma_linear(np.ones((2, 3)))


def test_orbit_hyperbolicity_linear_map():
    f = PolynomialMap.univariate([0.0, 0.5])
    seg = orbit(f, 0.5, 4)
    hv = orbit_hyperbolicity(f, seg)
    # cocycle of x/2 over 4 steps is 1/16
    assert hv.gamma == pytest.approx(1.0 - 2.0 ** -4, abs=1e-12)


def test_orbit_hyperbolicity_quadratic_fixed_point():
    f = PolynomialMap.univariate([-1.0, 0.0, 1.0])
    x = (1.0 - math.sqrt(5.0)) / 2.0
    seg = orbit(f, x, 1)
    hv = orbit_hyperbolicity(f, seg)
    assert hv.gamma == pytest.approx(math.sqrt(5.0) - 2.0, abs=1e-9)
