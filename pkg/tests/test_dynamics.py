"""Tests for map construction, orbits, and certified norm bounds."""

import math

import numpy as np
import pytest

from orbitlab import (
    InvalidInputError,
    OrbitEscapeError,
    PolynomialMap,
    as_perturbed,
    certified_range_1d,
    cocycle,
    invariant_radius,
    norm_bounds,
    orbit,
)

from conftest import random_contraction


def test_univariate_evaluate_and_derivative():
    f = PolynomialMap.univariate([-1.0, 0.0, 1.0])  # x^2 - 1
    assert f.evaluate(0.5) == pytest.approx(-0.75)
    assert f.derivative(0.5) == pytest.approx(1.0)
    assert f.evaluate(-2.0) == pytest.approx(3.0)
    assert f.derivative(-2.0) == pytest.approx(-4.0)


def test_eval_many_matches_scalar(rng):
    f = random_contraction(rng)
    xs = rng.uniform(-1.0, 1.0, size=40)
    g = as_perturbed(f)
    many = g.eval_many(xs.reshape(-1, 1))[:, 0]
    for x, y in zip(xs, many):
        assert y == pytest.approx(f.evaluate(float(x)), abs=1e-14)


def test_orbit_shapes_and_values():
    f = PolynomialMap.univariate([0.0, 0.5])
    seg = orbit(f, 0.8, 4)
    assert seg.points.shape == (4, 1)
    assert np.allclose(seg.points1d, [0.8, 0.4, 0.2, 0.1])
    assert np.allclose(seg.images1d, [0.4, 0.2, 0.1, 0.05])
    assert np.allclose(seg.jacobians[:, 0, 0], 0.5)


def test_orbit_escape():
    f = PolynomialMap.univariate([0.0, 3.0], domain_radius=1.0)
    with pytest.raises(OrbitEscapeError):
        orbit(f, 0.9, 5)


def test_cocycle_product_is_chain_rule():
    f = PolynomialMap.univariate([-1.0, 0.0, 1.0], domain_radius=2.0)
    seg = orbit(f, 0.3, 3)
    j = cocycle(seg)
    manual = 1.0
    x = 0.3
    for _ in range(3):
        manual *= f.derivative(x)
        x = f.evaluate(x)
    assert j[0, 0] == pytest.approx(manual, rel=1e-12)


def test_certified_range_contains_true_range(rng):
    for _ in range(20):
        f = random_contraction(rng)
        lo, hi = certified_range_1d(f, 1.0)
        xs = np.linspace(-1.0, 1.0, 2001)
        ys = np.array([f.evaluate(float(x)) for x in xs])
        assert lo <= ys.min() + 1e-12
        assert hi >= ys.max() - 1e-12


def test_invariant_radius_quadratic():
    f = PolynomialMap.univariate([-1.0, 0.0, 1.0], domain_radius=1.0625)
    r = invariant_radius(f)
    assert r == pytest.approx(1.0625, abs=1e-9)


def test_invariant_radius_contraction():
    f = PolynomialMap.univariate([0.0, 0.5], domain_radius=3.0)
    assert invariant_radius(f) > 0


def test_norm_bounds_identity_exact():
    f = PolynomialMap.univariate([0.0, 1.0], domain_radius=1.0)
    nb = norm_bounds(f, rho=1.0)
    assert nb.m1 == 1.0


def test_norm_bounds_halving():
    f = PolynomialMap.univariate([0.0, 0.5], domain_radius=1.0)
    nb = norm_bounds(f, rho=1.0)
    # forward C1 norm is 1/2 but the inverse doubles, so the bound is 2
    assert nb.m1 == pytest.approx(2.0, abs=1e-9)
    assert nb.m1rho == pytest.approx(2.0, abs=1e-9)
    nb_half_rho = norm_bounds(f, rho=0.5)
    assert nb_half_rho.m1rho == pytest.approx(4.0, abs=1e-9)


def test_norm_bounds_unbounded_inverse():
    # f'(0) = 0, so no uniform inverse bound exists
    f = PolynomialMap.univariate([-1.0, 0.0, 1.0], domain_radius=1.0625)
    nb = norm_bounds(f, rho=1.0)
    assert math.isinf(nb.m1)


def test_norm_bounds_rejects_bad_rho():
    f = PolynomialMap.univariate([0.0, 0.5])
    with pytest.raises(InvalidInputError):
        norm_bounds(f, rho=0.0)
    with pytest.raises(InvalidInputError):
        norm_bounds(f, rho=1.5)


def test_univariate_rejects_bad_radius():
    with pytest.raises(InvalidInputError):
        PolynomialMap.univariate([0.0, 1.0], domain_radius=0.0)
    # empty coefficient list is the zero map, not an error
    assert PolynomialMap.univariate([]).evaluate(0.3) == 0.0
