"""Shared helpers for the test suite.

Random objects are drawn with fixed seeds so failures reproduce exactly.
"""

import numpy as np
import pytest

from orbitlab import PolynomialMap


def random_contraction(rng, degree=3, budget=0.9, domain_radius=1.0):
    """A univariate polynomial map sending [-R, R] strictly into itself.

    Coefficients are scaled so that sum |c_j| R^j <= budget * R, which also
    keeps the derivative bound below budget * degree / R.
    """
    coeffs = rng.uniform(-1.0, 1.0, size=degree + 1)
    powers = domain_radius ** np.arange(degree + 1)
    total = float(np.sum(np.abs(coeffs) * powers))
    if total > 0:
        coeffs *= budget * domain_radius / total
    return PolynomialMap.univariate(coeffs, domain_radius=domain_radius)


def spaced_points(rng, n, low=-1.0, high=1.0, min_gap=0.05):
    """n points in [low, high] pairwise separated by at least min_gap."""
    for _ in range(1000):
        pts = np.sort(rng.uniform(low, high, size=n))
        if n == 1 or np.min(np.diff(pts)) >= min_gap:
            return rng.permutation(pts)
    raise AssertionError("could not draw separated points")


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
