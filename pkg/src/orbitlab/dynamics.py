"""Polynomial self-maps of a ball, their orbits, and certified norm data.

Maps are multivariate polynomials R^N -> R^N restricted to the closed ball of
``domain_radius`` (default 1).  A `PerturbedMap` is a base polynomial plus a
stack of perturbation terms; terms only need a small duck-typed protocol
(value / jac / derivative / *_bound), so graded perturbation vectors and
root-product corrections both plug in.

All certified quantities here are honest one-sided bounds: coefficient sums
bound derivatives from above, grid evaluations plus a Lipschitz term bound
sup-norms, and the inverse-map C1 norm is bounded through the smallest
singular value of the Jacobian on a grid with a curvature correction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    ConfigurationError,
    InvalidInputError,
    MapDomainError,
    OrbitEscapeError,
)
from .perturbation import (
    BrickSpec,
    brick_d1_bound,
    brick_d2_bound,
    brick_sup_bound,
    check_admissible,
    monomial_d1_bound,
    monomial_d2_bound,
    monomial_sup_bound,
)

__all__ = [
    "PolynomialMap",
    "RootProductPerturbation",
    "PerturbedMap",
    "as_perturbed",
    "OrbitSegment",
    "orbit",
    "cocycle",
    "NormBounds",
    "norm_bounds",
    "certified_range_1d",
    "invariant_radius",
]

_polyval = np.polynomial.polynomial.polyval
_polyder = np.polynomial.polynomial.polyder


def _as_point(x, dim: int) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.shape != (dim,):
        raise InvalidInputError(f"expected a point of shape ({dim},), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("non-finite point")
    return arr


class PolynomialMap:
    """Polynomial map stored as exponent rows (T, N) and coefficient rows (T, N)."""

    def __init__(self, dim: int, exponents, coeffs, domain_radius: float = 1.0):
        if dim < 1:
            raise InvalidInputError("dimension must be >= 1")
        self.dim = int(dim)
        self.exponents = np.asarray(exponents, dtype=np.int64).reshape(-1, dim)
        self.coeffs = np.asarray(coeffs, dtype=float).reshape(-1, dim)
        if self.exponents.shape[0] != self.coeffs.shape[0]:
            raise InvalidInputError("exponent/coefficient row mismatch")
        if np.any(self.exponents < 0):
            raise InvalidInputError("negative exponent")
        if not np.all(np.isfinite(self.coeffs)):
            raise InvalidInputError("non-finite coefficient")
        if domain_radius <= 0:
            raise InvalidInputError("domain_radius must be positive")
        self.domain_radius = float(domain_radius)
        self._uni = None
        self._duni = None
        if self.dim == 1:
            deg = int(self.exponents[:, 0].max()) if len(self.exponents) else 0
            uni = np.zeros(deg + 1)
            for e, c in zip(self.exponents[:, 0], self.coeffs[:, 0]):
                uni[e] += c
            self._uni = uni
            self._duni = _polyder(uni) if len(uni) > 1 else np.zeros(1)

    # -- constructors ---------------------------------------------------------

    @classmethod
    def univariate(cls, coeffs: Sequence[float], domain_radius: float = 1.0) -> "PolynomialMap":
        """1-D map from ascending coefficients: f(x) = c0 + c1 x + c2 x^2 + ..."""
        coeffs = list(coeffs)
        if not coeffs:
            coeffs = [0.0]
        expo = [[k] for k in range(len(coeffs))]
        return cls(1, expo, [[c] for c in coeffs], domain_radius)

    @classmethod
    def from_terms(cls, dim: int, terms: dict, domain_radius: float = 1.0) -> "PolynomialMap":
        """Map from {alpha tuple: coefficient vector}."""
        acc: dict = {}
        for alpha, vec in terms.items():
            alpha = tuple(int(a) for a in alpha)
            vec = np.asarray(vec, dtype=float).reshape(dim)
            acc[alpha] = acc.get(alpha, np.zeros(dim)) + vec
        if not acc:
            acc[(0,) * dim] = np.zeros(dim)
        alphas = sorted(acc.keys())
        return cls(dim, alphas, [acc[a] for a in alphas], domain_radius)

    @classmethod
    def identity(cls, dim: int, domain_radius: float = 1.0) -> "PolynomialMap":
        terms = {}
        for j in range(dim):
            alpha = tuple(1 if i == j else 0 for i in range(dim))
            vec = np.zeros(dim)
            vec[j] = 1.0
            terms[alpha] = vec
        return cls.from_terms(dim, terms, domain_radius)

    @classmethod
    def linear(cls, matrix, domain_radius: float = 1.0) -> "PolynomialMap":
        matrix = np.asarray(matrix, dtype=float)
        dim = matrix.shape[0]
        terms = {}
        for j in range(dim):
            alpha = tuple(1 if i == j else 0 for i in range(dim))
            terms[alpha] = matrix[:, j]
        return cls.from_terms(dim, terms, domain_radius)

    @property
    def degree(self) -> int:
        if len(self.exponents) == 0:
            return 0
        return int(self.exponents.sum(axis=1).max())

    # -- evaluation -------------------------------------------------------------

    def evaluate(self, x):
        """Value at one point: scalar in, scalar out for dim 1."""
        if self.dim == 1:
            return float(_polyval(float(x), self._uni))
        x = _as_point(x, self.dim)
        if len(self.exponents) == 0:
            return np.zeros(self.dim)
        mon = np.prod(x[None, :] ** self.exponents, axis=1)
        return mon @ self.coeffs

    def eval_many(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if self.dim == 1:
            return _polyval(xs, self._uni)
        if len(self.exponents) == 0:
            return np.zeros_like(xs)
        mon = np.prod(xs[:, None, :] ** self.exponents[None, :, :], axis=2)
        return mon @ self.coeffs

    def derivative(self, x: float) -> float:
        if self.dim != 1:
            raise InvalidInputError("scalar derivative is defined for dim 1 only")
        return float(_polyval(float(x), self._duni))

    def deriv_many(self, xs: np.ndarray) -> np.ndarray:
        if self.dim != 1:
            raise InvalidInputError("scalar derivative is defined for dim 1 only")
        return _polyval(np.asarray(xs, dtype=float), self._duni)

    def jac(self, x) -> np.ndarray:
        if self.dim == 1:
            return np.array([[self.derivative(x)]])
        x = _as_point(x, self.dim)
        J = np.zeros((self.dim, self.dim))
        for j in range(self.dim):
            a_j = self.exponents[:, j]
            mask = a_j > 0
            if not np.any(mask):
                continue
            red = self.exponents[mask].copy()
            red[:, j] -= 1
            mon = np.prod(x[None, :] ** red, axis=1) * a_j[mask]
            J[:, j] = mon @ self.coeffs[mask]
        return J

    jacobian = jac

    # -- certified coefficient bounds -------------------------------------------

    def sup_bound(self, radius: float) -> float:
        return monomial_sup_bound(self.exponents, self.coeffs, radius)

    def d1_bound(self, radius: float) -> float:
        return monomial_d1_bound(self.exponents, self.coeffs, radius)

    def d2_bound(self, radius: float) -> float:
        return monomial_d2_bound(self.exponents, self.coeffs, radius)

    def __repr__(self):
        return f"PolynomialMap(dim={self.dim}, terms={len(self.exponents)}, degree={self.degree})"


@dataclass(frozen=True)
class RootProductPerturbation:
    """1-D perturbation of the form scale * prod_j (x - roots[j]).

    Roots are listed with multiplicity and evaluated in list order, so a
    caller that divides by the same product reproduces the identical float.
    Evaluation in product form keeps the value exact (a signed zero) at every
    root, which is what makes interpolation-type corrections leave prescribed
    orbit points untouched at machine precision.
    """

    scale: float
    roots: tuple

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(float(r) for r in self.roots))
        if not math.isfinite(self.scale):
            raise InvalidInputError("non-finite scale")

    def value(self, x: float) -> float:
        p = self.scale
        for r in self.roots:
            p *= x - r
        return p

    def value_many(self, xs: np.ndarray) -> np.ndarray:
        p = np.full_like(np.asarray(xs, dtype=float), self.scale)
        for r in self.roots:
            p *= xs - r
        return p

    def derivative(self, x: float) -> float:
        v, d = self.scale, 0.0
        for r in self.roots:
            d = d * (x - r) + v
            v = v * (x - r)
        return d

    def deriv_many(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        v = np.full_like(xs, self.scale)
        d = np.zeros_like(xs)
        for r in self.roots:
            d = d * (xs - r) + v
            v = v * (xs - r)
        return d

    def jac(self, x) -> np.ndarray:
        return np.array([[self.derivative(float(np.asarray(x).reshape(())))]])

    def sup_bound(self, radius: float) -> float:
        p = abs(self.scale)
        for r in self.roots:
            p *= radius + abs(r)
        return p

    def d1_bound(self, radius: float) -> float:
        v, d = abs(self.scale), 0.0
        for r in self.roots:
            d = d * (radius + abs(r)) + v
            v = v * (radius + abs(r))
        return d

    def d2_bound(self, radius: float) -> float:
        v, d, dd = abs(self.scale), 0.0, 0.0
        for r in self.roots:
            dd = dd * (radius + abs(r)) + 2.0 * d
            d = d * (radius + abs(r)) + v
            v = v * (radius + abs(r))
        return dd


class PerturbedMap:
    """Base polynomial map plus an ordered stack of perturbation terms."""

    def __init__(self, base: PolynomialMap, perturbation=None):
        if not isinstance(base, PolynomialMap):
            raise InvalidInputError("base must be a PolynomialMap")
        self.base = base
        if perturbation is None:
            terms: tuple = ()
        elif isinstance(perturbation, (list, tuple)):
            terms = tuple(perturbation)
        else:
            terms = (perturbation,)
        for t in terms:
            if not (hasattr(t, "value") and hasattr(t, "jac")):
                raise InvalidInputError("perturbation term lacks value/jac")
            if getattr(t, "dim", base.dim) != base.dim:
                raise InvalidInputError("perturbation dimension mismatch")
        self.terms = terms

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def domain_radius(self) -> float:
        return self.base.domain_radius

    def with_term(self, term) -> "PerturbedMap":
        return PerturbedMap(self.base, self.terms + (term,))

    def evaluate(self, x):
        y = self.base.evaluate(x)
        for t in self.terms:
            y = y + t.value(x)
        return y

    def eval_many(self, xs: np.ndarray) -> np.ndarray:
        y = self.base.eval_many(xs)
        for t in self.terms:
            y = y + t.value_many(xs)
        return y

    def derivative(self, x: float) -> float:
        d = self.base.derivative(x)
        for t in self.terms:
            d += t.derivative(x)
        return d

    def deriv_many(self, xs: np.ndarray) -> np.ndarray:
        d = self.base.deriv_many(xs)
        for t in self.terms:
            d = d + t.deriv_many(xs)
        return d

    def jac(self, x) -> np.ndarray:
        J = self.base.jac(x)
        for t in self.terms:
            J = J + t.jac(x)
        return J

    jacobian = jac

    def sup_bound(self, radius: float) -> float:
        return self.base.sup_bound(radius) + sum(t.sup_bound(radius) for t in self.terms)

    def d1_bound(self, radius: float) -> float:
        return self.base.d1_bound(radius) + sum(t.d1_bound(radius) for t in self.terms)

    def d2_bound(self, radius: float) -> float:
        return self.base.d2_bound(radius) + sum(t.d2_bound(radius) for t in self.terms)

    def __repr__(self):
        return f"PerturbedMap(base={self.base!r}, terms={len(self.terms)})"


def as_perturbed(f) -> PerturbedMap:
    """Wrap a bare PolynomialMap; pass a PerturbedMap through unchanged."""
    if isinstance(f, PerturbedMap):
        return f
    return PerturbedMap(f, None)


# -- orbits -------------------------------------------------------------------


@dataclass
class OrbitSegment:
    """Finite trajectory: points x_0..x_{n-1}, their images, and Jacobians."""

    points: np.ndarray  # (n, N)
    images: np.ndarray  # (n, N)
    jacobians: np.ndarray  # (n, N, N)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def points1d(self) -> np.ndarray:
        if self.dim != 1:
            raise InvalidInputError("points1d is defined for dim 1 only")
        return self.points[:, 0]

    @property
    def images1d(self) -> np.ndarray:
        if self.dim != 1:
            raise InvalidInputError("images1d is defined for dim 1 only")
        return self.images[:, 0]


def _eval_point(f, x: np.ndarray) -> np.ndarray:
    if f.dim == 1:
        return np.array([f.evaluate(float(x[0]))])
    return np.asarray(f.evaluate(x), dtype=float)


def orbit(f, x0, n: int, radius: Optional[float] = None) -> OrbitSegment:
    """Iterate f for n steps from x0, checking containment in the domain ball.

    Raises MapDomainError if x0 is already outside, OrbitEscapeError (with
    the index of the first offending iterate) if any image leaves the ball.
    """
    f = as_perturbed(f)
    if n < 1:
        raise InvalidInputError("orbit length must be >= 1")
    if radius is None:
        radius = f.domain_radius
    edge = radius * (1.0 + 1e-12)
    x = _as_point(x0, f.dim)
    if float(np.linalg.norm(x)) > edge:
        raise MapDomainError(f"start point outside the radius-{radius:g} ball", point=x)
    pts = np.empty((n, f.dim))
    imgs = np.empty((n, f.dim))
    jacs = np.empty((n, f.dim, f.dim))
    for j in range(n):
        pts[j] = x
        img = _eval_point(f, x)
        jacs[j] = f.jac(float(x[0]) if f.dim == 1 else x)
        imgs[j] = img
        if float(np.linalg.norm(img)) > edge:
            raise OrbitEscapeError(
                f"iterate {j + 1} left the radius-{radius:g} ball",
                escape_index=j + 1,
                point=img,
            )
        x = img
    return OrbitSegment(pts, imgs, jacs)


def cocycle(orb: OrbitSegment) -> np.ndarray:
    """Jacobian of the n-fold composition along the orbit:
    jac(x_{n-1}) @ ... @ jac(x_0)."""
    n, dim = orb.points.shape
    M = np.eye(dim)
    for j in range(n):
        M = orb.jacobians[j] @ M
    return M


# -- certified ranges and norm data --------------------------------------------


def certified_range_1d(f, radius: float, n_points: int = 2049):
    """Certified enclosure of f([-radius, radius]) for a 1-D map:
    grid extrema padded by the derivative bound times half the grid step."""
    f = as_perturbed(f)
    if f.dim != 1:
        raise InvalidInputError("certified_range_1d needs a 1-D map")
    xs = np.linspace(-radius, radius, n_points)
    vals = f.eval_many(xs)
    pad = f.d1_bound(radius) * (xs[1] - xs[0]) / 2.0
    return float(vals.min() - pad), float(vals.max() + pad)


_LADDER = (1.0, 1.0625, 1.125, 1.25, 1.5)


def invariant_radius(f, ladder: Sequence[float] = _LADDER) -> Optional[float]:
    """Smallest radius R = domain_radius * factor (factor from `ladder`) with a
    certified f([-R, R]) inside [-R, R]; None when no rung certifies."""
    f = as_perturbed(f)
    if f.dim != 1:
        raise InvalidInputError("invariant_radius needs a 1-D map")
    for factor in ladder:
        R = f.domain_radius * factor
        lo, hi = certified_range_1d(f, R)
        if lo >= -R and hi <= R:
            return R
    return None


@dataclass
class NormBounds:
    """Certified norm data for a perturbed family over a brick.

    m1 bounds the C1 norms of the map and its inverse; m1rho additionally
    dominates the Holder-Jacobian norm and the floor 2^(1/rho).  The inverse
    bound comes from the smallest singular value of the Jacobian on a grid,
    corrected by the curvature bound times the covering radius; it is +inf
    when invertibility cannot be certified.
    """

    m1: float
    m1rho: float
    rho: float
    forward_c0: float = math.nan
    forward_c1: float = math.nan
    forward_c1rho: float = math.nan
    inverse_c1: float = math.nan
    sigma_min_lower: float = math.nan
    grid_points: int = 0


def norm_bounds(
    f: PolynomialMap,
    brick: Optional[BrickSpec] = None,
    rho: float = 1.0,
    grid_points: int = 2049,
) -> NormBounds:
    """Bound the uniform C1 / C(1+rho) data of the family {f + eps} over a brick."""
    f = as_perturbed(f)
    if brick is None:
        brick = BrickSpec.empty()
    if not 0.0 < rho <= 1.0:
        raise InvalidInputError("rho must lie in (0, 1]")
    cert = check_admissible(brick, f.dim)
    if not cert.condition_a_converges:
        raise ConfigurationError(f"brick series diverges on the ball: {cert.reason}")
    R = f.domain_radius
    b_c0 = brick_sup_bound(brick, f.dim, R)
    b_d1 = brick_d1_bound(brick, f.dim, R)
    b_d2 = brick_d2_bound(brick, f.dim, R)

    if f.dim == 1:
        lo, hi = certified_range_1d(f, R, grid_points)
        # the grid range and the coefficient bound are both certified; keep
        # the tighter of the two (the grid pad would otherwise inflate maps
        # whose sup is attained flatly, e.g. the identity)
        f_c0 = min(max(abs(lo), abs(hi)), f.sup_bound(R))
        n_grid = grid_points
    else:
        f_c0 = f.sup_bound(R)
        n_grid = 0
    f_d1 = f.d1_bound(R)
    f_d2 = f.d2_bound(R)

    c0 = f_c0 + b_c0
    d1 = f_d1 + b_d1
    d2 = f_d2 + b_d2
    forward_c1 = max(c0, d1)
    holder = d2 * (2.0 * R) ** (1.0 - rho)
    forward_c1rho = max(forward_c1, holder)

    # inverse C1 bound: worst-case smallest singular value of the Jacobian
    sigma_lo, used = _sigma_min_lower(f, R, d2, b_d1)
    if sigma_lo > 0.0:
        inverse_c1 = max(R, 1.0 / sigma_lo)
    else:
        inverse_c1 = math.inf
    n_grid = max(n_grid, used)

    m1 = max(1.0, forward_c1, inverse_c1)
    m1rho = max(m1, 2.0 ** (1.0 / rho), forward_c1rho)
    return NormBounds(
        m1=m1,
        m1rho=m1rho,
        rho=rho,
        forward_c0=c0,
        forward_c1=forward_c1,
        forward_c1rho=forward_c1rho,
        inverse_c1=inverse_c1,
        sigma_min_lower=sigma_lo,
        grid_points=n_grid,
    )


def _sigma_min_lower(f: PerturbedMap, R: float, d2_total: float, brick_d1: float):
    """Certified lower bound for min over the ball and the brick of
    sigma_min(d f_eps): grid minimum minus curvature and brick corrections."""
    if f.dim == 1:
        n = 4097
        xs = np.linspace(-R, R, n)
        sig = np.abs(f.deriv_many(xs))
        cover = (xs[1] - xs[0]) / 2.0
        lo = float(sig.min()) - d2_total * cover - brick_d1
        return max(lo, 0.0), n
    per_axis = max(9, int(33 / f.dim) * 2 + 1)
    axes = [np.linspace(-R, R, per_axis)] * f.dim
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, f.dim)
    mesh = mesh[np.linalg.norm(mesh, axis=1) <= R * (1 + 1e-12)]
    if len(mesh) == 0:
        mesh = np.zeros((1, f.dim))
    sig = min(float(np.linalg.svd(f.jac(x), compute_uv=False)[-1]) for x in mesh)
    step = 2.0 * R / (per_axis - 1)
    cover = step * math.sqrt(f.dim) / 2.0
    # interior points are covered within `cover`; points near the sphere may be
    # farther from the mesh, so widen the correction by one full step
    lo = sig - d2_total * (cover + step) - brick_d1
    return max(lo, 0.0), len(mesh)
