"""Graded spaces of homogeneous vector polynomials and random brick sampling.

A degree-k component is a homogeneous polynomial map R^N -> R^N written in
monomial coordinates e_alpha, |alpha| = k.  The scalar product weights each
monomial by the inverse multinomial coefficient,

    <eps_k, zeta_k>_k = sum_{|alpha|=k} multinomial(k, alpha)^-1 <eps_alpha, zeta_alpha>,

which makes the norm invariant under orthogonal changes of variables.  A
brick is a product of degree-wise balls with radii r_k drawn from a family
(factorial, geometric, or an explicit finite list); sampling is uniform in
each ball and degrees are independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigurationError, InvalidInputError

__all__ = [
    "multi_indices",
    "multinomial",
    "nu",
    "weighted_inner",
    "HomogeneousComponent",
    "BrickSpec",
    "AdmissibilityCertificate",
    "check_admissible",
    "sample",
    "zero_vector",
    "PerturbationVector",
    "eval_perturbation",
    "eval_jacobian",
    "tail_bound",
    "brick_sup_bound",
    "brick_d1_bound",
    "brick_d2_bound",
]

_INDEX_CACHE: dict = {}


def multi_indices(k: int, dim: int) -> tuple:
    """All exponent tuples alpha with |alpha| = k in `dim` variables,
    in descending lexicographic order (deterministic coordinate order)."""
    if k < 0 or dim < 1:
        raise InvalidInputError(f"bad degree/dimension ({k}, {dim})")
    key = (k, dim)
    if key not in _INDEX_CACHE:
        if dim == 1:
            out = ((k,),)
        else:
            out = tuple(
                (first,) + rest
                for first in range(k, -1, -1)
                for rest in multi_indices(k - first, dim - 1)
            )
        _INDEX_CACHE[key] = out
    return _INDEX_CACHE[key]


def multinomial(k: int, alpha: Sequence[int]) -> int:
    """k! / prod(alpha_i!), the number of ways to place k items into slots alpha."""
    if sum(alpha) != k:
        raise InvalidInputError(f"alpha {alpha} does not sum to {k}")
    out = math.factorial(k)
    for a in alpha:
        out //= math.factorial(a)
    return out


def nu(k: int, dim: int) -> int:
    """Dimension of the space of homogeneous degree-k maps R^dim -> R^dim."""
    if k < 0 or dim < 1:
        raise InvalidInputError(f"bad degree/dimension ({k}, {dim})")
    return dim * math.comb(k + dim - 1, dim - 1)


@dataclass
class HomogeneousComponent:
    """Degree-k homogeneous polynomial map: coefficient rows aligned with
    ``multi_indices(degree, dim)``; each row is the R^dim coefficient vector."""

    degree: int
    dim: int
    coeffs: np.ndarray  # shape (len(multi_indices), dim)

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        want = (len(multi_indices(self.degree, self.dim)), self.dim)
        if self.coeffs.shape != want:
            raise InvalidInputError(
                f"degree-{self.degree} component in dimension {self.dim} "
                f"needs coefficients of shape {want}, got {self.coeffs.shape}"
            )
        if not np.all(np.isfinite(self.coeffs)):
            raise InvalidInputError("non-finite coefficient")

    @property
    def alphas(self) -> tuple:
        return multi_indices(self.degree, self.dim)

    def weighted_norm(self) -> float:
        return math.sqrt(weighted_inner(self, self))

    @classmethod
    def zero(cls, degree: int, dim: int) -> "HomogeneousComponent":
        return cls(degree, dim, np.zeros((len(multi_indices(degree, dim)), dim)))


def _weights(degree: int, dim: int) -> np.ndarray:
    alphas = multi_indices(degree, dim)
    return np.array([1.0 / multinomial(degree, a) for a in alphas])


def weighted_inner(a: HomogeneousComponent, b: HomogeneousComponent) -> float:
    """Orthogonally invariant scalar product on one graded component."""
    if a.degree != b.degree or a.dim != b.dim:
        raise InvalidInputError("components live in different graded spaces")
    w = _weights(a.degree, a.dim)
    return float(np.sum(w * np.sum(a.coeffs * b.coeffs, axis=1)))


@dataclass(frozen=True)
class BrickSpec:
    """Product of degree-wise balls: degree k gets radius ``sizes[k]``.

    ``family`` is one of "factorial" (tau/k!), "geometric" (tau*q^k, q < 1)
    or "custom" (explicit finite list).  ``truncation_degree`` is the largest
    degree realized; everything above it is quantified by `tail_bound`.
    """

    family: str
    sizes: tuple
    truncation_degree: int
    tau: Optional[float] = None
    q: Optional[float] = None

    def __post_init__(self):
        if self.family not in ("factorial", "geometric", "custom"):
            raise InvalidInputError(f"unknown brick family {self.family!r}")
        sizes = tuple(float(s) for s in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        if len(sizes) != self.truncation_degree + 1:
            raise InvalidInputError("sizes must list radii for degrees 0..truncation_degree")
        if any(s <= 0 for s in sizes):
            raise InvalidInputError("brick radii must be positive")
        if any(sizes[i + 1] > sizes[i] * (1 + 1e-12) for i in range(len(sizes) - 1)):
            raise InvalidInputError("brick radii must be nonincreasing")

    @classmethod
    def factorial(cls, tau: float, truncation_degree: int) -> "BrickSpec":
        if tau <= 0:
            raise InvalidInputError("tau must be positive")
        sizes = tuple(tau / math.factorial(k) for k in range(truncation_degree + 1))
        return cls("factorial", sizes, truncation_degree, tau=tau)

    @classmethod
    def geometric(cls, tau: float, q: float, truncation_degree: int) -> "BrickSpec":
        if tau <= 0:
            raise InvalidInputError("tau must be positive")
        if not 0 < q < 1:
            raise InvalidInputError("geometric ratio must satisfy 0 < q < 1")
        sizes = tuple(tau * q**k for k in range(truncation_degree + 1))
        return cls("geometric", sizes, truncation_degree, tau=tau, q=q)

    @classmethod
    def custom(cls, sizes: Sequence[float]) -> "BrickSpec":
        sizes = tuple(sizes)
        if not sizes:
            raise InvalidInputError("custom brick needs at least one radius; see empty()")
        return cls("custom", sizes, len(sizes) - 1)

    @classmethod
    def empty(cls) -> "BrickSpec":
        """Brick with no degrees at all (the unperturbed family)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "family", "custom")
        object.__setattr__(obj, "sizes", ())
        object.__setattr__(obj, "truncation_degree", -1)
        object.__setattr__(obj, "tau", None)
        object.__setattr__(obj, "q", None)
        return obj

    def to_record(self) -> dict:
        rec = {
            "family": self.family,
            "truncation_degree": self.truncation_degree,
            "sizes": list(self.sizes),
        }
        if self.tau is not None:
            rec["tau"] = self.tau
        if self.q is not None:
            rec["q"] = self.q
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "BrickSpec":
        family = rec["family"]
        if family == "factorial":
            return cls.factorial(rec["tau"], rec["truncation_degree"])
        if family == "geometric":
            return cls.geometric(rec["tau"], rec["q"], rec["truncation_degree"])
        sizes = rec.get("sizes", [])
        if not sizes:
            return cls.empty()
        return cls.custom(sizes)


@dataclass(frozen=True)
class AdmissibilityCertificate:
    """Outcome of the symbolic admissibility check for a radius family.

    ``status`` is "admissible" for the catalog families (their radii decay
    slower than exp(-C k^(1+delta)) for every C, delta > 0, so the brick keeps
    full measure-theoretic weight at all stretched-exponential scales) and
    "finite-prefix-only" for custom lists, where the tail property is not
    decidable from a prefix.  ``condition_a_converges`` reports whether
    sum_k r_k dim^(k/2) converges, which controls uniform convergence of the
    perturbation series on the unit ball.
    """

    status: str
    admissible: Optional[bool]
    condition_a_converges: bool
    reason: str


def check_admissible(brick: BrickSpec, dim: int = 1) -> AdmissibilityCertificate:
    """Certify a brick family: catalog families are admissible outright,
    custom lists only as finite prefixes."""
    root = math.sqrt(dim)
    if brick.family == "factorial" or (brick.family == "custom" and brick.truncation_degree < 0):
        return AdmissibilityCertificate(
            status="admissible" if brick.family == "factorial" else "finite-prefix-only",
            admissible=True if brick.family == "factorial" else None,
            condition_a_converges=True,
            reason="log(k!) grows like k log k, slower than C k^(1+delta); "
            "sum tau/k! dim^(k/2) converges by ratio test"
            if brick.family == "factorial"
            else "empty brick",
        )
    if brick.family == "geometric":
        converges = brick.q * root < 1
        return AdmissibilityCertificate(
            status="admissible",
            admissible=True,
            condition_a_converges=converges,
            reason="-k log q grows linearly, slower than C k^(1+delta); "
            + (
                "q sqrt(dim) < 1 so the series converges"
                if converges
                else "q sqrt(dim) >= 1 so the series diverges"
            ),
        )
    return AdmissibilityCertificate(
        status="finite-prefix-only",
        admissible=None,
        condition_a_converges=True,
        reason="tail behaviour is not decidable from a finite radius list",
    )


@dataclass
class PerturbationVector:
    """One element of a brick: a tuple of homogeneous components, degree
    0..truncation_degree, together with the brick it was drawn from."""

    dim: int
    components: tuple
    brick: Optional[BrickSpec] = None
    seed: Optional[tuple] = None
    _stack: Optional[tuple] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.components = tuple(self.components)
        for c in self.components:
            if c.dim != self.dim:
                raise InvalidInputError("component dimension mismatch")

    # -- evaluation ---------------------------------------------------------

    def _stacked(self):
        """Exponent and coefficient matrices pooled over all degrees."""
        if self._stack is None:
            if self.components:
                expo = np.concatenate(
                    [np.array(c.alphas, dtype=np.int64).reshape(-1, self.dim) for c in self.components]
                )
                coef = np.concatenate([c.coeffs for c in self.components])
            else:
                expo = np.zeros((0, self.dim), dtype=np.int64)
                coef = np.zeros((0, self.dim))
            uni = None
            if self.dim == 1:
                deg = int(expo[:, 0].max()) if len(expo) else 0
                uni = np.zeros(deg + 1)
                for e, c in zip(expo[:, 0], coef[:, 0]):
                    uni[e] += c
            self._stack = (expo, coef, uni)
        return self._stack

    def value(self, x):
        """Evaluate at a single point (scalar for dim 1, length-dim vector else)."""
        expo, coef, uni = self._stacked()
        if self.dim == 1:
            return float(np.polynomial.polynomial.polyval(float(x), uni))
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise InvalidInputError(f"expected point of shape ({self.dim},)")
        if len(expo) == 0:
            return np.zeros(self.dim)
        mon = np.prod(x[None, :] ** expo, axis=1)
        return mon @ coef

    def value_many(self, xs: np.ndarray) -> np.ndarray:
        expo, coef, uni = self._stacked()
        xs = np.asarray(xs, dtype=float)
        if self.dim == 1:
            return np.polynomial.polynomial.polyval(xs, uni)
        if len(expo) == 0:
            return np.zeros_like(xs)
        mon = np.prod(xs[:, None, :] ** expo[None, :, :], axis=2)
        return mon @ coef

    def derivative(self, x: float) -> float:
        expo, coef, uni = self._stacked()
        if self.dim != 1:
            raise InvalidInputError("scalar derivative is defined for dim 1 only")
        return float(np.polynomial.polynomial.polyval(float(x), np.polynomial.polynomial.polyder(uni)))

    def deriv_many(self, xs: np.ndarray) -> np.ndarray:
        expo, coef, uni = self._stacked()
        if self.dim != 1:
            raise InvalidInputError("scalar derivative is defined for dim 1 only")
        return np.polynomial.polynomial.polyval(np.asarray(xs, dtype=float), np.polynomial.polynomial.polyder(uni))

    def jac(self, x) -> np.ndarray:
        """Jacobian matrix at a point."""
        if self.dim == 1:
            return np.array([[self.derivative(x)]])
        expo, coef, uni = self._stacked()
        x = np.asarray(x, dtype=float)
        J = np.zeros((self.dim, self.dim))
        if len(expo) == 0:
            return J
        for j in range(self.dim):
            a_j = expo[:, j]
            mask = a_j > 0
            if not np.any(mask):
                continue
            red = expo[mask].copy()
            red[:, j] -= 1
            mon = np.prod(x[None, :] ** red, axis=1) * a_j[mask]
            J[:, j] = mon @ coef[mask]
        return J

    # -- bounds -------------------------------------------------------------

    def sup_bound(self, radius: float) -> float:
        expo, coef, _ = self._stacked()
        return monomial_sup_bound(expo, coef, radius)

    def d1_bound(self, radius: float) -> float:
        expo, coef, _ = self._stacked()
        return monomial_d1_bound(expo, coef, radius)

    def d2_bound(self, radius: float) -> float:
        expo, coef, _ = self._stacked()
        return monomial_d2_bound(expo, coef, radius)

    # -- serialization ------------------------------------------------------

    def to_record(self) -> dict:
        return {
            "dim": self.dim,
            "seed": list(self.seed) if self.seed is not None else None,
            "brick": self.brick.to_record() if self.brick is not None else None,
            "components": [
                {"degree": c.degree, "coeffs": c.coeffs.tolist()} for c in self.components
            ],
        }

    @classmethod
    def from_record(cls, rec: dict) -> "PerturbationVector":
        dim = int(rec["dim"])
        comps = tuple(
            HomogeneousComponent(int(c["degree"]), dim, np.array(c["coeffs"], dtype=float))
            for c in rec["components"]
        )
        brick = BrickSpec.from_record(rec["brick"]) if rec.get("brick") else None
        seed = tuple(rec["seed"]) if rec.get("seed") is not None else None
        return cls(dim, comps, brick, seed)


def eval_perturbation(eps: PerturbationVector, x):
    """Value of the perturbation at a point."""
    return eps.value(x)


def eval_jacobian(eps: PerturbationVector, x) -> np.ndarray:
    """Jacobian of the perturbation at a point."""
    return eps.jac(x)


# -- sampling ----------------------------------------------------------------


def sample(brick: BrickSpec, dim: int, seed) -> PerturbationVector:
    """Draw one perturbation uniformly from the brick.

    Per degree k: a standard Gaussian in the nu(k, dim) orthonormal
    coordinates is normalized to the sphere and scaled by r_k * U^(1/nu),
    which is the uniform law on the ball.  Monomial coefficients are
    recovered as c_alpha * sqrt(multinomial(k, alpha)).  Degrees are
    independent; the whole draw is a deterministic function of `seed`.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    comps = []
    for k in range(brick.truncation_degree + 1):
        alphas = multi_indices(k, dim)
        n_alpha = len(alphas)
        g = rng.standard_normal((n_alpha, dim))
        norm = float(np.sqrt(np.sum(g * g)))
        while norm == 0.0:  # probability-zero guard, keeps the draw well defined
            g = rng.standard_normal((n_alpha, dim))
            norm = float(np.sqrt(np.sum(g * g)))
        u = rng.random()
        r_k = brick.sizes[k]
        scale = r_k * u ** (1.0 / nu(k, dim)) / norm
        ortho = g * scale
        # orthonormal -> monomial coordinates
        factors = np.array([math.sqrt(multinomial(k, a)) for a in alphas])
        coeffs = ortho * factors[:, None]
        comp = HomogeneousComponent(k, dim, coeffs)
        # one deterministic clamp so membership survives rounding
        nrm = comp.weighted_norm()
        if nrm > r_k:
            comp = HomogeneousComponent(k, dim, coeffs * (r_k / nrm))
        comps.append(comp)
    seed_tag = None
    if isinstance(seed, (int, np.integer)):
        seed_tag = (int(seed),)
    elif isinstance(seed, (tuple, list)):
        seed_tag = tuple(int(s) for s in seed)
    return PerturbationVector(dim, tuple(comps), brick, seed_tag)


def zero_vector(brick: BrickSpec, dim: int) -> PerturbationVector:
    """The zero element, with the same graded structure as a sample."""
    comps = tuple(
        HomogeneousComponent.zero(k, dim) for k in range(brick.truncation_degree + 1)
    )
    return PerturbationVector(dim, comps, brick, None)


# -- tail and worst-case bounds ----------------------------------------------


def tail_bound(brick: BrickSpec, dim: int, k_max: Optional[int] = None) -> float:
    """Rigorous sup-norm bound on the discarded tail sum_{k > k_max} of the
    brick: sum r_k dim^(k/2) sqrt(dim), by Cauchy-Schwarz against
    sum_{|alpha|=k} multinomial(k, alpha) = dim^k."""
    if k_max is None:
        k_max = brick.truncation_degree
    root = math.sqrt(dim)
    if brick.family == "custom":
        # finite list: the tail beyond the list is empty
        total = 0.0
        for k in range(k_max + 1, brick.truncation_degree + 1):
            total += brick.sizes[k] * root**k
        return total * root
    if brick.family == "geometric":
        x = brick.q * root
        if x >= 1.0:
            raise ConfigurationError(
                f"geometric brick diverges on the ball: q*sqrt(dim) = {x:.6g} >= 1"
            )
        return brick.tau * root * x ** (k_max + 1) / (1.0 - x)
    # factorial: sum_{k>K} tau root^k / k!, summed until the geometric majorant
    # of the remainder is negligible, then closed off rigorously.
    total = 0.0
    k = k_max + 1
    term = brick.tau * root**k / math.factorial(k)
    while True:
        total += term
        k += 1
        nxt = term * root / k
        ratio = root / (k + 1)
        if ratio < 0.5 and nxt <= 1e-30 * max(total, 1e-300):
            # remainder <= nxt / (1 - ratio): fold it in and stop
            total += nxt / (1.0 - ratio)
            break
        term = nxt
    return total * root


def brick_sup_bound(brick: BrickSpec, dim: int, radius: float) -> float:
    """sup over the ball of radius `radius` of |eps(x)| for any eps in the
    brick: sum_k r_k radius^k (Cauchy-Schwarz in the weighted norm)."""
    return float(sum(r * radius**k for k, r in enumerate(brick.sizes)))


def brick_d1_bound(brick: BrickSpec, dim: int, radius: float) -> float:
    """Jacobian operator-norm bound over the brick: each partial derivative of
    a degree-k component has weighted norm at most k r_k."""
    root = math.sqrt(dim)
    return float(
        sum(root * k * r * radius ** (k - 1) for k, r in enumerate(brick.sizes) if k >= 1)
    )


def brick_d2_bound(brick: BrickSpec, dim: int, radius: float) -> float:
    """Second-derivative (bilinear form) bound over the brick."""
    return float(
        sum(
            dim * k * (k - 1) * r * radius ** (k - 2)
            for k, r in enumerate(brick.sizes)
            if k >= 2
        )
    )


# -- generic monomial coefficient bounds (shared with the dynamics layer) -----


def monomial_sup_bound(exponents: np.ndarray, coeffs: np.ndarray, radius: float) -> float:
    """Triangle-inequality sup bound on the ball for an explicit monomial sum."""
    if len(exponents) == 0:
        return 0.0
    total = np.abs(exponents).sum(axis=1)
    weights = radius ** total.astype(float)
    per_component = np.abs(coeffs).T @ weights
    return float(np.linalg.norm(per_component))


def monomial_d1_bound(exponents: np.ndarray, coeffs: np.ndarray, radius: float) -> float:
    """Frobenius bound on the Jacobian over the ball."""
    if len(exponents) == 0:
        return 0.0
    total = np.abs(exponents).sum(axis=1).astype(float)
    dim = exponents.shape[1]
    D = np.zeros((coeffs.shape[1], dim))
    for j in range(dim):
        a_j = exponents[:, j].astype(float)
        mask = a_j > 0
        if not np.any(mask):
            continue
        w = a_j[mask] * radius ** (total[mask] - 1.0)
        D[:, j] = np.abs(coeffs[mask]).T @ w
    return float(np.linalg.norm(D))


def monomial_d2_bound(exponents: np.ndarray, coeffs: np.ndarray, radius: float) -> float:
    """Frobenius bound on the second derivative (as a bilinear map) over the ball."""
    if len(exponents) == 0:
        return 0.0
    total = np.abs(exponents).sum(axis=1).astype(float)
    dim = exponents.shape[1]
    acc = 0.0
    for j in range(dim):
        for l in range(dim):
            a_j = exponents[:, j].astype(float)
            a_l = exponents[:, l].astype(float)
            factor = a_j * (a_j - 1.0) if j == l else a_j * a_l
            mask = (factor > 0) & (total >= 2)
            if not np.any(mask):
                continue
            w = factor[mask] * radius ** (total[mask] - 2.0)
            col = np.abs(coeffs[mask]).T @ w
            acc += float(np.sum(col * col))
    return math.sqrt(acc)
