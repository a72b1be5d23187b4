"""Distance of a linear operator's action from the unit circle.

For a real square matrix L the quantity of interest is

    gamma(L) = min over phases phi in [0, 1) of sigma_min(L - e^{2 pi i phi} I),

the smallest distance between L v and a unit-circle rotation of a unit vector.
gamma(L) = 0 exactly when L has an eigenvalue on the unit circle; for a normal
matrix it equals the spectral gap min_j ||lambda_j| - 1|.

The phase profile phi -> sigma_min(L - e^{2 pi i phi} I) is 2*pi Lipschitz,
so a uniform phase grid brackets the minimum: with `phase_grid` samples the
returned value overshoots the true infimum by at most pi / phase_grid, and a
bounded 1-D minimization then polishes the best bracket down to `refine_tol`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .dynamics import OrbitSegment, as_perturbed, cocycle
from .errors import InvalidInputError

__all__ = [
    "HyperbolicityValue",
    "gamma_linear",
    "is_gamma_hyperbolic",
    "orbit_hyperbolicity",
]


@dataclass(frozen=True)
class HyperbolicityValue:
    """gamma value, the phase achieving it, and the certified bracket width:
    the true infimum lies in [gamma - certified_tolerance, gamma]."""

    gamma: float
    argmin_phase: float
    certified_tolerance: float


def _as_square(matrix) -> np.ndarray:
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise InvalidInputError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidInputError("non-finite matrix entry")
    return m


def gamma_linear(matrix, phase_grid: int = 256, refine_tol: float = 1e-10) -> HyperbolicityValue:
    """Compute gamma(L) by phase-grid search plus bracketed refinement.

    The result is an upper bound on the true value; the grid's Lipschitz
    bracket guarantees it is within pi/phase_grid of it.  1x1 matrices are
    solved in closed form: gamma = ||lambda| - 1|.
    """
    L = _as_square(matrix)
    if phase_grid < 8:
        raise InvalidInputError("phase_grid must be at least 8")
    if refine_tol <= 0:
        raise InvalidInputError("refine_tol must be positive")
    n = L.shape[0]
    if n == 1:
        lam = float(L[0, 0])
        gamma = abs(abs(lam) - 1.0)
        phase = 0.0 if lam >= 0.0 else 0.5
        return HyperbolicityValue(gamma=gamma, argmin_phase=phase, certified_tolerance=0.0)

    eye = np.eye(n)
    phases = np.arange(phase_grid) / phase_grid
    units = np.exp(2j * np.pi * phases)
    stack = L[None, :, :].astype(complex) - units[:, None, None] * eye[None, :, :]
    svals = np.linalg.svd(stack, compute_uv=False)[:, -1]
    j = int(np.argmin(svals))
    grid_min = float(svals[j])

    def profile(phi: float) -> float:
        shifted = L.astype(complex) - np.exp(2j * np.pi * phi) * eye
        return float(np.linalg.svd(shifted, compute_uv=False)[-1])

    h = 1.0 / phase_grid
    res = minimize_scalar(
        profile,
        bounds=(phases[j] - h, phases[j] + h),
        method="bounded",
        options={"xatol": refine_tol / (4.0 * math.pi)},
    )
    if res.fun < grid_min:
        gamma = float(res.fun)
        phase = float(res.x) % 1.0
    else:
        gamma = grid_min
        phase = float(phases[j])
    return HyperbolicityValue(
        gamma=gamma,
        argmin_phase=phase,
        certified_tolerance=math.pi / phase_grid,
    )


def is_gamma_hyperbolic(
    matrix, gamma: float, phase_grid: int = 256, refine_tol: float = 1e-10
) -> bool:
    """True when the computed distance to the unit circle is at least `gamma`.

    The computed value overestimates the truth by at most the certified
    tolerance, so for a sound claim at the boundary compare against
    ``value.gamma - value.certified_tolerance`` yourself.
    """
    if not math.isfinite(gamma) or gamma < 0:
        raise InvalidInputError("threshold gamma must be a finite nonnegative real")
    return gamma_linear(matrix, phase_grid, refine_tol).gamma >= gamma


def orbit_hyperbolicity(
    f, orb: OrbitSegment, phase_grid: int = 256, refine_tol: float = 1e-10
) -> HyperbolicityValue:
    """gamma of the Jacobian cocycle along a finite orbit of f."""
    f = as_perturbed(f)
    if orb.dim != f.dim:
        raise InvalidInputError("orbit dimension does not match the map")
    edge = f.domain_radius * (1.0 + 1e-9)
    norms = np.linalg.norm(orb.points, axis=1)
    if np.any(norms > edge):
        raise InvalidInputError("orbit leaves the domain of the map")
    return gamma_linear(cocycle(orb), phase_grid, refine_tol)
