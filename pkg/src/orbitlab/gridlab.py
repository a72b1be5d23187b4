"""Grid discretization of orbits and pseudo-trajectory enumeration.

At stage n the continuum picture is coarsened to a lattice (spacing h) fine
enough that grid pseudo-orbits faithfully shadow the periodic points being
counted.  The spacing is driven by the hyperbolicity threshold at that stage:

    gamma_n   = exp(-C n^(1+delta))                (multiplier margin)
    h_n       = (M^(-2n) gamma_n)^(1/rho) / N      (grid spacing)
    slack_n   = N (M + 1) h_n                      (pseudo-orbit tolerance)

with N the dimension and M the norm bound of the map family.  h_n shrinks
stretched-exponentially; the arithmetic is done in log space and a saturation
flag reports when the float range runs out.

The lattice is the integer lattice scaled by h: a point snaps to the nearest
lattice point coordinate-wise.  A period-n pseudo-trajectory is a cyclic
sequence of lattice points where each step lands within `slack` of the image
of the previous point (sup norm).
"""

from __future__ import annotations

import itertools
import math
import sys
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .census import GrowthParams
from .dynamics import OrbitSegment, as_perturbed
from .errors import InvalidInputError
from .lagrange import product_of_distances

__all__ = [
    "StageTolerances",
    "stage_tolerances",
    "snap",
    "cells_per_axis",
    "GridTrajectory",
    "SnapResult",
    "snap_orbit",
    "PseudoOrbitCensus",
    "enumerate_pseudotrajectories",
    "close_return",
    "SimpleClassification",
    "classify_simple",
]

_LOG_MIN = math.log(sys.float_info.min)


@dataclass(frozen=True)
class StageTolerances:
    """Grid spacing and slack for one stage of the discretized census."""

    period: int
    gamma_n: float
    grid_spacing: float
    log_grid_spacing: float
    pseudo_slack: float
    saturated: bool


def stage_tolerances(n: int, dim: int, m_bound: float, growth: GrowthParams) -> StageTolerances:
    """Stage-n tolerances for a dimension-`dim` family with norm bound
    `m_bound` and stretched-exponential profile `growth`.

    Computed in log space; `saturated` flags spacings below the smallest
    normal float (grid_spacing then underflows, log_grid_spacing stays
    exact).
    """
    if n < 1:
        raise InvalidInputError("stage index must be >= 1")
    if dim < 1:
        raise InvalidInputError("dimension must be >= 1")
    if not (math.isfinite(m_bound) and m_bound >= 1.0):
        raise InvalidInputError("norm bound must be finite and >= 1")
    log_gamma = -growth.C * float(n) ** (1.0 + growth.delta)
    log_h = (log_gamma - 2.0 * n * math.log(m_bound)) / growth.rho - math.log(dim)
    saturated = log_h < _LOG_MIN
    h = math.exp(log_h) if log_h > -745.0 else 0.0
    slack = dim * (m_bound + 1.0) * h
    return StageTolerances(
        period=n,
        gamma_n=math.exp(log_gamma),
        grid_spacing=h,
        log_grid_spacing=log_h,
        pseudo_slack=slack,
        saturated=saturated,
    )


def snap(x, spacing: float):
    """Nearest lattice point of the `spacing`-scaled integer lattice
    (coordinate-wise; exact halves follow round-half-to-even)."""
    if not (spacing > 0 and math.isfinite(spacing)):
        raise InvalidInputError("spacing must be a positive finite real")
    arr = np.asarray(x, dtype=float)
    out = np.rint(arr / spacing) * spacing
    return float(out) if out.ndim == 0 else out


def cells_per_axis(radius: float, spacing: float) -> int:
    """Number of lattice points per axis inside [-radius, radius]."""
    if not (radius > 0 and spacing > 0):
        raise InvalidInputError("radius and spacing must be positive")
    return 2 * int(math.floor(radius / spacing + 0.5)) + 1


@dataclass(frozen=True)
class GridTrajectory:
    """A cyclic sequence of lattice points (integer coordinates, one row per
    stage point)."""

    spacing: float
    cells: np.ndarray  # (n, N) integers

    def __post_init__(self):
        if not (self.spacing > 0 and math.isfinite(self.spacing)):
            raise InvalidInputError("spacing must be a positive finite real")
        c = np.asarray(self.cells, dtype=np.int64)
        if c.ndim == 1:
            c = c[:, None]
        if c.ndim != 2 or c.shape[0] < 1:
            raise InvalidInputError("cells must be a nonempty (n, N) integer array")
        object.__setattr__(self, "cells", c)

    @property
    def n(self) -> int:
        return self.cells.shape[0]

    @property
    def dim(self) -> int:
        return self.cells.shape[1]

    @property
    def points(self) -> np.ndarray:
        return self.cells * self.spacing

    def realized_slack(self, f) -> float:
        """max_k | f(x_k) - x_{k+1 mod n} | (sup norm) over the cycle."""
        f = as_perturbed(f)
        pts = self.points
        worst = 0.0
        for k in range(self.n):
            x = pts[k] if self.dim > 1 else float(pts[k, 0])
            y = np.atleast_1d(np.asarray(f.evaluate(x), dtype=float))
            nxt = pts[(k + 1) % self.n]
            worst = max(worst, float(np.max(np.abs(y - nxt))))
        return worst


class SnapResult(NamedTuple):
    trajectory: GridTrajectory
    slack: float


def snap_orbit(f, orbit, spacing: float) -> SnapResult:
    """Snap one period of an orbit to the lattice and measure the slack the
    snapped cycle realizes under f.

    `orbit` is an OrbitSegment or an array of points covering one period
    (the initial point not repeated at the end).
    """
    if isinstance(orbit, OrbitSegment):
        pts = orbit.points
    else:
        pts = np.asarray(orbit, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
    if not (spacing > 0 and math.isfinite(spacing)):
        raise InvalidInputError("spacing must be a positive finite real")
    cells = np.rint(pts / spacing).astype(np.int64)
    traj = GridTrajectory(spacing=spacing, cells=cells)
    return SnapResult(trajectory=traj, slack=traj.realized_slack(f))


# -- enumeration --------------------------------------------------------------------


@dataclass(frozen=True)
class PseudoOrbitCensus:
    """Count of admissible length-n grid tuples out of a fixed starting cell."""

    period: int
    spacing: float
    slack: float
    radius: float
    start: object
    count: int
    expansions: int
    partial: bool
    samples: tuple


def _start_cell(start, spacing: float, dim: int):
    """Normalize `start` to lattice coordinates: integers index cells
    directly, floats are points snapped to the nearest cell."""
    arr = np.asarray(start)
    if dim == 1:
        if arr.shape not in ((), (1,)):
            raise InvalidInputError("start must be a scalar for a 1-D map")
    elif arr.shape != (dim,):
        raise InvalidInputError(f"start must have {dim} coordinates")
    if arr.dtype.kind in "iu":
        cells = np.atleast_1d(arr).astype(np.int64)
    elif arr.dtype.kind == "f":
        cells = np.rint(np.atleast_1d(arr) / spacing).astype(np.int64)
    else:
        raise InvalidInputError("start must be numeric")
    if dim == 1:
        return int(cells[0])
    return tuple(int(c) for c in cells)


def _axis_range(y: float, spacing: float, slack: float, max_cell: int) -> range:
    if math.isinf(slack):
        return range(-max_cell, max_cell + 1)
    lo = int(math.ceil((y - slack) / spacing - 1e-12))
    hi = int(math.floor((y + slack) / spacing + 1e-12))
    return range(max(lo, -max_cell), min(hi, max_cell) + 1)


def _successors_1d(f, cell: int, spacing: float, slack: float, max_cell: int):
    if math.isinf(slack):
        return range(-max_cell, max_cell + 1)
    y = f.evaluate(cell * spacing)
    return _axis_range(float(y), spacing, slack, max_cell)


def _successors_nd(f, cell: tuple, spacing: float, slack: float, max_cell: int):
    if math.isinf(slack):
        axis = range(-max_cell, max_cell + 1)
        return itertools.product(*[axis] * len(cell))
    x = np.asarray(cell, dtype=float) * spacing
    y = np.atleast_1d(np.asarray(f.evaluate(x), dtype=float))
    return itertools.product(*[_axis_range(float(yi), spacing, slack, max_cell) for yi in y])


def enumerate_pseudotrajectories(
    f,
    spacing: float,
    slack: float,
    start,
    n: int,
    budget: int = 10_000_000,
    max_samples: int = 4,
) -> PseudoOrbitCensus:
    """Count the admissible length-n grid tuples starting at `start`.

    A tuple (c_0, ..., c_{n-1}) of lattice cells (spacing h, every point
    inside [-R, R]^N for the map's domain radius R) is admissible when
    c_0 = start and each step satisfies |f(c_j h) - c_{j+1} h| <= slack in
    sup norm.  Counting is breadth-first, one layer per step, with one
    successor-set computation per distinct cell; `budget` caps those
    computations, and when it runs out the unexplored branches are dropped,
    so the returned count is a lower bound and `partial` is set.  `start`
    is a lattice cell when given as integers, or a point snapped to the
    nearest cell when given as floats.  An infinite slack admits every cell
    as a successor, which makes the count the full combinatorial one.
    """
    f = as_perturbed(f)
    if n < 1:
        raise InvalidInputError("period must be >= 1")
    if not (spacing > 0 and math.isfinite(spacing)):
        raise InvalidInputError("spacing must be a positive finite real")
    if not (slack >= 0):
        raise InvalidInputError("slack must be a nonnegative real")
    if budget < 0:
        raise InvalidInputError("budget must be nonnegative")
    R = f.domain_radius
    max_cell = int(math.floor(R / spacing + 0.5))
    N = f.dim
    start = _start_cell(start, spacing, N)
    coords = (start,) if N == 1 else start
    if any(abs(c) > max_cell for c in coords):
        raise InvalidInputError("start lies outside the lattice over the domain")
    if N == 1:
        compute = lambda c: _successors_1d(f, c, spacing, slack, max_cell)  # noqa: E731
    else:
        compute = lambda c: _successors_nd(f, c, spacing, slack, max_cell)  # noqa: E731

    cache: dict = {}
    state = {"expansions": 0, "partial": False}

    def successors(c):
        out = cache.get(c)
        if out is None:
            if state["expansions"] >= budget:
                state["partial"] = True
                return None
            state["expansions"] += 1
            out = tuple(compute(c))
            cache[c] = out
        return out

    frontier = {start: 1}
    for _ in range(n - 1):
        nxt: dict = {}
        for c, cnt in frontier.items():
            succ = successors(c)
            if succ is None:
                continue
            for s in succ:
                nxt[s] = nxt.get(s, 0) + cnt
        frontier = nxt
        if not frontier:
            break
    count = sum(frontier.values())

    return PseudoOrbitCensus(
        period=n,
        spacing=float(spacing),
        slack=float(slack),
        radius=float(R),
        start=start,
        count=count,
        expansions=state["expansions"],
        partial=state["partial"],
        samples=_collect_samples(cache, start, n, max_samples),
    )


def _collect_samples(cache, start, n, max_samples):
    """Up to `max_samples` admissible tuples, depth-first in cell order,
    restricted to the successor sets already computed."""
    if max_samples <= 0:
        return ()
    out: list = []
    stack = [(start, (start,))]
    while stack and len(out) < max_samples:
        c, path = stack.pop()
        if len(path) == n:
            out.append(path)
            continue
        succ = cache.get(c)
        if not succ:
            continue
        for s in reversed(succ):
            stack.append((s, path + (s,)))
    return tuple(out)


# -- recurrence diagnostics ----------------------------------------------------------


def close_return(trajectory, threshold: float) -> Optional[int]:
    """Smallest k in [1, n-1] with |x_k - x_0| < threshold (sup norm, strict);
    None when the trajectory keeps its distance.  The comparison is strict,
    so threshold 0 never fires."""
    if isinstance(trajectory, GridTrajectory):
        pts = trajectory.points
    elif isinstance(trajectory, OrbitSegment):
        pts = trajectory.points
    else:
        pts = np.asarray(trajectory, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
    x0 = pts[0]
    for k in range(1, len(pts)):
        if float(np.max(np.abs(pts[k] - x0))) < threshold:
            return k
    return None


class SimpleClassification(NamedTuple):
    simple: bool
    log_product: float
    log_floor: float


def classify_simple(trajectory, floor: float) -> SimpleClassification:
    """Classify a 1-D trajectory as `simple` when the product of distances
    from its last point to all earlier points stays at or above `floor`
    (comparison done on logarithms to dodge underflow)."""
    if isinstance(trajectory, GridTrajectory):
        if trajectory.dim != 1:
            raise InvalidInputError("classification is 1-D only")
        pts = trajectory.points[:, 0]
    else:
        pts = trajectory
    if not (floor >= 0 and math.isfinite(floor)):
        raise InvalidInputError("floor must be a finite nonnegative real")
    dp = product_of_distances(pts)
    log_floor = math.log(floor) if floor > 0 else -math.inf
    return SimpleClassification(simple=dp.log >= log_floor, log_product=dp.log, log_floor=log_floor)
