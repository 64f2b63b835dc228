"""Affine lattices (lattice translates) and their angle statistics.

The angle pipeline follows the thinning-wedge renormalization: a sector of
radius R and angular half-width sigma/R^2 around direction theta is carried
by rotation(-theta) followed by the contraction diag(1/R, R) onto (almost)
the fixed triangle with vertices (0,0), (1, +-sigma), so wedge occupancy
probabilities become triangle occupancy probabilities of renormalized
lattices.  The fractional parts of sqrt(n) live in the same statistics,
which is why their generator sits in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .core import Mat2, Region, Vec2, diag_flow, rotation
from .errors import ResourceLimitError
from .lattice import lagrange_reduce
from .pointcloud import GapSequence, PointSystem
from .stats import EmpiricalDist, rng

__all__ = [
    "AffineLattice", "WedgeStats", "points_in_ball", "wedge_count",
    "renormalized_triangle_count", "empirical_p", "sqrt_mod1_gaps",
    "angle_gap_distribution",
]

ORIGIN_TOL = 1e-12
DEFAULT_CELL_BUDGET = 80_000_000

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class AffineLattice(PointSystem):
    """basis . Z^2 + shift, with the shift reduced into the fundamental cell.

    All points belong to the set (no primitivity filtering); the origin is
    excluded when the shift is trivial.
    """

    basis: Mat2
    shift: Vec2 = field(default=Vec2(0.0, 0.0))

    centrally_symmetric = False

    def __post_init__(self):
        det = float(self.basis.det())
        if abs(det - 1.0) > 1e-12:
            raise ValueError(f"basis determinant {det} is not 1")
        inv = self.basis.inverse()
        coeff = inv @ self.shift
        exact = isinstance(coeff.x, (int, Fraction)) and isinstance(coeff.y, (int, Fraction))
        if exact:
            fx, fy = coeff.x - math.floor(coeff.x), coeff.y - math.floor(coeff.y)
        else:
            fx, fy = float(coeff.x) % 1.0, float(coeff.y) % 1.0
        object.__setattr__(self, "shift", self.basis @ Vec2(fx, fy))

    def torsion_order(self) -> Optional[int]:
        """Smallest n with n*shift in the lattice, when the shift is rational."""
        coeff = self.basis.inverse() @ self.shift
        if isinstance(coeff.x, (int, Fraction)) and isinstance(coeff.y, (int, Fraction)):
            return math.lcm(Fraction(coeff.x).denominator,
                            Fraction(coeff.y).denominator)
        return None

    def act(self, g: Mat2) -> "AffineLattice":
        return AffineLattice(g @ self.basis, g @ self.shift)

    # -- enumeration -------------------------------------------------------

    def _box_points(self, xlo: float, xhi: float, ylo: float, yhi: float) -> np.ndarray:
        """All points in the closed box, as an (n, 2) float array, origin excluded.

        Per-row coefficient intervals over a reduced basis, so thin slanted
        boxes (the renormalized triangles) cost output size, not bounding
        box area.
        """
        red, _ = lagrange_reduce(self.basis.to_float())
        a, b, c, d = (float(e) for e in red.entries())
        sx, sy = float(self.shift.x), float(self.shift.y)
        if abs(b) < abs(a):
            a, b, c, d = b, a, d, c
        det = a * d - b * c
        corners = np.array([(x - sx, y - sy)
                            for x in (xlo, xhi) for y in (ylo, yhi)])
        ivals = (d * corners[:, 0] - b * corners[:, 1]) / det
        ilo, ihi = math.floor(ivals.min()) - 1, math.ceil(ivals.max()) + 1
        i = np.arange(ilo, ihi + 1, dtype=np.int64)

        jlo = np.full(i.shape, -np.inf)
        jhi = np.full(i.shape, np.inf)
        for (alin, blin, lo, hi) in ((a, b, xlo - sx, xhi - sx),
                                     (c, d, ylo - sy, yhi - sy)):
            if blin == 0.0:
                ok = (alin * i >= lo - 1e-9) & (alin * i <= hi + 1e-9)
                jlo = np.where(ok, jlo, np.inf)
                continue
            e1, e2 = (lo - alin * i) / blin, (hi - alin * i) / blin
            jlo = np.maximum(jlo, np.minimum(e1, e2))
            jhi = np.minimum(jhi, np.maximum(e1, e2))
        j0 = np.where(np.isfinite(jlo), np.floor(jlo) - 1, 0).astype(np.int64)
        j1 = np.where(np.isfinite(jhi) & np.isfinite(jlo), np.ceil(jhi) + 1, -1).astype(np.int64)
        lens = np.maximum(j1 - j0 + 1, 0)
        total = int(lens.sum())
        if total > DEFAULT_CELL_BUDGET:
            raise ResourceLimitError(f"{total} cells exceed the enumeration budget")
        reps = np.repeat(i, lens)
        starts = np.repeat(np.cumsum(lens) - lens, lens)
        js = np.repeat(j0, lens) + (np.arange(total) - starts)
        x = a * reps + b * js + sx
        y = c * reps + d * js + sy
        keep = (x >= xlo) & (x <= xhi) & (y >= ylo) & (y <= yhi) \
            & (x * x + y * y > ORIGIN_TOL ** 2)
        return np.column_stack([x[keep], y[keep]])

    def ball_points(self, radius: float) -> np.ndarray:
        """Points in the closed centered ball, as an (n, 2) float array."""
        if not radius > 0:
            raise ValueError("radius must be positive")
        pts = self._box_points(-radius, radius, -radius, radius)
        keep = pts[:, 0] ** 2 + pts[:, 1] ** 2 <= radius * radius
        return pts[keep]

    def enumerate_points(self, region: Region, limit: Optional[int] = None) -> list[Vec2]:
        radius = region.bounding_radius()
        if radius is None:
            raise ValueError(f"region {region!r} is unbounded")
        pts = self.ball_points(radius)
        if limit is not None and len(pts) > limit:
            raise ResourceLimitError(f"{len(pts)} points exceed the limit {limit}")
        return [Vec2(x, y) for x, y in pts if region.contains(Vec2(x, y))]


@dataclass(frozen=True)
class WedgeStats:
    """Empirical distribution of wedge occupancy counts over sampled directions."""

    sigma: float
    radius: float
    sample_count: int
    counts: tuple  # counts[i] = number of sampled directions with i points

    def fraction(self, i: int) -> float:
        if 0 <= i < len(self.counts):
            return self.counts[i] / self.sample_count
        return 0.0

    def fractions(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=float) / self.sample_count


def points_in_ball(lattice: AffineLattice, radius: float) -> list[Vec2]:
    """All points of the affine lattice in the closed ball (origin excluded)."""
    return [Vec2(x, y) for x, y in lattice.ball_points(radius)]


def _sorted_angles(lattice: AffineLattice, radius: float) -> np.ndarray:
    pts = lattice.ball_points(radius)
    if len(pts) == 0:
        return np.empty(0)
    ang = np.arctan2(pts[:, 1], pts[:, 0]) % TWO_PI
    ang.sort(kind="mergesort")
    return ang


def _window_counts(angles: np.ndarray, thetas: np.ndarray, half_width: float) -> np.ndarray:
    """Number of angles within +-half_width of each theta, circularly."""
    lo = (thetas - half_width) % TWO_PI
    hi = lo + 2.0 * half_width  # may pass 2 pi; handle the wrap by splitting
    below = np.searchsorted(angles, np.minimum(hi, TWO_PI), side="right") \
        - np.searchsorted(angles, lo, side="left")
    wrapped = np.where(hi > TWO_PI,
                       np.searchsorted(angles, hi - TWO_PI, side="right"), 0)
    return (below + wrapped).astype(np.int64)


def wedge_count(lattice: AffineLattice, theta: float, sigma: float, radius: float) -> int:
    """Number of lattice points in the thinning wedge around direction theta."""
    if not (sigma > 0 and radius > 0):
        raise ValueError("sigma and radius must be positive")
    angles = _sorted_angles(lattice, radius)
    counts = _window_counts(angles, np.array([float(theta)]), sigma / radius ** 2)
    return int(counts[0])


def renormalized_triangle_count(lattice: AffineLattice, theta: float,
                                sigma: float, radius: float) -> int:
    """Points of the rotated-and-contracted lattice inside the fixed triangle.

    Applies rotation(-theta), then the contraction diag(1/R, R) (the time
    -2 log R diagonal flow), which carries the wedge around theta onto the
    triangle (0,0), (1, +-sigma) up to curvature of the arc.
    """
    if not (sigma > 0 and radius > 0):
        raise ValueError("sigma and radius must be positive")
    g = diag_flow(-2.0 * math.log(radius)) @ rotation(-theta)
    moved = lattice.act(g)
    pts = moved._box_points(0.0, 1.0, -sigma, sigma)
    keep = np.abs(pts[:, 1]) <= sigma * pts[:, 0]
    return int(np.count_nonzero(keep))


def empirical_p(lattice: AffineLattice, sigma: float, radius: float,
                samples: int, seed: int) -> WedgeStats:
    """Fractions of uniformly random directions whose wedge holds i points."""
    if samples < 1:
        raise ValueError("need at least one direction sample")
    if not (sigma > 0 and radius > 0):
        raise ValueError("sigma and radius must be positive")
    gen = rng(seed)
    thetas = gen.uniform(0.0, TWO_PI, samples)
    angles = _sorted_angles(lattice, radius)
    counts = _window_counts(angles, thetas, sigma / radius ** 2)
    hist = np.bincount(counts)
    return WedgeStats(sigma=sigma, radius=radius, sample_count=samples,
                      counts=tuple(int(c) for c in hist))


def sqrt_mod1_gaps(n: int) -> GapSequence:
    """Normalized gaps of the sorted fractional parts of sqrt(k), k <= n.

    Perfect squares contribute the value 0; their density vanishes, so they
    are kept for the simpler contract.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    vals = np.sqrt(np.arange(1, n + 1, dtype=float))
    vals = np.sort(vals - np.floor(vals))
    return GapSequence(tuple(len(vals) * np.diff(vals)))


def angle_gap_distribution(lattice: AffineLattice, radius: float) -> EmpiricalDist:
    """Circular normalized gaps between the angles of ball points.

    Distinct angles are kept (ties collapse at 1e-12); gaps are scaled by
    count/(2 pi) including the wraparound gap, so the mean is exactly 1.
    """
    angles = _sorted_angles(lattice, radius)
    if len(angles) == 0:
        raise ValueError("no points in the ball; no angle gaps to form")
    keep = np.concatenate([[True], np.diff(angles) > 1e-12])
    angles = angles[keep]
    n = len(angles)
    if n < 2:
        raise ValueError("need at least two distinct angles")
    gaps = np.diff(np.concatenate([angles, [angles[0] + TWO_PI]]))
    return EmpiricalDist(np.sort(gaps * (n / TWO_PI)))
