"""Abstract point systems and the slope/return-time machinery built on them.

A PointSystem assigns a discrete planar set to a state, equivariantly under
linear maps: the points of the transformed system are the transformed points.
All slope statistics flow through two facts about the vertical shear
(x, y) -> (x, y - s x):

  * it subtracts s from every slope, so slope gaps are shear-invariant;
  * a system has a slope s vector in the width-eta strip exactly when the
    sheared system has a horizontal vector of length at most eta,

so the sorted strip slopes coincide with the times at which the shear flow
hits the "horizontally short" transversal.  slopes_in_strip and
hitting_times compute the two sides of that equality through different code
paths, and their agreement is the load-bearing invariant of this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Mat2, Region, Vec2, VerticalStrip, is_exact, shear
from .errors import ExhaustionError, UnsupportedQueryError

__all__ = [
    "PointSystem", "SlopeSequence", "GapSequence", "slopes_in_strip", "gaps",
    "is_horizontally_short", "is_vertically_short", "is_exceptional",
    "hitting_times",
]

# |y| below this counts as horizontal for float systems (exact systems use 0)
AXIS_TOL = 1e-9

DEFAULT_POINT_BUDGET = 5_000_000

# strip heights grow geometrically up to height_budget before giving up
DEFAULT_HEIGHT_BUDGET = 2.0 ** 26


class PointSystem:
    """State x with a discrete set of nonzero planar points attached.

    Implementations must enumerate deterministically for a fixed state and
    region, and must satisfy equivariance: enumerating g.x over g.K returns
    exactly g applied to the enumeration of x over K.
    """

    #: whether v in the set implies -v in the set
    centrally_symmetric: bool = False

    def enumerate_points(self, region: Region, limit: Optional[int] = None) -> list[Vec2]:
        """All points of the set inside a bounded region (order unspecified)."""
        raise NotImplementedError

    def act(self, g: Mat2) -> "PointSystem":
        """The system attached to the transformed state g.x."""
        raise NotImplementedError

    @property
    def minkowski_constant(self) -> Optional[float]:
        """c with: every centered convex symmetric set of area >= c meets the
        point set; None when no constant is declared."""
        return None


@dataclass(frozen=True)
class SlopeSequence:
    """Strictly increasing nonnegative slopes of strip vectors (ties collapsed)."""

    eta: float
    slopes: tuple

    def __post_init__(self):
        for s, t in zip(self.slopes, self.slopes[1:]):
            if not t > s:
                raise ValueError("slopes must be strictly increasing")

    def __len__(self):
        return len(self.slopes)

    def floats(self) -> np.ndarray:
        return np.array([float(s) for s in self.slopes])


@dataclass(frozen=True)
class GapSequence:
    """Consecutive differences of a slope (or similar) sequence; all positive."""

    gaps: tuple

    def __len__(self):
        return len(self.gaps)

    def floats(self) -> np.ndarray:
        return np.array([float(g) for g in self.gaps])


def _collapse(slopes: list) -> list:
    """Sort and drop duplicate slope values (exact equality, or 1e-12 relative)."""
    if not slopes:
        return []
    slopes = sorted(slopes)
    out = [slopes[0]]
    for s in slopes[1:]:
        prev = out[-1]
        if is_exact(s) and is_exact(prev):
            if s == prev:
                continue
        elif float(s) - float(prev) <= 1e-12 * max(1.0, abs(float(prev))):
            continue
        out.append(s)
    return out


def slopes_in_strip(system: PointSystem, eta, n: int,
                    height_budget: float = DEFAULT_HEIGHT_BUDGET) -> SlopeSequence:
    """The n smallest nonnegative slopes of strip vectors, sorted, ties collapsed.

    Enumerates the strip under growing height caps H; every slope <= H/eta is
    then definitely present, so the first n of those are final.  Runs out of
    budget -> ExhaustionError carrying the partial sequence.
    """
    if not eta > 0:
        raise ValueError("eta must be positive")
    if n == 0:
        return SlopeSequence(eta, ())
    from .core import slope as slope_of

    height = float(eta) * max(4.0, 4.0 * n)
    while True:
        pts = system.enumerate_points(VerticalStrip(eta, height))
        complete = []
        cut = height / float(eta)
        for v in pts:
            s = slope_of(v)
            if float(s) <= cut:
                complete.append(s)
        complete = _collapse(complete)
        if len(complete) >= n:
            return SlopeSequence(eta, tuple(complete[:n]))
        if height >= height_budget:
            raise ExhaustionError(
                f"found {len(complete)} of {n} slopes below height {height}",
                partial=SlopeSequence(eta, tuple(complete)))
        height *= 2.0


def gaps(seq: SlopeSequence) -> GapSequence:
    """Consecutive slope differences; needs at least two slopes."""
    if len(seq) < 2:
        raise ValueError("need at least two slopes to form gaps")
    return GapSequence(tuple(t - s for s, t in zip(seq.slopes, seq.slopes[1:])))


def _has_axis_vector(system: PointSystem, eta, horizontal: bool, tol: float) -> bool:
    """Bounded search for a horizontal (or vertical) vector of length <= eta."""
    from .core import Ball
    pts = system.enumerate_points(Ball(float(eta) * (1.0 + 1e-12)))
    for v in pts:
        small, span = (v.y, v.x) if horizontal else (v.x, v.y)
        if is_exact(small):
            if small != 0:
                continue
        elif abs(float(small)) > tol:
            continue
        if span != 0 and abs(float(span)) <= float(eta) * (1 + 1e-12):
            return True
    return False


def is_horizontally_short(system: PointSystem, eta, tol: float = AXIS_TOL) -> bool:
    """True when the set holds a horizontal vector of length at most eta.

    ``tol`` is the float zero-test for the transverse coordinate; callers
    that sheared the system by s should scale it by |s|, which is how much
    the shear amplifies coordinate rounding.  Exact systems ignore it.
    """
    if not eta > 0:
        raise ValueError("eta must be positive")
    return _has_axis_vector(system, eta, horizontal=True, tol=tol)


def is_vertically_short(system: PointSystem, eta, tol: float = AXIS_TOL) -> bool:
    """True when the set holds a vertical vector of length at most eta."""
    if not eta > 0:
        raise ValueError("eta must be positive")
    return _has_axis_vector(system, eta, horizontal=False, tol=tol)


def is_exceptional(system: PointSystem, eta) -> bool:
    """Vertically short at the threshold eta/(4c), c the Minkowski constant.

    Exceptional states are the ones the shear flow may never bring to the
    horizontally-short transversal.
    """
    c = system.minkowski_constant
    if c is None:
        raise UnsupportedQueryError(
            "exceptionality needs a declared Minkowski constant")
    return is_vertically_short(system, eta / (4.0 * c))


def hitting_times(system: PointSystem, eta, n: int) -> list:
    """Times s >= 0 at which the sheared state shear(s).x is eta-horizontally short.

    Candidates come from the strip slopes; each one is then verified through
    the independent route: apply the shear to the system and test shortness
    by enumeration.  Candidates failing verification are dropped, so any
    disagreement with slopes_in_strip is observable.
    """
    seq = slopes_in_strip(system, eta, n)
    out = []
    for s in seq.slopes:
        sheared = system.act(shear(s))
        tol = AXIS_TOL * max(1.0, abs(float(s)))
        if is_horizontally_short(sheared, eta, tol=tol):
            out.append(s)
    return out
