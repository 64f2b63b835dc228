"""The explicit transversal for the horocycle shear on lattices, and its return map.

A lattice with a horizontal vector of length a <= eta and companion column
(b, 1/a) corresponds to the coordinate pair (a, b) with a, b in (0, eta] and
a + b > eta.  The first-return map of the shear flow to this set is

    T(a, b) = (b, floor((eta + a)/b) * b - a),

with return time ("roof") 1/(a b), independent of eta.  Exact rational
coordinates stay exact under the map, which is what makes the periodic
Farey orbits checkable to the last digit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .core import is_exact
from .errors import ResourceLimitError
from .stats import rng

__all__ = [
    "TransversalPoint", "BczOrbit", "bcz_step", "roof", "orbit",
    "farey_orbit_start", "rescale", "sample_invariant_measure", "roof_values",
    "roof_sequence",
]

# float orbits drift by roughly one ulp per step; domain checks allow this much
FLOAT_STEP_TOL = 1e-12

ORBIT_STEP_BUDGET = 20_000_000


@dataclass(frozen=True)
class TransversalPoint:
    """Coordinates (a, b) on the transversal of width eta."""

    a: object
    b: object
    eta: object = 1

    def __post_init__(self):
        a, b, eta = self.a, self.b, self.eta
        if not eta > 0:
            raise ValueError("eta must be positive")
        tol = 0 if (is_exact(a) and is_exact(b) and is_exact(eta)) else FLOAT_STEP_TOL
        if not (a > 0 and b > 0 and a <= eta + tol and b <= eta + tol
                and a + b > eta - tol):
            raise ValueError(f"({a}, {b}) is not in the eta={eta} domain")

    def is_exact(self) -> bool:
        return is_exact(self.a) and is_exact(self.b) and is_exact(self.eta)

    def to_float(self) -> "TransversalPoint":
        return TransversalPoint(float(self.a), float(self.b), float(self.eta))


@dataclass(frozen=True)
class BczOrbit:
    """A finite orbit segment with its roof values; period set when detected."""

    points: tuple
    returns: tuple
    period: Optional[int] = None


def roof(p: TransversalPoint):
    """Return time 1/(a*b); exact for exact points.  Does not depend on eta."""
    a, b = p.a, p.b
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(1, a * b)
    return 1 / (a * b)


def bcz_step(p: TransversalPoint) -> TransversalPoint:
    """One application of the return map; the result is again a domain point."""
    a, b, eta = p.a, p.b, p.eta
    if not b > 0:
        raise ValueError("b must be positive")
    q = (eta + a) // b if is_exact(a) and is_exact(b) and is_exact(eta) else \
        math.floor((eta + a) / b)
    new_b = q * b - a
    if not is_exact(new_b):
        # shave float excursions just past the boundary back into the domain
        if new_b <= 0.0:
            new_b = FLOAT_STEP_TOL * float(eta)
        elif new_b > float(eta):
            new_b = float(eta)
    return TransversalPoint(b, new_b, eta)


def orbit(p: TransversalPoint, n: int, detect_period: bool = False) -> BczOrbit:
    """n steps of the return map from p, recording roof values.

    With detect_period the walk stops as soon as the start point recurs
    (orbits of an invertible map cannot be pre-periodic, so comparing with
    the start alone is enough).  Exact points compare exactly, floats within
    FLOAT_STEP_TOL.
    """
    if n < 0:
        raise ValueError("step count must be nonnegative")
    if n > ORBIT_STEP_BUDGET:
        raise ResourceLimitError(f"orbit of {n} steps exceeds the step budget")
    exact = p.is_exact()
    points = [p]
    returns = []
    period = None
    cur = p
    for i in range(n):
        returns.append(roof(cur))
        cur = bcz_step(cur)
        if detect_period:
            if exact:
                back = cur.a == p.a and cur.b == p.b
            else:
                back = (abs(cur.a - p.a) <= FLOAT_STEP_TOL
                        and abs(cur.b - p.b) <= FLOAT_STEP_TOL)
            if back:
                period = i + 1
                break
        points.append(cur)
    return BczOrbit(tuple(points), tuple(returns), period)


def farey_orbit_start(q: int) -> TransversalPoint:
    """(1/q, 1) at eta = 1: the periodic orbit whose roofs are the level-q gaps."""
    if q < 1:
        raise ValueError("level must be >= 1")
    return TransversalPoint(Fraction(1, q), Fraction(1), 1)


def rescale(p: TransversalPoint, eta_new) -> TransversalPoint:
    """Move a point between transversal widths; the roof scales by (eta_old/eta_new)^2."""
    if not eta_new > 0:
        raise ValueError("eta must be positive")
    if p.is_exact() and is_exact(eta_new):
        ratio = Fraction(eta_new) / Fraction(p.eta)
    else:
        ratio = float(eta_new) / float(p.eta)
        p = p.to_float()
    return TransversalPoint(p.a * ratio, p.b * ratio, eta_new)


def sample_invariant_measure(eta: float, n: int, seed: int) -> np.ndarray:
    """n i.i.d. samples of the invariant probability measure (2/eta^2) da db.

    Returned as an (n, 2) float array of (a, b) rows; rejection from the
    square onto the triangle a + b > eta.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    gen = rng(seed)
    out = np.empty((n, 2))
    filled = 0
    while filled < n:
        want = int((n - filled) * 2.2) + 16
        ab = gen.uniform(0.0, eta, size=(want, 2))
        ab = ab[(ab[:, 0] + ab[:, 1] > eta) & (ab[:, 0] > 0) & (ab[:, 1] > 0)]
        take = min(len(ab), n - filled)
        out[filled:filled + take] = ab[:take]
        filled += take
    return out


def roof_values(samples: np.ndarray) -> np.ndarray:
    """Vectorized roof 1/(a*b) over an (n, 2) sample array."""
    return 1.0 / (samples[:, 0] * samples[:, 1])


def roof_sequence(p: TransversalPoint, n: int) -> np.ndarray:
    """First n roof values along the orbit of p, as a float array.

    Float fast path for bulk statistics; for exact agreement checks walk
    orbit() on an exact point instead.
    """
    if n < 0:
        raise ValueError("step count must be nonnegative")
    a, b, eta = float(p.a), float(p.b), float(p.eta)
    out = np.empty(n)
    floor = math.floor
    for i in range(n):
        out[i] = 1.0 / (a * b)
        a, b = b, floor((eta + a) / b) * b - a
        if b <= 0.0 or b > eta:  # float excursion past the boundary
            b = min(max(b, FLOAT_STEP_TOL * eta), eta)
    return out
