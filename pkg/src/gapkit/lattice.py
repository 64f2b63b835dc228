"""Unimodular lattices as point systems: enumeration, transversal coordinates,
and the two slope-gap pipelines (direct enumeration and return-map fast path).

Enumeration works in integer coefficients of a Lagrange-reduced basis, one
coefficient iterated over an interval solved from the other, so long thin
regions (strips, renormalized triangles) cost points-found rather than
bounding-box area.  A point is primitive exactly when its coefficient pair
is coprime, which is basis-independent.

Lattices built from exact rational entries stay exact through everything:
enumeration, slopes, transversal coordinates, and return-map orbits.  That
is what lets the fast path be compared against the enumeration oracle at
tolerances far below float drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import bcz
from .core import (Ball, Mat2, Region, Vec2, VerticalStrip, is_exact,
                   rotation, shear, diag_flow)
from .errors import (ExceptionalLatticeError, ExhaustionError,
                     ResourceLimitError)
from .pointcloud import GapSequence, PointSystem
from .stats import rng

__all__ = [
    "UnimodularLattice", "ZSQUARED", "strip_vectors", "to_transversal",
    "slope_gaps_fast", "has_vertical_vector", "poisson_baseline",
    "seeded_lattice", "lagrange_reduce",
]

DET_TOL = 1e-12
DEFAULT_POINT_BUDGET = 20_000_000
DEFAULT_HEIGHT_BUDGET = 2.0 ** 26


def _round_half(x):
    """Round to nearest integer, exact for Fractions."""
    if isinstance(x, float):
        return int(round(x))
    return math.floor(x + Fraction(1, 2))


def lagrange_reduce(basis: Mat2) -> tuple[Mat2, tuple[int, int, int, int]]:
    """Gauss/Lagrange reduction of a rank-2 basis.

    Returns (reduced, u) with reduced = basis @ u and u unimodular integer
    entries (row-major).  The reduced columns are the two successive minima
    up to sign, so coefficient boxes computed from it stay small.
    """
    v1 = (basis.a, basis.c)
    v2 = (basis.b, basis.d)
    u = (1, 0, 0, 1)  # columns track coefficient combinations

    def nsq(v):
        return v[0] * v[0] + v[1] * v[1]

    for _ in range(256):
        if nsq(v1) > nsq(v2):
            v1, v2 = v2, v1
            u = (u[1], u[0], u[3], u[2])
        denom = nsq(v1)
        mu = _round_half((v1[0] * v2[0] + v1[1] * v2[1]) / denom
                         if isinstance(denom, float)
                         else Fraction(v1[0] * v2[0] + v1[1] * v2[1], 1) / denom)
        if mu == 0:
            break
        v2 = (v2[0] - mu * v1[0], v2[1] - mu * v1[1])
        u = (u[0], u[1] - mu * u[0], u[2], u[3] - mu * u[2])
    else:
        raise ResourceLimitError("basis reduction did not converge")
    return Mat2(v1[0], v2[0], v1[1], v2[1]), u


@dataclass(frozen=True)
class UnimodularLattice(PointSystem):
    """Covolume-1 lattice given by a basis matrix (columns are generators).

    Primitive vectors only: the attached point set is { M (m, k) : gcd(m, k) = 1 }.
    """

    basis: Mat2
    tag: str = field(default="", compare=False)

    centrally_symmetric = True

    def __post_init__(self):
        det = self.basis.det()
        if self.is_exact():
            if det != 1:
                raise ValueError(f"exact basis must have determinant 1, got {det}")
        else:
            # a d - b c rounds in proportion to the entry magnitudes, so the
            # unit-scale tolerance 1e-12 is scaled up for conditioned bases
            # (e.g. strongly sheared ones)
            tol = DET_TOL * max(1.0, self.basis.frobenius() ** 2)
            if abs(float(det) - 1.0) > tol:
                raise ValueError(f"basis determinant {det} is not 1 within {tol}")

    def is_exact(self) -> bool:
        return all(is_exact(e) for e in self.basis.entries())

    def to_float(self) -> "UnimodularLattice":
        return UnimodularLattice(self.basis.to_float(), self.tag)

    @property
    def minkowski_constant(self) -> Optional[float]:
        return 4.0  # classical constant for covolume-1 planar lattices

    def act(self, g: Mat2) -> "UnimodularLattice":
        return UnimodularLattice(g @ self.basis, self.tag)

    # -- enumeration ------------------------------------------------------

    def _box_scan(self, xlo, xhi, ylo, yhi, open_xlo: bool,
                  budget: int) -> list[tuple[Vec2, tuple[int, int]]]:
        """Primitive points with xlo (<|<=) x <= xhi, ylo <= y <= yhi.

        Iterates one reduced-basis coefficient, solving the other from the
        x-constraint, and verifies every candidate in basis arithmetic (so
        the float interval endpoints only steer the search, never decide
        membership for exact bases).
        """
        red, u = lagrange_reduce(self.basis)
        a, b, c, d = red.a, red.b, red.c, red.d
        # iterate the coefficient multiplying the column with the smaller |x| entry
        if abs(float(b)) >= abs(float(a)):
            ax, bx, ay, by = a, b, c, d
            back = lambda i, j: (u[0] * i + u[1] * j, u[2] * i + u[3] * j)
        else:
            ax, bx, ay, by = b, a, d, c
            back = lambda i, j: (u[1] * i + u[0] * j, u[3] * i + u[2] * j)

        det = ax * by - bx * ay  # +-1
        fxlo, fxhi, fylo, fyhi = map(float, (xlo, xhi, ylo, yhi))
        fax, fbx, fay, fby = map(float, (ax, bx, ay, by))
        fdet = float(det)
        corners = [(x, y) for x in (fxlo, fxhi) for y in (fylo, fyhi)]
        ivals = [(fby * x - fbx * y) / fdet for x, y in corners]
        ilo, ihi = math.floor(min(ivals)) - 1, math.ceil(max(ivals)) + 1
        if ihi - ilo > budget:
            raise ResourceLimitError(
                f"coefficient range {ihi - ilo} exceeds the enumeration budget")

        exact = self.is_exact()
        # float prescreen margin: well clear of double rounding, far below
        # any gap the exact check would have to arbitrate
        margin = 1e-6 * max(1.0, abs(fxhi), abs(fyhi), abs(fxlo), abs(fylo))

        def verdict(x, y):
            return (x > xlo if open_xlo else x >= xlo) and x <= xhi \
                and ylo <= y <= yhi

        out = []
        scanned = 0
        for i in range(ilo, ihi + 1):
            # x-constraint solves j; y-constraint intersects (float steering)
            if fbx != 0.0:
                j1, j2 = (fxlo - fax * i) / fbx, (fxhi - fax * i) / fbx
                jlo, jhi = min(j1, j2), max(j1, j2)
            else:
                jlo, jhi = -math.inf, math.inf
            if fby != 0.0:
                j1, j2 = (fylo - fay * i) / fby, (fyhi - fay * i) / fby
                jlo, jhi = max(jlo, min(j1, j2)), min(jhi, max(j1, j2))
            if not (math.isfinite(jlo) and math.isfinite(jhi)):
                if fbx == 0.0 and fby == 0.0:
                    continue  # degenerate column; determinant forbids this
            j_start, j_end = math.floor(jlo) - 1, math.ceil(jhi) + 1
            scanned += max(0, j_end - j_start + 1)
            if scanned > budget:
                raise ResourceLimitError("enumeration budget exceeded")
            for j in range(j_start, j_end + 1):
                xf = fax * i + fbx * j
                yf = fay * i + fby * j
                if not (fxlo - margin <= xf <= fxhi + margin
                        and fylo - margin <= yf <= fyhi + margin):
                    continue
                if exact:
                    x = ax * i + bx * j
                    y = ay * i + by * j
                else:
                    x, y = xf, yf
                if verdict(x, y):
                    m, k = back(i, j)
                    if math.gcd(m, k) == 1:
                        out.append((Vec2(x, y), (m, k)))
        return out

    def enumerate_points(self, region: Region, limit: Optional[int] = None) -> list[Vec2]:
        budget = limit if limit is not None else DEFAULT_POINT_BUDGET
        if isinstance(region, VerticalStrip):
            if math.isinf(region.height):
                raise ValueError("cannot enumerate an unbounded strip; cap the height")
            pts = self._box_scan(0, region.eta, 0, region.height,
                                 open_xlo=True, budget=budget)
            return [v for v, _ in pts]
        radius = region.bounding_radius()
        if radius is None:
            raise ValueError(f"region {region!r} is unbounded")
        pts = self._box_scan(-radius, radius, -radius, radius,
                             open_xlo=False, budget=budget)
        if isinstance(region, Ball) and self.is_exact():
            rsq = Fraction(region.radius) ** 2  # exact boundary decision
            return [v for v, _ in pts if v.norm_sq() <= rsq]
        return [v for v, _ in pts if region.contains(v)]


ZSQUARED = UnimodularLattice(Mat2(1, 0, 0, 1), tag="Z^2")


def _strip_scan_sorted(lat: UnimodularLattice, eta, n: int,
                       height_budget: float = DEFAULT_HEIGHT_BUDGET):
    """First n strip vectors ordered by slope, with coefficients.

    Returns a list of (slope, vec, (m, k)); raises ExhaustionError /
    ExceptionalLatticeError when the strip stays empty up the budget.
    """
    if not eta > 0:
        raise ValueError("eta must be positive")
    height = float(eta) * max(4.0, 4.0 * n)
    while True:
        try:
            found = lat._box_scan(0, eta, 0, height, open_xlo=True,
                                  budget=DEFAULT_POINT_BUDGET)
        except ResourceLimitError:
            if has_vertical_vector(lat, 1000):
                raise ExceptionalLatticeError(
                    "lattice has a vertical vector and an empty strip; "
                    "the shear flow never reaches the transversal") from None
            raise
        cut = height / float(eta)
        rows = []
        for v, mk in found:
            s = Fraction(v.y, v.x) if isinstance(v.x, int) and isinstance(v.y, int) \
                else v.y / v.x
            if float(s) <= cut and float(s) >= 0:
                rows.append((s, v, mk))
        rows.sort(key=lambda r: r[0])
        if len(rows) >= n:
            return rows[:n]
        if not rows and has_vertical_vector(lat, 1000):
            # a vertical lattice projects to a discrete set of x-values, so a
            # strip that is empty at one height stays empty at every height
            raise ExceptionalLatticeError(
                "lattice has a vertical vector and an empty strip; "
                "the shear flow never reaches the transversal")
        if height >= height_budget:
            raise ExhaustionError(
                f"only {len(rows)} strip vectors below height {height}",
                partial=rows)
        height *= 2.0


def strip_vectors(lat: UnimodularLattice, eta, n: int) -> list[Vec2]:
    """The n strip vectors of smallest nonnegative slope, in slope order."""
    return [v for _, v, _ in _strip_scan_sorted(lat, eta, n)]


def to_transversal(lat: UnimodularLattice, eta=1) -> tuple[bcz.TransversalPoint, object]:
    """Transversal coordinates of the first shear-flow hit, plus the hit time.

    Shearing by the smallest strip slope s1 makes the strip vector horizontal
    of length a; completing it to a positively-oriented basis gives a column
    (b', 1/a), and b is the representative of b' modulo a inside (eta-a, eta].
    Exact bases give exact coordinates (a float eta is promoted exactly).
    """
    if isinstance(eta, float) and lat.is_exact():
        eta = Fraction(eta)
    rows = _strip_scan_sorted(lat, eta, 1)
    s1, v1, (m0, k0) = rows[0]
    a = v1.x
    # companion coefficients with m0*k1 - m1*k0 = +1 (orientation matters:
    # the companion's sheared height must be +1/a, not -1/a)
    g, u_, v_ = _xgcd(m0, k0)
    if g == -1:
        u_, v_ = -u_, -v_
    m1, k1 = -v_, u_
    mb = lat.basis
    wx = mb.a * m1 + mb.b * k1
    wy = (mb.c - s1 * mb.a) * m1 + (mb.d - s1 * mb.b) * k1
    if is_exact(wy):
        assert wy * a == 1
    elif abs(float(wy) * float(a) - 1.0) > 1e-9:
        raise ArithmeticError("companion column lost unimodularity")
    j = math.ceil((wx - eta) / a) if not isinstance(wx, float) \
        else math.ceil((wx - float(eta)) / float(a))
    b = wx - j * a
    if not is_exact(b):  # guard float rounding at the interval ends
        if b <= float(eta) - float(a):
            b += float(a)
        elif b > float(eta):
            b -= float(a)
    return bcz.TransversalPoint(a, b, eta), s1


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """g, x, y with a x + b y = g = gcd(a, b)."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def slope_gaps_fast(lat: UnimodularLattice, eta, n: int,
                    exact: bool = False) -> GapSequence:
    """First n slope gaps as return times along the transversal orbit.

    No point enumeration happens after the first hit: gap i is the roof value
    of the i-th return-map iterate.  With exact=True (needs an exact basis)
    the whole orbit runs in rational arithmetic.
    """
    point, _ = to_transversal(lat, eta)
    if exact:
        if not point.is_exact():
            raise ValueError("exact orbit needs an exact lattice basis")
        orb = bcz.orbit(point, n)
        return GapSequence(orb.returns)
    return GapSequence(tuple(bcz.roof_sequence(point.to_float(), n)))


def has_vertical_vector(lat: UnimodularLattice, bound: int = 1000) -> bool:
    """Bounded test for a vector with zero horizontal component.

    Exact bases are decided analytically; float bases scan coefficients up
    to the bound with a 1e-12 zero test, so False only means "none found
    within the bound".
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    a, b = lat.basis.a, lat.basis.b  # x-components of the two generators
    if lat.is_exact():
        if a == 0 or b == 0:
            return True
        r = Fraction(-b) / Fraction(a)  # m/k for a m + b k = 0
        return abs(r.numerator) <= bound and r.denominator <= bound
    fa, fb = float(a), float(b)
    if abs(fa) <= 1e-12 or abs(fb) <= 1e-12:
        return True
    ms = np.arange(1, bound + 1)
    base = np.rint(-fa * ms / fb)
    for off in (-1.0, 0.0, 1.0):
        ks = base + off
        if np.any((np.abs(fa * ms + fb * ks) <= 1e-12) & (np.abs(ks) <= bound)):
            return True
    return False


def poisson_baseline(n: int, seed: int) -> GapSequence:
    """Normalized gaps of n i.i.d. uniform order statistics (the e^{-t} law)."""
    if n < 2:
        raise ValueError("need at least two samples")
    gen = rng(seed)
    x = np.sort(gen.uniform(0.0, 1.0, n))
    return GapSequence(tuple(n * np.diff(x)))


def seeded_lattice(seed: int) -> UnimodularLattice:
    """Reproducible generic lattice shear(s) diag_flow(t) rotation(theta) Z^2.

    The float product is rationalized entrywise and one column rescaled so
    the determinant is exactly 1; verticality is then checked, not assumed
    (vertical draws are rejected and the seed advanced).
    """
    gen = rng(seed)
    for _ in range(64):
        s = gen.uniform(-2.0, 2.0)
        t = gen.uniform(-1.0, 1.0)
        theta = gen.uniform(0.0, 2.0 * math.pi)
        m = shear(s) @ diag_flow(t) @ rotation(theta)
        exact = Mat2(*(Fraction(e) for e in m.entries()))
        det = exact.det()
        exact = Mat2(exact.a, exact.b / det, exact.c, exact.d / det)
        lat = UnimodularLattice(exact, tag=f"seeded({seed})")
        if not has_vertical_vector(lat, 1000):
            return lat
    raise ResourceLimitError("could not draw a lattice without vertical vectors")
