"""Scalars, 2x2 linear algebra, one-parameter subgroups of SL(2,R), and plane regions.

Scalars come in three kinds: exact rationals (int / fractions.Fraction), exact
elements of Q(sqrt 5) (GoldenNum), and floats.  Exact kinds mix freely with
each other; mixing an exact GoldenNum with a float raises TypeError so that
precision is only dropped on purpose, via an explicit float() call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import VerticalVectorError

__all__ = [
    "GoldenNum", "PHI", "Vec2", "Mat2", "Region", "VerticalStrip", "Wedge",
    "Triangle", "Ball", "MappedRegion", "shear", "diag_flow", "rotation",
    "slope", "is_exact",
]


def _as_coeff(x):
    """Normalize a rational coefficient: Fractions with unit denominator -> int."""
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else x
    raise TypeError(f"GoldenNum coefficients must be int or Fraction, got {type(x).__name__}")


class GoldenNum:
    """Exact element a + b*phi of Q(sqrt 5), phi = (1 + sqrt 5)/2, phi^2 = phi + 1.

    Coefficients are integers whenever possible (divisions promote them to
    Fraction).  All arithmetic and comparisons are exact; float(x) is the only
    lossy operation.
    """

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        object.__setattr__(self, "a", _as_coeff(a))
        object.__setattr__(self, "b", _as_coeff(b))

    def __setattr__(self, name, value):
        raise AttributeError("GoldenNum is immutable")

    @classmethod
    def _raw(cls, a, b):
        # arithmetic-internal constructor: coefficients are already sane,
        # skip validation (ring operations on normalized inputs stay sane)
        self = object.__new__(cls)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        return self

    # -- ring structure -------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, GoldenNum):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return GoldenNum._raw(other, 0)
        if isinstance(other, float):
            raise TypeError(
                "cannot mix GoldenNum with float implicitly; call float() first")
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GoldenNum._raw(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GoldenNum._raw(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GoldenNum._raw(o.a - self.a, o.b - self.b)

    def __neg__(self):
        return GoldenNum._raw(-self.a, -self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        # (a1 + b1 phi)(a2 + b2 phi), phi^2 = phi + 1
        return GoldenNum._raw(self.a * o.a + self.b * o.b,
                              self.a * o.b + self.b * o.a + self.b * o.b)

    __rmul__ = __mul__

    def conjugate(self):
        """Galois conjugate: phi -> 1 - phi = -1/phi."""
        return GoldenNum._raw(self.a + self.b, -self.b)

    def norm(self):
        """Field norm x * conj(x) = a^2 + a b - b^2, a rational."""
        return self.a * self.a + self.a * self.b - self.b * self.b

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 5)")
        num = self * o.conjugate()
        return GoldenNum(Fraction(num.a, 1) / n, Fraction(num.b, 1) / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    # -- order structure -------------------------------------------------

    def sign(self):
        """Exact sign of a + b*phi as a real number: -1, 0, or +1."""
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        # 2x = (2a + b) + b sqrt 5
        s, t = 2 * a + b, b
        if s >= 0 and t >= 0:
            return 1
        if s <= 0 and t <= 0:
            return -1
        # opposite signs: compare s^2 with 5 t^2
        lhs, rhs = s * s, 5 * t * t
        if s > 0:  # t < 0
            return (lhs > rhs) - (lhs < rhs)
        return (rhs > lhs) - (rhs < lhs)

    def _cmp(self, other):
        o = self._coerce(other)
        if o is None:
            return None
        return (self - o).sign()

    def __eq__(self, other):
        c = self._cmp(other) if not isinstance(other, float) else None
        if c is None:
            return NotImplemented
        return c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        if c is None:
            return NotImplemented
        return c < 0

    def __le__(self, other):
        c = self._cmp(other)
        if c is None:
            return NotImplemented
        return c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        if c is None:
            return NotImplemented
        return c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        if c is None:
            return NotImplemented
        return c >= 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((Fraction(self.a), Fraction(self.b)))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(self.a) + float(self.b) * (1.0 + math.sqrt(5.0)) / 2.0

    def __repr__(self):
        return f"GoldenNum({self.a!r}, {self.b!r})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*phi"
        return f"{self.a}{'+' if self.b > 0 else ''}{self.b}*phi"


PHI = GoldenNum(0, 1)


def is_exact(x) -> bool:
    """True for scalars carrying exact arithmetic (int, Fraction, GoldenNum)."""
    return isinstance(x, (int, Fraction, GoldenNum)) and not isinstance(x, bool)


def _div(y, x):
    """Exact division where possible (int/int -> Fraction)."""
    if isinstance(y, int) and isinstance(x, int):
        return Fraction(y, x)
    return y / x


# ---------------------------------------------------------------------------
# vectors and matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Vec2:
    """Planar column vector; components may be exact scalars or floats."""

    x: object
    y: object

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def __rmul__(self, s) -> "Vec2":
        return Vec2(s * self.x, s * self.y)

    def dot(self, other: "Vec2"):
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Vec2"):
        return self.x * other.y - self.y * other.x

    def norm_sq(self):
        return self.x * self.x + self.y * self.y

    def norm(self) -> float:
        return math.hypot(float(self.x), float(self.y))

    def to_float(self) -> "Vec2":
        return Vec2(float(self.x), float(self.y))

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True, slots=True)
class Mat2:
    """Row-major 2x2 matrix [[a, b], [c, d]] over any scalar kind."""

    a: object
    b: object
    c: object
    d: object

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1, 0, 0, 1)

    def det(self):
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other):
        if isinstance(other, Mat2):
            return Mat2(self.a * other.a + self.b * other.c,
                        self.a * other.b + self.b * other.d,
                        self.c * other.a + self.d * other.c,
                        self.c * other.b + self.d * other.d)
        if isinstance(other, Vec2):
            return Vec2(self.a * other.x + self.b * other.y,
                        self.c * other.x + self.d * other.y)
        return NotImplemented

    def inverse(self) -> "Mat2":
        det = self.det()
        if det == 1:
            return Mat2(self.d, -self.b, -self.c, self.a)
        if det == -1:
            return Mat2(-self.d, self.b, self.c, -self.a)
        if det == 0:
            raise ZeroDivisionError("singular matrix")
        return Mat2(_div(self.d, det), _div(-self.b, det),
                    _div(-self.c, det), _div(self.a, det))

    def transpose(self) -> "Mat2":
        return Mat2(self.a, self.c, self.b, self.d)

    def to_float(self) -> "Mat2":
        return Mat2(float(self.a), float(self.b), float(self.c), float(self.d))

    def frobenius(self) -> float:
        return math.sqrt(sum(float(e) ** 2 for e in (self.a, self.b, self.c, self.d)))

    def entries(self):
        return (self.a, self.b, self.c, self.d)


def _check_finite(value, name):
    if isinstance(value, float) and not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


def shear(s) -> Mat2:
    """Unipotent vertical shear: (x, y) -> (x, y - s x); subtracts s from every slope.

    Exact parameters give an exact matrix.
    """
    _check_finite(s, "shear parameter")
    return Mat2(1, 0, -s, 1)


def diag_flow(t: float) -> Mat2:
    """Diagonal flow diag(e^{t/2}, e^{-t/2}); conjugates shear(s) to shear(s e^{-t})."""
    _check_finite(float(t), "flow time")
    h = math.exp(float(t) / 2.0)
    return Mat2(h, 0.0, 0.0, 1.0 / h)


def rotation(theta: float) -> Mat2:
    """Counterclockwise rotation; rotation(-theta) maps direction theta to the x-axis."""
    _check_finite(float(theta), "angle")
    c, s = math.cos(float(theta)), math.sin(float(theta))
    return Mat2(c, -s, s, c)


def slope(v: Vec2):
    """Slope y/x of a non-vertical vector.  Exact inputs give exact output."""
    if v.x == 0:
        raise VerticalVectorError(f"vector {v} is vertical; slope undefined")
    return _div(v.y, v.x)


# ---------------------------------------------------------------------------
# plane regions
# ---------------------------------------------------------------------------

class Region:
    """A plane region with a total membership predicate.

    Boundaries are closed throughout; boundary sets have measure zero, so
    the statistics downstream cannot see the convention.
    """

    def contains(self, v: Vec2) -> bool:
        raise NotImplementedError

    def bounding_radius(self):
        """Radius of a centered ball containing the region, or None if unbounded."""
        raise NotImplementedError

    def transform(self, g: Mat2) -> "Region":
        """The image region g . self."""
        return MappedRegion(g, self)


@dataclass(frozen=True)
class VerticalStrip(Region):
    """Strip 0 < x <= eta, 0 <= y <= height (height defaults to unbounded).

    The slope pipelines only ever enumerate the strip jointly with a height
    cap, which is why the cap lives here rather than in a separate region.
    """

    eta: float
    height: float = math.inf

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError("strip width must be positive")
        if not self.height >= 0:
            raise ValueError("strip height must be nonnegative")

    def contains(self, v: Vec2) -> bool:
        x, y = float(v.x), float(v.y)
        return 0 < x <= float(self.eta) and 0 <= y <= float(self.height)

    def bounding_radius(self):
        if math.isinf(self.height):
            return None
        return math.hypot(float(self.eta), float(self.height))


@dataclass(frozen=True)
class Ball(Region):
    """Closed centered ball of the given radius."""

    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    def contains(self, v: Vec2) -> bool:
        return float(v.norm_sq()) <= float(self.radius) ** 2

    def bounding_radius(self):
        return float(self.radius)


@dataclass(frozen=True)
class Triangle(Region):
    """Closed triangle with vertices (0,0), (1,sigma), (1,-sigma)."""

    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("half-height must be positive")

    def contains(self, v: Vec2) -> bool:
        x, y = float(v.x), float(v.y)
        return 0.0 <= x <= 1.0 and abs(y) <= float(self.sigma) * x

    def bounding_radius(self):
        return math.hypot(1.0, float(self.sigma))


@dataclass(frozen=True)
class Wedge(Region):
    """Thinning circular sector: |v| <= radius, angle within sigma/radius^2 of theta.

    The angular half-width shrinks like radius^-2 so the expected number of
    unimodular-lattice points in the wedge stays of order one as the radius
    grows.
    """

    theta: float
    sigma: float
    radius: float

    def __post_init__(self):
        if not (self.sigma > 0 and self.radius > 0):
            raise ValueError("sigma and radius must be positive")

    @property
    def half_width(self) -> float:
        return float(self.sigma) / float(self.radius) ** 2

    def contains(self, v: Vec2) -> bool:
        x, y = float(v.x), float(v.y)
        if x * x + y * y > float(self.radius) ** 2 or (x == 0.0 and y == 0.0):
            return False
        delta = (math.atan2(y, x) - float(self.theta)) % (2.0 * math.pi)
        if delta > math.pi:
            delta -= 2.0 * math.pi
        return abs(delta) <= self.half_width

    def bounding_radius(self):
        return float(self.radius)


@dataclass(frozen=True)
class MappedRegion(Region):
    """Image g . base of a region under an invertible linear map."""

    g: Mat2
    base: Region

    def contains(self, v: Vec2) -> bool:
        return self.base.contains(self.g.inverse() @ v)

    def bounding_radius(self):
        r = self.base.bounding_radius()
        if r is None:
            return None
        return r * self.g.frobenius()  # Frobenius bounds the operator norm
