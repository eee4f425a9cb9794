"""Plane, disk and half-plane geometry.

Points are plain ``complex`` numbers.  The point at infinity is the explicit
sentinel :data:`INFINITY`, never an IEEE special value, so Moebius algebra is
total.  The upper half-plane is ``H = {Im z > 0}``; its hyperbolic metric is

    rho(z, w) = arccosh(1 + |z - w|^2 / (2 Im z Im w))

which is better conditioned for nearby points at large height than the
``2 artanh`` form on the disk.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import AmbiguousWindingError, DomainError, InvalidMapError

DET_THRESHOLD = 1e-12


class _Infinity:
    """Singleton sentinel for the point at infinity on the Riemann sphere."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"


INFINITY = _Infinity()


def is_infinity(z) -> bool:
    return z is INFINITY


def as_complex(z) -> complex:
    """Coerce a finite numeric input to ``complex``; reject the sentinel."""
    if z is INFINITY:
        raise DomainError("operation requires a finite point")
    w = complex(z)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise DomainError("non-finite floats are not valid points; use INFINITY")
    return w


def require_halfplane(z, what: str = "point") -> complex:
    w = as_complex(z)
    if w.imag <= 0.0:
        raise DomainError(f"{what} must lie in the open upper half-plane", witness=w)
    return w


def require_disk(z, what: str = "point") -> complex:
    w = as_complex(z)
    if abs(w) >= 1.0:
        raise DomainError(f"{what} must lie in the open unit disk", witness=w)
    return w


# ---------------------------------------------------------------------------
# Moebius maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MoebiusMap:
    """Fractional-linear map z -> (az + b)/(cz + d).

    Coefficients are normalized on construction (divided by the entry of
    largest modulus) and the determinant must stay above ``DET_THRESHOLD``.
    Instances are immutable and freely shareable.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        coeffs = [complex(self.a), complex(self.b), complex(self.c), complex(self.d)]
        scale = max(abs(x) for x in coeffs)
        if scale == 0.0 or not math.isfinite(scale):
            raise InvalidMapError("all Moebius coefficients are zero or non-finite")
        coeffs = [x / scale for x in coeffs]
        det = coeffs[0] * coeffs[3] - coeffs[1] * coeffs[2]
        if abs(det) <= DET_THRESHOLD:
            raise InvalidMapError(f"degenerate Moebius map, |det| = {abs(det):.3e}")
        object.__setattr__(self, "a", coeffs[0])
        object.__setattr__(self, "b", coeffs[1])
        object.__setattr__(self, "c", coeffs[2])
        object.__setattr__(self, "d", coeffs[3])

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def affine(cls, a: complex, b: complex) -> "MoebiusMap":
        """z -> a z + b (a != 0)."""
        return cls(a, b, 0.0, 1.0)

    @classmethod
    def dilation(cls, factor: float) -> "MoebiusMap":
        return cls.affine(factor, 0.0)

    @classmethod
    def translation(cls, offset: complex) -> "MoebiusMap":
        return cls.affine(1.0, offset)

    @classmethod
    def orbit_renormalizer(cls, x: float, y: float) -> "MoebiusMap":
        """z -> (z - x)/y, the automorphism of H sending x + iy to i."""
        if y <= 0.0:
            raise InvalidMapError("renormalizer needs y > 0")
        return cls(1.0, -x, 0.0, y)

    # -- algebra -----------------------------------------------------------

    def __call__(self, z):
        return self.apply(z)

    def apply(self, z):
        """Evaluate the map; the pole -d/c goes to INFINITY and back."""
        if z is INFINITY:
            if abs(self.c) <= DET_THRESHOLD * abs(self.a):
                return INFINITY
            return self.a / self.c
        w = as_complex(z)
        den = self.c * w + self.d
        num = self.a * w + self.b
        if abs(den) == 0.0 or abs(den) < 1e-300 * max(1.0, abs(num)):
            return INFINITY
        return num / den

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """Coefficient-level matrix product: self after other."""
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def determinant(self) -> complex:
        return self.a * self.d - self.b * self.c

    # -- predicates --------------------------------------------------------

    def is_identity(self, tol: float = 1e-12) -> bool:
        m = self._real_representative()
        if m is None:
            return False
        a, b, c, d = m
        s = a + d
        if abs(s) < tol:
            return False
        a, b, c, d = (2 * a / s, 2 * b / s, 2 * c / s, 2 * d / s)
        return abs(a - 1) < tol and abs(d - 1) < tol and abs(b) < tol and abs(c) < tol

    def _real_representative(self, tol: float = 1e-9):
        """Coefficients rescaled to be real with positive determinant, or None."""
        pivot = max((self.a, self.b, self.c, self.d), key=abs)
        lam = pivot.conjugate() / abs(pivot)
        coeffs = [lam * self.a, lam * self.b, lam * self.c, lam * self.d]
        if any(abs(x.imag) > tol * max(1.0, abs(x)) for x in coeffs):
            return None
        re = [x.real for x in coeffs]
        det = re[0] * re[3] - re[1] * re[2]
        if det < 0:
            return None
        return tuple(re)

    def is_halfplane_automorphism(self, tol: float = 1e-9) -> bool:
        """True when the map preserves H (real coefficients, det > 0)."""
        return self._real_representative(tol) is not None

    def is_affine(self, tol: float = 1e-12) -> bool:
        scale = max(abs(self.a), abs(self.d))
        return abs(self.c) <= tol * max(1.0, scale)

    def affine_coefficients(self) -> tuple[complex, complex]:
        """Return (a, b) with the map equal to z -> az + b; error if not affine."""
        if not self.is_affine():
            raise InvalidMapError("map is not affine (c != 0)")
        return self.a / self.d, self.b / self.d

    def classify(self, tol: float = 1e-9) -> str:
        """Conjugacy class: identity, elliptic, parabolic, hyperbolic, loxodromic.

        Uses the normalized trace: with det scaled to 1, tr^2 in [0,4) is
        elliptic, = 4 parabolic, > 4 hyperbolic; non-real tr^2 is loxodromic.
        """
        if self.is_identity(tol):
            return "identity"
        det = self.determinant()
        tr2 = (self.a + self.d) ** 2 / det
        if abs(tr2.imag) > tol * max(1.0, abs(tr2)):
            return "loxodromic"
        t = tr2.real
        if t < 4.0 - tol:
            return "elliptic"
        if t > 4.0 + tol:
            return "hyperbolic"
        return "parabolic"


def moebius_apply(m: MoebiusMap, z):
    return m.apply(z)


def moebius_compose(m1: MoebiusMap, m2: MoebiusMap) -> MoebiusMap:
    return m1.compose(m2)


def moebius_invert(m: MoebiusMap) -> MoebiusMap:
    return m.inverse()


# ---------------------------------------------------------------------------
# Cayley transform
# ---------------------------------------------------------------------------


def halfplane_to_disk(z):
    """w = (z - i)/(z + i); maps H onto the unit disk, i -> 0, INFINITY -> 1."""
    if z is INFINITY:
        return 1.0 + 0.0j
    w = as_complex(z)
    return (w - 1j) / (w + 1j)


def disk_to_halfplane(w):
    """z = i (1 + w)/(1 - w); inverse Cayley transform, 0 -> i, 1 -> INFINITY."""
    if w is INFINITY:
        return -1j  # Moebius extension; not a half-plane point
    u = as_complex(w)
    if abs(1.0 - u) < 1e-15:
        return INFINITY
    return 1j * (1.0 + u) / (1.0 - u)


def cayley(z, direction: str):
    """Change variables between the disk and the upper half-plane.

    ``direction`` is ``"halfplane-to-disk"`` or ``"disk-to-halfplane"``.
    The round trip is the identity to 1e-14.
    """
    if direction == "halfplane-to-disk":
        return halfplane_to_disk(z)
    if direction == "disk-to-halfplane":
        return disk_to_halfplane(z)
    raise ValueError(f"unknown Cayley direction: {direction!r}")


# ---------------------------------------------------------------------------
# Hyperbolic metric
# ---------------------------------------------------------------------------


def hyp_dist(z, w) -> float:
    """Hyperbolic distance on the upper half-plane.

    arccosh(1 + u) is evaluated as log1p(u + sqrt(u (u + 2))) which stays
    accurate when u is tiny (nearby points).
    """
    zz = require_halfplane(z)
    ww = require_halfplane(w)
    u = abs(zz - ww) ** 2 / (2.0 * zz.imag * ww.imag)
    return math.log1p(u + math.sqrt(u * (u + 2.0)))


def disk_dist(u, v) -> float:
    """Hyperbolic distance on the unit disk: 2 artanh |u - v| / |1 - conj(u) v|."""
    uu = require_disk(u)
    vv = require_disk(v)
    p = abs(uu - vv) / abs(1.0 - uu.conjugate() * vv)
    if p >= 1.0:
        raise DomainError("pseudo-hyperbolic quotient reached 1; input too close to boundary")
    return 2.0 * math.atanh(p)


@dataclass(frozen=True)
class HyperbolicDisk:
    """Hyperbolic disk in H: center (Im > 0), radius in hyperbolic units.

    As a Euclidean set this is the disk with center x + iy cosh(r) and radius
    y sinh(r) where center = x + iy.
    """

    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", require_halfplane(self.center, "disk center"))
        if not (self.radius >= 0.0 and math.isfinite(self.radius)):
            raise DomainError("hyperbolic radius must be finite and >= 0")

    def euclidean_center(self) -> complex:
        x, y = self.center.real, self.center.imag
        return complex(x, y * math.cosh(self.radius))

    def euclidean_radius(self) -> float:
        return self.center.imag * math.sinh(self.radius)

    def contains(self, z) -> bool:
        return hyp_dist(self.center, z) < self.radius

    def boundary_point(self, t: float) -> complex:
        """Point at angle 2 pi t on the Euclidean boundary circle."""
        return self.euclidean_center() + self.euclidean_radius() * cmath.exp(2j * math.pi * t)

    def interior_point(self, r: float, t: float) -> complex:
        """Point at fraction r of the Euclidean radius, angle 2 pi t."""
        return self.euclidean_center() + r * self.euclidean_radius() * cmath.exp(2j * math.pi * t)


# ---------------------------------------------------------------------------
# Winding numbers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WindingResult:
    """Integer winding number plus the rounding residue diagnostics."""

    value: int
    residue: float
    precision_warning: bool
    max_segment_turn: float


def _segment_distance(p: complex, a: complex, b: complex) -> float:
    """Euclidean distance from p to the segment [a, b]."""
    ab = b - a
    denom = abs(ab) ** 2
    if denom == 0.0:
        return abs(p - a)
    t = ((p - a) * ab.conjugate()).real / denom
    t = min(1.0, max(0.0, t))
    return abs(p - (a + t * ab))


def winding_number(path, w, min_distance: float = 1e-9) -> WindingResult:
    """Winding number of a closed polyline around w.

    The polyline is treated as cyclic (the closing edge from the last vertex
    back to the first is implicit when they differ).  Each edge contributes
    its principal argument increment, which is exact for straight segments;
    the residue |sum/2pi - round| is reported and a warning flag is set when
    it exceeds 0.1 or when some edge turns by almost pi (under-sampled curve).
    """
    pts = [as_complex(p) for p in path]
    if len(pts) < 3:
        raise DomainError("winding path needs at least 3 vertices")
    target = as_complex(w)
    if abs(pts[0] - pts[-1]) > 0.0:
        pts.append(pts[0])
    total = 0.0
    max_turn = 0.0
    for k in range(len(pts) - 1):
        a, b = pts[k], pts[k + 1]
        if _segment_distance(target, a, b) < min_distance:
            raise AmbiguousWindingError(
                f"target {target} is within {min_distance:g} of the path"
            )
        turn = cmath.phase((b - target) / (a - target))
        max_turn = max(max_turn, abs(turn))
        total += turn
    raw = total / (2.0 * math.pi)
    value = round(raw)
    residue = abs(raw - value)
    warning = residue > 0.1 or max_turn > 0.95 * math.pi
    return WindingResult(int(value), residue, warning, max_turn)
