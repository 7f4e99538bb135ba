"""Disk-model primitives: points, Möbius isometries, geodesics, distances, cross-ratios.

Lengths use the curvature -1 metric 2|dz|/(1-|z|^2).  Boundary points are kept
as angles so that circular order stays exact; complex values appear only inside
formulas.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi
ALGEBRAIC_TOL = 1e-10
INPUT_TOL = 1e-9


class DegenerateInputError(ValueError):
    """Coincident points or otherwise degenerate geometric input."""


class InvalidQuadrupleError(ValueError):
    pass


def canonical_angle(theta):
    """Reduce angles into [0, 2pi)."""
    t = np.mod(theta, TWO_PI)
    # np.mod can return exactly 2pi for tiny negative inputs
    if np.ndim(t) == 0:
        return 0.0 if t >= TWO_PI else float(t)
    t[t >= TWO_PI] = 0.0
    return t


def circle_point(theta):
    return np.exp(1j * np.asarray(theta, dtype=float))


def circle_gap(a, b):
    """Shortest distance between two angles on the circle."""
    d = np.abs(np.mod(np.asarray(a) - np.asarray(b), TWO_PI))
    return np.minimum(d, TWO_PI - d)


@dataclass(frozen=True)
class DiskPoint:
    value: complex

    def __post_init__(self):
        v = complex(self.value)
        if not abs(v) < 1.0:
            raise ValueError(f"disk point must satisfy |z| < 1, got {v!r}")
        object.__setattr__(self, "value", v)

    def __complex__(self):
        return self.value


@dataclass(frozen=True)
class BoundaryPoint:
    angle: float

    def __post_init__(self):
        object.__setattr__(self, "angle", canonical_angle(float(self.angle)))

    @property
    def value(self) -> complex:
        return complex(np.exp(1j * self.angle))


def _as_complex(z):
    if isinstance(z, (DiskPoint, BoundaryPoint)):
        return z.value
    return z


@dataclass(frozen=True)
class Mobius:
    """Orientation-preserving isometry z -> (a z + b) / (conj(b) z + conj(a)).

    Stored with |a|^2 - |b|^2 = 1; (a, b) and (-a, -b) act identically.
    """

    a: complex = 1.0 + 0j
    b: complex = 0j

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        det = abs(a) ** 2 - abs(b) ** 2
        if not det > 0:
            raise ValueError("matrix does not preserve the unit disk")
        s = np.sqrt(det)
        object.__setattr__(self, "a", a / s)
        object.__setattr__(self, "b", b / s)

    @classmethod
    def identity(cls) -> "Mobius":
        return cls(1.0, 0.0)

    @classmethod
    def from_matrix(cls, m) -> "Mobius":
        """Project a complex 2x2 matrix acting as a disk automorphism onto SU(1,1)."""
        m = np.asarray(m, dtype=complex)
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if det == 0:
            raise DegenerateInputError("singular matrix")
        m = m / np.sqrt(det)
        a = 0.5 * (m[0, 0] + np.conj(m[1, 1]))
        b = 0.5 * (m[0, 1] + np.conj(m[1, 0]))
        scale = max(abs(m[0, 0]), abs(m[0, 1]), 1.0)
        if abs(m[1, 1] - np.conj(m[0, 0])) > 1e-6 * scale or abs(m[1, 0] - np.conj(m[0, 1])) > 1e-6 * scale:
            raise DegenerateInputError("matrix does not preserve the unit disk")
        return cls(a, b)

    @classmethod
    def rotation(cls, phi: float) -> "Mobius":
        return cls(np.exp(0.5j * phi), 0.0)

    @classmethod
    def moving_origin_to(cls, w: complex) -> "Mobius":
        """z -> (z + w) / (1 + conj(w) z); sends 0 to w with positive derivative there."""
        w = complex(_as_complex(w))
        if abs(w) >= 1:
            raise ValueError("point must lie in the open disk")
        return cls(1.0, w)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [np.conj(self.b), np.conj(self.a)]])

    def __call__(self, z):
        z = _as_complex(z)
        a, b = self.a, self.b
        return (a * z + b) / (np.conj(b) * z + np.conj(a))

    def apply_angle(self, theta):
        """Action on boundary angles."""
        return canonical_angle(np.angle(self(np.exp(1j * np.asarray(theta, dtype=float)))))

    def derivative(self, z):
        z = _as_complex(z)
        return 1.0 / (np.conj(self.b) * z + np.conj(self.a)) ** 2

    def __matmul__(self, other: "Mobius") -> "Mobius":
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        return Mobius(a1 * a2 + b1 * np.conj(b2), a1 * b2 + b1 * np.conj(a2))

    def inverse(self) -> "Mobius":
        return Mobius(np.conj(self.a), -self.b)

    def fixed_points(self):
        """Roots of conj(b) z^2 + (conj(a) - a) z - b = 0 (two roots, possibly equal)."""
        a, b = self.a, self.b
        c2, c1, c0 = np.conj(b), np.conj(a) - a, -b
        if abs(c2) < 1e-15:
            return ()
        disc = np.sqrt(c1 * c1 - 4 * c2 * c0)
        return ((-c1 + disc) / (2 * c2), (-c1 - disc) / (2 * c2))

    def translation_length(self) -> float:
        tr = abs(2.0 * self.a.real)
        if tr <= 2.0:
            return 0.0
        return float(2.0 * np.arccosh(tr / 2.0))

    def allclose(self, other: "Mobius", tol: float = ALGEBRAIC_TOL, projective: bool = True) -> bool:
        d = max(abs(self.a - other.a), abs(self.b - other.b))
        if projective:
            d = min(d, max(abs(self.a + other.a), abs(self.b + other.b)))
        return d <= tol


def mobius_apply(m: Mobius, z):
    return m(z)


def mobius_compose(m: Mobius, n: Mobius) -> Mobius:
    return m @ n


def mobius_inverse(m: Mobius) -> Mobius:
    return m.inverse()


def cross_ratio(a, b, c, d):
    """((a-c)(b-d)) / ((a-d)(b-c)).

    Equals 2 on (1, i, -1, -i) and 4/3 on evenly spaced real points; real and
    greater than 1 for counterclockwise circle quadruples.
    """
    a, b, c, d = (_as_complex(p) for p in (a, b, c, d))
    den = (a - d) * (b - c)
    if np.any(np.asarray(den) == 0) or np.any(np.asarray((a - c) * (b - d)) == 0):
        raise DegenerateInputError("cross-ratio needs four distinct points")
    return (a - c) * (b - d) / den


def circle_cross_ratio(a, b, c, d):
    """Cross-ratio of four boundary angles, computed from half-angle sines.

    Invariant under shifting any angle by 2pi; avoids cancellation for clustered points.
    """
    a, b, c, d = (np.asarray(x, dtype=float) for x in (a, b, c, d))
    num = np.sin(0.5 * (a - c)) * np.sin(0.5 * (b - d))
    den = np.sin(0.5 * (a - d)) * np.sin(0.5 * (b - c))
    return num / den


def disk_distance(z1, z2) -> float:
    z1, z2 = _as_complex(z1), _as_complex(z2)
    r = np.abs((z1 - z2) / (1.0 - np.conj(z1) * z2))
    return 2.0 * np.arctanh(np.minimum(r, 1.0))


@dataclass(frozen=True)
class Geodesic:
    """Complete geodesic with endpoint angles p < q (canonical order)."""

    p: float
    q: float

    def __post_init__(self):
        p, q = canonical_angle(float(self.p)), canonical_angle(float(self.q))
        if circle_gap(p, q) < 1e-14:
            raise DegenerateInputError("geodesic endpoints must be distinct")
        if p > q:
            p, q = q, p
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def endpoints(self):
        return complex(np.exp(1j * self.p)), complex(np.exp(1j * self.q))

    def closest_point_to_origin(self) -> complex:
        delta = self.q - self.p
        return complex(np.exp(0.5j * (self.p + self.q)) * np.tan(0.25 * np.pi - 0.25 * delta))

    def frame(self) -> Mobius:
        """Isometry sending the real diameter onto this geodesic, -1 -> p and 1 -> q."""
        m = self.closest_point_to_origin()
        tm = Mobius.moving_origin_to(m)
        u = tm.inverse()(self.endpoints[1])
        return tm @ Mobius.rotation(float(np.angle(u)))

    def point_at(self, s):
        """Point at signed arclength s from the closest point to 0, positive toward q."""
        return self.frame()(np.tanh(0.5 * np.asarray(s, dtype=float)))

    def side(self, z):
        """Signed side of interior/boundary points: >0 left of p->q, <0 right, ~0 on.

        Normalized to [-1, 1]; exactly 0 at the endpoints.
        """
        z = np.asarray(_as_complex(z), dtype=complex)
        P, Q = self.endpoints
        zp, zq = z - P, z - Q
        num = (zp * np.conj(zq) * np.exp(0.5j * (self.q - self.p))).real
        den = np.abs(zp) * np.abs(zq)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)
        return out


@dataclass(frozen=True)
class GeodesicSegment:
    u: complex
    v: complex

    def __post_init__(self):
        u, v = complex(_as_complex(self.u)), complex(_as_complex(self.v))
        if abs(u) >= 1 or abs(v) >= 1:
            raise ValueError("segment endpoints must lie in the open disk")
        if u == v:
            raise DegenerateInputError("segment endpoints must differ")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def length(self) -> float:
        return float(disk_distance(self.u, self.v))

    def point_at(self, frac):
        """Point at fraction `frac` of the hyperbolic length from u."""
        to_std = Mobius.moving_origin_to(self.u).inverse()
        w = to_std(self.v)
        r = abs(w)
        rot = Mobius.rotation(float(np.angle(w)))
        back = Mobius.moving_origin_to(self.u) @ rot
        return back(np.tanh(np.asarray(frac) * np.arctanh(r)))


def translation_along(g: Geodesic, t: float, reverse: bool = False) -> Mobius:
    """Hyperbolic translation with axis g and length |t|.

    For t > 0 the attracting endpoint is q (or p when reverse=True).
    """
    t = -t if reverse else t
    if t == 0:
        return Mobius.identity()
    c, s = np.cosh(0.5 * t), np.sinh(0.5 * t)
    r = g.frame()
    return r @ Mobius(c, s) @ r.inverse()


def _three_point_matrix(p1, p2, p3):
    """Matrix of z -> ((z-p1)(p2-p3)) / ((z-p3)(p2-p1)), sending p1, p2, p3 to 0, 1, inf."""
    return np.array([[p2 - p3, -p1 * (p2 - p3)], [p2 - p1, -p3 * (p2 - p1)]], dtype=complex)


def mobius_from_three_boundary_points(src, dst) -> Mobius:
    """Disk isometry sending boundary angles src[k] to dst[k], k = 0, 1, 2.

    Both triples must have the same cyclic orientation.
    """
    ps = [complex(np.exp(1j * float(x))) for x in src]
    qs = [complex(np.exp(1j * float(x))) for x in dst]
    s1 = _three_point_matrix(*ps)
    s2 = _three_point_matrix(*qs)
    try:
        return Mobius.from_matrix(np.linalg.solve(s2, s1))
    except (DegenerateInputError, np.linalg.LinAlgError) as exc:
        raise DegenerateInputError("triples are degenerate or oppositely oriented") from exc


STANDARD_QUADRUPLE = (0.0, 0.5 * np.pi, np.pi, 1.5 * np.pi)


def isometry_to_standard_quadruple(quad, tol: float = INPUT_TOL) -> Mobius:
    """The isometry sending a counterclockwise cross-ratio-2 quadruple of angles to (1, i, -1, -i)."""
    angles = [b.angle if isinstance(b, BoundaryPoint) else float(b) for b in quad]
    cr = circle_cross_ratio(*angles)
    if not abs(cr - 2.0) <= tol:
        raise InvalidQuadrupleError(f"cross-ratio {cr!r} differs from 2")
    m = mobius_from_three_boundary_points(angles[:3], STANDARD_QUADRUPLE[:3])
    last = m(np.exp(1j * angles[3]))
    if abs(last + 1j) > 1e-6:
        raise InvalidQuadrupleError("quadruple is not counterclockwise")
    return m


def geodesics_disjoint(g: Geodesic, h: Geodesic, tol: float = 1e-14) -> bool:
    """True when endpoint pairs are unlinked; a shared ideal endpoint counts as disjoint."""
    def strictly_inside(x):
        return g.p + tol < x < g.q - tol

    def strictly_outside(x):
        return x < g.p - tol or x > g.q + tol

    x, y = h.p, h.q
    return not ((strictly_inside(x) and strictly_outside(y)) or (strictly_inside(y) and strictly_outside(x)))


def _ordered_pair_cross_ratio(g: Geodesic, h: Geodesic) -> float:
    # arrange a, b (from g) and c, d (from h) counterclockwise
    if g.p <= h.p <= g.q and g.p <= h.q <= g.q:
        a, b, c, d = g.q, g.p + TWO_PI, h.p + TWO_PI, h.q + TWO_PI
    else:
        hs = sorted([(h.p - g.q) % TWO_PI, (h.q - g.q) % TWO_PI])
        a, b, c, d = g.p, g.q, g.q + hs[0], g.q + hs[1]
    return float(circle_cross_ratio(a, b, c, d))


def geodesic_distance(g: Geodesic, h: Geodesic) -> float:
    """Distance between disjoint geodesics; 0 when asymptotic."""
    if not geodesics_disjoint(g, h):
        raise DegenerateInputError("geodesics cross")
    if g == h:
        return 0.0
    shared = min(circle_gap(x, y) for x in (g.p, g.q) for y in (h.p, h.q))
    if shared < 1e-14:
        return 0.0
    r = _ordered_pair_cross_ratio(g, h)
    if not r > 1.0:
        return 0.0
    return float(2.0 * np.arctanh(1.0 / np.sqrt(r)))


def point_geodesic_distance(z, g: Geodesic):
    """Hyperbolic distance from interior points z to the geodesic g (vectorized in z)."""
    z = np.asarray(_as_complex(z), dtype=complex)
    P, Q = g.endpoints
    # move z to 0; the endpoint images subtend angle delta
    pp = (P - z) / (1 - np.conj(z) * P)
    qq = (Q - z) / (1 - np.conj(z) * Q)
    half = 0.5 * np.abs(np.angle(qq / pp))
    return np.arccosh(1.0 / np.sin(half))


def segment_crosses_geodesic(s: GeodesicSegment, g: Geodesic, tol: float = 1e-12):
    """Whether the closed segment meets g, and the hyperbolic fraction along s where it does.

    Returns (crosses, fraction); fraction is None when there is no crossing.
    """
    su, sv = float(g.side(s.u)), float(g.side(s.v))
    if abs(su) <= tol:
        return True, 0.0
    if abs(sv) <= tol:
        return True, 1.0
    if su * sv > 0:
        return False, None
    # move u to 0 and v onto the positive real axis, then intersect with the real diameter
    w = Mobius.moving_origin_to(s.u).inverse()
    v = w(s.v)
    to_std = Mobius.rotation(-float(np.angle(v))) @ w
    r = abs(v)
    A, B = to_std(g.endpoints[0]), to_std(g.endpoints[1])
    alpha, beta = sorted([float(canonical_angle(np.angle(A))), float(canonical_angle(np.angle(B)))])
    A, B = np.exp(1j * alpha), np.exp(1j * beta)
    e = np.exp(0.5j * (beta - alpha))
    c2 = e.real
    c1 = -(e * (A + np.conj(B))).real
    c0 = (e * A * np.conj(B)).real
    if abs(c2) < 1e-15:
        x = -c0 / c1
    else:
        disc = max(c1 * c1 - 4 * c2 * c0, 0.0)
        qq = -0.5 * (c1 + np.copysign(np.sqrt(disc), c1))
        roots = [qq / c2, c0 / qq if qq != 0 else np.inf]
        x = min(roots, key=abs)
    frac = float(np.clip(np.arctanh(np.clip(x, -1 + 1e-16, 1 - 1e-16)) / np.arctanh(r), 0.0, 1.0))
    return True, frac
