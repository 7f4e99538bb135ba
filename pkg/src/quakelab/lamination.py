"""Finite atomic measured laminations of the disk."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .hyperbolic import (
    TWO_PI,
    BoundaryPoint,
    DiskPoint,
    Geodesic,
    GeodesicSegment,
    Mobius,
    canonical_angle,
    circle_gap,
    geodesic_distance,
    geodesics_disjoint,
)

# ideal triangle inradius is ln(3)/2 ~ 0.5493; keep a margin below it
DEFAULT_R0 = 0.5
MIN_WEIGHT = 1e-12
ON_TOL_BOUNDARY = 1e-13
ON_TOL_INTERIOR = 1e-10

LEFT, ON, RIGHT = 1, 0, -1


class LaminationError(ValueError):
    pass


@dataclass(frozen=True)
class Atom:
    geodesic: Geodesic
    weight: float


@dataclass(frozen=True)
class MeasuredLamination:
    """Pairwise disjoint weighted geodesics; build through :func:`validate`."""

    atoms: tuple[Atom, ...] = ()

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    @cached_property
    def p(self) -> np.ndarray:
        return np.array([a.geodesic.p for a in self.atoms], dtype=float)

    @cached_property
    def q(self) -> np.ndarray:
        return np.array([a.geodesic.q for a in self.atoms], dtype=float)

    @cached_property
    def weights(self) -> np.ndarray:
        return np.array([a.weight for a in self.atoms], dtype=float)

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    @cached_property
    def endpoint_angles(self) -> np.ndarray:
        return np.unique(np.concatenate([self.p, self.q])) if self.atoms else np.empty(0)

    def boundary_sides(self, theta) -> np.ndarray:
        """Side of each boundary angle w.r.t. every atom, shape (N, K), values in {1, 0, -1}.

        Left of the canonical orientation p -> q is the counterclockwise arc from q to p.
        """
        theta = canonical_angle(np.atleast_1d(np.asarray(theta, dtype=float)))[:, None]
        p, q = self.p[None, :], self.q[None, :]
        out = np.where((theta > p) & (theta < q), RIGHT, LEFT).astype(np.int8)
        on = (circle_gap(theta, p) <= ON_TOL_BOUNDARY) | (circle_gap(theta, q) <= ON_TOL_BOUNDARY)
        out[on] = ON
        return out

    def interior_sides(self, z) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=complex))[:, None]
        if not self.atoms:
            return np.zeros((z.shape[0], 0), dtype=np.int8)
        P, Q = np.exp(1j * self.p)[None, :], np.exp(1j * self.q)[None, :]
        zp, zq = z - P, z - Q
        num = (zp * np.conj(zq) * np.exp(0.5j * (self.q - self.p))[None, :]).real
        val = num / (np.abs(zp) * np.abs(zq))
        out = np.sign(val).astype(np.int8)
        out[np.abs(val) <= ON_TOL_INTERIOR] = ON
        return out

    @cached_property
    def rel(self) -> np.ndarray:
        """rel[i, j] = side of atom j relative to atom i (0 on the diagonal)."""
        k = len(self.atoms)
        if k == 0:
            return np.zeros((0, 0), dtype=np.int8)
        sp = self.boundary_sides(self.p).T  # [i, j]: side of p_j w.r.t. atom i
        sq = self.boundary_sides(self.q).T
        rel = np.where(sp != 0, sp, sq).astype(np.int8)
        np.fill_diagonal(rel, 0)
        return rel

    @cached_property
    def distance_matrix(self) -> np.ndarray:
        k = len(self.atoms)
        d = np.zeros((k, k))
        for i in range(k):
            for j in range(i + 1, k):
                d[i, j] = d[j, i] = geodesic_distance(self.atoms[i].geodesic, self.atoms[j].geodesic)
        return d

    def __add__(self, other: "MeasuredLamination") -> "MeasuredLamination":
        return validate([(a.geodesic, a.weight) for a in self.atoms] + [(a.geodesic, a.weight) for a in other.atoms])

    def scaled(self, factor: float) -> "MeasuredLamination":
        return validate([(a.geodesic, a.weight * factor) for a in self.atoms])


def _as_geodesic(g) -> Geodesic:
    if isinstance(g, Geodesic):
        return g
    return Geodesic(*g)


def validate(atoms: Iterable) -> MeasuredLamination:
    """Build a lamination from (geodesic, weight) or (angle1, angle2, weight) items.

    Duplicate geodesics are merged by summing weights; crossing pairs are rejected.
    """
    merged: dict[Geodesic, float] = {}
    for item in atoms:
        if isinstance(item, Atom):
            g, w = item.geodesic, item.weight
        elif len(item) == 2:
            g, w = _as_geodesic(item[0]), item[1]
        else:
            g, w = Geodesic(item[0], item[1]), item[2]
        w = float(w)
        if not np.isfinite(w) or w < MIN_WEIGHT:
            raise LaminationError(f"weights must be positive and at least {MIN_WEIGHT}, got {w!r}")
        key = next((h for h in merged if circle_gap(h.p, g.p) < 1e-14 and circle_gap(h.q, g.q) < 1e-14), g)
        merged[key] = merged.get(key, 0.0) + w
    geos = list(merged)
    for i, g in enumerate(geos):
        for h in geos[i + 1:]:
            if not geodesics_disjoint(g, h):
                raise LaminationError(f"geodesics cross: ({g.p!r}, {g.q!r}) and ({h.p!r}, {h.q!r})")
    ordered = sorted(merged.items(), key=lambda kv: (kv[0].p, kv[0].q))
    return MeasuredLamination(tuple(Atom(g, w) for g, w in ordered))


EMPTY = MeasuredLamination()


def stratum_of(lam: MeasuredLamination, point) -> np.ndarray:
    """Side signature of a single point; BoundaryPoint selects the boundary rule."""
    if isinstance(point, BoundaryPoint):
        return lam.boundary_sides(point.angle)[0]
    if isinstance(point, DiskPoint):
        point = point.value
    return lam.interior_sides(complex(point))[0]


def _crossing_mask(lam: MeasuredLamination, u, v) -> np.ndarray:
    su = lam.interior_sides(u)
    sv = lam.interior_sides(v)
    return (su == 0) | (sv == 0) | (su != sv)


def deposited_on_arc(lam: MeasuredLamination, s: GeodesicSegment) -> float:
    """Total weight of atoms meeting the closed segment."""
    if not lam.atoms:
        return 0.0
    return float(lam.weights[_crossing_mask(lam, s.u, s.v)[0]].sum())


def deposited_on_arcs(lam: MeasuredLamination, u, v) -> np.ndarray:
    """Vectorized :func:`deposited_on_arc` over arrays of segment endpoints."""
    u = np.atleast_1d(np.asarray(u, dtype=complex))
    if not lam.atoms:
        return np.zeros(u.shape[0])
    return _crossing_mask(lam, u, v).astype(float) @ lam.weights


@dataclass(frozen=True)
class NormResult:
    value: float
    witness: tuple[int, int] | None


def thurston_norm_with_witness(lam: MeasuredLamination, arc_length: float = 1.0) -> NormResult:
    """Exact sup of deposited mass over closed arcs of the given length.

    The atoms crossed by an arc are linearly ordered along it; the first and last
    are within distance arc_length, and everything separating them is crossed.
    So the sup runs over pairs (a, b) with d(g_a, g_b) <= arc_length of the mass
    weakly separating them, both ends included.
    """
    k = len(lam.atoms)
    if k == 0:
        return NormResult(0.0, None)
    rel, w = lam.rel, lam.weights
    # sum_c w_c [rel[c,a] != rel[c,b]] counts separating atoms plus w_a + w_b (a != b)
    sep = np.einsum("c,cab->ab", w, (rel[:, :, None] != rel[:, None, :]).astype(float))
    sep[np.diag_indices(k)] = w
    admissible = lam.distance_matrix <= arc_length + 1e-12
    masked = np.where(admissible, sep, -np.inf)
    flat = int(np.argmax(masked))
    a, b = divmod(flat, k)
    return NormResult(float(masked[a, b]), (a, b))


def thurston_norm(lam: MeasuredLamination) -> float:
    return thurston_norm_with_witness(lam).value


def sample_unit_arcs(lam: MeasuredLamination, n: int, rng: np.random.Generator, arc_length: float = 1.0, spread: float = 12.0):
    """Random closed arcs of the given length passing through points of random atoms."""
    k = len(lam.atoms)
    idx = rng.integers(0, k, size=n)
    s = rng.uniform(-spread, spread, size=n)
    frames = [a.geodesic.frame() for a in lam.atoms]
    fa = np.array([f.a for f in frames])[idx]
    fb = np.array([f.b for f in frames])[idx]
    x = np.tanh(0.5 * s)
    base = (fa * x + fb) / (np.conj(fb) * x + np.conj(fa))
    theta = rng.uniform(0.0, TWO_PI, size=n)
    back = rng.uniform(0.0, arc_length, size=n)
    d = np.exp(1j * theta)

    def from_base(r):
        zz = d * np.tanh(0.5 * r)
        return (zz + base) / (1.0 + np.conj(base) * zz)

    return from_base(-back), from_base(arc_length - back)


def monte_carlo_norm(lam: MeasuredLamination, samples: int, seed: int, chunk: int = 100_000) -> float:
    """Lower estimate of the norm: max deposited mass over random unit arcs."""
    if not lam.atoms:
        return 0.0
    rng = np.random.default_rng(seed)
    best = 0.0
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        u, v = sample_unit_arcs(lam, m, rng)
        ok = np.abs(u) < 1
        ok &= np.abs(v) < 1
        if ok.any():
            best = max(best, float(deposited_on_arcs(lam, u[ok], v[ok]).max()))
        done += m
    return best


@dataclass(frozen=True)
class HyperbolicDisk:
    center: complex
    radius: float = DEFAULT_R0

    def __post_init__(self):
        c = complex(self.center.value if isinstance(self.center, DiskPoint) else self.center)
        if not abs(c) < 1:
            raise ValueError("disk center must lie in the open unit disk")
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        object.__setattr__(self, "center", c)

    @property
    def boundary_distance(self) -> float:
        """Euclidean distance from the disk to the unit circle."""
        return float(boundary_distance_of_disk(abs(self.center), self.radius))


def boundary_distance_of_disk(center_modulus, radius):
    tau = np.tanh(0.5 * radius)
    rho = np.asarray(center_modulus, dtype=float)
    return 1.0 - (rho + tau) / (1.0 + rho * tau)


def _disk_hits(lam: MeasuredLamination, centers, radius: float) -> np.ndarray:
    c = np.atleast_1d(np.asarray(centers, dtype=complex))[:, None]
    P, Q = np.exp(1j * lam.p)[None, :], np.exp(1j * lam.q)[None, :]
    pp = (P - c) / (1 - np.conj(c) * P)
    qq = (Q - c) / (1 - np.conj(c) * Q)
    half_sin = np.abs(np.sin(0.5 * np.angle(qq / pp)))
    # distance from center to geodesic is arccosh(1 / half_sin)
    return half_sin >= 1.0 / np.cosh(radius) - 1e-15


def disk_mass(lam: MeasuredLamination, disk: HyperbolicDisk) -> float:
    """Total weight of atoms meeting the closed hyperbolic disk."""
    if not lam.atoms:
        return 0.0
    return float(lam.weights[_disk_hits(lam, disk.center, disk.radius)[0]].sum())


def disk_masses(lam: MeasuredLamination, centers, radius: float = DEFAULT_R0) -> np.ndarray:
    centers = np.atleast_1d(np.asarray(centers, dtype=complex))
    if not lam.atoms:
        return np.zeros(centers.shape[0])
    return _disk_hits(lam, centers, radius).astype(float) @ lam.weights


def _min_center_modulus(t: float, radius: float) -> float:
    """Smallest |center| for which a radius-`radius` disk lies within Euclidean distance t of S^1."""
    tau = np.tanh(0.5 * radius)
    edge = 1.0 - t
    return max(0.0, (edge - tau) / (1.0 - edge * tau))


def asymptotic_profile(lam: MeasuredLamination, t: float, samples: int = 4000, seed: int = 0, radius: float = DEFAULT_R0) -> float:
    """Sampled sup of disk mass over radius-r0 disks within Euclidean distance t of S^1.

    Candidates concentrate on the atoms near their ideal endpoints, where the sup
    is attained for finite laminations, plus a uniform background.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    if not lam.atoms:
        return 0.0
    rng = np.random.default_rng(seed)
    rho_min = _min_center_modulus(t, radius)
    d_min = 2.0 * np.arctanh(rho_min)
    centers = []
    k = len(lam.atoms)
    per_atom = max(8, samples // (2 * k + 1))
    for atom in lam.atoms:
        g = atom.geodesic
        d0 = 2.0 * np.arctanh(abs(g.closest_point_to_origin()))
        s_min = float(np.arccosh(max(np.cosh(d_min) / np.cosh(d0), 1.0)))
        for sign in (1.0, -1.0):
            s = s_min + np.concatenate([[0.0, 1e-9], rng.exponential(1.5, size=per_atom - 2)])
            off = rng.uniform(-radius, radius, size=s.size)
            off[:2] = 0.0
            x = np.tanh(0.5 * sign * s)
            perp = 1j * np.tanh(0.5 * off)
            on_diam = (perp + x) / (1 + x * perp)
            centers.append(g.frame()(on_diam))
    n_bg = max(samples - per_atom * 2 * k, 16)
    r = d_min + rng.exponential(2.0, size=n_bg)
    centers.append(np.tanh(0.5 * r) * np.exp(1j * rng.uniform(0, TWO_PI, size=n_bg)))
    c = np.concatenate(centers)
    c = c[np.abs(c) < 1.0]
    ok = boundary_distance_of_disk(np.abs(c), radius) <= t + 1e-15
    if not ok.any():
        return 0.0
    return float(disk_masses(lam, c[ok], radius).max())


def meets_euclidean_disk(lam: MeasuredLamination, r: float) -> np.ndarray:
    """Mask of atoms whose geodesic meets the closed Euclidean disk of radius r about 0."""
    if not lam.atoms:
        return np.zeros(0, dtype=bool)
    delta = lam.q - lam.p
    nearest = np.abs(np.tan(0.25 * np.pi - 0.25 * delta))
    return nearest <= r


def restrict_to_disk(lam: MeasuredLamination, r: float):
    """Split into (atoms meeting the Euclidean disk D_r, the rest)."""
    if not 0 < r < 1:
        raise ValueError("r must lie in (0, 1)")
    mask = meets_euclidean_disk(lam, r)
    inner = MeasuredLamination(tuple(a for a, m in zip(lam.atoms, mask) if m))
    outer = MeasuredLamination(tuple(a for a, m in zip(lam.atoms, mask) if not m))
    return inner, outer


def pushforward(f, lam: MeasuredLamination) -> MeasuredLamination:
    """Image lamination under a boundary map f (Mobius or angle -> angle callable)."""
    if isinstance(f, Mobius):
        fn = f.apply_angle
    else:
        fn = f
    items = []
    for a in lam.atoms:
        x, y = np.asarray(fn(np.array([a.geodesic.p, a.geodesic.q])), dtype=float)
        if circle_gap(x, y) < 1e-14:
            raise LaminationError("map is not injective on atom endpoints")
        items.append((Geodesic(x, y), a.weight))
    return validate(items)


def rotate(lam: MeasuredLamination, phi: float) -> MeasuredLamination:
    return pushforward(lambda th: canonical_angle(th + phi), lam)


def as_rows(lam: MeasuredLamination) -> list[tuple[float, float, float]]:
    return [(a.geodesic.p, a.geodesic.q, a.weight) for a in lam.atoms]


def from_rows(rows: Sequence[Sequence[float]]) -> MeasuredLamination:
    return validate([(r[0], r[1], r[2]) for r in rows])
