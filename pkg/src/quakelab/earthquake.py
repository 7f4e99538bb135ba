"""Earthquake cocycles, interior maps and boundary homeomorphisms for finite laminations.

Conventions
-----------
A separating atom g is oriented so that the source stratum A lies on its left;
its factor is the translation along g of length w(g) toward the terminal
endpoint.  With g_1 nearest A, ..., g_k nearest B,

    cocycle(A, B) = T_1 o T_2 o ... o T_k,

the restriction to B of the earthquake that is the identity on A.  Hence
cocycle(A, C) = cocycle(A, B) o cocycle(B, C).  Atoms through a query point
belong to the closed segment between the two strata and enter with their full
weight.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from .circle import CircleMap, MobiusMap, PiecewiseMobiusMap
from .hyperbolic import (
    TWO_PI,
    BoundaryPoint,
    DiskPoint,
    Geodesic,
    Mobius,
    disk_distance,
    mobius_from_three_boundary_points,
    translation_along,
)
from .lamination import MeasuredLamination, stratum_of


class UnrealizableSignatureError(ValueError):
    pass


def _signature(lam: MeasuredLamination, x) -> np.ndarray:
    if isinstance(x, np.ndarray) and x.dtype == np.int8:
        if x.shape != (len(lam),):
            raise UnrealizableSignatureError("signature length does not match the lamination")
        return x
    return stratum_of(lam, x)


def separating_atoms(lam: MeasuredLamination, a, b) -> list[int]:
    """Indices of atoms met by any segment joining strata a and b, ordered from a to b.

    a and b are points (complex, DiskPoint, BoundaryPoint) or side signatures.
    """
    sa, sb = _signature(lam, a), _signature(lam, b)
    idx = np.flatnonzero(sa != sb)
    if idx.size <= 1:
        return idx.tolist()
    ref = np.where(sa[idx] != 0, sa[idx], -sb[idx])
    sub = lam.rel[np.ix_(idx, idx)]
    beyond = sub == -ref[:, None]  # beyond[i, j]: atom j lies past atom i, seen from a
    pos = beyond.sum(axis=0)
    if np.unique(pos).size != pos.size:
        raise UnrealizableSignatureError("signatures are not realized by strata of this lamination")
    return idx[np.argsort(pos)].tolist()


class _Factors:
    """Per-atom translation matrices toward q (+) and toward p (-)."""

    def __init__(self, lam: MeasuredLamination):
        fwd = [translation_along(a.geodesic, a.weight) for a in lam.atoms]
        self.fwd = fwd
        self.bwd = [m.inverse() for m in fwd]


class Earthquake:
    """Left earthquake along a finite lamination, normalized to be the identity on a base stratum.

    ``base`` may be an interior point, a BoundaryPoint or a signature.  By default
    it is the stratum of 0, or the stratum just clockwise of angle 0 when 0 lies
    on an atom.
    """

    def __init__(self, lam: MeasuredLamination, base=None):
        self.lam = lam
        self._factors = _Factors(lam)
        self._cache: dict = {}
        self._lock = threading.Lock()
        self.base_signature = self._resolve_base(base)
        self._boundary: PiecewiseMobiusMap | None = None

    def _resolve_base(self, base):
        lam = self.lam
        if base is not None:
            return _signature(lam, base)
        sig = lam.interior_sides(0.0)[0]
        if np.all(sig != 0):
            return sig
        ends = lam.endpoint_angles
        gaps = np.mod(-ends, TWO_PI)
        gaps = gaps[gaps > 0]
        eta = 0.5 * gaps.min() if gaps.size else 0.5
        return lam.boundary_sides(TWO_PI - eta)[0]

    def cocycle(self, a, b) -> Mobius:
        sa, sb = _signature(self.lam, a), _signature(self.lam, b)
        key = (sa.tobytes(), sb.tobytes())
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        m = Mobius.identity()
        for i in separating_atoms(self.lam, sa, sb):
            a_side = sa[i] if sa[i] != 0 else -sb[i]
            m = m @ (self._factors.fwd[i] if a_side > 0 else self._factors.bwd[i])
        with self._lock:
            self._cache[key] = m
        return m

    def comparison(self, a, b) -> "ComparisonIsometry":
        """Cocycle between two strata together with the single axis when they are adjacent."""
        sep = separating_atoms(self.lam, a, b)
        m = self.cocycle(a, b)
        if len(sep) != 1:
            return ComparisonIsometry(m, None, m.translation_length())
        atom = self.lam.atoms[sep[0]]
        return ComparisonIsometry(m, atom.geodesic, atom.weight)

    def restriction(self, x) -> Mobius:
        """The isometry E|_X of the stratum of x."""
        return self.cocycle(self.base_signature, x)

    def relative_comparison(self, a, b) -> Mobius:
        """E|_B o (E|_A)^{-1}; composes right-to-left: rc(A, C) = rc(B, C) o rc(A, B)."""
        return self.restriction(b) @ self.restriction(a).inverse()

    def __call__(self, z):
        """Interior map E(z) = cocycle(base, stratum(z)) (z), vectorized."""
        z_arr = np.atleast_1d(np.asarray(z.value if isinstance(z, DiskPoint) else z, dtype=complex))
        if not self.lam.atoms:
            out = z_arr.copy()
        else:
            sigs = self.lam.interior_sides(z_arr)
            uniq, inv = np.unique(sigs, axis=0, return_inverse=True)
            inv = inv.reshape(-1)
            a = np.empty(len(uniq), dtype=complex)
            b = np.empty(len(uniq), dtype=complex)
            for k, s in enumerate(uniq):
                m = self.cocycle(self.base_signature, s.astype(np.int8))
                a[k], b[k] = m.a, m.b
            aa, bb = a[inv], b[inv]
            out = (aa * z_arr + bb) / (np.conj(bb) * z_arr + np.conj(aa))
        return complex(out[0]) if np.ndim(z) == 0 and not isinstance(z, np.ndarray) else out.reshape(np.shape(z))

    def boundary_map(self) -> PiecewiseMobiusMap:
        """E restricted to S^1: one Möbius piece per arc between consecutive atom endpoints."""
        if self._boundary is None:
            ends = self.lam.endpoint_angles
            if ends.size == 0:
                self._boundary = PiecewiseMobiusMap([], [1.0], [0.0])
            else:
                nxt = np.concatenate([ends[1:], [ends[0] + TWO_PI]])
                mids = 0.5 * (ends + nxt)
                sigs = self.lam.boundary_sides(mids)
                ms = [self.cocycle(self.base_signature, s) for s in sigs]
                self._boundary = PiecewiseMobiusMap(ends, [m.a for m in ms], [m.b for m in ms])
        return self._boundary

    def boundary(self, theta):
        return self.boundary_map()(theta)


@dataclass(frozen=True)
class ComparisonIsometry:
    value: Mobius
    axis: Geodesic | None
    length: float


def cocycle(lam: MeasuredLamination, a, b) -> Mobius:
    return Earthquake(lam, base=a).cocycle(a, b)


def earthquake_map(eq: Earthquake, z):
    return eq(z)


def boundary_map(eq: Earthquake, x):
    if isinstance(x, BoundaryPoint):
        return BoundaryPoint(eq.boundary(x.angle))
    return eq.boundary(x)


DEFAULT_TARGETS = (0.0, 0.5 * np.pi, np.pi)


def normalize_three_points(h: CircleMap, targets=DEFAULT_TARGETS) -> CircleMap:
    """Post-compose h with the isometry that makes it fix the three target angles."""
    targets = np.asarray(targets, dtype=float)
    images = np.asarray(h(targets), dtype=float)
    n = mobius_from_three_boundary_points(images, targets)
    return h.then(n)


def normalized_boundary_map(lam: MeasuredLamination, targets=DEFAULT_TARGETS) -> CircleMap:
    return normalize_three_points(Earthquake(lam).boundary_map(), targets)


def mobius_circle_map(m: Mobius) -> MobiusMap:
    return MobiusMap(m)


@dataclass(frozen=True)
class DefectReport:
    max_decrease: float
    max_increase: float
    pairs: int
    norm: float | None = None


def quasi_isometry_defect(eq: Earthquake, z1, z2, norm: float | None = None) -> DefectReport:
    """Max over sampled pairs of d(z1, z2) - d(E z1, E z2), plus the max increase."""
    z1 = np.atleast_1d(np.asarray(z1, dtype=complex))
    z2 = np.atleast_1d(np.asarray(z2, dtype=complex))
    before = disk_distance(z1, z2)
    after = disk_distance(eq(z1), eq(z2))
    diff = before - after
    return DefectReport(float(diff.max()), float((-diff).max()), int(z1.size), norm)
