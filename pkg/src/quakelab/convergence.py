"""Sequences of atomic measures: weak* surrogate, normalized boundary convergence, rescalings
and the limit defect of cocycles."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.optimize import least_squares
from scipy.stats import spearmanr

from .boundary import boundary_sup_distance
from .earthquake import Earthquake, normalize_three_points
from .hyperbolic import (
    TWO_PI,
    DiskPoint,
    Geodesic,
    Mobius,
    isometry_to_standard_quadruple,
    point_geodesic_distance,
    translation_along,
)
from .lamination import MeasuredLamination, meets_euclidean_disk, pushforward, thurston_norm

DEFAULT_WINDOW_RADIUS = 0.99
DEFAULT_BANDWIDTH = 0.05
CAUCHY_TAIL = 5
CAUCHY_TOL = 1e-6
DEFECT_RESIDUAL_TOL = 1e-6
DEFECT_BOUND = 10.0


class NoLimitError(RuntimeError):
    """The tail of a sequence of isometries does not stabilize."""


@dataclass(frozen=True)
class MeasureSequence:
    laminations: tuple[MeasuredLamination, ...]
    description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "laminations", tuple(self.laminations))

    def __len__(self):
        return len(self.laminations)

    def __getitem__(self, i):
        return self.laminations[i]

    def __iter__(self):
        return iter(self.laminations)

    @cached_property
    def norms(self) -> np.ndarray:
        return np.array([thurston_norm(m) for m in self.laminations])

    @property
    def bound(self) -> float:
        """Uniform bound max_i ||mu_i||."""
        return float(self.norms.max()) if len(self) else 0.0


@dataclass(frozen=True)
class TestWindow:
    """Atoms meeting the Euclidean disk of radius r, tested by plateau tents on a fixed pair grid.

    Each test function is 1 within half a grid pitch of its center (in both
    endpoint coordinates, sup of circle distances) and falls off linearly to 0
    over one bandwidth, so it is (1 / bandwidth)-Lipschitz and every geodesic
    sits on the plateau of some grid tent.
    """

    __test__ = False

    radius: float = DEFAULT_WINDOW_RADIUS
    bandwidth: float = DEFAULT_BANDWIDTH

    def __post_init__(self):
        if not 0 < self.radius < 1:
            raise ValueError("window radius must lie in (0, 1)")
        if not self.bandwidth > 0:
            raise ValueError("bandwidth must be positive")

    @property
    def size(self) -> int:
        return int(np.ceil(TWO_PI / (0.5 * self.bandwidth)))

    @property
    def pitch(self) -> float:
        return TWO_PI / self.size

    def test_integrals(self, lam: MeasuredLamination) -> np.ndarray:
        """Integrals of every grid test function against lam restricted to the window."""
        n, h, bw = self.size, self.pitch, self.bandwidth
        out = np.zeros((n, n))
        if not lam.atoms:
            return out
        keep = meets_euclidean_disk(lam, self.radius)
        if not keep.any():
            return out
        p, q, w = lam.p[keep], lam.q[keep], lam.weights[keep]
        reach = 0.5 * h + bw
        m = int(np.ceil(reach / h)) + 1
        offs = np.arange(-m, m + 1)

        def tents(t):
            idx = np.rint(t / h).astype(int)[:, None] + offs[None, :]
            d = np.abs(np.mod(t[:, None] - idx * h + np.pi, TWO_PI) - np.pi)
            return np.mod(idx, n), np.clip((reach - d) / bw, 0.0, 1.0)

        # test functions see unordered endpoint pairs: f({x, y}) = max(f(x, y), f(y, x))
        ip, fp = tents(p)
        iq, fq = tents(q)
        vals = w[:, None, None] * np.minimum(fp[:, :, None], fq[:, None, :])
        short = np.abs(np.mod(q - p + np.pi, TWO_PI) - np.pi) < 2 * reach + h
        np.add.at(out, (ip[~short, :, None], iq[~short, None, :]), vals[~short])
        np.add.at(out, (iq[~short, :, None], ip[~short, None, :]), np.swapaxes(vals[~short], 1, 2))
        for k in np.flatnonzero(short):
            patch = np.zeros((n, n))
            patch[ip[k][:, None], iq[k][None, :]] = vals[k]
            np.maximum.at(patch, (iq[k][:, None], ip[k][None, :]), vals[k].T)
            out += patch
        return out


def weak_star_discrepancy(mu: MeasuredLamination, nu: MeasuredLamination, window: TestWindow | None = None) -> float:
    """max over the window's test grid of |int f dmu - int f dnu|."""
    window = window or TestWindow()
    return float(np.max(np.abs(window.test_integrals(mu) - window.test_integrals(nu))))


def rescale_by_quadruple(lam: MeasuredLamination, quad) -> MeasuredLamination:
    """Pushforward under the isometry taking the cross-ratio-2 quadruple to (1, i, -1, -i)."""
    return pushforward(isometry_to_standard_quadruple(quad), lam)


def radial_translation_to_origin(d) -> Mobius:
    d = complex(d.value if isinstance(d, DiskPoint) else d)
    return Mobius.moving_origin_to(d).inverse()


def rescale_by_disk(lam: MeasuredLamination, d) -> MeasuredLamination:
    """Pushforward under the translation along the radius through d that sends d to 0."""
    return pushforward(radial_translation_to_origin(d), lam)


# ---------------------------------------------------------------- experiments


def _candidate_bases(n_rings: int = 12, per_ring: int = 24) -> np.ndarray:
    pts = [0j]
    for k in range(1, n_rings + 1):
        r = 0.9 * k / n_rings
        pts.extend(r * np.exp(1j * (np.arange(per_ring) + 0.5 * (k % 2)) * TWO_PI / per_ring))
    return np.array(pts)


def _clearance(lam: MeasuredLamination, z: np.ndarray) -> np.ndarray:
    if not lam.atoms:
        return np.full(z.shape, np.inf)
    return np.min([point_geodesic_distance(z, a.geodesic) for a in lam.atoms], axis=0)


def common_base_point(lams: Sequence[MeasuredLamination], min_clearance: float = 1e-6):
    """Interior point farthest (in the worst case) from every atom of every lamination, or None."""
    z = _candidate_bases()
    clear = np.full(z.shape, np.inf)
    for lam in lams:
        clear = np.minimum(clear, _clearance(lam, z))
    i = int(np.argmax(clear))
    return complex(z[i]) if clear[i] > min_clearance else None


@dataclass(frozen=True)
class ConvergenceRow:
    index: int
    norm: float
    weak_star_discrepancy: float
    boundary_sup_distance: float


@dataclass(frozen=True)
class ConvergenceTable:
    rows: tuple[ConvergenceRow, ...]
    passed: bool
    spearman: float
    base: complex | None
    limit_norm: float
    notes: tuple[str, ...] = field(default=())

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])


def _decays(col: np.ndarray, zero_tol: float) -> bool:
    k = max(1, len(col) // 4)
    head, tail = col[:k].max(), col[-k:].max()
    return bool(tail <= zero_tol or tail <= 0.1 * head)


def joint_decay_verdict(a: np.ndarray, b: np.ndarray, zero_tol: float = 1e-12):
    """(passed, spearman, notes): both columns decay and are rank-correlated above 0.9."""
    a, b = np.asarray(a, float), np.asarray(b, float)
    if np.all(a <= zero_tol) and np.all(b <= zero_tol):
        return True, 1.0, ("both columns vanish",)
    notes = []
    ok = True
    for name, col in (("weak*", a), ("boundary", b)):
        if not _decays(col, zero_tol):
            ok = False
            notes.append(f"{name} column does not decay")
    if np.ptp(a) <= zero_tol or np.ptp(b) <= zero_tol:
        rho = 0.0
        notes.append("a constant column has no rank correlation")
    else:
        rho = float(spearmanr(a, b).statistic)
    if not rho > 0.9:
        ok = False
        notes.append(f"spearman {rho:.3f} <= 0.9")
    return ok, rho, tuple(notes)


def normalized_boundary_maps(lams: Sequence[MeasuredLamination]):
    """Boundary maps normalized to the identity on a shared base stratum, or on 0, pi/2, pi."""
    base = common_base_point(lams)
    if base is not None:
        return [Earthquake(m, base=base).boundary_map() for m in lams], base
    return [normalize_three_points(Earthquake(m).boundary_map()) for m in lams], None


def convergence_experiment(seq: MeasureSequence, limit: MeasuredLamination, grid: int = 4096,
                           window: TestWindow | None = None) -> ConvergenceTable:
    window = window or TestWindow()
    maps, base = normalized_boundary_maps([limit, *seq.laminations])
    h_lim = maps[0]
    ref = window.test_integrals(limit)
    rows = []
    for i, (lam, h) in enumerate(zip(seq.laminations, maps[1:])):
        ws = float(np.max(np.abs(window.test_integrals(lam) - ref)))
        rows.append(ConvergenceRow(i, float(seq.norms[i]), ws, boundary_sup_distance(h, h_lim, grid)))
    table = ConvergenceTable(tuple(rows), False, 0.0, base, thurston_norm(limit))
    passed, rho, notes = joint_decay_verdict(table.column("weak_star_discrepancy"), table.column("boundary_sup_distance"))
    return ConvergenceTable(table.rows, passed, rho, base, table.limit_norm, notes)


# ---------------------------------------------------------------- cocycle defect


def projective_gap(m: Mobius, n: Mobius) -> float:
    """Entrywise max distance between SU(1,1) representatives, minimized over the sign."""
    x, y = m.matrix, n.matrix
    return float(min(np.abs(x - y).max(), np.abs(x + y).max()))


def _atom_through(lam: MeasuredLamination, z: complex):
    sides = lam.interior_sides(z)[0]
    on = np.flatnonzero(sides == 0)
    return int(on[0]) if on.size else None


@dataclass(frozen=True)
class LimitDefect:
    a1: float
    a2: float
    residual: float
    trivial: bool
    limit_cocycle: Mobius
    cocycle: Mobius
    tail_spread: float
    atom1: Geodesic | None = None
    atom2: Geodesic | None = None


def limit_of_isometries(ms: Sequence[Mobius], tail: int = CAUCHY_TAIL, tol: float = CAUCHY_TOL):
    """Last element of a Cauchy-stabilized tail; raises NoLimitError otherwise."""
    if len(ms) < tail:
        raise NoLimitError(f"need at least {tail} terms, got {len(ms)}")
    last = ms[-tail:]
    spread = max(projective_gap(a, b) for a in last for b in last)
    if spread > tol:
        raise NoLimitError(f"tail spread {spread:.3g} exceeds {tol:g}")
    return last[-1], spread


def cocycle_limit_defect(seq: MeasureSequence, limit: MeasuredLamination, z1, z2,
                         bound: float = DEFECT_BOUND) -> LimitDefect:
    """Compare lim cocycle(mu_i; z1, z2) with cocycle(mu; z1, z2).

    In the product order used here the corrections sit at the two ends:
    C = T1(a1) o L o T2(a2), with T1 along the limit atom through z1 oriented so
    that z2 lies on its right and T2 along the limit atom through z2 with z1 on
    its left.  a_k is pinned to 0 when no limit atom passes through z_k.
    """
    z1 = complex(z1.value if isinstance(z1, DiskPoint) else z1)
    z2 = complex(z2.value if isinstance(z2, DiskPoint) else z2)
    L, spread = limit_of_isometries([Earthquake(m, base=z1).cocycle(z1, z2) for m in seq])
    C = Earthquake(limit, base=z1).cocycle(z1, z2)
    i1, i2 = _atom_through(limit, z1), _atom_through(limit, z2)
    g1 = limit.atoms[i1].geodesic if i1 is not None else None
    g2 = limit.atoms[i2].geodesic if i2 is not None and i2 != i1 else None

    def t1(a):
        if g1 is None:
            return Mobius.identity()
        return translation_along(g1, a, reverse=g1.side(z2) > 0)

    def t2(a):
        if g2 is None:
            return Mobius.identity()
        return translation_along(g2, a, reverse=g2.side(z1) < 0)

    free = [g is not None for g in (g1, g2)]

    def model(x):
        a = np.zeros(2)
        a[np.array(free)] = x
        return t1(a[0]) @ L @ t2(a[1])

    def resid(x):
        m = model(x).matrix
        c = C.matrix
        d = c - m if np.abs(c - m).max() <= np.abs(c + m).max() else c + m
        return np.concatenate([d.real.ravel(), d.imag.ravel()])

    n_free = sum(free)
    if n_free == 0:
        best = np.zeros(0)
    else:
        starts = [np.zeros(n_free)]
        ws = [limit.atoms[i].weight for i, f in zip((i1, i2), free) if f]
        starts.append(np.array(ws))
        starts.append(-np.array(ws))
        best, best_cost = None, np.inf
        for x0 in starts:
            x0 = np.clip(x0, -bound, bound)
            sol = least_squares(resid, x0, bounds=(-bound, bound), xtol=1e-15, ftol=1e-15, gtol=1e-15)
            if sol.cost < best_cost:
                best, best_cost = sol.x, sol.cost
    a = np.zeros(2)
    a[np.array(free)] = best
    residual = projective_gap(model(best), C)
    return LimitDefect(float(a[0]), float(a[1]), residual, projective_gap(L, C) < DEFECT_RESIDUAL_TOL,
                       L, C, spread, g1, g2)
