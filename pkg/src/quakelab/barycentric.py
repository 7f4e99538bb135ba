"""Barycentric (conformally natural) extension of circle homeomorphisms to the disk,
and finite-difference Beltrami coefficients of the extension."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circle import CircleMap
from .hyperbolic import TWO_PI, DiskPoint, canonical_angle

DEFAULT_QUADRATURE = 1024
DEFAULT_TOL = 1e-8
DAMPING = 0.5
MAX_DAMPED = 200
MAX_NEWTON = 50
NEAR_ONE = 0.999


class ConvergenceError(RuntimeError):
    """The barycenter iteration did not reach the requested residual."""

    def __init__(self, message, trace=()):
        super().__init__(message)
        self.trace = tuple(trace)


class SingularSampleError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExtensionResult:
    w: complex
    residual: float
    iterations: int
    nodes: int = 0


@dataclass(frozen=True)
class BeltramiSample:
    z: complex
    value: complex
    flagged: bool = False


def _as_complex(z) -> complex:
    return complex(z.value if isinstance(z, DiskPoint) else z)


def _gauss_nodes(n: int, breaks_u: np.ndarray):
    """Nodes and weights (summing to 1) in the u-angle, split at the given breakpoints."""
    if breaks_u.size == 0:
        u = (np.arange(n) + 0.5) * TWO_PI / n
        return u, np.full(n, 1.0 / n)
    b = np.sort(canonical_angle(breaks_u))
    b = b[np.concatenate([[True], np.diff(b) > 1e-14])]
    edges = np.concatenate([b, [b[0] + TWO_PI]])
    lengths = np.diff(edges)
    # at least 4 points per arc, otherwise proportional to arc length
    per = np.maximum(4, np.round(n * lengths / TWO_PI).astype(int))
    us, ws = [], []
    for lo, ln, k in zip(edges[:-1], lengths, per):
        x, wt = np.polynomial.legendre.leggauss(int(k))
        us.append(lo + 0.5 * ln * (x + 1.0))
        ws.append(0.5 * ln * wt / TWO_PI)
    return np.concatenate(us), np.concatenate(ws)


class _Sampler:
    """Boundary values h(A_z(u)) on quadrature nodes in the u variable, where A_z(u) = (u+z)/(1+conj(z)u).

    Averaging over u uniformly equals averaging over the circle against the
    harmonic measure of z, without the Poisson kernel's peak near |z| -> 1.
    """

    def __init__(self, h: CircleMap, z: complex, n: int):
        self.n = n
        bp = np.asarray(getattr(h, "breakpoints", np.empty(0)), dtype=float)
        if bp.size:
            eb = np.exp(1j * bp)
            bu = np.angle((eb - z) / (1 - np.conj(z) * eb))
        else:
            bu = np.empty(0)
        u, self.weights = _gauss_nodes(n, bu)
        e = np.exp(1j * u)
        theta = np.angle((e + z) / (1 + np.conj(z) * e))
        self.zeta = np.exp(1j * np.asarray(h(canonical_angle(theta)), dtype=float))

    def field(self, w: complex) -> complex:
        zeta = self.zeta
        return complex(np.sum(self.weights * (zeta - w) / (1 - np.conj(w) * zeta)))

    def newton_step(self, w: complex):
        zeta, wt = self.zeta, self.weights
        den = 1 - np.conj(w) * zeta
        F = complex(np.sum(wt * (zeta - w) / den))
        A = complex(np.sum(wt * (-1.0 / den)))
        B = complex(np.sum(wt * (zeta - w) * zeta / den**2))
        # F(w + d) ~ F + A d + B conj(d)
        det = abs(A) ** 2 - abs(B) ** 2
        d = (-F * np.conj(A) + B * np.conj(F)) / det
        return F, d


def _mobius_add(w: complex, v: complex) -> complex:
    return (w + v) / (1 + np.conj(w) * v)


def _solve(sampler: _Sampler, start: complex, tol: float):
    w = start
    trace = []
    it = 0
    F = sampler.field(w)
    trace.append(abs(F))
    while abs(F) > 1e-3 and it < MAX_DAMPED:
        w = _mobius_add(w, DAMPING * F)
        F = sampler.field(w)
        trace.append(abs(F))
        it += 1
    for _ in range(MAX_NEWTON):
        if abs(F) <= tol:
            break
        F, d = sampler.newton_step(w)
        step = 1.0
        while step > 1e-6:
            cand = w + step * d
            if abs(cand) < 1 and abs(sampler.field(cand)) < abs(F):
                break
            step *= 0.5
        else:
            cand = _mobius_add(w, DAMPING * F)
        w = cand
        F = sampler.field(w)
        trace.append(abs(F))
        it += 1
    return w, abs(F), it, trace


def barycentric_extension(h: CircleMap, z, quadrature_n: int = DEFAULT_QUADRATURE, tol: float = DEFAULT_TOL,
                          start: complex | None = None) -> ExtensionResult:
    """Zero w of the averaged displacement field (h(zeta) - w) / (1 - conj(w) h(zeta)) under harmonic measure of z.

    The node count doubles (up to 16x) when the residual stalls above tol.
    """
    z = _as_complex(z)
    if not abs(z) < 1:
        raise ValueError("z must lie in the open unit disk")
    n = int(quadrature_n)
    trace_all = []
    for _ in range(5):
        sampler = _Sampler(h, z, n)
        w0 = start if start is not None else 0j
        w, res, it, trace = _solve(sampler, w0, tol)
        trace_all.extend(trace)
        if res <= tol:
            return ExtensionResult(complex(w), float(res), it, n)
        n *= 2
    raise ConvergenceError(f"barycenter residual {res:.3g} above tol {tol:g} at z={z}", trace_all)


def extension_map(h: CircleMap, quadrature_n: int = DEFAULT_QUADRATURE, tol: float = DEFAULT_TOL):
    """z -> ex(h)(z) as a plain function."""
    return lambda z: barycentric_extension(h, z, quadrature_n, tol).w


def beltrami_estimate(h: CircleMap, z, step: float | None = None, quadrature_n: int = DEFAULT_QUADRATURE,
                      tol: float = 1e-12) -> BeltramiSample:
    """(d/d conj z) / (d/dz) of ex(h) at z by central differences of spacing step."""
    z = _as_complex(z)
    if step is None:
        step = 1e-4 * (1 - abs(z))
    w0 = barycentric_extension(h, z, quadrature_n, tol).w

    def f(p):
        return barycentric_extension(h, p, quadrature_n, tol, start=w0).w

    fx = (f(z + step) - f(z - step)) / (2 * step)
    fy = (f(z + 1j * step) - f(z - 1j * step)) / (2 * step)
    dz = 0.5 * (fx - 1j * fy)
    dzb = 0.5 * (fx + 1j * fy)
    if abs(dz) < 1e-10:
        raise SingularSampleError(f"holomorphic derivative vanishes at z={z}")
    mu = dzb / dz
    return BeltramiSample(z, complex(mu), bool(abs(mu) >= NEAR_ONE))


@dataclass(frozen=True)
class ConformalityProfile:
    radii: tuple[float, ...]
    max_beltrami: tuple[float, ...]
    samples: tuple = field(default=(), repr=False)


def asymptotic_conformality_profile(h: CircleMap, radii, samples: int = 16, quadrature_n: int = DEFAULT_QUADRATURE,
                                    phase: float = 0.0) -> ConformalityProfile:
    """Per radius r, the max |Beltrami| of ex(h) over `samples` equally spaced points on |z| = r."""
    radii = tuple(float(r) for r in radii)
    out, keep = [], []
    for r in radii:
        if not 0 <= r < 1:
            raise ValueError("radii must lie in [0, 1)")
        angles = phase + TWO_PI * np.arange(samples) / samples
        vals = [beltrami_estimate(h, r * np.exp(1j * a), quadrature_n=quadrature_n) for a in angles]
        out.append(max(abs(v.value) for v in vals))
        keep.append(tuple(vals))
    return ConformalityProfile(radii, tuple(out), tuple(keep))
