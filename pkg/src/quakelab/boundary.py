"""Cross-ratio diagnostics of circle maps: quasisymmetry and symmetry probes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .circle import CircleMap, InvalidMapError
from .hyperbolic import TWO_PI, circle_cross_ratio, circle_gap

STANDARD_CR = 4.0 / 3.0
IMAGE_RESOLUTION = 1e-10


@dataclass(frozen=True)
class QsReport:
    cr_min: float
    cr_max: float
    witness_min: tuple[float, float, float, float]
    witness_max: tuple[float, float, float, float]
    samples: int
    unresolved: int = 0


def _probe_quadruples(p, q, s, phi):
    """Angles of M(1, i, -1, -i) for M = (translation along (p -> q) by s) o rotation(phi)."""
    P = np.exp(1j * p)[:, None]
    Q = np.exp(1j * q)[:, None]
    z = np.exp(1j * (phi[:, None] + 0.5 * np.pi * np.arange(4)[None, :]))
    w = np.exp(-s)[:, None] * (z - Q) / (z - P)
    img = (Q - P * w) / (1 - w)
    return np.mod(np.angle(img), TWO_PI)


def _resolved(quads: np.ndarray) -> np.ndarray:
    """Mask of probes whose four angles are still numerically distinct (source cr ~ 2)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        cr = circle_cross_ratio(quads[:, 0], quads[:, 1], quads[:, 2], quads[:, 3])
    return np.isfinite(cr) & (np.abs(cr - 2.0) < 1e-9)


def _image_cross_ratios(h: CircleMap, quads: np.ndarray):
    """(cr, ok): image cross-ratios and the mask of images resolved in double precision.

    Images whose consecutive gaps fall below IMAGE_RESOLUTION carry no reliable
    cross-ratio and are dropped; a resolved image that is not counterclockwise
    means h is not an orientation-preserving homeomorphism.
    """
    img = np.asarray(h(quads.reshape(-1)), dtype=float).reshape(quads.shape)
    gaps = np.mod(np.diff(np.concatenate([img, img[:, :1]], axis=1), axis=1), TWO_PI)
    with np.errstate(divide="ignore", invalid="ignore"):
        cr = circle_cross_ratio(img[:, 0], img[:, 1], img[:, 2], img[:, 3])
    ok = np.isfinite(cr) & (gaps.min(axis=1) > IMAGE_RESOLUTION)
    if np.any(ok & ((cr < 1.0 - 1e-12) | (np.abs(gaps.sum(axis=1) - TWO_PI) > 1e-9))):
        raise InvalidMapError("image of a counterclockwise quadruple is not counterclockwise")
    return cr, ok


def qs_constant_estimate(h: CircleMap, samples: int = 20000, seed: int = 0, refine: int = 4) -> QsReport:
    """Sampled min/max of cr(h(Q)) over quadruples Q of cross-ratio 2, with witnesses.

    Probes are Möbius images of (1, i, -1, -i): uniform axis endpoints and
    rotation, exponential translation lengths capped at ln(samples).  The best
    ``refine`` probes on each side are polished by Nelder-Mead inside the cap.
    """
    rng = np.random.default_rng(seed)
    cap = max(np.log(samples), 1.0)
    p = rng.uniform(0, TWO_PI, samples)
    q = rng.uniform(0, TWO_PI, samples)
    s = np.minimum(rng.exponential(cap / 4.0, samples), cap)
    phi = rng.uniform(0, TWO_PI, samples)
    quads = _probe_quadruples(p, q, s, phi)
    keep = _resolved(quads)
    cr, ok = _image_cross_ratios(h, quads[keep])
    unresolved = int(np.count_nonzero(~ok))
    quads = quads[keep][ok]
    cr = cr[ok]
    params = np.stack([p, q, s, phi], axis=1)[keep][ok]
    if cr.size == 0:
        raise InvalidMapError("no probe image is resolved in double precision")

    def polish(sign):
        order = np.argsort(sign * cr)[::-1][:refine] if refine else []
        i0 = int(np.argmax(sign * cr))
        best_val, best_quad = cr[i0], quads[i0]
        for i in order:
            def obj(x):
                x = np.asarray(x, dtype=float)
                sc = np.clip(x[2], 0.0, cap)
                qd = _probe_quadruples(x[0:1], x[1:2], np.array([sc]), x[3:4])
                if not _resolved(qd)[0]:
                    return np.inf
                v, good = _image_cross_ratios(h, qd)
                return -sign * np.log(v[0]) if good[0] else np.inf

            res = minimize(obj, params[i], method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 2000})
            x = res.x
            qd = _probe_quadruples(x[0:1], x[1:2], np.array([np.clip(x[2], 0.0, cap)]), x[3:4])
            if not _resolved(qd)[0]:
                continue
            v, good = _image_cross_ratios(h, qd)
            v = v[0]
            if good[0] and sign * v > sign * best_val:
                best_val, best_quad = v, qd[0]
        return float(best_val), tuple(float(t) for t in best_quad)

    cr_max, w_max = polish(1.0)
    cr_min, w_min = polish(-1.0)
    return QsReport(cr_min, cr_max, w_min, w_max, samples, unresolved)


CHART_CENTERS = (0.0, 0.5 * np.pi, np.pi, 1.5 * np.pi)


def chart_to_circle(center: float, x):
    """Möbius chart [-1, 1] -> arc of half-width pi/2 about `center` (x -> e^{ic}(1+ix)/(1-ix))."""
    return np.mod(center + 2.0 * np.arctan(x), TWO_PI)


def circle_to_chart(center: float, theta):
    d = np.mod(np.asarray(theta) - center + np.pi, TWO_PI) - np.pi
    return np.tan(0.5 * d)


@dataclass(frozen=True)
class SymmetryProfile:
    scales: tuple[float, ...]
    beta: tuple[float, ...]
    witnesses: tuple = field(default=(), repr=False)


def symmetric_modulus(h: CircleMap, scales, per_scale_samples: int = 2000, seed: int = 0) -> SymmetryProfile:
    """beta(s) = sup |log(cr(h(Q)) / (4/3))| over standard chart 4-tuples of step <= s.

    Four overlapping Möbius charts cover S^1; half the samples straddle the map's
    breakpoints, where distortion concentrates for piecewise maps.
    """
    rng = np.random.default_rng(seed)
    scales = tuple(sorted((float(s) for s in scales), reverse=True))
    betas, witnesses = [], []
    bps = np.asarray(getattr(h, "breakpoints", np.empty(0)), dtype=float)
    for s in scales:
        if not 0 < s < 2.0 / 3.0:
            raise ValueError("scales must lie in (0, 2/3) so a standard 4-tuple fits in a chart")
        best, wit = 0.0, None
        for c in CHART_CENTERS:
            n_uni = per_scale_samples // 2 if bps.size else per_scale_samples
            sig = s * rng.uniform(0.25, 1.0, n_uni)
            sig[0] = s
            x0 = rng.uniform(-1.0, 1.0 - 3.0 * sig)
            xs = [x0]
            steps = [sig]
            if bps.size:
                xb = circle_to_chart(c, bps)
                xb = xb[np.abs(xb) <= 1.0]
                if xb.size:
                    m = per_scale_samples - n_uni
                    pick = xb[rng.integers(0, xb.size, m)]
                    sg = s * rng.uniform(0.25, 1.0, m)
                    sg[: min(m, xb.size)] = s
                    start = pick - rng.uniform(-0.2, 1.2, m) * 3.0 * sg
                    ok = (start >= -1.0) & (start + 3.0 * sg <= 1.0)
                    xs.append(start[ok])
                    steps.append(sg[ok])
            x = np.concatenate(xs)
            st = np.concatenate(steps)
            pts = np.stack([x + k * st for k in range(4)], axis=1)
            ang = chart_to_circle(c, pts)
            cr, ok = _image_cross_ratios(h, ang)
            dist = np.where(ok, np.abs(np.log(np.where(ok, cr, STANDARD_CR) / STANDARD_CR)), 0.0)
            i = int(np.argmax(dist))
            if dist[i] > best:
                best, wit = float(dist[i]), tuple(float(a) for a in ang[i])
        betas.append(best)
        witnesses.append(wit)
    return SymmetryProfile(scales, tuple(betas), tuple(witnesses))


def boundary_sup_distance(h1: CircleMap, h2: CircleMap, grid: int = 4096) -> float:
    """Max circle distance between h1 and h2 on a uniform angle grid."""
    x = np.linspace(0.0, TWO_PI, grid, endpoint=False)
    return float(np.max(circle_gap(h1(x), h2(x))))
