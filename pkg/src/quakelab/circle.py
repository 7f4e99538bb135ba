"""Evaluatable orientation-preserving circle maps (angle -> angle)."""

from __future__ import annotations

import numpy as np

from .hyperbolic import TWO_PI, Mobius, canonical_angle


class InvalidMapError(ValueError):
    """Raised when a circle map is not an orientation-preserving homeomorphism on the probed points."""


class CircleMap:
    """Base class; subclasses implement ``__call__`` on arrays of angles.

    ``breakpoints`` lists angles where the map may fail to be analytic; quadrature
    code splits there.
    """

    kind = "generic"
    breakpoints = np.empty(0)

    def __call__(self, theta):
        raise NotImplementedError

    def complex_values(self, theta):
        return np.exp(1j * self(theta))

    def then(self, m: Mobius) -> "CircleMap":
        """Post-composition m o self."""
        return ComposedMap(m, self, None)

    def precompose(self, m: Mobius) -> "CircleMap":
        """self o m."""
        return ComposedMap(None, self, m)


class MobiusMap(CircleMap):
    kind = "mobius"

    def __init__(self, m: Mobius):
        self.mobius = m

    def __call__(self, theta):
        return self.mobius.apply_angle(theta)

    def then(self, m):
        return MobiusMap(m @ self.mobius)

    def precompose(self, m):
        return MobiusMap(self.mobius @ m)


class IdentityMap(MobiusMap):
    kind = "identity"

    def __init__(self):
        super().__init__(Mobius.identity())

    def __call__(self, theta):
        return canonical_angle(np.array(theta, dtype=float))


class PiecewiseMobiusMap(CircleMap):
    """Map acting by a Möbius element on each arc between consecutive breakpoints.

    Piece i covers [b_i, b_{i+1}); the last piece wraps to b_0 + 2pi.
    """

    kind = "piecewise-mobius"

    def __init__(self, breakpoints, a, b):
        bp = np.asarray(breakpoints, dtype=float)
        order = np.argsort(bp)
        self.breakpoints = canonical_angle(bp[order]) if bp.size else bp
        a = np.atleast_1d(np.asarray(a, dtype=complex))
        b = np.atleast_1d(np.asarray(b, dtype=complex))
        if bp.size:
            a, b = a[order], b[order]
        self.a, self.b = a, b

    def piece_index(self, theta):
        theta = canonical_angle(np.atleast_1d(np.asarray(theta, dtype=float)))
        if self.breakpoints.size == 0:
            return np.zeros(theta.shape, dtype=int), theta
        idx = np.searchsorted(self.breakpoints, theta, side="right") - 1
        idx[idx < 0] = self.breakpoints.size - 1
        return idx, theta

    def pieces(self):
        return [Mobius(a, b) for a, b in zip(self.a, self.b)]

    def __call__(self, theta):
        scalar = np.ndim(theta) == 0
        idx, th = self.piece_index(theta)
        z = np.exp(1j * th)
        a, b = self.a[idx], self.b[idx]
        out = canonical_angle(np.angle((a * z + b) / (np.conj(b) * z + np.conj(a))))
        return float(out[0]) if scalar else out.reshape(np.shape(theta))

    def then(self, m: Mobius):
        na = m.a * self.a + m.b * np.conj(self.b)
        nb = m.a * self.b + m.b * np.conj(self.a)
        return PiecewiseMobiusMap(self.breakpoints, na, nb)

    def precompose(self, m: Mobius):
        na, nb = _compose_arrays(self.a, self.b, m)
        bp = m.inverse().apply_angle(self.breakpoints) if self.breakpoints.size else self.breakpoints
        return PiecewiseMobiusMap(bp, na, nb)


def _compose_arrays(a, b, m: Mobius):
    """Coefficients of (a_i, b_i) o m."""
    return a * m.a + b * np.conj(m.b), a * m.b + b * np.conj(m.a)


class ComposedMap(CircleMap):
    """post o inner o pre, with either Möbius factor optional."""

    def __init__(self, post, inner: CircleMap, pre):
        self.post, self.inner, self.pre = post, inner, pre
        self.kind = f"composed({inner.kind})"
        bp = inner.breakpoints
        self.breakpoints = pre.inverse().apply_angle(bp) if (pre is not None and bp.size) else bp

    def __call__(self, theta):
        x = theta if self.pre is None else self.pre.apply_angle(theta)
        y = self.inner(x)
        return y if self.post is None else self.post.apply_angle(y)


class TabulatedMap(CircleMap):
    """Monotone piecewise-linear interpolation of a sampled lift (x_k, y_k)."""

    kind = "tabulated"

    def __init__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        order = np.argsort(canonical_angle(x))
        x = canonical_angle(x)[order]
        y = np.unwrap(y[order])
        if x.size < 2 or np.any(np.diff(x) <= 0) or np.any(np.diff(y) <= 0):
            raise InvalidMapError("tabulated map must be strictly increasing")
        if y[-1] - y[0] >= TWO_PI:
            raise InvalidMapError("tabulated map must have degree 1")
        self.x = np.concatenate([x, [x[0] + TWO_PI]])
        self.y = np.concatenate([y, [y[0] + TWO_PI]])
        self.breakpoints = x

    def __call__(self, theta):
        th = np.asarray(theta, dtype=float)
        t = canonical_angle(np.atleast_1d(th))
        t = np.where(t < self.x[0], t + TWO_PI, t)
        out = canonical_angle(np.interp(t, self.x, self.y))
        return float(out[0]) if th.ndim == 0 else out.reshape(th.shape)


class FunctionMap(CircleMap):
    """Wrap an angle -> angle callable (e.g. a smooth diffeomorphism)."""

    kind = "function"

    def __init__(self, fn, breakpoints=()):
        self.fn = fn
        self.breakpoints = np.asarray(breakpoints, dtype=float)

    def __call__(self, theta):
        return canonical_angle(np.asarray(self.fn(np.asarray(theta, dtype=float)), dtype=float))


def lifted(h: CircleMap, theta) -> np.ndarray:
    """Lift of h along an increasing angle sequence, starting in [0, 2pi)."""
    y = np.asarray(h(np.asarray(theta, dtype=float)), dtype=float)
    steps = np.mod(np.diff(y), TWO_PI)
    return np.concatenate([[y[0]], y[0] + np.cumsum(steps)])


def check_monotone(h: CircleMap, n: int = 4096) -> None:
    """Raise InvalidMapError unless h is strictly increasing with degree 1 on an n-grid."""
    grid = np.linspace(0.0, TWO_PI, n, endpoint=False)
    y = np.asarray(h(grid), dtype=float)
    steps = np.mod(np.diff(np.concatenate([y, y[:1]])), TWO_PI)
    if np.any(steps <= 0) or abs(steps.sum() - TWO_PI) > 1e-6:
        raise InvalidMapError("map is not an orientation-preserving homeomorphism on the probe grid")
