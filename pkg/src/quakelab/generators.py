"""Reproducible lamination families."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .hyperbolic import TWO_PI, Geodesic, canonical_angle, geodesics_disjoint
from .lamination import EMPTY, LaminationError, MeasuredLamination, thurston_norm, validate

RETRY_CAP = 10_000

WEIGHT_RULES: dict[str, Callable[[int], float]] = {
    "const": lambda k: 1.0,
    "pow2": lambda k: 2.0 ** (-k),
    "invsq": lambda k: 1.0 / k**2,
}


class GenerationError(RuntimeError):
    pass


def gen_random_bounded(n_atoms: int, target_norm: float, seed: int, min_arc: float = 0.02,
                       max_arc: float = np.pi) -> MeasuredLamination:
    """Random disjoint geodesics with weights rescaled so the exact norm equals target_norm.

    Chord lengths are drawn log-uniformly, which mixes deep short atoms with a few
    long ones.  Each atom gets at most RETRY_CAP attempts.
    """
    if n_atoms < 0:
        raise ValueError("n_atoms must be non-negative")
    if n_atoms == 0:
        return EMPTY
    if not target_norm > 0:
        raise ValueError("target_norm must be positive")
    if not 0 < min_arc <= max_arc <= np.pi:
        raise ValueError("need 0 < min_arc <= max_arc <= pi")
    rng = np.random.default_rng(seed)
    geos: list[Geodesic] = []
    for _ in range(n_atoms):
        for _attempt in range(RETRY_CAP):
            a = rng.uniform(0, TWO_PI)
            span = np.exp(rng.uniform(np.log(min_arc), np.log(max_arc)))
            g = Geodesic(a, canonical_angle(a + span))
            if all(geodesics_disjoint(g, h) and min(abs(g.p - h.p), abs(g.q - h.q)) > 1e-9 for h in geos):
                geos.append(g)
                break
        else:
            raise GenerationError(f"no disjoint atom found after {RETRY_CAP} attempts")
    weights = rng.uniform(0.2, 1.0, n_atoms)
    lam = validate(list(zip(geos, weights)))
    return lam.scaled(target_norm / thurston_norm(lam))


def _rule(weight_rule) -> Callable[[int], float]:
    if callable(weight_rule):
        return weight_rule
    if isinstance(weight_rule, str):
        try:
            return WEIGHT_RULES[weight_rule]
        except KeyError:
            raise ValueError(f"unknown weight rule {weight_rule!r}; choose from {sorted(WEIGHT_RULES)}") from None
    table = [float(x) for x in weight_rule]
    return lambda k: table[k - 1]


def gen_dyadic_family(depth: int, weight_rule="const", weight: float = 1.0) -> MeasuredLamination:
    """Nested dyadic geodesics in the upper half: level k joins consecutive multiples of pi / 2^(k-1).

    Level 1 is the diameter (0, pi); depth d has 2^d - 1 atoms.  Level k carries
    weight * weight_rule(k); ``weight_rule`` is a preset name, a callable or a
    table indexed by level.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    rule = _rule(weight_rule)
    items = []
    for k in range(1, depth + 1):
        step = np.pi / 2 ** (k - 1)
        wk = weight * float(rule(k))
        for j in range(2 ** (k - 1)):
            items.append((j * step, (j + 1) * step, wk))
    return validate(items) if items else EMPTY


def gen_fan(n: int, vertex_angle: float = 0.0, weights: Sequence[float] | float = 1.0, spread: float = np.pi) -> MeasuredLamination:
    """n geodesics sharing the ideal endpoint vertex_angle, other endpoints spread over an arc."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return EMPTY
    w = np.broadcast_to(np.asarray(weights, dtype=float), (n,)) if np.ndim(weights) == 0 else np.asarray(weights, float)
    if w.shape != (n,):
        raise LaminationError("need one weight per fan atom")
    if not 0 < spread < TWO_PI:
        raise ValueError("spread must lie in (0, 2pi)")
    others = vertex_angle + np.pi - 0.5 * spread + spread * (np.arange(n) + 0.5) / n
    return validate([(vertex_angle, o, wi) for o, wi in zip(others, w)])


def gen_chain(k: float, n_atoms: int = 6, gap: float = 0.3, center: float = 0.0) -> MeasuredLamination:
    """Parallel atoms of weight k symmetric about the diameter through `center`, consecutive ones a distance gap apart.

    A unit arc perpendicular to them crosses about 1/gap atoms, so the norm grows linearly in k.
    """
    items = []
    for j in range(n_atoms):
        s = (j - 0.5 * (n_atoms - 1)) * gap
        # geodesic perpendicular to the real diameter at signed distance s from 0
        x = np.tanh(0.5 * s)
        half = np.arccos(np.clip(2 * x / (1 + x * x), -1, 1))
        items.append((center - half, center + half, k))
    return validate(items)
