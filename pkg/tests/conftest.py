import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from quakelab.lamination import validate

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

TWO_PI = 2 * np.pi


@st.composite
def laminations(draw, min_atoms=0, max_atoms=8, min_weight=0.05, max_weight=2.0):
    """Random finite laminations: 2n sorted angles joined by a random non-crossing matching."""
    n = draw(st.integers(min_atoms, max_atoms))
    if n == 0:
        return validate([])
    cuts = draw(st.lists(st.floats(0.02, 1.0), min_size=2 * n, max_size=2 * n))
    offset = draw(st.floats(0.0, TWO_PI))
    angles = np.mod(offset + TWO_PI * np.cumsum(cuts) / (sum(cuts) + draw(st.floats(0.02, 1.0))), TWO_PI)
    opens = draw(st.lists(st.booleans(), min_size=2 * n, max_size=2 * n))
    stack, pairs, left = [], [], n
    for i, want_open in enumerate(opens):
        remaining = 2 * n - i
        if left > 0 and (not stack or (want_open and len(stack) < remaining - left)):
            stack.append(i)
            left -= 1
        else:
            pairs.append((stack.pop(), i))
    weights = draw(st.lists(st.floats(min_weight, max_weight), min_size=n, max_size=n))
    return validate([(angles[a], angles[b], w) for (a, b), w in zip(pairs, weights)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_disk_points(rng, n, radius=0.95):
    r = radius * np.sqrt(rng.uniform(size=n))
    return r * np.exp(1j * rng.uniform(0, TWO_PI, n))
