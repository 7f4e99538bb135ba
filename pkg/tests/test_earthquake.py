import numpy as np
import pytest
from conftest import laminations, random_disk_points
from hypothesis import given, settings
from hypothesis import strategies as st

from quakelab.circle import (
    IdentityMap,
    InvalidMapError,
    PiecewiseMobiusMap,
    TabulatedMap,
    check_monotone,
    lifted,
)
from quakelab.earthquake import (
    Earthquake,
    cocycle,
    normalize_three_points,
    quasi_isometry_defect,
    separating_atoms,
)
from quakelab.hyperbolic import GeodesicSegment, Mobius, disk_distance, segment_crosses_geodesic, translation_along
from quakelab.lamination import EMPTY, validate

TWO_PI = 2 * np.pi


@settings(max_examples=40)
@given(laminations(min_atoms=1, max_atoms=10), st.integers(0, 2**16))
def test_separating_order_matches_crossing_parameters(lam, seed):
    rng = np.random.default_rng(seed)
    z = random_disk_points(rng, 2)
    got = separating_atoms(lam, z[0], z[1])
    seg = GeodesicSegment(z[0], z[1])
    hits = []
    for i, a in enumerate(lam.atoms):
        hit, frac = segment_crosses_geodesic(seg, a.geodesic)
        if hit:
            hits.append((frac, i))
    assert got == [i for _, i in sorted(hits)]


@settings(max_examples=40)
@given(laminations(min_atoms=0, max_atoms=10), st.integers(0, 2**16))
def test_cocycle_composes(lam, seed):
    rng = np.random.default_rng(seed)
    a, b, c = random_disk_points(rng, 3)
    eq = Earthquake(lam)
    lhs = eq.cocycle(a, c)
    rhs = eq.cocycle(a, b) @ eq.cocycle(b, c)
    assert lhs.allclose(rhs, 1e-9)
    # comparisons of one global earthquake compose right to left
    assert eq.relative_comparison(a, c).allclose(eq.relative_comparison(b, c) @ eq.relative_comparison(a, b), 1e-9)
    assert eq.cocycle(a, a).allclose(Mobius.identity())


def test_adjacent_cocycle_is_translation_along_the_atom():
    lam = validate([(0.5, 2.5, 0.8), (3.0, 5.0, 0.3)])
    g = lam.atoms[0].geodesic
    left = g.frame()(0.05j)   # frame sends -1 -> p, 1 -> q, so the upper half-plane goes to the left
    right = g.frame()(-0.05j)
    assert g.side(left) > 0 > g.side(right)
    comp = Earthquake(lam).comparison(left, right)
    assert comp.axis == g and comp.length == 0.8
    assert comp.value.allclose(translation_along(g, 0.8))
    assert Earthquake(lam).comparison(right, left).value.allclose(translation_along(g, 0.8, reverse=True))


@settings(max_examples=30)
@given(laminations(min_atoms=1, max_atoms=10), st.integers(0, 2**16))
def test_interior_map_is_isometric_on_each_stratum(lam, seed):
    rng = np.random.default_rng(seed)
    z = random_disk_points(rng, 200)
    eq = Earthquake(lam)
    sig = lam.interior_sides(z)
    w = eq(z)
    for s in np.unique(sig, axis=0)[:5]:
        idx = np.flatnonzero(np.all(sig == s, axis=1))
        if idx.size >= 2:
            i, j = idx[:2]
            assert disk_distance(w[i], w[j]) == pytest.approx(disk_distance(z[i], z[j]), rel=1e-8, abs=1e-8)


@settings(max_examples=30)
@given(laminations(min_atoms=1, max_atoms=10))
def test_boundary_map_is_monotone_and_continuous(lam):
    h = Earthquake(lam).boundary_map()
    check_monotone(h, 10_000)
    pieces = h.pieces()
    for k, b in enumerate(h.breakpoints):
        x = np.exp(1j * b)
        assert abs(pieces[k - 1](x) - pieces[k](x)) < 1e-10


def test_interior_map_extends_to_boundary_map():
    lam = validate([(0.5, 2.5, 0.8), (3.0, 5.0, 0.3), (5.5, 6.0, 1.2)])
    eq = Earthquake(lam)
    th = np.array([0.1, 1.0, 2.0, 3.3, 4.4, 5.7])
    near = eq((1 - 1e-9) * np.exp(1j * th))
    assert np.allclose(np.angle(near / np.exp(1j * eq.boundary(th))), 0, atol=1e-6)


def test_reversed_product_order_is_not_a_homeomorphism():
    # multiplying the translations in the opposite order produces jumps at atom endpoints
    lam = validate([(0.3, 1.3, 0.9), (0.5, 1.1, 0.7), (3.0, 4.0, 0.6)])
    base = lam.interior_sides(0.0)[0]
    fwd = [translation_along(a.geodesic, a.weight) for a in lam.atoms]
    ends = lam.endpoint_angles
    nxt = np.concatenate([ends[1:], [ends[0] + TWO_PI]])
    mids = 0.5 * (ends + nxt)
    ms = []
    for s in lam.boundary_sides(mids):
        m = Mobius.identity()
        for i in separating_atoms(lam, base, s):
            f = fwd[i] if base[i] > 0 else fwd[i].inverse()
            m = f @ m
        ms.append(m)
    bad = PiecewiseMobiusMap(ends, [m.a for m in ms], [m.b for m in ms])
    jumps = [abs(bad.pieces()[k - 1](np.exp(1j * b)) - bad.pieces()[k](np.exp(1j * b))) for k, b in enumerate(ends)]
    assert max(jumps) > 1e-3
    good = Earthquake(lam).boundary_map()
    assert max(abs(good.pieces()[k - 1](np.exp(1j * b)) - good.pieces()[k](np.exp(1j * b)))
               for k, b in enumerate(ends)) < 1e-12


def test_empty_lamination_gives_identity():
    h = Earthquake(EMPTY).boundary_map()
    th = np.linspace(0, TWO_PI, 7, endpoint=False)
    assert np.allclose(h(th), th)
    assert cocycle(EMPTY, 0.1, 0.5j).allclose(Mobius.identity())


def test_normalize_three_points_fixes_targets():
    lam = validate([(0.5, 2.5, 0.8), (3.0, 5.0, 0.3)])
    h = normalize_three_points(Earthquake(lam).boundary_map())
    assert np.allclose(h(np.array([0.0, np.pi / 2, np.pi])), [0.0, np.pi / 2, np.pi], atol=1e-12)


def test_base_choice_changes_map_by_an_isometry():
    lam = validate([(0.5, 2.5, 0.8), (3.0, 5.0, 0.3)])
    h0 = Earthquake(lam).boundary_map()
    h1 = Earthquake(lam, base=0.9 * np.exp(1.5j)).boundary_map()
    n0, n1 = normalize_three_points(h0), normalize_three_points(h1)
    th = np.linspace(0, TWO_PI, 101)
    assert np.allclose(np.exp(1j * n0(th)), np.exp(1j * n1(th)), atol=1e-10)


def test_quasi_isometry_defect_report():
    lam = validate([(0.5, 2.5, 0.8), (3.0, 5.0, 0.3)])
    rng = np.random.default_rng(3)
    z1, z2 = random_disk_points(rng, 300, 0.2), random_disk_points(rng, 300, 0.2)
    # both ends in the stratum of 0: the map is a single isometry there
    rep = quasi_isometry_defect(Earthquake(lam), z1, z2)
    assert rep.pairs == 300
    assert abs(rep.max_decrease) < 1e-9 and abs(rep.max_increase) < 1e-9
    far = quasi_isometry_defect(Earthquake(lam), z1, -z1 / np.abs(z1) * 0.99)
    assert far.max_increase > 0.1


def test_piecewise_map_composition_rules():
    lam = validate([(0.5, 2.5, 0.8), (3.0, 5.0, 0.3)])
    h = Earthquake(lam).boundary_map()
    m = Mobius.moving_origin_to(0.3 + 0.2j)
    th = np.linspace(0, TWO_PI, 333, endpoint=False)
    assert np.allclose(np.exp(1j * h.then(m)(th)), np.exp(1j * m.apply_angle(h(th))), atol=1e-12)
    assert np.allclose(np.exp(1j * h.precompose(m)(th)), np.exp(1j * h(m.apply_angle(th))), atol=1e-10)


def test_tabulated_map_validation():
    x = np.linspace(0, TWO_PI, 50, endpoint=False)
    t = TabulatedMap(x, x + 0.1)
    assert t(1.0) == pytest.approx(1.1)
    with pytest.raises(InvalidMapError):
        TabulatedMap(x, -x)
    with pytest.raises(InvalidMapError):
        check_monotone(lambda th: np.mod(2 * th, TWO_PI), 100)
    assert lifted(IdentityMap(), x)[-1] == pytest.approx(x[-1])
