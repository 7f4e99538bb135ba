import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import minimize

from quakelab.hyperbolic import (
    DegenerateInputError,
    Geodesic,
    GeodesicSegment,
    InvalidQuadrupleError,
    Mobius,
    circle_cross_ratio,
    cross_ratio,
    disk_distance,
    geodesic_distance,
    geodesics_disjoint,
    isometry_to_standard_quadruple,
    mobius_from_three_boundary_points,
    point_geodesic_distance,
    segment_crosses_geodesic,
    translation_along,
)

angles = st.floats(0.0, 2 * np.pi, exclude_max=True)
disk_pts = st.builds(lambda r, t: r * np.exp(1j * t), st.floats(0.0, 0.95), angles)


@st.composite
def isometries(draw):
    w = draw(disk_pts)
    phi = draw(angles)
    return Mobius.moving_origin_to(w) @ Mobius.rotation(phi)


def test_cross_ratio_anchor_values():
    assert abs(cross_ratio(1, 1j, -1, -1j) - 2) < 1e-12
    assert abs(cross_ratio(0, 1, 2, 3) - 4 / 3) < 1e-12
    assert abs(circle_cross_ratio(0, np.pi / 2, np.pi, 3 * np.pi / 2) - 2) < 1e-12


def test_distance_from_origin_to_tanh_half():
    assert disk_distance(0, np.tanh(0.5)) == pytest.approx(1.0, abs=1e-14)


@given(isometries(), disk_pts, disk_pts)
def test_isometries_preserve_distance(m, z, w):
    assert disk_distance(m(z), m(w)) == pytest.approx(disk_distance(z, w), rel=1e-9, abs=1e-9)


@given(isometries(), isometries(), disk_pts)
def test_composition_and_inverse(m, n, z):
    assert complex((m @ n)(z)) == pytest.approx(complex(m(n(z))), abs=1e-9)
    assert complex(m.inverse()(m(z))) == pytest.approx(complex(z), abs=1e-9)


@given(isometries(), st.lists(angles, min_size=4, max_size=4, unique=True))
def test_cross_ratio_mobius_invariant(m, th):
    th = np.sort(th)
    if np.min(np.diff(np.concatenate([th, [th[0] + 2 * np.pi]]))) < 1e-3:
        return
    z = np.exp(1j * th)
    before = cross_ratio(*z)
    after = cross_ratio(*m(z))
    assert after == pytest.approx(before, rel=1e-7)
    # on the circle the half-angle formula agrees with the complex one
    assert circle_cross_ratio(*th) == pytest.approx(before.real, rel=1e-9)


def test_cayley_transform_half_plane_oracle():
    # cross-ratios on the real line are preserved by the Cayley map to the circle
    x = np.array([-1.3, 0.2, 0.9, 4.0])
    z = (x - 1j) / (x + 1j)
    assert cross_ratio(*z).real == pytest.approx(cross_ratio(*x).real, rel=1e-12)


@given(st.floats(0.05, 3.0), angles)
def test_translation_moves_along_axis(t, phi):
    g = Geodesic(phi, phi + np.pi)
    m = translation_along(g, t)
    assert disk_distance(0, m(0)) == pytest.approx(t, rel=1e-9)
    assert m.translation_length() == pytest.approx(t, rel=1e-9)
    fixed = np.exp(1j * np.angle(m.fixed_points()))
    ends = np.exp(1j * np.array([g.p, g.q]))
    assert min(np.abs(fixed - ends).max(), np.abs(fixed[::-1] - ends).max()) < 1e-9
    # attracting endpoint is q
    z = 0j
    for _ in range(int(40 / t) + 1):
        z = m(z)
    assert abs(z - np.exp(1j * g.q)) < 1e-6


def test_geodesic_sides_and_frame():
    g = Geodesic(0.0, np.pi)  # real diameter traversed from 1 to -1; the lower half is on the left
    assert g.side(-0.5j) > 0 and g.side(0.5j) < 0
    assert abs(g.side(0.3)) < 1e-12
    r = g.frame()
    assert abs(r(-1) - np.exp(1j * g.p)) < 1e-12 and abs(r(1) - np.exp(1j * g.q)) < 1e-12


def _brute_geodesic_distance(g, h):
    f = lambda x: disk_distance(g.point_at(x[0]), h.point_at(x[1]))
    best = min((minimize(f, x0, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12}).fun
                for x0 in ([0, 0], [2, -2], [-2, 2], [3, 3])))
    return best


@pytest.mark.parametrize("g,h", [
    (Geodesic(0.1, 1.0), Geodesic(1.5, 3.0)),
    (Geodesic(0.2, 3.0), Geodesic(3.5, 6.0)),
    (Geodesic(1.0, 2.0), Geodesic(0.5, 2.5)),
])
def test_geodesic_distance_matches_brute_force(g, h):
    assert geodesic_distance(g, h) == pytest.approx(_brute_geodesic_distance(g, h), abs=1e-6)


def test_geodesic_distance_special_cases():
    assert geodesic_distance(Geodesic(0, 1), Geodesic(1, 2)) == 0.0
    # two diameters-symmetric chords at distance 0.7 apart along the real diameter
    x1, x2 = np.tanh(0.35 / 2), -np.tanh(0.35 / 2)
    half = lambda x: np.arccos(2 * x / (1 + x * x))
    g, h = Geodesic(-half(x1), half(x1)), Geodesic(-half(x2), half(x2))
    assert geodesic_distance(g, h) == pytest.approx(0.7, abs=1e-12)


def test_point_geodesic_distance_inradius():
    # incenter of the ideal triangle (0, 2pi/3, 4pi/3) is 0; inradius ln(3)/2
    g = Geodesic(0, 2 * np.pi / 3)
    assert point_geodesic_distance(0, g) == pytest.approx(np.log(3) / 2, abs=1e-12)


def test_disjointness():
    assert geodesics_disjoint(Geodesic(0, 1), Geodesic(2, 3))
    assert geodesics_disjoint(Geodesic(0, 1), Geodesic(1, 3))
    assert not geodesics_disjoint(Geodesic(0, 2), Geodesic(1, 3))


def test_segment_crossing_parameter():
    g = Geodesic(np.pi / 2, 3 * np.pi / 2)
    hit, frac = segment_crosses_geodesic(GeodesicSegment(-0.5, 0.5), g)
    assert hit and frac == pytest.approx(0.5, abs=1e-9)
    hit, _ = segment_crosses_geodesic(GeodesicSegment(0.1, 0.5), g)
    assert not hit


def test_three_point_and_standard_quadruple():
    src = [0.3, 1.0, 4.0]
    dst = [0.0, np.pi / 2, np.pi]
    m = mobius_from_three_boundary_points(src, dst)
    assert np.allclose(np.mod(m.apply_angle(np.array(src)), 2 * np.pi), dst, atol=1e-12)
    with pytest.raises(DegenerateInputError):
        mobius_from_three_boundary_points([0, 1, 1], dst)
    b = Mobius.moving_origin_to(0.3 - 0.4j)
    quad = np.mod(b.apply_angle(np.array([0, np.pi / 2, np.pi, 3 * np.pi / 2])), 2 * np.pi)
    m = isometry_to_standard_quadruple(quad)
    assert np.allclose(m(np.exp(1j * quad)), [1, 1j, -1, -1j], atol=1e-9)
    with pytest.raises(InvalidQuadrupleError):
        isometry_to_standard_quadruple([0, 1, 2, 3])
