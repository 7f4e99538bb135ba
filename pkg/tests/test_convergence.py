import numpy as np
import pytest
from conftest import laminations
from hypothesis import given, settings

from quakelab.convergence import (
    MeasureSequence,
    NoLimitError,
    TestWindow,
    cocycle_limit_defect,
    common_base_point,
    convergence_experiment,
    joint_decay_verdict,
    rescale_by_disk,
    rescale_by_quadruple,
    weak_star_discrepancy,
)
from quakelab.earthquake import Earthquake
from quakelab.generators import gen_random_bounded
from quakelab.hyperbolic import Mobius, translation_along
from quakelab.lamination import HyperbolicDisk, disk_mass, restrict_to_disk, thurston_norm, validate


def test_weak_star_examples():
    a = validate([(0.3, 2.0, 1.0)])
    assert weak_star_discrepancy(a, a) == 0.0
    eps = 0.01
    b = validate([(0.3 + eps, 2.0 + eps, 1.0)])
    assert weak_star_discrepancy(a, b) <= 1.0 * eps / 0.05 + 1e-12
    c = validate([(0.3, 2.0, 1.3)])
    assert weak_star_discrepancy(a, c) == pytest.approx(0.3, abs=1e-12)


def test_weak_star_handles_wraparound():
    a = validate([(0.001, 2.0, 1.0)])
    b = validate([(-0.001, 2.0, 1.0)])
    assert weak_star_discrepancy(a, b) == pytest.approx(0.002 / 0.05, abs=1e-9)


def test_window_excludes_deep_atoms():
    deep = validate([(1.0, 1.0 + 1e-4, 5.0)])
    assert weak_star_discrepancy(deep, validate([])) == 0.0
    assert weak_star_discrepancy(deep, validate([]), TestWindow(radius=0.99999)) == pytest.approx(5.0)


@settings(max_examples=20)
@given(laminations(max_atoms=5), laminations(max_atoms=5), laminations(max_atoms=5))
def test_weak_star_is_a_pseudometric(x, y, z):
    w = TestWindow()
    dxy, dyz, dxz = (weak_star_discrepancy(x, y, w), weak_star_discrepancy(y, z, w), weak_star_discrepancy(x, z, w))
    assert dxy == pytest.approx(weak_star_discrepancy(y, x, w), abs=1e-12)
    assert dxz <= dxy + dyz + 1e-12


def test_rescalings_preserve_norm_and_mass():
    lam = validate([(0.3, 2.0, 1.0), (2.5, 3.0, 0.5), (4.0, 6.0, 0.7)])
    n = thurston_norm(lam)
    d = 0.4 + 0.3j
    moved = rescale_by_disk(lam, d)
    assert thurston_norm(moved) == pytest.approx(n, abs=1e-9)
    assert disk_mass(lam, HyperbolicDisk(d, 0.5)) == disk_mass(moved, HyperbolicDisk(0, 0.5))
    assert np.allclose(rescale_by_disk(lam, 0).p, lam.p)
    std = (0.0, np.pi / 2, np.pi, 1.5 * np.pi)
    same = rescale_by_quadruple(lam, std)
    assert np.allclose(same.p, lam.p) and np.allclose(same.q, lam.q) and np.allclose(same.weights, lam.weights)
    quad = np.mod(Mobius.moving_origin_to(0.5j).apply_angle(np.array(std)), 2 * np.pi)
    assert thurston_norm(rescale_by_quadruple(lam, quad)) == pytest.approx(n, abs=1e-9)


def test_constant_sequence_table_is_zero_and_passes():
    lam = validate([(0.3, 2.0, 1.0), (2.5, 3.0, 0.5)])
    t = convergence_experiment(MeasureSequence([lam] * 8), lam)
    assert t.passed
    assert np.all(t.column("weak_star_discrepancy") == 0)
    assert np.all(t.column("boundary_sup_distance") == 0)


def test_single_atom_sequence_boundary_distance_against_explicit_limit():
    # boundary maps of a moving single atom, normalized on the stratum of 0, versus the limit map
    limit = validate([(0.3, 2.0, 1.0)])
    eps = 0.2 * 0.6 ** np.arange(16)
    seq = MeasureSequence([validate([(0.3 + e, 2.0 - e / 3, 1.0)]) for e in eps])
    t = convergence_experiment(seq, limit)
    d = t.column("boundary_sup_distance")
    assert np.all(np.diff(d) < 0) and d[-1] < 1e-3
    assert t.passed


def test_restriction_step_converges():
    lam = gen_random_bounded(12, 1.0, 5, min_arc=1e-2)
    seq = MeasureSequence([restrict_to_disk(lam, r)[0] for r in (0.6, 0.9, 0.99, 0.999)])
    t = convergence_experiment(seq, lam)
    assert t.column("boundary_sup_distance")[-1] < 1e-3


def test_common_base_point_avoids_atoms():
    lam = validate([(np.pi / 2, 3 * np.pi / 2, 1.0)])
    z = common_base_point([lam])
    assert abs(lam.atoms[0].geodesic.side(z)) > 0.1


def test_verdict_rules():
    assert joint_decay_verdict(np.zeros(10), np.zeros(10))[0]
    x = 0.5 ** np.arange(20)
    assert joint_decay_verdict(x, 3 * x)[0]
    alt = np.array([0.0, 1.0] * 10)
    assert not joint_decay_verdict(alt, alt)[0]
    assert not joint_decay_verdict(x, x[::-1])[0]


def _defect_setup(from_separating_side):
    w = 0.7
    extra = (-1.0, 1.0, 0.4)
    limit = validate([(np.pi / 2, 3 * np.pi / 2, w), extra])
    sign = -1 if from_separating_side else 1
    seq = MeasureSequence([validate([(np.pi / 2 + sign * e, 3 * np.pi / 2 - sign * e, w), extra])
                           for e in 0.1 * 2.0 ** -np.arange(1, 25)])
    return w, seq, limit


def test_defect_non_separating_side_recovers_weight():
    w, seq, limit = _defect_setup(False)
    d = cocycle_limit_defect(seq, limit, 0.0, 0.5)
    assert d.a1 == pytest.approx(w, abs=1e-4) and d.residual < 1e-6 and not d.trivial
    # hand-computed oracle: the limit cocycle is the lost translation followed by the rest
    g = limit.atoms[1].geodesic
    assert abs(g.side(0.0)) < 1e-12
    t = translation_along(g, w, reverse=g.side(0.5) > 0)
    assert d.cocycle.allclose(t @ d.limit_cocycle, 1e-9)


def test_defect_separating_side_is_trivial():
    _, seq, limit = _defect_setup(True)
    d = cocycle_limit_defect(seq, limit, 0.0, 0.5)
    assert abs(d.a1) < 1e-4 and d.residual < 1e-6 and d.trivial


def test_defect_of_constant_sequence():
    _, _, limit = _defect_setup(True)
    d = cocycle_limit_defect(MeasureSequence([limit] * 6), limit, 0.0, 0.5)
    assert d.a1 == 0 and d.a2 == 0 and d.residual < 1e-9


def test_defect_requires_a_stable_tail():
    a = validate([(0.3, 2.0, 1.0)])
    b = validate([(0.3, 2.0, 2.0)])
    with pytest.raises(NoLimitError):
        cocycle_limit_defect(MeasureSequence([a, b] * 4), a, 0.0, np.exp(1.2j) * 0.9)


def test_sequence_bound():
    lam = validate([(0.3, 2.0, 1.0)])
    seq = MeasureSequence([lam, lam.scaled(2.0)])
    assert seq.bound == 2.0 and len(seq) == 2
    assert Earthquake(seq[1]).boundary_map() is not None
