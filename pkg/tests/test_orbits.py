"""Critical point location, certification, and index counting."""

import numpy as np
import pytest

import ghlab.orbits as orbits_mod
from ghlab import MonopoleConfig, NoCriticalPoints, NotCritical, potential_gradient
from ghlab.errors import DegenerateCritical, DegeneratePresent, RootNotBracketed
from ghlab.orbits import (
    find_critical_points,
    morse_index,
    ov_axis_orbit,
    triangle_configuration,
    triangle_orbits,
    verify_morse_count,
)


def match_by_location(records_a, records_b):
    """Pair records of equal-length lists by nearest location."""
    used = set()
    pairs = []
    for ra in records_a:
        best, best_d = None, np.inf
        for j, rb in enumerate(records_b):
            if j in used:
                continue
            d = np.linalg.norm(ra.location - rb.location)
            if d < best_d:
                best, best_d = j, d
        used.add(best)
        pairs.append((ra, records_b[best], best_d))
    return pairs


def test_single_center_has_no_closed_fibers():
    cfg = MonopoleConfig(mass=0.0, centers=[[0.0, 0.0, 0.0]], charges=[1])
    with pytest.raises(NoCriticalPoints):
        find_critical_points(cfg, grid_density=9)


def test_two_equal_centers_midpoint():
    cfg = MonopoleConfig(mass=0.0, centers=[[-1, 0, 0], [1, 0, 0]], charges=[1, 1])
    recs = find_critical_points(cfg)
    assert len(recs) == 1
    rec = recs[0]
    assert np.linalg.norm(rec.location) < 1e-10
    assert rec.morse_index == 2
    assert rec.potential_value == pytest.approx(1.0, rel=1e-12)
    assert rec.fiber_length == pytest.approx(1.0, rel=1e-12)
    np.testing.assert_allclose(rec.barycentric, [0.5, 0.5], atol=1e-10)


def test_unequal_charges_balance_point():
    # gradient balance 1/x**2 = 4/(5-x)**2 puts the root at x = 5/3
    cfg = MonopoleConfig(mass=0.0, centers=[[0, 0, 0], [5, 0, 0]], charges=[1, 4])
    recs = find_critical_points(cfg)
    assert len(recs) == 1
    rec = recs[0]
    assert abs(rec.location[0] - 5.0 / 3.0) < 1e-9
    assert abs(rec.location[1]) < 1e-9 and abs(rec.location[2]) < 1e-9
    np.testing.assert_allclose(rec.barycentric, [2.0 / 3.0, 1.0 / 3.0], atol=1e-9)
    assert rec.barycentric_error < 1e-9


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_collinear_chain_counts(k):
    cfg = MonopoleConfig(
        mass=0.0,
        centers=[[float(i), 0.0, 0.0] for i in range(k)],
        charges=[1] * k,
    )
    recs = find_critical_points(cfg)
    assert len(recs) == k - 1
    for gap, rec in enumerate(recs):
        assert abs(rec.location[1]) < 1e-9
        assert abs(rec.location[2]) < 1e-9
        assert gap < rec.location[0] < gap + 1  # interleaved with the centers
        assert rec.morse_index == 2
        assert rec.gradient_norm < 1e-9


def test_triangle_finder_against_bracketed_roots():
    finder = find_critical_points(triangle_configuration(1.0))
    reference = triangle_orbits(1.0)
    assert len(finder) == 4 and len(reference) == 4
    for ra, rb, dist in match_by_location(finder, reference):
        assert dist < 1e-8
        assert ra.morse_index == rb.morse_index
    indices = sorted(r.morse_index for r in reference)
    assert indices == [1, 2, 2, 2]
    # the centroid is the unique index-1 point
    low = [r for r in reference if r.morse_index == 1]
    np.testing.assert_allclose(low[0].location, [0.0, 1.0, 0.0], atol=1e-12)
    # axis saddle location solves the stationarity equation rederived here
    saddle = [
        r
        for r in reference
        if r.morse_index == 2 and abs(r.location[0]) < 1e-12 and r.location[1] < 1.0
    ]
    assert len(saddle) == 1
    b = saddle[0].location[1]
    assert 0.4 < b < 0.45
    residual = (b * b + 3.0) ** 1.5 - 2.0 * b * (3.0 - b) ** 2
    assert abs(residual) < 1e-10


def test_triangle_rotation_symmetry():
    reference = triangle_orbits(2.0)
    outer = [r for r in reference if abs(r.location[0]) > 1e-9]
    assert len(outer) == 2
    a, b = outer
    # mirror images across the symmetry axis
    np.testing.assert_allclose(
        a.location * np.array([-1.0, 1.0, 1.0]), b.location, atol=1e-12
    )


def test_records_sorted_lexicographically():
    cfg = triangle_configuration(1.0)
    recs = find_critical_points(cfg)
    keys = [tuple(r.location) for r in recs]
    assert keys == sorted(keys)


def test_barycentric_certificates():
    k = 4
    cfg = MonopoleConfig(
        mass=0.0,
        centers=[[float(i), 0.0, 0.0] for i in range(k)],
        charges=[1] * k,
    )
    for rec in find_critical_points(cfg):
        assert np.all(rec.barycentric > 0.0)
        assert np.sum(rec.barycentric) == pytest.approx(1.0, abs=1e-14)
        assert rec.barycentric_error < 1e-8 * cfg.length_scale


@pytest.mark.parametrize(
    "seed,k", [(0, 3), (1, 4), (2, 5)]
)
def test_morse_count_random_configurations(seed, k):
    rng = np.random.default_rng(seed)
    centers = rng.uniform(-1.0, 1.0, (k, 3))
    charges = rng.integers(1, 4, k)
    cfg = MonopoleConfig(mass=0.0, centers=centers, charges=charges)
    out = verify_morse_count(cfg)
    assert out["satisfied"], out
    assert out["index_difference"] == k - 1


def test_morse_count_rejects_periodic():
    with pytest.raises(ValueError):
        verify_morse_count(MonopoleConfig.ooguri_vafa())


def test_morse_index_not_critical():
    cfg = MonopoleConfig(mass=0.0, centers=[[-1, 0, 0], [1, 0, 0]], charges=[1, 1])
    with pytest.raises(NotCritical):
        morse_index(cfg, [0.3, 0.0, 0.0])


def test_morse_index_degenerate_flag(monkeypatch):
    cfg = MonopoleConfig(mass=0.0, centers=[[-1, 0, 0], [1, 0, 0]], charges=[1, 1])

    def flat_hessian(config, point):
        return np.diag([1.0, -1.0, 1e-12])

    monkeypatch.setattr(orbits_mod, "potential_hessian", flat_hessian)
    monkeypatch.setattr(
        orbits_mod, "potential_gradient", lambda c, p: np.zeros(3)
    )
    with pytest.raises(DegenerateCritical):
        morse_index(cfg, [0.0, 0.0, 0.0])


def test_verify_morse_count_degenerate_present(monkeypatch):
    cfg = MonopoleConfig(mass=0.0, centers=[[-1, 0, 0], [1, 0, 0]], charges=[1, 1])

    def always_degenerate(config, point, gradient_tol=None):
        raise DegenerateCritical(0.0, 1.0)

    monkeypatch.setattr(orbits_mod, "morse_index", always_degenerate)
    with pytest.raises(DegeneratePresent):
        verify_morse_count(cfg)


def test_periodic_axis_orbit():
    cfg = MonopoleConfig.ooguri_vafa()
    rec = ov_axis_orbit(cfg)
    assert abs(rec.location[0] - np.pi) < 1e-10
    assert rec.location[1] == 0.0 and rec.location[2] == 0.0
    assert rec.morse_index == 2
    assert rec.barycentric is None

    doubled = ov_axis_orbit(MonopoleConfig.ooguri_vafa(truncation=400))
    assert abs(doubled.location[0] - rec.location[0]) < 1e-8


def test_periodic_axis_orbit_bad_interval():
    cfg = MonopoleConfig.ooguri_vafa()
    with pytest.raises(RootNotBracketed):
        ov_axis_orbit(cfg, interval=(0.2, 0.3))
    with pytest.raises(ValueError):
        ov_axis_orbit(
            MonopoleConfig(mass=0.0, centers=[[0, 0, 0]], charges=[1])
        )


def test_periodic_finder_locates_axis_point():
    cfg = MonopoleConfig.ooguri_vafa()
    recs = find_critical_points(cfg, grid_density=8)
    assert len(recs) == 1
    assert abs(recs[0].location[0] - np.pi) < 1e-8
    assert np.linalg.norm(recs[0].location[1:]) < 1e-8


def test_finder_gradient_certificates():
    cfg = triangle_configuration(1.0)
    for rec in find_critical_points(cfg):
        assert np.linalg.norm(potential_gradient(cfg, rec.location)) < 1e-9
