"""The curated cases carry the invariants they were built for."""

import numpy as np
import pytest

from ghlab.curves import first_crossing, loop_winding
from ghlab.errors import NotAlmostCalibrated
from ghlab.gallery import (
    SEIDEL_POINT,
    bulge_arc,
    chord_nodes,
    circle_nodes,
    clifford_case,
    collision_case,
    gallery_case,
    gallery_names,
    jordan_holder_case,
    radial_twist,
    seidel_arc,
    seidel_config,
    shrinking_loop_case,
    stability_scenarios,
    stable_arc_case,
    weave_arc,
    weave_config,
)
from ghlab.lagrangian import (
    flow_stable,
    grading,
    homotopy_word,
    jordan_holder,
    puncture_windings,
    seidel_invariant,
    thomas_stable,
)


def cyclic_reduce(word):
    out = list(word)
    while len(out) >= 2 and out[0][0] == out[-1][0] and out[0][1] == -out[-1][1]:
        out = out[1:-1]
    return out


# -- geometry helpers ---------------------------------------------------------------


def test_chord_nodes_pins_endpoints():
    nodes = chord_nodes([0.0, 1.0], [2.0, 3.0], 11)
    assert nodes[0] == pytest.approx([0.0, 1.0])
    assert nodes[-1] == pytest.approx([2.0, 3.0])
    steps = np.diff(nodes, axis=0)
    assert np.allclose(steps, steps[0])


def test_bulge_arc_lies_on_a_circle():
    apex, s = 0.7, 1.0
    nodes = bulge_arc(apex, 101, half_span=s)
    assert nodes[0] == pytest.approx([-1.0, 0.0], abs=1e-15)
    assert nodes[-1] == pytest.approx([1.0, 0.0], abs=1e-15)
    assert nodes[50] == pytest.approx([0.0, apex], abs=1e-12)
    center = np.array([0.0, (apex**2 - s**2) / (2 * apex)])
    radii = np.linalg.norm(nodes - center, axis=-1)
    assert radii == pytest.approx((apex**2 + s**2) / (2 * apex), abs=1e-12)
    with pytest.raises(ValueError):
        bulge_arc(-0.1, 10)


def test_radial_twist_support():
    tw = radial_twist([0.0, 0.0], 0.5, 1.0, turns=1)
    outside = np.array([[1.5, 0.0], [0.0, -2.0]])
    np.testing.assert_array_equal(tw(outside), outside)
    inside = np.array([[0.2, 0.1], [-0.3, 0.0]])
    np.testing.assert_array_equal(tw(inside), inside)
    # half a turn moves the inner disk to its antipode
    half = radial_twist([0.0, 0.0], 0.5, 1.0, turns=0.5)
    np.testing.assert_allclose(half(np.array([[0.2, 0.0]])), [[-0.2, 0.0]], atol=1e-15)
    with pytest.raises(ValueError):
        radial_twist([0.0, 0.0], 1.0, 0.5)


def test_radial_twist_wraps_midring_points():
    tw = radial_twist([0.0, 0.0], 0.5, 1.0, turns=1)
    mid = np.array([[0.75, 0.0]])
    out = tw(mid)
    assert np.linalg.norm(out) == pytest.approx(0.75, abs=1e-15)
    np.testing.assert_allclose(out, [[-0.75, 0.0]], atol=1e-12)


# -- closed-form cases --------------------------------------------------------------


def test_clifford_case_polygon_is_uniform():
    config, curve = clifford_case(0.0, n=64)
    assert config.mass == 0.0
    assert curve.closed
    seg = curve.segment_lengths()
    assert np.max(seg) / np.min(seg) == pytest.approx(1.0, rel=1e-12)
    assert np.linalg.norm(curve.nodes, axis=-1) == pytest.approx(
        np.ones(64), abs=1e-15
    )


def test_shrinking_loop_plane_clears_centers():
    config, curve = shrinking_loop_case()
    offsets = [abs(curve.plane.offset_of(c)) for c in config.centers]
    assert min(offsets) >= 1.0
    assert curve.closed


def test_stable_arc_opening_angle():
    config, curve = stable_arc_case()
    assert curve.node_count == 224
    assert curve.nodes[0] == pytest.approx(
        curve.plane.to_plane(config.centers[0]), abs=1e-15
    )
    assert curve.nodes[-1] == pytest.approx(
        curve.plane.to_plane(config.centers[1]), abs=1e-15
    )
    beta = grading(curve)
    # the polyline's direction range misses one angular step of the arc
    segments = curve.node_count - 1
    expect = 0.81 * np.pi * (segments - 1) / segments
    assert beta[0] - beta[-1] == pytest.approx(expect, rel=1e-9)


# -- the woven arc ------------------------------------------------------------------


def test_weave_word_is_a_commutator():
    config, curve = weave_config(), weave_arc()
    assert first_crossing(curve) is None
    winds = puncture_windings(config, curve)
    assert winds == {2: 0, 3: 0}
    for seed in (0, 1, 2):
        word = cyclic_reduce(homotopy_word(config, curve, seed=seed))
        assert len(word) == 4
        letters = {idx for idx, _ in word}
        assert letters == {2, 3}
        for idx in letters:
            assert sum(s for i, s in word if i == idx) == 0
    stable, witness = thomas_stable(config, curve)
    assert not stable
    assert witness in (2, 3)


def test_weave_word_density_invariant():
    config = weave_config()
    coarse = cyclic_reduce(homotopy_word(config, weave_arc(n=1000)))
    fine = cyclic_reduce(homotopy_word(config, weave_arc(n=4000)))
    assert coarse == fine


# -- the winding family -------------------------------------------------------------


def test_seidel_table():
    arcs = {r: seidel_arc(r) for r in (1, 2, 3)}
    config = seidel_config()
    for r in (1, 2, 3):
        assert puncture_windings(config, arcs[r]) == {2: -r}
        for s in (1, 2, 3):
            inv = seidel_invariant(arcs[r], arcs[s], SEIDEL_POINT)
            assert abs(inv) == abs(r - s)
            assert inv == -(r - s)
    with pytest.raises(ValueError):
        seidel_arc(0)


def test_seidel_base_is_embedded():
    assert first_crossing(seidel_arc(1)) is None


# -- the stability table ------------------------------------------------------------


def scenario_rows():
    return [pytest.param(row, id=row.name) for row in stability_scenarios()]


@pytest.mark.parametrize("row", scenario_rows())
def test_scenario_thomas_label(row):
    stable, _ = thomas_stable(row.config, row.curve)
    assert ("stable" if stable else "unstable") == row.thomas_label


@pytest.mark.parametrize("row", scenario_rows())
def test_scenario_flow_label(row):
    if row.flow_label == "not_almost_calibrated":
        with pytest.raises(NotAlmostCalibrated):
            flow_stable(row.config, row.curve)
        return
    stable, _ = flow_stable(row.config, row.curve)
    assert ("stable" if stable else "unstable") == row.flow_label


def test_scenario_labels_cover_both_verdicts():
    rows = stability_scenarios()
    assert len(rows) >= 6
    assert {r.thomas_label for r in rows} == {"stable", "unstable"}
    assert {r.flow_label for r in rows} >= {"stable", "unstable"}
    assert len({r.name for r in rows}) == len(rows)


def test_scenario_anchors_sit_on_centers():
    for row in stability_scenarios():
        curve, config = row.curve, row.config
        p1 = curve.plane.to_plane(config.centers[curve.start])
        p2 = curve.plane.to_plane(config.centers[curve.end])
        assert curve.nodes[0] == pytest.approx(p1, abs=1e-12)
        assert curve.nodes[-1] == pytest.approx(p2, abs=1e-12)


# -- phase chain example ------------------------------------------------------------


def test_phase_chain_case_is_exact():
    config, curve = jordan_holder_case()
    out = jordan_holder(config, curve)
    assert out["phases"] == pytest.approx([np.pi / 4, 0.0, -np.pi / 4], abs=1e-12)


# -- lookup -------------------------------------------------------------------------


def test_gallery_lookup_round_trip():
    names = gallery_names()
    assert len(names) == len(set(names))
    for name in names:
        config, curve = gallery_case(name)
        assert config.center_count >= 1
        assert curve.node_count >= 16
    with pytest.raises(KeyError):
        gallery_case("no-such-case")


def test_collision_case_matches_scenario():
    config, curve = collision_case()
    assert config.center_count == 3
    assert loop_winding(curve.nodes, curve.plane.to_plane(config.centers[2])) != 0


def test_circle_nodes_centering():
    nodes = circle_nodes(2.0, 32, center=(1.0, -1.0))
    assert np.linalg.norm(nodes - [1.0, -1.0], axis=-1) == pytest.approx(
        np.full(32, 2.0), abs=1e-14
    )
