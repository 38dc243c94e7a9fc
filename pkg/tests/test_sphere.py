"""Chord-sphere curvature: closed forms against finite differences."""

import numpy as np
import pytest

from ghlab.config import MonopoleConfig
from ghlab.errors import ChordThroughCenter
from ghlab.potential import potential
from ghlab.sphere import (
    ambient_field,
    curvature_split,
    gauss_bonnet_total,
    gauss_curvature,
    positivity_certificate,
)


def pair_config(a=1.0, mass=0.0):
    return MonopoleConfig(
        mass=mass, centers=[[0.0, 0.0, a], [0.0, 0.0, -a]], charges=[1, 1]
    )


def five_center_config():
    return MonopoleConfig(
        mass=0.0,
        centers=[
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
            [5.0, 0.0, 0.0],
            [0.0, 5.0, 0.0],
            [-3.0, 4.0, 0.0],
        ],
        charges=[1, 1, 1, 1, 1],
    )


def fd_inverse_potential_second(config, mid, axis, mu3, h=1.0e-5):
    """Independent route: difference 1/potential along the chord."""
    def inv(m):
        pts = mid + np.outer(m, axis)
        return 1.0 / potential(config, pts)

    return (inv(mu3 + h) - 2.0 * inv(mu3) + inv(mu3 - h)) / (h * h)


def test_two_center_curvature_is_constant():
    for a in (0.5, 1.0, 3.0):
        config = pair_config(a)
        mu = np.linspace(-a, a, 41)
        K = gauss_curvature(config, 0, 1, mu)
        assert K == pytest.approx(np.full(41, 1.0 / a), abs=1e-12)


def test_curvature_matches_fd_oracle():
    config = five_center_config()
    mid = np.zeros(3)
    axis = np.array([0.0, 0.0, 1.0])
    mu = np.linspace(-0.95, 0.95, 21)
    K = gauss_curvature(config, 0, 1, mu)
    K_fd = -0.5 * fd_inverse_potential_second(config, mid, axis, mu)
    assert np.max(np.abs(K - K_fd) / np.abs(K_fd)) < 1e-5


def test_split_parts_sum_to_second_derivative():
    config = five_center_config()
    mid = np.zeros(3)
    axis = np.array([0.0, 0.0, 1.0])
    mu = np.linspace(-0.9, 0.9, 13)
    split = curvature_split(config, 0, 1, mu)
    total = split["M"] + split["N"]
    fd = fd_inverse_potential_second(config, mid, axis, mu)
    assert np.max(np.abs(total - fd) / np.abs(fd)) < 1e-5
    assert split["K"] == pytest.approx(-0.5 * total, abs=0.0)


def test_gauss_bonnet_is_four_pi():
    assert gauss_bonnet_total(pair_config(2.0), 0, 1) == pytest.approx(
        4.0 * np.pi, abs=1e-3
    )
    assert gauss_bonnet_total(five_center_config(), 0, 1) == pytest.approx(
        4.0 * np.pi, abs=1e-3
    )


def test_negativity_of_pair_part_on_far_field_config():
    config = five_center_config()
    mu = np.linspace(-1.0, 1.0, 101)
    split = curvature_split(config, 0, 1, mu)
    assert np.all(split["N"] < 0.0)
    assert np.all(split["K"] > 0.0)


def test_certificate_far_and_near():
    cert = positivity_certificate(five_center_config(), 0, 1)
    assert cert["hypothesis_met"]
    assert cert["separation"] == pytest.approx(5.0)
    assert cert["threshold"] == pytest.approx(4.0)
    assert cert["min_curvature"] > 0.0

    near = MonopoleConfig(
        mass=0.0,
        centers=[[0.0, 0.0, 1.0], [0.0, 0.0, -1.0], [2.0, 0.0, 0.0]],
        charges=[1, 1, 1],
    )
    cert = positivity_certificate(near, 0, 1)
    assert not cert["hypothesis_met"]
    assert cert["separation"] == pytest.approx(2.0)


def test_certificate_without_other_centers():
    cert = positivity_certificate(pair_config(), 0, 1)
    assert cert["separation"] == np.inf
    assert cert["hypothesis_met"]
    assert cert["min_curvature"] == pytest.approx(1.0, abs=1e-12)


def test_ambient_bounds_hold_and_bind():
    # a center on the chord axis extension attains both bounds
    config = MonopoleConfig(
        mass=0.0,
        centers=[[0.0, 0.0, 1.0], [0.0, 0.0, -1.0], [0.0, 0.0, 5.0]],
        charges=[1, 1, 1],
    )
    f = ambient_field(config, 0, 1, np.array([0.0, 0.5]))
    assert np.abs(f["grad"]) == pytest.approx(f["grad_bound"], rel=1e-12)
    assert np.abs(f["second_deriv"]) == pytest.approx(
        f["second_deriv_bound"], rel=1e-12
    )
    # generic placement keeps them strict
    f = ambient_field(five_center_config(), 0, 1, np.linspace(-0.9, 0.9, 9))
    assert np.all(np.abs(f["grad"]) <= f["grad_bound"])
    assert np.all(np.abs(f["second_deriv"]) <= f["second_deriv_bound"])


def test_mass_only_ambient_field():
    config = pair_config(mass=0.7)
    f = ambient_field(config, 0, 1, np.zeros(3))
    assert f["value"] == pytest.approx(np.full(3, 0.7))
    assert f["grad"] == pytest.approx(np.zeros(3), abs=0.0)
    # a massive background bends the sphere away from constant curvature
    K = gauss_curvature(config, 0, 1, np.array([0.0, 0.8]))
    assert abs(K[0] - K[1]) > 1e-3


def test_chord_validation():
    config = five_center_config()
    with pytest.raises(ValueError):
        gauss_curvature(config, 1, 1, 0.0)
    with pytest.raises(ValueError):
        gauss_curvature(config, 0, 1, np.array([2.0]))
    charged = MonopoleConfig(
        mass=0.0, centers=[[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]], charges=[2, 1]
    )
    with pytest.raises(ValueError):
        gauss_curvature(charged, 0, 1, 0.0)
    blocked = MonopoleConfig(
        mass=0.0,
        centers=[[0.0, 0.0, 1.0], [0.0, 0.0, -1.0], [0.0, 0.0, 0.0]],
        charges=[1, 1, 1],
    )
    with pytest.raises(ChordThroughCenter) as err:
        gauss_curvature(blocked, 0, 1, 0.5)
    assert err.value.center_index == 2


def test_random_far_field_configs_are_positive():
    rng = np.random.default_rng(7)
    for _ in range(10):
        extra = int(rng.integers(1, 4))
        centers = [[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]
        for _ in range(extra):
            while True:
                v = rng.normal(size=3)
                v /= np.linalg.norm(v)
                if np.hypot(v[0], v[1]) > 0.5:
                    break
            centers.append(list(rng.uniform(4.5, 8.0) * v))
        config = MonopoleConfig(
            mass=0.0, centers=centers, charges=[1] * (2 + extra)
        )
        cert = positivity_certificate(config, 0, 1)
        assert cert["hypothesis_met"]
        assert cert["min_curvature"] > 0.0
