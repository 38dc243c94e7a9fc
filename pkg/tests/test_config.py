"""Configuration validation and JSON round-trips."""

import numpy as np
import pytest

from ghlab import MonopoleConfig


def test_round_trip_finite():
    cfg = MonopoleConfig(
        mass=0.5,
        centers=[[0.0, 0.0, 0.0], [1.0, 2.0, 3.0]],
        charges=[1, 2],
    )
    again = MonopoleConfig.from_json(cfg.to_json())
    assert again.mass == cfg.mass
    assert np.array_equal(again.centers, cfg.centers)
    assert np.array_equal(again.charges, cfg.charges)
    assert again.periodic is False


def test_round_trip_periodic():
    cfg = MonopoleConfig.ooguri_vafa(truncation=123)
    again = MonopoleConfig.from_json(cfg.to_json())
    assert again.periodic is True
    assert again.truncation_order == 123
    assert again.mass == pytest.approx(cfg.mass, rel=1e-15)


def test_missing_mass_defaults():
    finite = MonopoleConfig.from_dict(
        {"centers": [{"p": [0, 0, 0], "charge": 1}], "mode": "finite"}
    )
    assert finite.mass == 0.0
    periodic = MonopoleConfig.from_dict(
        {
            "centers": [{"p": [0, 0, 0], "charge": 1}],
            "mode": {"periodic_ov": {"truncation": 50}},
        }
    )
    assert periodic.mass > 0.0
    assert periodic.truncation_order == 50


def test_arrays_are_read_only():
    cfg = MonopoleConfig(mass=0.0, centers=[[0.0, 0.0, 0.0]], charges=[1])
    with pytest.raises(ValueError):
        cfg.centers[0, 0] = 1.0


def test_length_scale():
    single = MonopoleConfig(mass=0.0, centers=[[5.0, 0.0, 0.0]], charges=[1])
    assert single.length_scale == 1.0
    pair = MonopoleConfig(
        mass=0.0, centers=[[0.0, 0.0, 0.0], [0.0, 3.0, 4.0]], charges=[1, 1]
    )
    assert pair.length_scale == 5.0
    assert MonopoleConfig.ooguri_vafa().length_scale == pytest.approx(2.0 * np.pi)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(mass=-1.0, centers=[[0, 0, 0]], charges=[1]),
        dict(mass=0.0, centers=[[0, 0, 0]], charges=[0]),
        dict(mass=0.0, centers=[[0, 0, 0]], charges=[-2]),
        dict(mass=0.0, centers=[[0, 0, 0], [0, 0, 0]], charges=[1, 1]),
        dict(mass=0.0, centers=[[0, 0]], charges=[1]),
        dict(mass=0.0, centers=[[0, 0, 0]], charges=[1, 1]),
        dict(mass=0.0, centers=[[1, 0, 0]], charges=[1], periodic=True),
        dict(mass=0.0, centers=[[0, 0, 0]], charges=[2], periodic=True),
        dict(
            mass=0.0,
            centers=[[0, 0, 0], [1, 0, 0]],
            charges=[1, 1],
            periodic=True,
        ),
    ],
)
def test_rejects_invalid(kwargs):
    with pytest.raises(ValueError):
        MonopoleConfig(**kwargs)


def test_rejects_bad_mode():
    with pytest.raises(ValueError):
        MonopoleConfig.from_dict(
            {"centers": [{"p": [0, 0, 0], "charge": 1}], "mode": "periodic"}
        )
