"""Monopole configuration data: centers, charges, mass, periodicity.

A configuration fixes the harmonic potential

    V(x) = mass + sum_i charge_i / (2 |x - p_i|)

either over finitely many centers p_i, or for the periodic family with a
single center per period cell along the first axis.  Instances are frozen;
the arrays they carry are read-only.
"""

from __future__ import annotations

import dataclasses
import json
import math

import numpy as np

# Mass value giving the periodic potential its standard normalization.
OV_DEFAULT_MASS = (math.log(4.0 * math.pi) - float(np.euler_gamma)) / math.pi

DEFAULT_EXCLUSION_RADIUS = 1e-9

_PERIOD = 2.0 * math.pi


def _as_readonly(arr):
    out = np.array(arr, copy=True)
    out.setflags(write=False)
    return out


@dataclasses.dataclass(frozen=True)
class MonopoleConfig:
    """Validated, immutable description of a multi-center potential.

    Parameters
    ----------
    mass : float
        Constant term of the potential, must be >= 0.
    centers : (k, 3) array_like
        Center locations.  For the periodic family k must be 1 and the
        center must sit at the origin.
    charges : (k,) array_like of int
        Positive integer charge of each center.
    periodic : bool
        If True the potential is the period-2*pi family along the first
        axis, evaluated with a symmetric window plus a series tail.
    truncation_order : int
        Half-width of the image window for the periodic family.
    exclusion_radius : float
        Evaluations closer than this to a center raise EvaluationAtCenter.
    """

    mass: float
    centers: np.ndarray
    charges: np.ndarray
    periodic: bool = False
    truncation_order: int = 200
    exclusion_radius: float = DEFAULT_EXCLUSION_RADIUS

    def __post_init__(self):
        centers = np.array(self.centers, dtype=float, copy=True)
        if centers.ndim != 2 or centers.shape[1] != 3:
            raise ValueError("centers must have shape (k, 3)")
        k = centers.shape[0]
        if k < 1:
            raise ValueError("at least one center is required")
        if not np.all(np.isfinite(centers)):
            raise ValueError("centers must be finite")

        charges = np.asarray(self.charges)
        if charges.shape != (k,):
            raise ValueError("charges must have shape (k,)")
        if not np.issubdtype(charges.dtype, np.integer):
            rounded = np.rint(np.asarray(charges, dtype=float))
            if not np.array_equal(rounded, np.asarray(charges, dtype=float)):
                raise ValueError("charges must be integers")
            charges = rounded.astype(int)
        else:
            charges = charges.astype(int)
        if np.any(charges < 1):
            raise ValueError("charges must be positive")

        mass = float(self.mass)
        if not math.isfinite(mass) or mass < 0.0:
            raise ValueError("mass must be finite and >= 0")

        if not (0.0 < float(self.exclusion_radius) < 1.0):
            raise ValueError("exclusion_radius must be in (0, 1)")

        if k > 1:
            diff = centers[:, None, :] - centers[None, :, :]
            dist = np.linalg.norm(diff, axis=-1)
            iu = np.triu_indices(k, 1)
            if np.min(dist[iu]) <= 2.0 * float(self.exclusion_radius):
                raise ValueError("centers coincide or are too close")

        if self.periodic:
            if k != 1:
                raise ValueError("periodic family needs exactly one center")
            if np.linalg.norm(centers[0]) > 1e-12:
                raise ValueError("periodic center must sit at the origin")
            if charges[0] != 1:
                raise ValueError("periodic center must have charge 1")
            if int(self.truncation_order) < 1:
                raise ValueError("truncation_order must be >= 1")

        object.__setattr__(self, "mass", mass)
        object.__setattr__(self, "centers", _as_readonly(centers))
        object.__setattr__(self, "charges", _as_readonly(charges))
        object.__setattr__(self, "periodic", bool(self.periodic))
        object.__setattr__(self, "truncation_order", int(self.truncation_order))
        object.__setattr__(self, "exclusion_radius", float(self.exclusion_radius))

    # -- derived quantities -------------------------------------------------

    @property
    def center_count(self):
        return self.centers.shape[0]

    @property
    def length_scale(self):
        """Reference length: center-cloud diameter, period, or 1."""
        if self.periodic:
            return _PERIOD
        k = self.center_count
        if k == 1:
            return 1.0
        diff = self.centers[:, None, :] - self.centers[None, :, :]
        return float(np.max(np.linalg.norm(diff, axis=-1)))

    # -- constructors -------------------------------------------------------

    @classmethod
    def ooguri_vafa(cls, truncation=200, mass=None):
        """Periodic single-center configuration with the standard mass."""
        if mass is None:
            mass = OV_DEFAULT_MASS
        return cls(
            mass=mass,
            centers=np.zeros((1, 3)),
            charges=np.ones(1, dtype=int),
            periodic=True,
            truncation_order=truncation,
        )

    # -- serialization ------------------------------------------------------

    def to_dict(self):
        mode = (
            {"periodic_ov": {"truncation": self.truncation_order}}
            if self.periodic
            else "finite"
        )
        return {
            "mass": self.mass,
            "centers": [
                {"p": [float(c) for c in p], "charge": int(q)}
                for p, q in zip(self.centers, self.charges)
            ],
            "mode": mode,
        }

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ValueError("configuration must be a JSON object")
        try:
            raw_centers = data["centers"]
            mode = data["mode"]
        except KeyError as exc:
            raise ValueError("missing configuration key: %s" % exc) from exc
        centers = [entry["p"] for entry in raw_centers]
        charges = [entry["charge"] for entry in raw_centers]

        periodic = False
        truncation = 200
        if mode == "finite":
            pass
        elif isinstance(mode, dict) and set(mode) == {"periodic_ov"}:
            periodic = True
            truncation = int(mode["periodic_ov"]["truncation"])
        else:
            raise ValueError("mode must be 'finite' or {'periodic_ov': {...}}")

        mass = data.get("mass")
        if mass is None:
            mass = OV_DEFAULT_MASS if periodic else 0.0
        return cls(
            mass=float(mass),
            centers=np.asarray(centers, dtype=float).reshape(-1, 3),
            charges=np.asarray(charges),
            periodic=periodic,
            truncation_order=truncation,
        )

    def to_json(self, **kwargs):
        kwargs.setdefault("sort_keys", True)
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_file(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))
