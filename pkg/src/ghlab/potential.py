"""Evaluation of the multi-center harmonic potential and its derivatives.

All entry points accept a single point of shape (3,) or a batch of shape
(..., 3) and vectorize over the leading axes.  Points inside the exclusion
ball of a center raise EvaluationAtCenter; non-positive potential values
(possible for the periodic family far from its axis) raise
NonpositivePotential from the value-level routines.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.special import zeta

from .errors import EvaluationAtCenter, NonpositivePotential

_PERIOD = 2.0 * np.pi
_TAIL_ORDER = 4  # axial multipole order kept in the periodic tail


def _prepare(points):
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] != 3:
        raise ValueError("points must have shape (..., 3)")
    return arr, arr.ndim == 1


@lru_cache(maxsize=8)
def _window(truncation):
    """Image offsets along the first axis and the matching log subtraction."""
    j = np.arange(-truncation, truncation + 2)
    offsets = _PERIOD * j.astype(float)
    offsets.setflags(write=False)
    nz = j[j != 0]
    subtraction = float(np.sum(1.0 / (2.0 * _PERIOD * np.abs(nz))))
    return offsets, subtraction


@lru_cache(maxsize=8)
def _tail_weights(truncation):
    """Weights multiplying the axial harmonic polynomials in the tail.

    The images dropped on either side of the window are expanded in
    homogeneous harmonics of the evaluation point; Hurwitz zeta values
    resum each order over the discarded images.
    """
    n = np.arange(1, _TAIL_ORDER + 1, dtype=float)
    right = zeta(n + 1.0, truncation + 2.0)
    left = zeta(n + 1.0, truncation + 1.0)
    w = (right + (-1.0) ** n * left) / (2.0 * _PERIOD ** (n + 1.0))
    w.setflags(write=False)
    return w


def _fold(x):
    """Translate the first coordinate into [0, 2*pi)."""
    out = x.copy()
    out[..., 0] = np.mod(out[..., 0], _PERIOD)
    return out


def _axial_values(x):
    """Axial harmonic polynomials of degree 1..4, stacked on a new last axis."""
    x1 = x[..., 0]
    rho2 = x[..., 1] ** 2 + x[..., 2] ** 2
    c1 = x1
    c2 = x1 ** 2 - 0.5 * rho2
    c3 = 0.5 * x1 * (2.0 * x1 ** 2 - 3.0 * rho2)
    c4 = x1 ** 4 - 3.0 * x1 ** 2 * rho2 + 0.375 * rho2 ** 2
    return np.stack([c1, c2, c3, c4], axis=-1)


def _axial_gradients(x):
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    rho2 = x2 ** 2 + x3 ** 2
    zero = np.zeros_like(x1)
    one = np.ones_like(x1)
    g1 = np.stack([one, zero, zero], axis=-1)
    g2 = np.stack([2.0 * x1, -x2, -x3], axis=-1)
    g3 = np.stack(
        [3.0 * x1 ** 2 - 1.5 * rho2, -3.0 * x1 * x2, -3.0 * x1 * x3], axis=-1
    )
    g4 = np.stack(
        [
            4.0 * x1 ** 3 - 6.0 * x1 * rho2,
            (1.5 * rho2 - 6.0 * x1 ** 2) * x2,
            (1.5 * rho2 - 6.0 * x1 ** 2) * x3,
        ],
        axis=-1,
    )
    return np.stack([g1, g2, g3, g4], axis=-2)  # (..., 4, 3)


def _axial_hessians(x):
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    rho2 = x2 ** 2 + x3 ** 2
    shape = x1.shape + (4, 3, 3)
    h = np.zeros(shape)
    # degree 2
    h[..., 1, 0, 0] = 2.0
    h[..., 1, 1, 1] = -1.0
    h[..., 1, 2, 2] = -1.0
    # degree 3
    h[..., 2, 0, 0] = 6.0 * x1
    h[..., 2, 0, 1] = h[..., 2, 1, 0] = -3.0 * x2
    h[..., 2, 0, 2] = h[..., 2, 2, 0] = -3.0 * x3
    h[..., 2, 1, 1] = -3.0 * x1
    h[..., 2, 2, 2] = -3.0 * x1
    # degree 4
    h[..., 3, 0, 0] = 12.0 * x1 ** 2 - 6.0 * rho2
    h[..., 3, 0, 1] = h[..., 3, 1, 0] = -12.0 * x1 * x2
    h[..., 3, 0, 2] = h[..., 3, 2, 0] = -12.0 * x1 * x3
    h[..., 3, 1, 1] = -6.0 * x1 ** 2 + 1.5 * rho2 + 3.0 * x2 ** 2
    h[..., 3, 2, 2] = -6.0 * x1 ** 2 + 1.5 * rho2 + 3.0 * x3 ** 2
    h[..., 3, 1, 2] = h[..., 3, 2, 1] = 3.0 * x2 * x3
    return h


def _center_geometry(config, x):
    """Displacements and distances to every source seen by the evaluation.

    Finite case: one source per center, weighted by its charge.  Periodic
    case: the folded point against every image in the window, all charge 1.
    Returns (displacements (..., m, 3), distances (..., m), charges (m,)).
    """
    if config.periodic:
        xf = _fold(x)
        offsets, _ = _window(config.truncation_order)
        disp = xf[..., None, :].copy()
        disp = np.repeat(disp, offsets.size, axis=-2)
        disp[..., 0] -= offsets
        charges = np.ones(offsets.size)
    else:
        disp = x[..., None, :] - config.centers
        charges = config.charges.astype(float)
    dist = np.linalg.norm(disp, axis=-1)
    return disp, dist, charges


def _check_exclusion(config, x, dist):
    bad = dist < config.exclusion_radius
    if not np.any(bad):
        return
    flat = np.argwhere(bad)
    first = flat[0]
    point = x[tuple(first[:-1])]
    if config.periodic:
        center_index = 0
    else:
        center_index = int(first[-1])
    raise EvaluationAtCenter(center_index, point, dist[tuple(first)])


def potential(config, points):
    """Value of the potential at one point or a batch of points."""
    x, single = _prepare(points)
    disp, dist, charges = _center_geometry(config, x)
    _check_exclusion(config, x, dist)
    val = config.mass + np.sum(charges / (2.0 * dist), axis=-1)
    if config.periodic:
        _, subtraction = _window(config.truncation_order)
        w = _tail_weights(config.truncation_order)
        val = val - subtraction + _axial_values(_fold(x)) @ w
    val_arr = np.asarray(val)
    if np.any(val_arr <= 0.0):
        worst = int(np.argmin(val_arr.reshape(-1)))
        raise NonpositivePotential(
            val_arr.reshape(-1)[worst], x.reshape(-1, 3)[worst]
        )
    return float(val) if single else val


def potential_gradient(config, points):
    """Euclidean gradient of the potential, shape (..., 3)."""
    x, _ = _prepare(points)
    disp, dist, charges = _center_geometry(config, x)
    _check_exclusion(config, x, dist)
    coeff = charges / (2.0 * dist ** 3)  # (..., m)
    grad = -np.sum(coeff[..., None] * disp, axis=-2)
    if config.periodic:
        w = _tail_weights(config.truncation_order)
        grad = grad + np.einsum("...nd,n->...d", _axial_gradients(_fold(x)), w)
    return grad


def potential_hessian(config, points):
    """Euclidean Hessian of the potential, shape (..., 3, 3)."""
    x, _ = _prepare(points)
    disp, dist, charges = _center_geometry(config, x)
    _check_exclusion(config, x, dist)
    outer = disp[..., :, None] * disp[..., None, :]  # (..., m, 3, 3)
    eye = np.eye(3)
    term = 3.0 * outer / dist[..., None, None] ** 5 - eye / dist[..., None, None] ** 3
    hess = 0.5 * np.sum(charges[..., :, None, None] * term, axis=-3)
    if config.periodic:
        w = _tail_weights(config.truncation_order)
        hess = hess + np.einsum("...nab,n->...ab", _axial_hessians(_fold(x)), w)
    return hess


def orbit_length(config, points):
    """Length of the circle fiber over a point: potential**(-1/2)."""
    return potential(config, points) ** -0.5


def center_distances(config, points):
    """Distance from each point to each center, shape (..., k).

    For the periodic family the first coordinate is folded into one period
    first, so the single column is the distance to the nearest image.
    """
    x, _ = _prepare(points)
    if config.periodic:
        xf = _fold(x)
        shifted = xf.copy()
        # nearest image: fold into [-pi, pi) around the origin
        shifted[..., 0] = np.where(
            shifted[..., 0] > np.pi, shifted[..., 0] - _PERIOD, shifted[..., 0]
        )
        dist = np.linalg.norm(shifted, axis=-1)[..., None]
    else:
        disp = x[..., None, :] - config.centers
        dist = np.linalg.norm(disp, axis=-1)
    return dist
