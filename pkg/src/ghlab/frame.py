"""Orthonormal-frame geometry: connection coefficients and Hessians of
circle-invariant functions.

Frame convention used throughout: index 0 is the unit vector along the
circle fiber, indices 1..3 are the horizontal lifts of the base
coordinate directions scaled by potential**(-1/2).  A function on the
base is "invariant" when it does not depend on the fiber coordinate,
so its frame derivative along index 0 vanishes.
"""

from __future__ import annotations

import numpy as np

from .potential import potential, potential_gradient


def _levi_civita():
    eps = np.zeros((3, 3, 3))
    eps[0, 1, 2] = eps[1, 2, 0] = eps[2, 0, 1] = 1.0
    eps[0, 2, 1] = eps[2, 1, 0] = eps[1, 0, 2] = -1.0
    eps.setflags(write=False)
    return eps


_EPS = _levi_civita()


def _single_point(point):
    x = np.asarray(point, dtype=float)
    if x.shape != (3,):
        raise ValueError("point must have shape (3,)")
    return x


def connection_coefficients(config, point):
    """Connection coefficients of the orthonormal frame at one point.

    Returns a (4, 4, 4) array G with G[a, b, c] the coefficient of frame
    vector c in the covariant derivative of frame vector b along frame
    vector a.  Metric compatibility shows as exact antisymmetry in the
    last two indices.
    """
    x = _single_point(point)
    phi = potential(config, x)
    g = potential_gradient(config, x)
    s = 0.5 * phi ** -1.5

    gamma = np.zeros((4, 4, 4))
    gamma[0, 0, 1:] = s * g
    gamma[0, 1:, 0] = -s * g
    cross = s * np.einsum("ijk,j->ik", _EPS, g)
    gamma[0, 1:, 1:] = cross
    gamma[1:, 0, 1:] = cross
    gamma[1:, 1:, 0] = -cross
    eye = np.eye(3)
    gamma[1:, 1:, 1:] = s * (
        np.einsum("j,il->ijl", g, eye) - np.einsum("ij,l->ijl", eye, g)
    )
    return gamma


def fiber_curvature(config, point):
    """Curvature vector of the circle fiber as a Euclidean base vector."""
    x = _single_point(point)
    phi = potential(config, x)
    return potential_gradient(config, x) / (2.0 * phi * phi)


def invariant_hessian(config, point, grad, hess):
    """Frame Hessian of an invariant function at one point.

    Parameters
    ----------
    grad : (3,) array_like
        Euclidean gradient of the function at the point.
    hess : (3, 3) array_like
        Euclidean Hessian of the function at the point.

    Returns the symmetric (4, 4) Hessian with respect to the orthonormal
    frame.  Only first and second derivatives of the function enter.
    """
    x = _single_point(point)
    f1 = np.asarray(grad, dtype=float)
    f2 = np.asarray(hess, dtype=float)
    if f1.shape != (3,) or f2.shape != (3, 3):
        raise ValueError("grad must be (3,) and hess (3, 3)")

    phi = potential(config, x)
    pg = potential_gradient(config, x)
    half_inv2 = 0.5 / (phi * phi)
    radial = float(pg @ f1)

    out = np.zeros((4, 4))
    out[0, 0] = -half_inv2 * radial
    mixed = -half_inv2 * np.einsum("ijk,j,k->i", _EPS, pg, f1)
    out[1:, 0] = mixed
    out[0, 1:] = mixed
    sym = np.outer(f1, pg)
    out[1:, 1:] = (
        f2 / phi
        + np.eye(3) * (half_inv2 * radial)
        - half_inv2 * (sym + sym.T)
    )
    return out
