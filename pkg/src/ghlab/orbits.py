"""Location and classification of closed geodesic fibers.

Critical points of the potential are exactly the points whose circle
fiber is a closed geodesic.  The finder seeds a grid over the center
hull, polishes with a guarded Newton iteration, and certifies each root
by reconstructing it as a positive barycentric combination of the
centers.
"""

from __future__ import annotations

import dataclasses

import numpy as np
from scipy.optimize import brentq

from .config import MonopoleConfig
from .errors import (
    DegenerateCritical,
    DegeneratePresent,
    NoCriticalPoints,
    NotCritical,
    RootNotBracketed,
)
from .potential import (
    center_distances,
    potential,
    potential_gradient,
    potential_hessian,
)

_PERIOD = 2.0 * np.pi
_CHUNK = 2048  # cap on points per vectorized derivative evaluation


@dataclasses.dataclass(frozen=True)
class OrbitRecord:
    """One closed geodesic fiber: location and certification data."""

    location: np.ndarray
    potential_value: float
    fiber_length: float
    morse_index: int | None
    gradient_norm: float
    barycentric: np.ndarray | None
    barycentric_error: float | None

    def to_dict(self):
        return {
            "location": [float(c) for c in self.location],
            "potential_value": self.potential_value,
            "fiber_length": self.fiber_length,
            "morse_index": self.morse_index,
            "gradient_norm": self.gradient_norm,
            "barycentric": None
            if self.barycentric is None
            else [float(b) for b in self.barycentric],
            "barycentric_error": self.barycentric_error,
        }


def _chunked(fn, config, pts):
    if len(pts) <= _CHUNK:
        return fn(config, pts)
    parts = [fn(config, pts[i : i + _CHUNK]) for i in range(0, len(pts), _CHUNK)]
    return np.concatenate(parts, axis=0)


def _seed_points(config, grid_density):
    if config.periodic:
        ax = np.linspace(0.1, _PERIOD - 0.1, grid_density)
        side = np.linspace(-1.0, 1.0, grid_density)
        grid = np.stack(np.meshgrid(ax, side, side, indexing="ij"), axis=-1)
        return grid.reshape(-1, 3)
    centers = config.centers
    lo = centers.min(axis=0)
    hi = centers.max(axis=0)
    pad = 0.02 * config.length_scale
    axes = [np.linspace(lo[a] - pad, hi[a] + pad, grid_density) for a in range(3)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
    extra = [centers.mean(axis=0)]
    k = centers.shape[0]
    for i in range(k):
        for j in range(i + 1, k):
            extra.append(0.5 * (centers[i] + centers[j]))
    return np.concatenate([grid, np.array(extra)], axis=0)


def _newton_refine(config, seeds, tol, max_iter=100):
    scale = config.length_scale
    x = np.array(seeds, dtype=float)
    n = len(x)
    alive = np.ones(n, dtype=bool)
    converged = np.zeros(n, dtype=bool)
    step_cap = 0.25 * scale
    guard = 1e-5 * scale  # no critical point sits this close to a center

    for _ in range(max_iter):
        work = np.flatnonzero(alive & ~converged)
        if work.size == 0:
            break
        dist = _chunked(center_distances, config, x[work])
        too_close = np.min(dist, axis=-1) <= guard
        alive[work[too_close]] = False
        work = work[~too_close]
        if work.size == 0:
            continue

        grad = _chunked(potential_gradient, config, x[work])
        gnorm = np.linalg.norm(grad, axis=-1)
        done = gnorm < tol
        converged[work[done]] = True
        work = work[~done]
        grad = grad[~done]
        if work.size == 0:
            continue

        hess = _chunked(potential_hessian, config, x[work])
        det = np.linalg.det(hess)
        singular = ~np.isfinite(det) | (np.abs(det) < 1e-280)
        alive[work[singular]] = False
        work = work[~singular]
        grad = grad[~singular]
        hess = hess[~singular]
        if work.size == 0:
            continue

        step = np.linalg.solve(hess, -grad[..., None])[..., 0]
        norms = np.linalg.norm(step, axis=-1)
        factor = np.minimum(1.0, step_cap / np.maximum(norms, 1e-300))
        x[work] = x[work] + step * factor[:, None]

    return x[alive & converged]


def _inside_search_region(config, roots, margin):
    if config.periodic:
        rho = np.linalg.norm(roots[:, 1:], axis=-1)
        return rho <= config.length_scale
    lo = config.centers.min(axis=0) - margin
    hi = config.centers.max(axis=0) + margin
    return np.all((roots >= lo) & (roots <= hi), axis=-1)


def _deduplicate(config, roots, radius):
    order = np.lexsort((roots[:, 2], roots[:, 1], roots[:, 0]))
    kept = []
    for i in order:
        candidate = roots[i]
        duplicate = False
        for other in kept:
            delta = candidate - other
            if config.periodic:
                delta = delta.copy()
                delta[0] = (delta[0] + np.pi) % _PERIOD - np.pi
            if np.linalg.norm(delta) < radius:
                duplicate = True
                break
        if not duplicate:
            kept.append(candidate)
    return kept


def _barycentric_certificate(config, x):
    if config.periodic:
        return None, None
    disp = x - config.centers
    dist = np.linalg.norm(disp, axis=-1)
    weights = config.charges / dist ** 3
    beta = weights / weights.sum()
    error = float(np.linalg.norm(x - beta @ config.centers))
    return beta, error


def make_record(config, x, gradient_tol=None):
    """Assemble the record for one already-located critical point."""
    x = np.asarray(x, dtype=float)
    value = potential(config, x)
    grad_norm = float(np.linalg.norm(potential_gradient(config, x)))
    try:
        index = morse_index(config, x, gradient_tol=gradient_tol)
    except DegenerateCritical:
        index = None
    beta, beta_err = _barycentric_certificate(config, x)
    return OrbitRecord(
        location=x,
        potential_value=float(value),
        fiber_length=float(value) ** -0.5,
        morse_index=index,
        gradient_norm=grad_norm,
        barycentric=beta,
        barycentric_error=beta_err,
    )


def find_critical_points(config, grid_density=25, newton_tol=None, dedup_radius=None):
    """All critical points of the potential, as sorted OrbitRecords.

    Seeds a grid_density**3 grid over the center hull (plus pairwise
    midpoints), polishes with a step-capped Newton iteration to
    newton_tol on the gradient norm, and deduplicates within
    dedup_radius.  Raises NoCriticalPoints when nothing converges,
    which includes the single-center families where no closed geodesic
    fiber exists.
    """
    scale = config.length_scale
    if newton_tol is None:
        newton_tol = 1e-11 / scale ** 2
    if dedup_radius is None:
        dedup_radius = 1e-6 * scale

    seeds = _seed_points(config, grid_density)
    roots = _newton_refine(config, seeds, newton_tol)
    if len(roots):
        if config.periodic:
            roots = roots.copy()
            roots[:, 0] = np.mod(roots[:, 0], _PERIOD)
        roots = roots[_inside_search_region(config, roots, dedup_radius)]
    unique = _deduplicate(config, roots, dedup_radius) if len(roots) else []
    if not unique:
        raise NoCriticalPoints(
            "no critical points found (%d centers, grid density %d)"
            % (config.center_count, grid_density)
        )
    records = [make_record(config, x) for x in unique]
    records.sort(key=lambda r: tuple(r.location))
    return records


def morse_index(config, point, gradient_tol=None):
    """Number of negative Hessian eigenvalues at a critical point.

    The point must satisfy the gradient tolerance, else NotCritical.
    Eigenvalues within 1e-8 of the largest magnitude count as degenerate
    and raise DegenerateCritical.
    """
    x = np.asarray(point, dtype=float)
    if gradient_tol is None:
        gradient_tol = 1e-7 / config.length_scale ** 2
    gnorm = float(np.linalg.norm(potential_gradient(config, x)))
    if gnorm > gradient_tol:
        raise NotCritical(gnorm, gradient_tol)
    eig = np.linalg.eigvalsh(potential_hessian(config, x))
    top = np.max(np.abs(eig))
    if top == 0.0 or np.min(np.abs(eig)) <= 1e-8 * top:
        raise DegenerateCritical(np.min(np.abs(eig)), 1e-8 * top)
    return int(np.sum(eig < 0.0))


def verify_morse_count(config, grid_density=25):
    """Check the index count relation against the number of centers.

    For a finite configuration with k centers the closed fibers must
    satisfy (# index 2) - (# index 1) = k - 1.  Returns a summary dict;
    raises DegeneratePresent if any located point is degenerate.
    """
    if config.periodic:
        raise ValueError("count verification applies to finite configurations")
    records = find_critical_points(config, grid_density=grid_density)
    for rec in records:
        if rec.morse_index is None:
            raise DegeneratePresent(rec.location)
    counts = {1: 0, 2: 0}
    for rec in records:
        counts[rec.morse_index] = counts.get(rec.morse_index, 0) + 1
    difference = counts.get(2, 0) - counts.get(1, 0)
    expected = config.center_count - 1
    return {
        "counts": counts,
        "center_count": config.center_count,
        "index_difference": difference,
        "expected_difference": expected,
        "satisfied": difference == expected,
        "records": records,
    }


def triangle_configuration(a=1.0):
    """Equilateral three-center configuration used as a worked example."""
    s = np.sqrt(3.0) * a
    return MonopoleConfig(
        mass=0.0,
        centers=[[-s, 0.0, 0.0], [s, 0.0, 0.0], [0.0, 3.0 * a, 0.0]],
        charges=[1, 1, 1],
    )


def triangle_orbits(a=1.0):
    """Semi-analytic critical points of the equilateral configuration.

    The centroid (0, a, 0) is critical by symmetry.  A second critical
    point (0, b, 0) lies below it on the symmetry axis, with b the root
    of a scalar equation solved here by bracketing, and its two images
    under the rotations by 2*pi/3 about the vertical axis through the
    centroid complete the list.  Records are sorted like the finder's.
    """
    config = triangle_configuration(a)

    def axis_balance(m2):
        # stationarity of the potential along the symmetry axis
        return (m2 ** 2 + 3.0 * a ** 2) ** 1.5 - 2.0 * m2 * (3.0 * a - m2) ** 2

    lo, hi = 1e-9 * a, 0.9 * a
    flo, fhi = axis_balance(lo), axis_balance(hi)
    if flo * fhi >= 0.0:
        raise RootNotBracketed((lo, hi), (flo, fhi))
    b = brentq(axis_balance, lo, hi, xtol=1e-15 * a, rtol=8.9e-16)

    centroid = np.array([0.0, a, 0.0])
    saddle = np.array([0.0, b, 0.0])
    cos, sin = -0.5, 0.5 * np.sqrt(3.0)
    arm = saddle - centroid
    rot_plus = centroid + np.array(
        [cos * arm[0] - sin * arm[1], sin * arm[0] + cos * arm[1], 0.0]
    )
    rot_minus = centroid + np.array(
        [cos * arm[0] + sin * arm[1], -sin * arm[0] + cos * arm[1], 0.0]
    )
    records = [make_record(config, x) for x in (centroid, saddle, rot_plus, rot_minus)]
    records.sort(key=lambda r: tuple(r.location))
    return records


def ov_axis_orbit(config, interval=(0.1, _PERIOD - 0.1)):
    """The on-axis critical point of the periodic family.

    Locates the sign change of the axial derivative on the given
    interval by bracketing.  Raises RootNotBracketed when the interval
    does not straddle the root.
    """
    if not config.periodic:
        raise ValueError("axis orbit search applies to the periodic family")

    def axial_slope(t):
        return potential_gradient(config, np.array([t, 0.0, 0.0]))[0]

    lo, hi = float(interval[0]), float(interval[1])
    flo, fhi = axial_slope(lo), axial_slope(hi)
    if flo * fhi >= 0.0:
        raise RootNotBracketed((lo, hi), (flo, fhi))
    root = brentq(axial_slope, lo, hi, xtol=1e-14, rtol=8.9e-16)
    return make_record(config, np.array([root, 0.0, 0.0]))
