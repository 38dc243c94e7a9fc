"""Flow of points by the curvature of their circle fiber.

The fiber over x shrinks fastest when x moves along the gradient of the
potential scaled by 1/(2*potential**2), so the flow

    dx/dt = grad(V) / (2 V**2)

drives every fiber toward smaller length.  Trajectories end at a center
(the fiber collapses), at a critical point of the potential (a closed
geodesic, where the speed vanishes), or at the time horizon.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .errors import (
    DegenerateCritical,
    EvaluationAtCenter,
    NonpositivePotential,
    NotRestPoint,
    PastExtinction,
    StepUnderflow,
)
from .potential import (
    center_distances,
    potential,
    potential_gradient,
    potential_hessian,
)

REACHED_CENTER = "reached_center"
NEAR_CRITICAL_POINT = "near_critical_point"
MAX_TIME = "max_time"

# Dormand-Prince 5(4) embedded pair
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)


@dataclasses.dataclass(frozen=True)
class OrbitFlowResult:
    times: np.ndarray
    points: np.ndarray
    potentials: np.ndarray
    termination: str
    center_index: int | None
    accepted_steps: int
    rejected_steps: int


def flow_velocity(config, points):
    """Right-hand side of the fiber-length flow."""
    val = potential(config, points)
    grad = potential_gradient(config, points)
    return grad / (2.0 * np.asarray(val)[..., None] ** 2)


def orbit_flow(config, x0, dt=1e-3, tol=1e-9, t_max=10.0, capture_radius=None):
    """Integrate the fiber-length flow from x0.

    Parameters mirror the run controls: dt is the initial step of the
    adaptive integrator, tol the speed below which the point counts as
    resting at a closed geodesic, t_max the horizon, capture_radius the
    distance at which a center captures the trajectory (default 1e-6 of
    the configuration scale).  Raises StepUnderflow when the step
    collapses, typically because the field became unevaluable.
    """
    scale = config.length_scale
    if capture_radius is None:
        capture_radius = max(1e-6 * scale, 10.0 * config.exclusion_radius)

    x = np.asarray(x0, dtype=float).copy()
    if x.shape != (3,):
        raise ValueError("x0 must have shape (3,)")

    rtol, atol = 1e-10, 1e-12 * scale
    t = 0.0
    h = float(dt)
    times = [0.0]
    points = [x.copy()]
    values = [potential(config, x)]
    accepted = 0
    rejected = 0
    termination = None
    center_index = None

    def check_state(y):
        dist = center_distances(config, y)
        nearest = int(np.argmin(dist))
        if dist[nearest] <= capture_radius:
            return REACHED_CENTER, nearest
        speed = np.linalg.norm(flow_velocity(config, y))
        if speed < tol:
            return NEAR_CRITICAL_POINT, None
        return None, None

    termination, center_index = check_state(x)
    k_first = None if termination else flow_velocity(config, x)

    while termination is None:
        remaining = t_max - t
        if remaining <= 1e-14 * max(1.0, abs(t)):
            termination = MAX_TIME
            break
        h = min(h, remaining)
        if h < 1e-14 * max(1.0, abs(t)):
            raise StepUnderflow(t, h)

        try:
            k = [k_first]
            for i in range(1, 7):
                yi = x + h * (_A[i] @ np.array(k[: len(_A[i])]))
                k.append(flow_velocity(config, yi))
            k = np.array(k)
        except (EvaluationAtCenter, NonpositivePotential):
            h *= 0.5
            rejected += 1
            continue

        x5 = x + h * (_B5 @ k)
        err_vec = h * ((_B5 - _B4) @ k)
        tol_scale = atol + rtol * np.maximum(np.abs(x), np.abs(x5))
        err = np.sqrt(np.mean((err_vec / tol_scale) ** 2))

        if err <= 1.0:
            t += h
            x = x5
            k_first = k[6]  # first-same-as-last
            accepted += 1
            times.append(t)
            points.append(x.copy())
            values.append(potential(config, x))
            termination, center_index = check_state(x)
            if termination is None and t >= t_max:
                termination = MAX_TIME
        else:
            rejected += 1
        factor = 0.9 * err ** -0.2 if err > 0.0 else 5.0
        h *= min(5.0, max(0.2, factor))

    return OrbitFlowResult(
        times=np.array(times),
        points=np.array(points),
        potentials=np.array(values),
        termination=termination,
        center_index=center_index,
        accepted_steps=accepted,
        rejected_steps=rejected,
    )


def classify_rest_point(config, point, speed_tol=1e-8):
    """Stability of a rest point of the flow: 'attractor' or 'unstable'.

    The linearization at a rest point is the potential Hessian divided
    by a positive factor, so eigenvalue signs decide.  Points that are
    not at rest raise NotRestPoint.
    """
    x = np.asarray(point, dtype=float)
    speed = float(np.linalg.norm(flow_velocity(config, x)))
    if speed > speed_tol:
        raise NotRestPoint("flow speed %.3e exceeds %.3e" % (speed, speed_tol))
    eig = np.linalg.eigvalsh(potential_hessian(config, x))
    top = np.max(np.abs(eig))
    if top == 0.0 or np.min(np.abs(eig)) <= 1e-8 * top:
        raise DegenerateCritical(np.min(np.abs(eig)), 1e-8 * top)
    return "unstable" if np.any(eig > 0.0) else "attractor"


def phase_portrait(config, plane, u_range=(-2.0, 2.0), w_range=(-2.0, 2.0), density=21):
    """Sample the flow field on a planar grid.

    plane must expose origin, u, w (an origin and two orthonormal
    in-plane directions).  Returns a dict with the grid axes, the
    in-plane field components, the speed, and a mask flagging singular
    nodes where the field cannot be evaluated (too close to a center,
    or outside the region where the potential is positive).
    """
    au = np.linspace(u_range[0], u_range[1], density)
    aw = np.linspace(w_range[0], w_range[1], density)
    origin = np.asarray(plane.origin, dtype=float)
    udir = np.asarray(plane.u, dtype=float)
    wdir = np.asarray(plane.w, dtype=float)

    field_u = np.zeros((density, density))
    field_w = np.zeros((density, density))
    speed = np.zeros((density, density))
    singular = np.zeros((density, density), dtype=bool)
    guard = max(1e-3 * config.length_scale, 10.0 * config.exclusion_radius)

    for i, a in enumerate(au):
        for j, b in enumerate(aw):
            y = origin + a * udir + b * wdir
            if np.min(center_distances(config, y)) <= guard:
                singular[i, j] = True
                continue
            try:
                vel = flow_velocity(config, y)
            except (EvaluationAtCenter, NonpositivePotential):
                singular[i, j] = True
                continue
            field_u[i, j] = vel @ udir
            field_w[i, j] = vel @ wdir
            speed[i, j] = np.linalg.norm(vel)
    return {
        "axis_u": au,
        "axis_w": aw,
        "field_u": field_u,
        "field_w": field_w,
        "speed": speed,
        "singular": singular,
    }


def reference_radial_solution(mass, r0, times):
    """Exact radius of the flow from a single-center configuration.

    For zero mass the radius decreases linearly; for positive mass the
    cube of (1 + 2*mass*r) decreases linearly.  Times past the
    extinction of the solution raise PastExtinction.
    """
    mass = float(mass)
    r0 = float(r0)
    if r0 <= 0.0:
        raise ValueError("r0 must be positive")
    t = np.asarray(times, dtype=float)
    single = t.ndim == 0
    t = np.atleast_1d(t)

    if mass == 0.0:
        extinction = r0
        radii = r0 - t
        if np.any(t > extinction):
            bad = float(t[np.argmax(t > extinction)])
            raise PastExtinction(bad, extinction)
    else:
        u = 2.0 * mass * r0
        s0 = u * (3.0 + 3.0 * u + u * u)  # (1+u)**3 - 1, cancellation-free
        shat = s0 - 6.0 * mass * t
        if np.any(shat < 0.0):
            bad = float(t[np.argmax(shat < 0.0)])
            raise PastExtinction(bad, s0 / (6.0 * mass))
        radii = np.expm1(np.log1p(shat) / 3.0) / (2.0 * mass)
    return float(radii[0]) if single else radii
