"""Invariants of fibered Lagrangians over planar curves.

Each planar curve carries a grading: the lifted direction angle of its
segments.  From it come the phase variation, the Maslov index of closed
curves, and the calibration test for arcs.  Relative homotopy data is
read off combinatorially from ray crossings, and two stability notions
plus a phase chain for the stable factors are built on top.
"""

from __future__ import annotations

import numpy as np

from .config import MonopoleConfig
from .curves import PolyCurve, _cross2, convex_hull, curvature_profile, loop_winding
from .errors import (
    CoincidentEndpoints,
    CoincidentPoints,
    NotAlmostCalibrated,
    NotPerfectMorse,
    RayDegeneracy,
)

_TWO_PI = 2.0 * np.pi


def _wrap_angle(theta):
    """Wrap to (-pi, pi]."""
    out = np.mod(-np.asarray(theta) + np.pi, _TWO_PI)
    return np.pi - out


def _segment_angles(curve: PolyCurve) -> np.ndarray:
    starts, ends = curve.segments()
    d = ends - starts
    return np.arctan2(d[:, 1], d[:, 0])


def grading(curve: PolyCurve) -> np.ndarray:
    """Lifted segment direction angles, one per segment.

    The first segment's angle is taken in (-pi, pi]; each subsequent
    lift differs from its neighbor by the wrapped turning angle, so the
    sequence is continuous rather than branch-cut.
    """
    theta = _segment_angles(curve)
    turns = _wrap_angle(np.diff(theta))
    return theta[0] + np.concatenate([[0.0], np.cumsum(turns)])


def grading_variation(curve: PolyCurve) -> float:
    beta = grading(curve)
    return float(np.max(beta) - np.min(beta))


def maslov_index(curve: PolyCurve) -> int:
    """Twice-normalized total turning; zero for arcs."""
    if not curve.closed:
        return 0
    theta = _segment_angles(curve)
    cyc = np.concatenate([theta, theta[:1]])
    total = float(np.sum(_wrap_angle(np.diff(cyc))))
    return int(np.rint(total / _TWO_PI))


def cohomological_phase(curve: PolyCurve) -> float:
    """Direction angle of the endpoint separation, in (-pi, pi]."""
    if curve.closed:
        raise ValueError("phase of the endpoint chord needs an open curve")
    d = curve.nodes[-1] - curve.nodes[0]
    norm = float(np.hypot(d[0], d[1]))
    if norm < 1e-12 * max(curve.diameter(), 1.0):
        raise CoincidentEndpoints()
    return float(np.arctan2(d[1], d[0]))


def almost_calibrated(curve: PolyCurve, margin: float = 1.0e-9) -> bool:
    """True when the grading stays inside an open half-turn."""
    return grading_variation(curve) < np.pi - margin


# -- relative homotopy ------------------------------------------------------------


def puncture_indices(config: MonopoleConfig, curve: PolyCurve) -> list[int]:
    """Centers lying in the curve's plane, excluding open-curve anchors."""
    tol = 1.0e-9 * max(config.length_scale, 1.0)
    skip = set() if curve.closed else {curve.start, curve.end}
    out = []
    for i in range(config.center_count):
        if i in skip:
            continue
        if abs(curve.plane.offset_of(config.centers[i])) < tol:
            out.append(i)
    return out


def _loop_nodes(curve: PolyCurve) -> np.ndarray:
    """Closed loop for winding purposes: arcs are closed up by their chord."""
    return curve.nodes if curve.closed else curve.nodes


def puncture_windings(config: MonopoleConfig, curve: PolyCurve) -> dict[int, int]:
    """Winding of the curve (arcs closed up by their chord) about punctures."""
    out = {}
    for i in puncture_indices(config, curve):
        q = curve.plane.to_plane(config.centers[i])
        out[i] = loop_winding(_loop_nodes(curve), q)
    return out


def _loop_segments(curve: PolyCurve) -> tuple[np.ndarray, np.ndarray]:
    nodes = curve.nodes
    if curve.closed:
        return nodes, np.roll(nodes, -1, axis=0)
    starts = nodes
    ends = np.concatenate([nodes[1:], nodes[:1]])
    return starts, ends


def homotopy_word(
    config: MonopoleConfig,
    curve: PolyCurve,
    seed: int = 0,
    max_attempts: int = 64,
) -> list[tuple[int, int]]:
    """Freely reduced relative homotopy word of the curve.

    Arcs are closed up along their chord, then the loop's class in the
    free group on the punctures is read off by recording its crossings
    of parallel rays shot from every puncture in a common direction.
    Letters are (center_index, sign) pairs in loop order.  The letters
    depend on the ray direction (a based-loop artifact); triviality and
    the per-puncture exponent sums do not.
    """
    punctures = puncture_indices(config, curve)
    if not punctures:
        return []
    starts, ends = _loop_segments(curve)
    seg = ends - starts
    origins = np.array(
        [curve.plane.to_plane(config.centers[i]) for i in punctures]
    )
    rng = np.random.default_rng(seed)
    diam = max(curve.diameter(), 1.0)

    for _ in range(max_attempts):
        angle = rng.uniform(0.0, _TWO_PI)
        d = np.array([np.cos(angle), np.sin(angle)])
        # reject directions that would stack one ray on another puncture
        # or graze a polygon vertex
        ok = True
        for a in range(len(origins)):
            rel_p = origins - origins[a]
            norms = np.linalg.norm(rel_p, axis=-1)
            mask = norms > 0
            if np.any(
                (np.abs(_cross2(np.broadcast_to(d, rel_p.shape), rel_p)) < 1e-12 * diam)
                & mask
            ):
                ok = False
                break
            rel_v = starts - origins[a]
            along = rel_v @ d
            off = np.abs(_cross2(np.broadcast_to(d, rel_v.shape), rel_v))
            if np.any((off < 1e-12 * diam) & (along > -1e-12 * diam)):
                ok = False
                break
        if not ok:
            continue

        crossings = []
        denom = _cross2(np.broadcast_to(d, seg.shape), seg)
        safe = np.where(denom != 0.0, denom, 1.0)
        for a, idx in enumerate(punctures):
            rel = starts - origins[a]
            tpar = -_cross2(np.broadcast_to(d, rel.shape), rel) / safe
            tpar[denom == 0.0] = np.nan
            hit = (tpar >= 0.0) & (tpar < 1.0)
            if not np.any(hit):
                continue
            pts = starts[hit] + tpar[hit, None] * seg[hit]
            s_along = (pts - origins[a]) @ d
            fwd = s_along > 0.0
            seg_idx = np.nonzero(hit)[0][fwd]
            t_hit = tpar[hit][fwd]
            sign = np.sign(denom[hit][fwd]).astype(int)
            for k in range(len(seg_idx)):
                crossings.append((seg_idx[k] + t_hit[k], idx, int(sign[k])))
        crossings.sort(key=lambda c: c[0])

        word: list[tuple[int, int]] = []
        for _, idx, sign in crossings:
            if word and word[-1][0] == idx and word[-1][1] == -sign:
                word.pop()
            else:
                word.append((idx, sign))
        return word
    raise RayDegeneracy(attempts=max_attempts)


def thomas_stable(
    config: MonopoleConfig, curve: PolyCurve, seed: int = 0
) -> tuple[bool, int | None]:
    """Triviality of the relative homotopy word; witness is its first letter."""
    word = homotopy_word(config, curve, seed=seed)
    if not word:
        return True, None
    return False, word[0][0]


def flow_stable(
    config: MonopoleConfig,
    curve: PolyCurve,
    seed: int = 0,
    margin: float = 1.0e-9,
) -> tuple[bool, int | None]:
    """Stability of an almost-calibrated arc under the weighted flow.

    After rotating phases so the chord direction is zero, an enclosed
    puncture q destabilizes the arc unless either the closed interval
    between the phases of the two sub-chords through q escapes the open
    interval of grading values, or the broken path through q is still
    longer than the curve.
    """
    if curve.closed:
        raise ValueError("flow stability applies to open curves")
    variation = grading_variation(curve)
    if variation >= np.pi - margin:
        raise NotAlmostCalibrated(variation=variation)
    tau = cohomological_phase(curve)
    beta = grading(curve) - tau
    beta -= _TWO_PI * np.round(np.mean(beta) / _TWO_PI)
    lo, hi = float(np.min(beta)), float(np.max(beta))
    p1 = curve.nodes[0]
    p2 = curve.nodes[-1]
    windings = puncture_windings(config, curve)
    length = curve.length()
    for idx, wind in windings.items():
        if wind == 0:
            continue
        q = curve.plane.to_plane(config.centers[idx])
        leg1 = q - p1
        leg2 = p2 - q
        sig1 = float(_wrap_angle(np.arctan2(leg1[1], leg1[0]) - tau))
        sig2 = float(_wrap_angle(np.arctan2(leg2[1], leg2[0]) - tau))
        s_lo, s_hi = min(sig1, sig2), max(sig1, sig2)
        escapes = not (s_lo > lo and s_hi < hi)
        detour_longer = length < np.linalg.norm(q - p1) + np.linalg.norm(p2 - q)
        if not (escapes or detour_longer):
            return False, idx
    return True, None


# -- phase chain of the stable factors ---------------------------------------------


def jordan_holder(config: MonopoleConfig, curve: PolyCurve) -> dict:
    """Decompose a perfect-Morse arc into hull facets with ordered phases.

    The arc must bend one way only (interior discrete curvature of a
    single sign).  The convex hull of its endpoints and the enclosed
    punctures is cut along the endpoint chord; the facets on the curve's
    side, walked from start to end, carry strictly non-increasing phase
    angles measured against the chord.
    """
    if curve.closed:
        raise ValueError("the phase chain is defined for open curves")
    kappa = curvature_profile(curve)
    if len(kappa) and (
        np.min(np.abs(kappa)) <= 1.0e-9
        or not (np.all(kappa > 0.0) or np.all(kappa < 0.0))
    ):
        raise NotPerfectMorse()
    windings = puncture_windings(config, curve)
    enclosed = [i for i, w in windings.items() if w != 0]
    p1 = curve.nodes[0]
    p2 = curve.nodes[-1]
    pts = [p1, p2] + [
        curve.plane.to_plane(config.centers[i]) for i in enclosed
    ]
    hull = convex_hull(np.array(pts))

    def find_vertex(p):
        d = np.linalg.norm(hull - p, axis=-1)
        j = int(np.argmin(d))
        if d[j] > 1e-9 * max(curve.diameter(), 1.0):
            raise ValueError("chord endpoint is not a hull vertex")
        return j

    i1, i2 = find_vertex(p1), find_vertex(p2)
    m = len(hull)
    # the chord must be a hull edge; the chain is the other way around
    if (i1 + 1) % m == i2:
        order = [(i1 - k) % m for k in range(m)]  # walk backwards from p1
    elif (i2 + 1) % m == i1:
        order = [(i1 + k) % m for k in range(m)]
    else:
        raise ValueError("endpoint chord is not an edge of the hull")
    facets = [(hull[order[k]], hull[order[k + 1]]) for k in range(m - 1)]

    total = sum(windings[i] for i in enclosed)
    orient = -1.0 if total > 0 else 1.0
    tau = cohomological_phase(curve)
    phases = []
    for a, b in facets:
        ang = np.arctan2(b[1] - a[1], b[0] - a[0]) - tau
        phases.append(orient * float(_wrap_angle(ang)))
    phases = np.asarray(phases)
    if np.any(np.diff(phases) > 1e-12):
        raise ValueError("facet phases failed to be non-increasing")
    return {
        "phases": phases,
        "facets": [(a.copy(), b.copy()) for a, b in facets],
        "enclosed": enclosed,
        "orientation": orient,
    }


def seidel_invariant(curve_a: PolyCurve, curve_b: PolyCurve, point) -> int:
    """Winding about a point of the loop: first arc, then the second reversed."""
    if curve_a.closed or curve_b.closed:
        raise ValueError("the comparison loop needs two open curves")
    gap = max(
        float(np.linalg.norm(curve_a.nodes[0] - curve_b.nodes[0])),
        float(np.linalg.norm(curve_a.nodes[-1] - curve_b.nodes[-1])),
    )
    if gap > 1e-9 * max(curve_a.diameter(), 1.0):
        raise ValueError("curves must share their endpoints")
    loop = np.concatenate([curve_a.nodes[:-1], curve_b.nodes[::-1][:-1]])
    return loop_winding(loop, np.asarray(point, dtype=float))


# -- which directions make the bundle Lagrangian -----------------------------------


def lagrangian_defect(curve: PolyCurve, direction) -> float:
    """Largest |cos| between segment tangents and a reference direction.

    Zero exactly when the curve is orthogonal to the direction, which is
    when the circle bundle over it is Lagrangian for that direction's
    symplectic form.
    """
    v = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ValueError("direction must be nonzero")
    v = v / norm
    starts, ends = curve.segments()
    d2 = ends - starts
    d3 = d2[:, 0, None] * curve.plane.u + d2[:, 1, None] * curve.plane.w
    d3 /= np.linalg.norm(d3, axis=-1, keepdims=True)
    return float(np.max(np.abs(d3 @ v)))


def class_pairing(direction, point_a, point_b) -> float:
    """Symplectic area of the class joining two centers, for one form."""
    v = np.asarray(direction, dtype=float)
    return float(_TWO_PI * ((np.asarray(point_b, float) - np.asarray(point_a, float)) @ v))


def lagrangian_directions(point_a, point_b) -> dict:
    """Axis between two centers and a basis of the directions that
    annihilate their connecting class."""
    a = np.asarray(point_a, dtype=float)
    b = np.asarray(point_b, dtype=float)
    sep = b - a
    norm = float(np.linalg.norm(sep))
    if norm < 1e-15:
        raise CoincidentPoints()
    axis = sep / norm
    helper = np.array([1.0, 0.0, 0.0])
    if abs(axis @ helper) > 0.9:
        helper = np.array([0.0, 1.0, 0.0])
    e1 = np.cross(axis, helper)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(axis, e1)
    return {"axis": axis, "basis": (e1, e2)}
