"""Curated monopole configurations and curves.

Single source for the worked examples shared by the test suite and the
command line: closed-form shrinking circles, the stable shallow arc,
the stability scenario table, the phase-chain example, the winding
family behind the comparison invariant, and a woven arc whose homotopy
word is a commutator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import MonopoleConfig
from .curves import Plane, PolyCurve

TWO_PI = 2.0 * np.pi


def chord_nodes(a, b, n: int) -> np.ndarray:
    """n nodes evenly spaced on the segment from a to b."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    t = np.linspace(0.0, 1.0, n)[:, None]
    return a + t * (b - a)


def bulge_arc(apex: float, n: int, half_span: float = 1.0, shift=(0.0, 0.0)) -> np.ndarray:
    """Circular arc from (-half_span, 0) to (half_span, 0), peaking at apex.

    The apex is the height of the bulge above the chord midpoint; the
    endpoints are pinned exactly.  An optional shift translates the
    whole arc in the plane.
    """
    s = float(half_span)
    h = float(apex)
    if h <= 0.0 or s <= 0.0:
        raise ValueError("apex and half_span must be positive")
    c = (h * h - s * s) / (2.0 * h)
    radius = (h * h + s * s) / (2.0 * h)
    ph = np.linspace(np.arctan2(-c, -s), np.arctan2(-c, s), n)
    nodes = np.stack([radius * np.cos(ph), c + radius * np.sin(ph)], axis=-1)
    nodes[0] = [-s, 0.0]
    nodes[-1] = [s, 0.0]
    return nodes + np.asarray(shift, dtype=float)


def circle_nodes(radius: float, n: int, center=(0.0, 0.0)) -> np.ndarray:
    t = np.linspace(0.0, TWO_PI, n, endpoint=False)
    return np.asarray(center, dtype=float) + radius * np.stack(
        [np.cos(t), np.sin(t)], axis=-1
    )


def radial_twist(center, inner: float, outer: float, turns: float = 1.0):
    """Map of the plane twisting an annulus by full turns.

    Identity outside radius `outer`; rigid rotation by 2*pi*turns inside
    radius `inner` (so integer turns fix the inner disk pointwise, and
    the rotation is skipped there to avoid round-off jitter); a smooth
    monotone ramp in between.  Returns a callable acting on (n, 2)
    arrays of points.
    """
    center = np.asarray(center, dtype=float)
    if not 0.0 < inner < outer:
        raise ValueError("need 0 < inner < outer")

    def apply(points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        rel = pts - center
        r = np.linalg.norm(rel, axis=-1)
        s = np.clip((outer - r) / (outer - inner), 0.0, 1.0)
        ramp = s * s * (3.0 - 2.0 * s)
        ang = TWO_PI * turns * ramp
        if float(turns) == int(turns):
            ang = np.where(s >= 1.0, 0.0, ang)
        ca, sa = np.cos(ang), np.sin(ang)
        rotated = np.stack(
            [ca * rel[..., 0] - sa * rel[..., 1], sa * rel[..., 0] + ca * rel[..., 1]],
            axis=-1,
        )
        return center + rotated

    return apply


# -- closed-form shrinking circles --------------------------------------------------


def clifford_case(mass: float = 0.0, n: int = 512) -> tuple[MonopoleConfig, PolyCurve]:
    """Unit circle of fiber orbits around a single center.

    Massless: the radius decays as 1 - 2t.  Massive: m r^2 + r decays
    at rate exactly 2.  Both hold for the discrete flow as well, since a
    uniform polygon's second difference points straight at the center.
    """
    config = MonopoleConfig(mass=mass, centers=[[0.0, 0.0, 0.0]], charges=[1])
    curve = PolyCurve(
        plane=Plane.coordinate(), nodes=circle_nodes(1.0, n), closed=True
    )
    return config, curve


def shrinking_loop_case() -> tuple[MonopoleConfig, PolyCurve]:
    """Closed curve in a plane clear of all three centers; it shrinks away."""
    root3 = np.sqrt(3.0)
    config = MonopoleConfig(
        mass=0.0,
        centers=[[-root3, 0.0, 0.0], [root3, 0.0, 0.0], [0.0, 3.0, 0.0]],
        charges=[1, 1, 1],
    )
    plane = Plane(origin=[0.0, 1.0, 1.0], u=[1.0, 0.0, 0.0], w=[0.0, 1.0, 0.0])
    curve = PolyCurve(plane=plane, nodes=circle_nodes(0.8, 200), closed=True)
    return config, curve


def stable_arc_case(n: int = 224) -> tuple[MonopoleConfig, PolyCurve]:
    """Shallow arc between two centers that relaxes onto its chord.

    The apex puts the arc's opening angle at 0.81 pi, safely inside the
    half-turn calibration window but far from flat.
    """
    config = MonopoleConfig(
        mass=0.0, centers=[[-1.0, 0.0, 0.0], [1.0, 0.0, 0.0]], charges=[1, 1]
    )
    alpha = 0.405 * np.pi
    radius = 1.0 / np.sin(alpha)
    apex = radius - radius * np.cos(alpha)
    curve = PolyCurve(
        plane=Plane.coordinate(),
        nodes=bulge_arc(apex, n),
        closed=False,
        start=0,
        end=1,
    )
    return config, curve


# -- homotopy constructions ---------------------------------------------------------

WEAVE_TWIST_CENTER = (2.0, 0.0)
WEAVE_TWIST_INNER = 0.75
WEAVE_TWIST_OUTER = 1.15


def weave_config() -> MonopoleConfig:
    return MonopoleConfig(
        mass=0.0,
        centers=[
            [0.0, 0.0, 0.0],
            [4.0, 0.0, 0.0],
            [2.0, 0.45, 0.0],
            [2.0, -0.45, 0.0],
        ],
        charges=[1, 1, 1, 1],
    )


def weave_arc(n: int = 2000) -> PolyCurve:
    """Embedded arc whose homotopy word is a commutator of both punctures.

    One full twist about a circle enclosing both punctures is applied to
    the straight chord, which passes between them.  The entering strand
    wraps once around the pair and the exiting strand unwraps it, but
    re-based from between the punctures, so the windings cancel while
    the word survives as x y x^-1 y^-1 up to conjugation.  A twist about
    a single puncture would act trivially: its two spiral strands cancel
    outright.
    """
    nodes = radial_twist(
        WEAVE_TWIST_CENTER, WEAVE_TWIST_INNER, WEAVE_TWIST_OUTER, 1
    )(chord_nodes([0.0, 0.0], [4.0, 0.0], n))
    nodes[0] = [0.0, 0.0]
    nodes[-1] = [4.0, 0.0]
    return PolyCurve(
        plane=Plane.coordinate(), nodes=nodes, closed=False, start=0, end=1
    )


SEIDEL_POINT = (0.0, 0.4)


def seidel_config() -> MonopoleConfig:
    return MonopoleConfig(
        mass=0.0,
        centers=[[-1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.4, 0.0]],
        charges=[1, 1, 1],
    )


def seidel_arc(r: int, n: int = 160) -> PolyCurve:
    """Arc between the anchors winding r times clockwise about the marked point.

    r = 1 is the embedded bulge over the point; higher r threads extra
    clockwise loops around it, which need not embed.  Closing any member
    against another by the shared endpoints gives a comparison loop of
    winding -(r - s).
    """
    if r < 1:
        raise ValueError("winding count must be at least 1")
    if r == 1:
        nodes = bulge_arc(0.7, n)
    else:
        center = np.asarray(SEIDEL_POINT, dtype=float)
        rad = 0.3
        entry = center + [-rad, 0.0]
        theta = np.linspace(np.pi, np.pi - TWO_PI * r, n * r)
        loops = center + rad * np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        leg_in = chord_nodes([-1.0, 0.0], entry, max(8, n // 4))
        leg_out = chord_nodes(entry, [1.0, 0.0], max(8, n // 4))
        nodes = np.concatenate([leg_in[:-1], loops, leg_out[1:]])
    return PolyCurve(
        plane=Plane.coordinate(), nodes=nodes, closed=False, start=0, end=1
    )


# -- the phase chain example --------------------------------------------------------


def jordan_holder_case(n: int = 200) -> tuple[MonopoleConfig, PolyCurve]:
    """Arc over two interior centers whose phase chain is (pi/4, 0, -pi/4).

    The hull of the endpoints and the enclosed centers is a trapezoid;
    the three facets opposite the chord make angles pi/4, 0, -pi/4 with
    it, in walk order.
    """
    config = MonopoleConfig(
        mass=0.0,
        centers=[[0.0, 0.0, 0.0], [3.0, 0.0, 0.0], [1.0, 1.0, 0.0], [2.0, 1.0, 0.0]],
        charges=[1, 1, 1, 1],
    )
    curve = PolyCurve(
        plane=Plane.coordinate(),
        nodes=bulge_arc(1.4, n, half_span=1.5, shift=(1.5, 0.0)),
        closed=False,
        start=0,
        end=1,
    )
    return config, curve


def curvature_case() -> tuple[MonopoleConfig, int, int]:
    """Five centers whose vertical chord meets the far-field hypothesis.

    Returns the configuration and the two chord endpoint indices.
    """
    config = MonopoleConfig(
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
    return config, 0, 1


# -- the stability scenario table ---------------------------------------------------


@dataclass(frozen=True)
class Scenario:
    """One row of the stability table: a configuration, an arc, and the
    expected verdicts of the two stability tests."""

    name: str
    config: MonopoleConfig
    curve: PolyCurve
    thomas_label: str
    flow_label: str
    note: str = ""


def _three_center_config() -> MonopoleConfig:
    return MonopoleConfig(
        mass=0.0,
        centers=[[-1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.3, 0.0]],
        charges=[1, 1, 1],
    )


def _wide_config() -> MonopoleConfig:
    return MonopoleConfig(
        mass=0.0,
        centers=[[0.0, 0.0, 0.0], [4.0, 0.0, 0.0], [2.0, 0.5, 0.0]],
        charges=[1, 1, 1],
    )


def stability_scenarios() -> list[Scenario]:
    """Six arcs whose stability verdicts are pinned down by hand.

    Labels are "stable"/"unstable" for both tests, except the woven arc,
    whose grading sweeps far past a half-turn, so the flow test refuses
    it ("not_almost_calibrated").
    """
    plane = Plane.coordinate()

    def arc(apex, n, half_span=1.0, shift=(0.0, 0.0)):
        return PolyCurve(
            plane=plane,
            nodes=bulge_arc(apex, n, half_span=half_span, shift=shift),
            closed=False,
            start=0,
            end=1,
        )

    chord = PolyCurve(
        plane=plane,
        nodes=chord_nodes([-1.0, 0.0], [1.0, 0.0], 64),
        closed=False,
        start=0,
        end=1,
    )
    return [
        Scenario(
            name="bulge-over-center",
            config=_wide_config(),
            curve=arc(0.6, 160, half_span=2.0, shift=(2.0, 0.0)),
            thomas_label="unstable",
            flow_label="unstable",
            note="encloses the off-axis center; the broken path through it is shorter",
        ),
        Scenario(
            name="bulge-beside-center",
            config=_wide_config(),
            curve=arc(0.4, 160, half_span=2.0, shift=(2.0, 0.0)),
            thomas_label="stable",
            flow_label="stable",
            note="same shape but the bulge stays below the off-axis center",
        ),
        Scenario(
            name="bulge-near-collision",
            config=_three_center_config(),
            curve=arc(0.5, 128),
            thomas_label="unstable",
            flow_label="unstable",
            note="flowing this arc drives a node into the enclosed center",
        ),
        Scenario(
            name="woven-commutator",
            config=weave_config(),
            curve=weave_arc(),
            thomas_label="unstable",
            flow_label="not_almost_calibrated",
            note="trivial windings but a commutator word; grading sweeps two turns",
        ),
        Scenario(
            name="straight-chord",
            config=_three_center_config(),
            curve=chord,
            thomas_label="stable",
            flow_label="stable",
            note="already a segment; the flow converges at time zero",
        ),
        Scenario(
            name="winding-base",
            config=seidel_config(),
            curve=seidel_arc(1),
            thomas_label="unstable",
            flow_label="unstable",
            note="base member of the winding comparison family",
        ),
    ]


def collision_case() -> tuple[MonopoleConfig, PolyCurve]:
    """The near-collision scenario as a (config, curve) pair for flow runs."""
    row = stability_scenarios()[2]
    return row.config, row.curve


# -- named lookup for manifests -----------------------------------------------------


def gallery_case(name: str) -> tuple[MonopoleConfig, PolyCurve]:
    """Resolve a case name to a (config, curve) pair.

    Scenario names from the stability table are accepted alongside the
    standalone cases.
    """
    factories = {
        "clifford-flat": lambda: clifford_case(0.0),
        "clifford-taub-nut": lambda: clifford_case(1.0),
        "stable-arc": stable_arc_case,
        "shrinking-loop": shrinking_loop_case,
        "collision-arc": collision_case,
        "phase-chain": jordan_holder_case,
    }
    if name in factories:
        return factories[name]()
    for row in stability_scenarios():
        if row.name == name:
            return row.config, row.curve
    raise KeyError(f"unknown gallery case: {name!r}")


def gallery_names() -> list[str]:
    names = [
        "clifford-flat",
        "clifford-taub-nut",
        "stable-arc",
        "shrinking-loop",
        "collision-arc",
        "phase-chain",
    ]
    return names + [row.name for row in stability_scenarios()]
