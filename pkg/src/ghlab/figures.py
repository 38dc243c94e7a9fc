"""SVG figures for the report paths.

Rendering is pinned to the Agg backend with a fixed hash salt and no
date metadata, so the emitted SVG bytes depend only on the data.
"""

from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg", force=True)

import matplotlib.pyplot as plt
import numpy as np

from .errors import GHLabError
from .serialize import atomic_write_bytes

matplotlib.rcParams.update(
    {
        "svg.hashsalt": "gh-lab",
        "figure.dpi": 100,
        "savefig.dpi": 100,
        "font.size": 9,
        "axes.titlesize": 9,
        "axes.labelsize": 8,
    }
)


def save_svg(fig, path) -> None:
    buf = io.BytesIO()
    fig.savefig(buf, format="svg", metadata={"Date": None}, bbox_inches="tight")
    plt.close(fig)
    atomic_write_bytes(path, buf.getvalue())


def _draw_centers(ax, points2d, charges=None):
    pts = np.asarray(points2d, dtype=float)
    ax.scatter(pts[:, 0], pts[:, 1], marker="x", color="black", zorder=5, s=30)
    if charges is not None:
        for p, c in zip(pts, charges):
            ax.annotate(str(int(c)), p, textcoords="offset points", xytext=(4, 4))


def figure_critical_points(config, records):
    fig, ax = plt.subplots(figsize=(5, 4))
    centers = np.asarray(config.centers, dtype=float)
    _draw_centers(ax, centers[:, :2], config.charges)
    if records:
        pts = np.array([r.location for r in records])
        idx = np.array([r.morse_index for r in records])
        for m in sorted(set(idx)):
            sel = idx == m
            ax.scatter(
                pts[sel, 0], pts[sel, 1], s=40, label=f"index {m}", zorder=6
            )
        ax.legend(loc="best")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title("critical points of the potential (xy projection)")
    ax.set_aspect("equal")
    return fig


def figure_orbit_flow(result):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    radii = np.linalg.norm(result.points, axis=-1)
    ax.plot(result.times, radii, label="|x|")
    ax.plot(
        result.times, result.potentials ** -0.5, label="fiber length", linestyle="--"
    )
    ax.set_xlabel("time")
    ax.set_ylabel("length")
    ax.set_title(f"orbit flow ({result.termination})")
    ax.legend(loc="best")
    return fig


def figure_phase_portrait(config, data, plane=None):
    fig, ax = plt.subplots(figsize=(5, 4.5))
    uu, ww = np.meshgrid(data["axis_u"], data["axis_w"], indexing="ij")
    fu = np.where(data["singular"], np.nan, data["field_u"])
    fw = np.where(data["singular"], np.nan, data["field_w"])
    ax.quiver(uu, ww, fu, fw, data["speed"], angles="xy", width=0.003)
    if plane is not None:
        in_plane = [
            plane.to_plane(c)
            for c in config.centers
            if abs(plane.offset_of(c)) < 1e-9
        ]
        if in_plane:
            _draw_centers(ax, np.array(in_plane))
        # rest points of the field, marked as open circles
        from .orbits import find_critical_points

        try:
            records = find_critical_points(config)
        except GHLabError:
            records = []
        rest = [
            plane.to_plane(r.location)
            for r in records
            if abs(plane.offset_of(r.location)) < 1e-9
        ]
        if rest:
            pts = np.array(rest)
            ax.scatter(
                pts[:, 0],
                pts[:, 1],
                marker="o",
                facecolors="none",
                edgecolors="crimson",
                s=45,
                zorder=6,
            )
    ax.set_xlabel("u")
    ax.set_ylabel("w")
    ax.set_title("fiber-length flow field")
    ax.set_aspect("equal")
    return fig


def figure_flow_trace(config, trace):
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(9, 3.8))
    n = len(trace.curves)
    for i, curve in enumerate(trace.curves):
        frac = i / max(n - 1, 1)
        nodes = curve.nodes
        if curve.closed:
            nodes = np.concatenate([nodes, nodes[:1]])
        ax0.plot(
            nodes[:, 0],
            nodes[:, 1],
            color=plt.cm.viridis(frac),
            linewidth=1.0 if i in (0, n - 1) else 0.6,
        )
    in_plane = [
        trace.curves[0].plane.to_plane(c)
        for c in config.centers
        if abs(trace.curves[0].plane.offset_of(c)) < 1e-9
    ]
    if in_plane:
        _draw_centers(ax0, np.array(in_plane))
    ax0.set_aspect("equal")
    ax0.set_title(f"snapshots ({trace.termination})")
    ax1.plot(trace.times, trace.lengths)
    ax1.set_xlabel("time")
    ax1.set_ylabel("curve length")
    ax1.set_title("length decay")
    return fig


def figure_case(config, curve, title):
    """A single curve with the in-plane centers, for event reports."""
    fig, ax = plt.subplots(figsize=(5, 4))
    nodes = curve.nodes
    if curve.closed:
        nodes = np.concatenate([nodes, nodes[:1]])
    ax.plot(nodes[:, 0], nodes[:, 1], linewidth=1.0)
    pts = [
        curve.plane.to_plane(c)
        for c in config.centers
        if abs(curve.plane.offset_of(c)) < 1e-9
    ]
    if pts:
        _draw_centers(ax, np.array(pts))
    ax.set_aspect("equal")
    ax.set_title(title)
    return fig


def figure_stability(rows, verdicts):
    cols = 3
    # an empty scenario list still yields a valid blank canvas
    rows_n = max((len(rows) + cols - 1) // cols, 1)
    fig, axes = plt.subplots(
        rows_n, cols, figsize=(3.2 * cols, 2.8 * rows_n), squeeze=False
    )
    for ax in axes.flat:
        ax.set_axis_off()
    for k, (row, verdict) in enumerate(zip(rows, verdicts)):
        ax = axes[k // cols][k % cols]
        ax.set_axis_on()
        nodes = row.curve.nodes
        ax.plot(nodes[:, 0], nodes[:, 1], linewidth=1.0)
        pts = [
            row.curve.plane.to_plane(c)
            for c in row.config.centers
            if abs(row.curve.plane.offset_of(c)) < 1e-9
        ]
        if pts:
            _draw_centers(ax, np.array(pts))
        ax.set_title(f"{row.name}\nword: {verdict[0]}, flow: {verdict[1]}")
        ax.set_aspect("equal")
    return fig


def figure_phase_chain(config, curve, chain):
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(curve.nodes[:, 0], curve.nodes[:, 1], linewidth=1.2, label="curve")
    ax.plot(
        [curve.nodes[0, 0], curve.nodes[-1, 0]],
        [curve.nodes[0, 1], curve.nodes[-1, 1]],
        color="gray",
        linestyle="--",
        linewidth=1.0,
        label="chord",
    )
    pts = [curve.plane.to_plane(c) for c in config.centers]
    _draw_centers(ax, np.array(pts), config.charges)
    for k, ((a, b), phase) in enumerate(zip(chain["facets"], chain["phases"])):
        ax.plot(
            [a[0], b[0]],
            [a[1], b[1]],
            color="crimson",
            linewidth=1.5,
            label="facets" if k == 0 else None,
        )
        mid = 0.5 * (a + b)
        ax.annotate(
            f"{phase:+.3f}", mid, textcoords="offset points", xytext=(3, 3)
        )
    ax.set_aspect("equal")
    ax.set_title("phase chain facets")
    ax.legend(loc="best")
    return fig


def figure_curvature(split, certificate):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(split["mu3"], split["K"], label="K", linewidth=1.5)
    ax.plot(split["mu3"], split["M"], label="M", linestyle="--")
    ax.plot(split["mu3"], split["N"], label="N", linestyle=":")
    ax.axhline(0.0, color="gray", linewidth=0.5)
    met = "met" if certificate["hypothesis_met"] else "not met"
    ax.set_title(f"chord sphere curvature (far-field hypothesis {met})")
    ax.set_xlabel("chord coordinate")
    ax.set_ylabel("curvature")
    ax.legend(loc="best")
    return fig


def figure_hessian_check(closed, approx):
    fig, axes = plt.subplots(1, 2, figsize=(7, 3))
    err = np.abs(closed - approx)
    for ax, (mat, title) in zip(
        axes, [(closed, "closed form"), (err, "abs difference")]
    ):
        im = ax.imshow(mat, cmap="viridis")
        ax.set_title(title)
        ax.set_xticks(range(4))
        ax.set_yticks(range(4))
        fig.colorbar(im, ax=ax, shrink=0.8)
    return fig
