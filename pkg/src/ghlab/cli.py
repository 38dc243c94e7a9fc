"""Command line interface.

Every report subcommand writes unit-annotated CSV tables plus a JSON
summary into the output directory, and renders an SVG figure alongside.
Exit codes: 0 on success, 1 when a computation signals a domain error,
2 on usage errors.
"""

from __future__ import annotations

import argparse
import importlib.resources
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import figures, gallery, lagrangian, sphere
from .config import MonopoleConfig
from .curves import Plane, PolyCurve, first_crossing
from .errors import (
    CenterCollision,
    GHLabError,
    NotAlmostCalibrated,
    SelfIntersection,
    StepUnderflow,
)
from .flow import FlowControls, flow_curve
from .frame import connection_coefficients, invariant_hessian
from .orbitflow import orbit_flow, phase_portrait, reference_radial_solution
from .orbits import find_critical_points
from .potential import potential
from .serialize import write_csv, write_json

BUNDLED_MANIFESTS = ("paper-figures", "closed-forms")


# -- input resolution ---------------------------------------------------------------


def _data_path(relative: str):
    return importlib.resources.files("ghlab").joinpath("data", relative)


def load_config(ref: str) -> MonopoleConfig:
    """Resolve a configuration reference.

    "gallery:<name>" takes the configuration of a curated case,
    "data:<name>" a configuration bundled with the package, and
    anything else is a JSON file path.
    """
    if ref.startswith("gallery:"):
        config, _ = gallery.gallery_case(ref[len("gallery:"):])
        return config
    if ref.startswith("data:"):
        name = ref[len("data:"):]
        text = _data_path(f"configs/{name}.json").read_text(encoding="utf-8")
        return MonopoleConfig.from_json(text)
    return MonopoleConfig.from_file(ref)


def load_case(ref: str) -> tuple[MonopoleConfig, PolyCurve]:
    """Resolve a (configuration, curve) case reference.

    "gallery:<name>" is a curated case; otherwise the reference is a
    path to a JSON object with "config" and "curve" entries.
    """
    if ref.startswith("gallery:"):
        return gallery.gallery_case(ref[len("gallery:"):])
    with open(ref, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return (
        MonopoleConfig.from_dict(data["config"]),
        PolyCurve.from_dict(data["curve"]),
    )


def _outdir(args) -> str:
    os.makedirs(args.out, exist_ok=True)
    return args.out


# -- subcommands --------------------------------------------------------------------


def cmd_orbits(args) -> int:
    config = load_config(args.config)
    records = find_critical_points(config, grid_density=args.grid_density)
    out = _outdir(args)
    rows = []
    for k, rec in enumerate(records):
        rows.append(
            [
                k,
                rec.location[0],
                rec.location[1],
                rec.location[2],
                rec.potential_value,
                rec.fiber_length,
                rec.morse_index,
                rec.gradient_norm,
            ]
        )
    write_csv(
        os.path.join(out, "orbits.csv"),
        [
            "critical_point [1]",
            "x [length]",
            "y [length]",
            "z [length]",
            "potential [1/length]",
            "fiber_length [length^(1/2)]",
            "morse_index [1]",
            "gradient_norm [1/length^2]",
        ],
        rows,
        precision=args.precision,
    )
    counts = {
        "count": len(records),
        "index_counts": {
            str(m): sum(1 for r in records if r.morse_index == m)
            for m in sorted({r.morse_index for r in records})
        },
    }
    write_json(os.path.join(out, "orbits.json"), counts)
    figures.save_svg(
        figures.figure_critical_points(config, records),
        os.path.join(out, "orbits.svg"),
    )
    return 0


def cmd_orbit_flow(args) -> int:
    config = load_config(args.config)
    result = orbit_flow(
        config, np.asarray(args.start, dtype=float), t_max=args.t_end
    )
    out = _outdir(args)
    radii = np.linalg.norm(result.points, axis=-1)
    rows = [
        [t, p[0], p[1], p[2], r, v, v ** -0.5]
        for t, p, r, v in zip(result.times, result.points, radii, result.potentials)
    ]
    write_csv(
        os.path.join(out, "orbit_flow.csv"),
        [
            "time [length^2]",
            "x [length]",
            "y [length]",
            "z [length]",
            "radius [length]",
            "potential [1/length]",
            "fiber_length [length^(1/2)]",
        ],
        rows,
        precision=args.precision,
    )
    summary = {
        "termination": result.termination,
        "center_index": result.center_index,
        "accepted_steps": result.accepted_steps,
        "rejected_steps": result.rejected_steps,
        "final_time": float(result.times[-1]),
        "final_radius": float(radii[-1]),
    }
    if config.center_count == 1 and not config.periodic:
        # single-center decay has a closed form; report the defect
        gaps = np.linalg.norm(
            result.points - np.asarray(config.centers[0]), axis=-1
        )
        reference = reference_radial_solution(
            config.mass, float(gaps[0]), result.times
        )
        summary["reference_max_error"] = float(np.max(np.abs(gaps - reference)))
    write_json(os.path.join(out, "orbit_flow.json"), summary)
    figures.save_svg(
        figures.figure_orbit_flow(result), os.path.join(out, "orbit_flow.svg")
    )
    return 0


def cmd_portrait(args) -> int:
    config = load_config(args.config)
    plane = Plane.coordinate(origin=tuple(args.origin))
    lo, hi = args.window
    data = phase_portrait(
        config,
        plane,
        u_range=(lo, hi),
        w_range=(lo, hi),
        density=args.density,
    )
    out = _outdir(args)
    rows = []
    for i, a in enumerate(data["axis_u"]):
        for j, b in enumerate(data["axis_w"]):
            rows.append(
                [
                    a,
                    b,
                    data["field_u"][i, j],
                    data["field_w"][i, j],
                    data["speed"][i, j],
                    bool(data["singular"][i, j]),
                ]
            )
    write_csv(
        os.path.join(out, "portrait.csv"),
        [
            "u [length]",
            "w [length]",
            "velocity_u [1/length]",
            "velocity_w [1/length]",
            "speed [1/length]",
            "singular [1]",
        ],
        rows,
        precision=args.precision,
    )
    figures.save_svg(
        figures.figure_phase_portrait(config, data, plane),
        os.path.join(out, "portrait.svg"),
    )
    return 0


def cmd_flow(args) -> int:
    config, curve = load_case(args.case)
    if args.nodes is not None:
        curve = curve.resample(args.nodes)
    controls = FlowControls(
        cfl=args.cfl,
        checkpoint_dt=args.checkpoint_dt,
        t_max=args.t_max,
    )
    out = _outdir(args)
    try:
        trace = flow_curve(config, curve, controls, raise_on_crossing=False)
    except (CenterCollision, StepUnderflow) as event:
        detail = {
            "termination": type(event).__name__,
            "message": str(event),
            "time": getattr(event, "time", None),
        }
        if isinstance(event, CenterCollision):
            detail.update(
                node_index=event.node_index,
                center_index=event.center_index,
                distance=event.distance,
            )
        write_json(os.path.join(out, "flow_result.json"), detail)
        figures.save_svg(
            figures.figure_case(
                config, curve, f"initial curve ({type(event).__name__})"
            ),
            os.path.join(out, "flow.svg"),
        )
        return 0
    rows = [
        [t, n, l, a, k, bc, bg, d, e]
        for t, n, l, a, k, bc, bg, d, e in zip(
            trace.times,
            [c.node_count for c in trace.curves],
            trace.lengths,
            trace.areas,
            trace.max_curvature,
            trace.blowup_curvature,
            trace.blowup_gradient,
            trace.min_center_distance,
            trace.embedded,
        )
    ]
    write_csv(
        os.path.join(out, "flow_trace.csv"),
        [
            "time [length^2]",
            "nodes [1]",
            "curve_length [length]",
            "surface_area [length^2]",
            "max_curvature [1/length]",
            "blowup_curvature [1/length^2]",
            "blowup_gradient [1/length^2]",
            "min_center_distance [length]",
            "embedded [1]",
        ],
        rows,
        precision=args.precision,
    )
    write_json(
        os.path.join(out, "flow_result.json"),
        {
            "termination": trace.termination,
            "termination_time": trace.termination_time,
            "steps": trace.steps,
            "checkpoints": len(trace.times),
            "final_length": trace.lengths[-1],
            "final_embedded": bool(trace.embedded[-1]),
        },
    )
    figures.save_svg(
        figures.figure_flow_trace(config, trace), os.path.join(out, "flow.svg")
    )
    return 0


def cmd_stability(args) -> int:
    rows = gallery.stability_scenarios()
    if args.scenario is not None:
        rows = [r for r in rows if r.name == args.scenario]
        if not rows:
            raise GHLabError(f"unknown scenario {args.scenario!r}")
    out = _outdir(args)
    table = []
    verdicts = []
    for row in rows:
        word_ok, word_witness = lagrangian.thomas_stable(
            row.config, row.curve, seed=args.seed
        )
        word_label = "stable" if word_ok else "unstable"
        try:
            flow_ok, flow_witness = lagrangian.flow_stable(
                row.config, row.curve, seed=args.seed
            )
            flow_label = "stable" if flow_ok else "unstable"
        except NotAlmostCalibrated:
            flow_label = "not_almost_calibrated"
            flow_witness = None
        verdicts.append((word_label, flow_label))
        table.append(
            [
                row.name,
                word_label,
                row.thomas_label,
                -1 if word_witness is None else word_witness,
                flow_label,
                row.flow_label,
                -1 if flow_witness is None else flow_witness,
                word_label == row.thomas_label and flow_label == row.flow_label,
            ]
        )
    write_csv(
        os.path.join(out, "stability.csv"),
        [
            "scenario [1]",
            "word_verdict [1]",
            "word_expected [1]",
            "word_witness_center [1]",
            "flow_verdict [1]",
            "flow_expected [1]",
            "flow_witness_center [1]",
            "matches [1]",
        ],
        table,
        precision=args.precision,
    )
    write_json(
        os.path.join(out, "stability.json"),
        {
            "scenarios": len(table),
            "all_match": all(r[-1] for r in table),
            "seed": args.seed,
        },
    )
    figures.save_svg(
        figures.figure_stability(rows, verdicts), os.path.join(out, "stability.svg")
    )
    return 0


def cmd_jordan_holder(args) -> int:
    config, curve = load_case(args.case)
    chain = lagrangian.jordan_holder(config, curve)
    out = _outdir(args)
    rows = [
        [k, a[0], a[1], b[0], b[1], phase]
        for k, ((a, b), phase) in enumerate(zip(chain["facets"], chain["phases"]))
    ]
    write_csv(
        os.path.join(out, "jordan_holder.csv"),
        [
            "facet [1]",
            "start_u [length]",
            "start_w [length]",
            "end_u [length]",
            "end_w [length]",
            "phase [rad]",
        ],
        rows,
        precision=args.precision,
    )
    write_json(
        os.path.join(out, "jordan_holder.json"),
        {
            "enclosed_centers": chain["enclosed"],
            "orientation": chain["orientation"],
            "facet_count": len(chain["facets"]),
        },
    )
    figures.save_svg(
        figures.figure_phase_chain(config, curve, chain),
        os.path.join(out, "jordan_holder.svg"),
    )
    return 0


def cmd_curvature(args) -> int:
    config = load_config(args.config)
    i, j = args.chord
    pi = np.asarray(config.centers[i], dtype=float)
    pj = np.asarray(config.centers[j], dtype=float)
    a = 0.5 * float(np.linalg.norm(pj - pi))
    mu3 = np.linspace(-a, a, args.samples)
    split = sphere.curvature_split(config, i, j, mu3)
    field = sphere.ambient_field(config, i, j, mu3)
    cert = sphere.positivity_certificate(config, i, j)
    total = sphere.gauss_bonnet_total(config, i, j)
    out = _outdir(args)
    rows = [
        [m, k, mm, nn, v, g, gb, s, sb]
        for m, k, mm, nn, v, g, gb, s, sb in zip(
            split["mu3"],
            split["K"],
            split["M"],
            split["N"],
            field["value"],
            field["grad"],
            field["grad_bound"],
            field["second_deriv"],
            field["second_deriv_bound"],
        )
    ]
    write_csv(
        os.path.join(out, "curvature.csv"),
        [
            "mu3 [length]",
            "gauss_curvature [1/length]",
            "cross_part [1/length]",
            "pair_part [1/length]",
            "ambient [1/length]",
            "ambient_grad [1/length^2]",
            "ambient_grad_bound [1/length^2]",
            "ambient_second [1/length^3]",
            "ambient_second_bound [1/length^3]",
        ],
        rows,
        precision=args.precision,
    )
    write_json(
        os.path.join(out, "curvature.json"),
        {
            "certificate": cert,
            "gauss_bonnet_total": total,
            "four_pi_defect": total - 4.0 * np.pi,
            "chord": [i, j],
            "half_length": a,
        },
    )
    figures.save_svg(
        figures.figure_curvature(split, cert), os.path.join(out, "curvature.svg")
    )
    return 0


def _frame_hessian_fd(config, point, step):
    """Difference route to the frame Hessian of the squared radius."""

    def components(y):
        comp = np.zeros(4)
        comp[1:] = potential(config, y) ** -0.5 * 2.0 * y
        return comp

    x = np.asarray(point, dtype=float)
    scale = potential(config, x) ** -0.5
    hess = np.zeros((4, 4))
    for a in range(1, 4):
        offset = np.zeros(3)
        offset[a - 1] = step
        hess[a] = scale * (
            (components(x + offset) - components(x - offset)) / (2.0 * step)
        )
    gamma = connection_coefficients(config, x)
    hess -= np.einsum("abc,c->ab", gamma, components(x))
    return hess


def cmd_hessian_check(args) -> int:
    config = load_config(args.config)
    point = np.asarray(args.point, dtype=float)
    closed = invariant_hessian(config, point, 2.0 * point, 2.0 * np.eye(3))
    approx = _frame_hessian_fd(config, point, args.step)
    out = _outdir(args)
    rows = []
    for a in range(4):
        for b in range(4):
            rows.append([a, b, closed[a, b], approx[a, b], abs(closed[a, b] - approx[a, b])])
    write_csv(
        os.path.join(out, "hessian_check.csv"),
        [
            "row [1]",
            "col [1]",
            "closed_form [1]",
            "difference_route [1]",
            "abs_error [1]",
        ],
        rows,
        precision=args.precision,
    )
    scale = float(np.max(np.abs(closed)))
    max_err = float(np.max(np.abs(closed - approx)))
    eigen = np.linalg.eigvalsh(0.5 * (closed + closed.T))
    write_json(
        os.path.join(out, "hessian_check.json"),
        {
            "max_abs_error": max_err,
            "max_rel_error": max_err / scale if scale > 0 else 0.0,
            "positive_definite": bool(np.all(eigen > 0.0)),
            "eigenvalues": eigen,
            "step": args.step,
        },
    )
    figures.save_svg(
        figures.figure_hessian_check(closed, approx),
        os.path.join(out, "hessian_check.svg"),
    )
    return 0


# -- manifests ----------------------------------------------------------------------


def _load_manifest(ref: str) -> dict:
    if ref in BUNDLED_MANIFESTS:
        name = ref.replace("-", "_")
        text = _data_path(f"manifests/{name}.json").read_text(encoding="utf-8")
        return json.loads(text)
    with open(ref, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _run_job(argv: list[str]) -> int:
    return main(argv)


def cmd_run(args) -> int:
    manifest = _load_manifest(args.manifest)
    jobs = manifest["jobs"]
    if not jobs:
        return 0
    out = _outdir(args)
    invocations = []
    for job in jobs:
        if job["command"] == "run":
            raise GHLabError("manifests cannot nest run jobs")
        argv = [
            "--out",
            os.path.join(out, job["name"]),
            "--seed",
            str(args.seed),
            "--precision",
            str(args.precision),
            job["command"],
            *job.get("args", []),
        ]
        invocations.append(argv)

    codes: list[int]
    started = time.monotonic()
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            codes = list(pool.map(_run_job, invocations))
    else:
        codes = [_run_job(argv) for argv in invocations]
    elapsed = time.monotonic() - started
    print(
        f"ran {len(jobs)} jobs in {elapsed:.1f}s with {args.jobs} worker(s)",
        file=sys.stderr,
    )

    rows = []
    for job, code in zip(jobs, codes):
        job_dir = os.path.join(out, job["name"])
        outputs = sorted(os.listdir(job_dir)) if os.path.isdir(job_dir) else []
        rows.append(
            [
                job["name"],
                job["command"],
                "ok" if code == 0 else "error",
                code,
                ";".join(outputs),
            ]
        )
    write_csv(
        os.path.join(out, "run_summary.csv"),
        ["job [1]", "command [1]", "status [1]", "exit_code [1]", "outputs [1]"],
        rows,
        precision=args.precision,
    )
    return 0 if all(c == 0 for c in codes) else 1


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gh-lab",
        description=(
            "Geodesics, curve flows, and curvature diagnostics on "
            "multi-center gravitational instantons."
        ),
    )
    parser.add_argument(
        "--out", default="gh-lab-out", help="output directory (default: gh-lab-out)"
    )
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    parser.add_argument(
        "--precision",
        type=int,
        default=17,
        help="significant digits for table floats (default: 17)",
    )
    parser.add_argument(
        "--jobs", type=int, default=1, help="parallel workers for manifest runs"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("orbits", help="critical points and their fiber orbits")
    p.add_argument("config", help="config: JSON path, data:<name>, or gallery:<name>")
    p.add_argument("--grid-density", type=int, default=25)
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("orbit-flow", help="integrate the fiber-length flow of a point")
    p.add_argument("config")
    p.add_argument("--start", type=float, nargs=3, required=True, metavar=("X", "Y", "Z"))
    p.add_argument("--t-end", type=float, default=1.0)
    p.set_defaults(func=cmd_orbit_flow)

    p = sub.add_parser("portrait", help="sample the flow field on a planar grid")
    p.add_argument("config")
    p.add_argument("--origin", type=float, nargs=3, default=(0.0, 0.0, 0.0))
    p.add_argument("--window", type=float, nargs=2, default=(-2.0, 2.0))
    p.add_argument("--density", type=int, default=21)
    p.set_defaults(func=cmd_portrait)

    p = sub.add_parser("flow", help="run the weighted curve-shortening flow")
    p.add_argument("case", help="case: JSON path or gallery:<name>")
    p.add_argument("--t-max", type=float, default=10.0)
    p.add_argument("--nodes", type=int, default=None)
    p.add_argument("--cfl", type=float, default=0.4)
    p.add_argument("--checkpoint-dt", type=float, default=0.05)
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("stability", help="evaluate the stability scenario table")
    p.add_argument("--scenario", default=None, help="restrict to one scenario name")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("jordan-holder", help="phase chain of a perfect-Morse arc")
    p.add_argument(
        "case", nargs="?", default="gallery:phase-chain",
        help="case (default: gallery:phase-chain)",
    )
    p.set_defaults(func=cmd_jordan_holder)

    p = sub.add_parser("curvature", help="Gauss curvature of a chord sphere")
    p.add_argument("config")
    p.add_argument("--chord", type=int, nargs=2, default=(0, 1), metavar=("I", "J"))
    p.add_argument("--samples", type=int, default=201)
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("hessian-check", help="frame Hessian against a difference route")
    p.add_argument("config")
    p.add_argument("--point", type=float, nargs=3, default=(1.2, 0.4, -0.3))
    p.add_argument("--step", type=float, default=1.0e-6)
    p.set_defaults(func=cmd_hessian_check)

    p = sub.add_parser("run", help="execute a manifest of report jobs")
    p.add_argument(
        "manifest",
        help="bundled manifest name (paper-figures, closed-forms) or JSON path",
    )
    p.set_defaults(func=cmd_run)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GHLabError as err:
        print(f"gh-lab: {type(err).__name__}: {err}", file=sys.stderr)
        return 1
    except (FileNotFoundError, KeyError, json.JSONDecodeError) as err:
        print(f"gh-lab: {type(err).__name__}: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
