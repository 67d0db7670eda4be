"""Command-line interface: planning, reports, certificates, export, checks.

All output is JSON lines (or SVG/OBJ files); exit codes are 0 for success,
1 for a failed check, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import List, Optional, Sequence

import numpy as np

from . import curves as cv
from . import family as fam
from .dubins import PlanarPose, plan_dubins_2d, word_candidates
from .export import TubeMeshSpec, export_obj, export_svg
from .oracle import (BOUND_FACTOR, ControlGrid, brute_force_shortest,
                     forbidden_region_search, random_planar_instances)
from .regions import RegionConfig, certify_unlink, region_membership
from .thickness import (InfeasibleThickness, ribbonlength, ropelength,
                        thickness_radius)

REPRODUCE_NAMES = ("mingords", "family-table", "dubins-check", "region-check")


def _load_curve(path: str) -> cv.PiecewiseCurve:
    with open(path) as fh:
        return cv.from_json_dict(json.load(fh))


def _load_link(path: str) -> List[cv.PiecewiseCurve]:
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, list):
        return [cv.from_json_dict(d) for d in data]
    if "components" in data:
        return [cv.from_json_dict(d) for d in data["components"]]
    return [cv.from_json_dict(data)]


def _save_curve(curve: cv.PiecewiseCurve, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(cv.to_json_dict(curve), fh)
        fh.write("\n")


def _parse_pose(text: str) -> PlanarPose:
    parts = [float(x) for x in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("pose must be x,y,theta")
    return PlanarPose((parts[0], parts[1]), parts[2])


def _parse_point(text: str) -> np.ndarray:
    parts = [float(x) for x in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("point must be x,y,z")
    return np.array(parts)


def _emit(obj) -> None:
    print(json.dumps(obj))


# ---------------------------------------------------------------------------
# subcommands


def _cmd_dubins(args) -> int:
    if args.all_words:
        for cand in word_candidates(args.start, args.goal, args.kappa):
            _emit({"word": cand.word, "params": list(cand.piece_params),
                   "length": cand.total_length,
                   "candidate_only": cand.candidate_only})
        return 0
    path = plan_dubins_2d(args.start, args.goal, args.kappa)
    _emit({"word": path.word, "params": list(path.piece_params),
           "length": path.total_length})
    return 0


def _cmd_thickness(args) -> int:
    report = thickness_radius(_load_curve(args.curve))
    _emit(report.to_dict())
    return 0


def _cmd_ropelength(args) -> int:
    link = _load_link(args.link)
    try:
        report = ropelength(link, args.thickness, strict=args.strict,
                            enforce_thin_range=not args.any_thickness)
    except (InfeasibleThickness, ValueError) as exc:
        _emit({"error": str(exc)})
        return 1
    _emit(report.to_dict())
    return 0


def _cmd_ribbonlength(args) -> int:
    value = ribbonlength(_load_curve(args.curve), args.width)
    _emit({"ribbonlength": value, "width": args.width})
    return 0


def _cmd_certify(args) -> int:
    gamma = _load_curve(args.gamma)
    beta = _load_curve(args.beta)
    cert = certify_unlink(gamma, beta, fam.PLANE_POINT, fam.PLANE_NORMAL, args.tau)
    _emit(cert.to_dict())
    return 0 if cert.passed else 1


def _cmd_region(args) -> int:
    with open(args.config) as fh:
        config = RegionConfig.from_dict(json.load(fh))
    member = region_membership(args.point, config, args.which)
    _emit({"point": list(args.point), "region": args.which, "member": member})
    return 0


def _cmd_family(args) -> int:
    if args.table is not None:
        taus = [float(t) for t in args.table.split(",") if t]
        rows = fam.family_table(taus)
        if args.csv:
            header = "tau,thickness,len_gamma,len_beta,rop,certificate_pass"
            out_lines = [header]
            for r in rows:
                out_lines.append(
                    f"{r.tau:.12g},{r.thickness:.12g},{r.len_gamma:.12g},"
                    f"{r.len_beta:.12g},{r.rop:.12g},{r.certificate_pass}")
            text = "\n".join(out_lines) + "\n"
            if args.out:
                with open(args.out, "w") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
        else:
            for r in rows:
                _emit(r.to_dict())
        return 0
    if args.tau is None:
        print("family: either --tau or --table is required", file=sys.stderr)
        return 2
    member = fam.build_member(args.tau)
    outdir = args.out or "."
    import os
    os.makedirs(outdir, exist_ok=True)
    if args.emit in ("gamma", "both"):
        _save_curve(member.gamma, os.path.join(outdir, f"gamma_tau{args.tau:g}.json"))
    if args.emit in ("beta", "both"):
        _save_curve(member.beta, os.path.join(outdir, f"beta_tau{args.tau:g}.json"))
    _emit({"tau": member.params.tau, "thickness": member.params.thickness,
           "len_gamma": member.len_gamma, "len_beta": member.len_beta,
           "rop": member.rop, "certificate_pass": member.certificate.passed})
    return 0


def _cmd_verify(args) -> int:
    if args.what == "dubins":
        instances = random_planar_instances(args.trials, args.seed)
        violations = 0
        for start, goal in instances:
            plan = plan_dubins_2d(start, goal, 1.0)
            margin = BOUND_FACTOR * plan.total_length + 0.3
            n = int((plan.total_length + margin) / args.step) + 2
            res = brute_force_shortest(start, goal, 1.0,
                                       ControlGrid(n, step_length=args.step))
            if abs(res.length - plan.total_length) > res.bound:
                violations += 1
        _emit({"instances": args.trials, "violations": violations,
               "step": args.step, "seed": args.seed})
        return 0 if violations == 0 else 1
    # regions
    if args.config:
        with open(args.config) as fh:
            config = RegionConfig.from_dict(json.load(fh))
    else:
        config = canonical_config()
    report = forbidden_region_search(config, args.region, args.trials, args.seed)
    _emit(report.to_dict())
    return 0 if report.hits == 0 else 1


def _cmd_export(args) -> int:
    if args.what == "svg":
        curves = [_load_curve(p) for p in args.files]
        export_svg(curves, args.plane, args.out)
    else:
        curve = _load_curve(args.files[0])
        spec = TubeMeshSpec(radial_segments=args.radial_segments,
                            axial_samples_per_unit_length=args.axial_density,
                            tube_radius=args.radius)
        export_obj(curve, spec, args.out, strict=args.strict)
    _emit({"written": args.out})
    return 0


def canonical_config() -> RegionConfig:
    h = math.sqrt(3.0) / 2.0
    return RegionConfig((0.0, 0.0, h), (0.0, 0.0, -h), 1.0, 0.0)


# ---------------------------------------------------------------------------
# reproduce pipelines


def _row(name: str, reference: float, computed: float, tol: float) -> dict:
    return {"name": name, "reference": reference, "computed": computed,
            "tolerance": tol, "pass": abs(computed - reference) <= tol}


def reproduce(name: str, trials: Optional[int] = None, seed: int = 7,
              step: float = 0.05):
    """Run a named verification pipeline; returns (exit_code, report)."""
    if name == "mingords":
        member = fam.build_member(0.5)
        half = plan_dubins_2d(PlanarPose((0.0, 0.0), math.pi / 2),
                              PlanarPose((-1.0, 0.0), -math.pi / 2), 1.0)
        rows = [
            _row("ccc_half_length", 6.0325, half.total_length, 1e-3),
            _row("gamma_length", 12.0650, member.len_gamma, 1e-3),
            _row("beta_length", 8.2831, member.len_beta, 1e-3),
            _row("ropelength", 20.3481, member.rop, 1e-3),
        ]
        rows.append({"name": "certificate", "pass": member.certificate.passed})
    elif name == "family-table":
        taus = (0.5, 0.75, 0.95)
        rows = []
        for tau, thick in zip(taus, (1.0, 1.5, 1.9)):
            member = fam.build_member(tau)
            rows.append(_row(f"thickness_tau_{tau:g}", thick,
                             member.params.thickness, 1e-12))
            rows.append(_row(f"len_beta_tau_{tau:g}",
                             fam.beta_length_closed_form(tau), member.len_beta, 1e-9))
            rows.append(_row(f"len_gamma_tau_{tau:g}",
                             fam.gamma_length_closed_form(tau), member.len_gamma, 1e-9))
            rows.append({"name": f"certificate_tau_{tau:g}",
                         "pass": member.certificate.passed})
    elif name == "dubins-check":
        n_inst = trials if trials is not None else 10
        rows = []
        for i, (start, goal) in enumerate(random_planar_instances(n_inst, seed)):
            plan = plan_dubins_2d(start, goal, 1.0)
            margin = BOUND_FACTOR * plan.total_length + 0.3
            n = int((plan.total_length + margin) / step) + 2
            res = brute_force_shortest(start, goal, 1.0,
                                       ControlGrid(n, step_length=step))
            rows.append(_row(f"instance_{i}", plan.total_length, res.length,
                             res.bound))
    elif name == "region-check":
        n_trials = trials if trials is not None else 2000
        config = canonical_config()
        rows = []
        for region in ("E", "K", "EK"):
            report = forbidden_region_search(config, region, n_trials, seed)
            rows.append(_row(f"hits_{region}", 0.0, float(report.hits), 0.0))
    else:
        raise ValueError(f"unknown report {name!r}; choose from {REPRODUCE_NAMES}")
    ok = all(r["pass"] for r in rows)
    return (0 if ok else 1), {"report": name, "pass": ok, "rows": rows}


def _cmd_reproduce(args) -> int:
    try:
        code, report = reproduce(args.name, trials=args.trials, seed=args.seed,
                                 step=args.step)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    for row in report["rows"]:
        _emit(row)
    _emit({"report": report["report"], "pass": report["pass"]})
    return code


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thinlinks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dubins", help="plan a planar shortest bounded-curvature path")
    p.add_argument("--start", type=_parse_pose, required=True)
    p.add_argument("--goal", type=_parse_pose, required=True)
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--all-words", action="store_true", dest="all_words")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_dubins)

    p = sub.add_parser("thickness", help="thickness report for a closed curve")
    p.add_argument("--curve", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_thickness)

    p = sub.add_parser("ropelength", help="ropelength of a link at a prescribed thickness")
    p.add_argument("--link", required=True)
    p.add_argument("--thickness", type=float, required=True)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--any-thickness", action="store_true", dest="any_thickness")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_ropelength)

    p = sub.add_parser("ribbonlength", help="ribbonlength of a planar curve")
    p.add_argument("--curve", required=True)
    p.add_argument("--width", type=float, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_ribbonlength)

    p = sub.add_parser("certify", help="gordian certificate for a gamma/beta pair")
    p.add_argument("--gamma", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("region", help="membership of a point in I, U, E, R or K")
    p.add_argument("--config", required=True)
    p.add_argument("--point", type=_parse_point, required=True)
    p.add_argument("--which", choices=("I", "U", "E", "R", "K"), required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_region)

    p = sub.add_parser("family", help="build family members or the summary table")
    p.add_argument("--tau", type=float)
    p.add_argument("--emit", choices=("gamma", "beta", "both"), default="both")
    p.add_argument("--table")
    p.add_argument("--csv", action="store_true")
    p.add_argument("--out")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_family)

    p = sub.add_parser("verify", help="run a brute-force verification harness")
    vsub = p.add_subparsers(dest="what", required=True)
    v = vsub.add_parser("dubins")
    v.add_argument("--trials", type=int, default=10)
    v.add_argument("--seed", type=int, default=7)
    v.add_argument("--step", type=float, default=0.05)
    v.set_defaults(func=_cmd_verify, what="dubins")
    v = vsub.add_parser("regions")
    v.add_argument("--config")
    v.add_argument("--region", choices=("E", "K", "EK"), required=True)
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--seed", type=int, default=7)
    v.set_defaults(func=_cmd_verify, what="regions")

    p = sub.add_parser("export", help="write SVG projections or OBJ tube meshes")
    esub = p.add_subparsers(dest="what", required=True)
    e = esub.add_parser("svg")
    e.add_argument("files", nargs="+")
    e.add_argument("--plane", choices=("xy", "xz", "yz"), default="xy")
    e.add_argument("--out", required=True)
    e.set_defaults(func=_cmd_export, what="svg")
    e = esub.add_parser("obj")
    e.add_argument("files", nargs=1)
    e.add_argument("--radius", type=float, required=True)
    e.add_argument("--radial-segments", type=int, default=16, dest="radial_segments")
    e.add_argument("--axial-density", type=float, default=8.0, dest="axial_density")
    e.add_argument("--strict", action="store_true")
    e.add_argument("--out", required=True)
    e.set_defaults(func=_cmd_export, what="obj")

    p = sub.add_parser("reproduce", help="run a named verification pipeline")
    p.add_argument("name")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_reproduce)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
