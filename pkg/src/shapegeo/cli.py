"""Command-line surface: lift curves, measure distances, emit geodesic
strips, evaluate curvature reports and integrate the geodesic flow.

Exit codes: 0 success, 1 usage or input error, 2 the lift touches the
degenerate set (warning), 3 singular input (round circle), 4 the integrated
trajectory left the immersions (partial output written).
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io as sio
from . import svg as ssvg
from .curves import CLOSED, PlaneCurve, normalize, resample_by_arclength
from .dynamics import integrate_geodesic, momenta
from .errors import BadSetReached, CircleSingular, ShapeGeoError
from .geodesy import (
    align_rotations,
    distance_closed_mod_rot,
    distance_open,
    example_bifurcation_family,
    example_great_circle_sweep,
    great_circle,
    neretin_path,
)
from .io import RunConfig
from .lift import apply_phi, lift_curve, zero_set
from .matching import dp_match, dp_match_closed, upper_bound_pipeline


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(1)


def _prep(curve: PlaneCurve, n: int) -> PlaneCurve:
    return normalize(resample_by_arclength(normalize(curve), n))


def _load_config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    if getattr(args, "n", None):
        cfg.n = args.n
    if getattr(args, "frames", None):
        cfg.frames = args.frames
    return cfg


def cmd_lift(args) -> int:
    cfg = _load_config(args)
    curve = sio.read_curve(args.curve)
    curve = normalize(curve)
    pair = lift_curve(curve, eps_speed=0.0)
    report = zero_set(pair, eps=cfg.eps_zero)
    out = args.output or Path(args.curve).with_suffix(".lift.json")
    sio.write_lift(out, pair, report)
    print(f"wrote {out} (parity {pair.parity}, zero nodes: {len(report.zero_nodes)})")
    return 2 if report.crosses_bad_set else 0


def cmd_dist(args) -> int:
    cfg = _load_config(args)
    c0 = sio.read_curve(args.curve0)
    c1 = sio.read_curve(args.curve1)
    if c0.topology != c1.topology:
        raise ShapeGeoError("topology mismatch between inputs")
    closed = args.closed or c0.topology == CLOSED
    c0, c1 = _prep(c0, cfg.n), _prep(c1, cfg.n)
    report = {"config": cfg.to_dict()}
    if closed:
        report["d"] = great_circle(lift_curve(c0), lift_curve(c1)).angle
        report["d_mod_rot"] = distance_closed_mod_rot(c0, c1)
    else:
        report["d"] = distance_open(c0, c1, mod_rotation=False)
        report["d_mod_rot"] = distance_open(c0, c1, mod_rotation=True)
    if args.elastic:
        if closed:
            match = dp_match_closed(
                c0, c1, n_offsets=cfg.n_offsets, n_rot=cfg.n_rot, n_segments=cfg.n_segments
            )
            bounds = upper_bound_pipeline(c0, c1, match)
            elastic = {
                "lower": bounds.lower,
                "upper": bounds.upper,
                "gap": bounds.gap,
                "degenerate_map": bounds.degenerate,
            }
        else:
            match = dp_match(
                c0, c1, mod_rotation=args.mod_rot, n_rot=cfg.n_rot, n_segments=cfg.n_segments
            )
            elastic = {"lower": match.lower_bound_distance}
        du = np.diff(match.map.breakpoints[0])
        dphi = np.diff(match.map.breakpoints[1])
        elastic.update(
            {
                "u_value": match.u_value,
                "rotation": match.rotation,
                "offset": match.map.offset,
                "breakpoints": match.map.breakpoints.T,
                "map_summary": {
                    "corners": match.map.breakpoints.shape[1],
                    "flat_segments": int(np.sum((dphi <= 1e-12) & (du > 0))),
                    "flat_mass": float(np.sum(du[dphi <= 1e-12])),
                    "jumps": int(np.sum((du <= 1e-12) & (dphi > 0))),
                },
            }
        )
        report["elastic"] = elastic
    text = json.dumps(sio.jsonable(report), indent=1)
    if args.output:
        Path(args.output).write_text(text + "\n")
        print(f"wrote {args.output}")
    else:
        print(text)
    return 0


def _emit_strip(prefix, name, times, curves, flagged=None):
    base = Path(f"{prefix}_{name}")
    sio.write_path(base.with_suffix(".json"), times, curves)
    ssvg.render_strip(curves, base.with_suffix(".svg"), flagged)
    print(f"wrote {base.with_suffix('.json')} and {base.with_suffix('.svg')}")


def cmd_geodesic(args) -> int:
    cfg = _load_config(args)
    prefix = args.output or "geodesic"
    if args.example:
        if args.example == "fig1":
            s_vals = np.linspace(-1.0, 1.0, cfg.frames if cfg.frames % 2 else cfg.frames + 1)
            pairs, curves = example_bifurcation_family(cfg.n + 1, s_vals)
            flagged = [zero_set(p).crosses_bad_set for p in pairs]
            _emit_strip(prefix, "fig1", s_vals, curves, flagged)
        elif args.example == "fig3":
            sweep = example_great_circle_sweep(cfg.n, cfg.frames if cfg.frames > 8 else 33)
            flagged = []
            for tau in sweep.taus:
                flagged.append(
                    any(abs(tau - c.tau) <= (sweep.taus[1] - sweep.taus[0]) / 2 for c in sweep.crossings)
                )
            _emit_strip(prefix, "fig3", sweep.taus, sweep.curves, flagged)
            print(
                "bad-set crossings:",
                [(round(c.tau, 6), len(c.zero_nodes)) for c in sweep.crossings],
            )
        else:
            raise ShapeGeoError(f"unknown example {args.example!r}")
        return 0

    c0 = sio.read_curve(args.curve0)
    c1 = sio.read_curve(args.curve1)
    if c0.topology != c1.topology:
        raise ShapeGeoError("topology mismatch between inputs")
    closed = c0.topology == CLOSED
    c0, c1 = _prep(c0, cfg.n), _prep(c1, cfg.n)
    times = np.linspace(0.0, 1.0, cfg.frames)
    gc = great_circle(lift_curve(c0), lift_curve(c1))
    gc_curves = [apply_phi(gc.evaluate(t)) for t in times]
    flagged = [zero_set(gc.evaluate(t)).crosses_bad_set for t in times]
    _emit_strip(prefix, "great_circle", times, gc_curves, flagged)
    if closed:
        path = neretin_path(align_rotations(c0, c1))
        ner_curves = [apply_phi(path.evaluate(t)) for t in times]
        _emit_strip(prefix, "neretin", times, ner_curves)
    return 0


def cmd_curvature(args) -> int:
    from .curvature import (
        TangentPair,
        build_ltop,
        curvature_grassmann,
        curvature_immersion,
        curvature_stiefel,
        curvature_upper_bound,
        horizontal_project,
        ltop_eigen_floor,
        oneill_correction,
    )
    from .curves import metric_inner
    from .lift import pushforward

    cfg = _load_config(args)
    curve = _prep(sio.read_curve(args.curve), cfg.n)
    op = build_ltop(curve)
    arc = op.arc
    if args.direction and len(args.direction) >= 2:
        h1 = sio.read_tangent_field(args.direction[0])
        h2 = sio.read_tangent_field(args.direction[1])
    else:
        rng = np.random.default_rng(cfg.seed)
        th = curve.theta
        h1 = sum(
            rng.standard_normal() * np.exp(1j * k * th) + rng.standard_normal() * np.exp(-1j * k * th)
            for k in range(1, 5)
        )
        h2 = sum(
            rng.standard_normal() * np.exp(1j * k * th) + rng.standard_normal() * np.exp(-1j * k * th)
            for k in range(1, 5)
        )
    h1 = horizontal_project(curve, h1 - h1[0], op)
    h2 = horizontal_project(curve, h2 - h2[0], op)
    h1 = h1 / np.sqrt(metric_inner(arc, h1, h1))
    h2 = h2 - metric_inner(arc, h2, h1) * h1
    h2 = h2 / np.sqrt(metric_inner(arc, h2, h2))

    pair = lift_curve(curve)
    d1 = pushforward(curve, pair, h1)
    d2 = pushforward(curve, pair, h2)
    tp = TangentPair(pair, d1.real, d1.imag, d2.real, d2.imag)
    k_imm = curvature_immersion(curve, h1, h2, "sim", check=False)
    rho = oneill_correction(curve, h1, h2, "sim", op=op)
    report = {
        "config": cfg.to_dict(),
        "k_gr": curvature_grassmann(tp, check=False),
        "k_st": curvature_stiefel(tp, check=False),
        "k_imm_sim": k_imm,
        "rho": rho,
        "k_b_sim": k_imm + rho,
        "upper_bound": curvature_upper_bound(curve, h2),
        "ltop_floor": ltop_eigen_floor(op),
    }
    text = json.dumps(sio.jsonable(report), indent=1)
    if args.output:
        Path(args.output).write_text(text + "\n")
        print(f"wrote {args.output}")
    else:
        print(text)
    return 0


def cmd_integrate(args) -> int:
    cfg = _load_config(args)
    curve = normalize(sio.read_curve(args.curve))
    v0 = sio.read_tangent_field(args.velocity)
    prefix = args.output or "trajectory"
    code = 0
    try:
        states = integrate_geodesic(
            curve, v0, t_final=args.T, steps=args.steps, eps_speed=cfg.eps_speed
        )
    except BadSetReached as ex:
        states = ex.states
        print(f"bad set reached: {ex}")
        code = 4
    rows = [(s.t, momenta(s)) for s in states]
    sio.write_trajectory(prefix, states, rows)
    print(f"wrote {prefix}.json and {prefix}.csv ({len(states)} states)")
    return code


def build_parser() -> _Parser:
    parser = _Parser(prog="shapegeo", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="RunConfig JSON file")
        p.add_argument("-n", type=int, default=None, help="resample count")
        p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("lift", help="lift a curve to its square-root pair")
    p.add_argument("curve")
    common(p)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("dist", help="distances between two curves")
    p.add_argument("curve0")
    p.add_argument("curve1")
    p.add_argument("--mod-rot", action="store_true")
    p.add_argument("--elastic", action="store_true")
    p.add_argument("--closed", action="store_true")
    common(p)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("geodesic", help="emit geodesic evolutions as JSON + SVG")
    p.add_argument("curve0", nargs="?")
    p.add_argument("curve1", nargs="?")
    p.add_argument("--frames", type=int, default=None)
    p.add_argument("--example", choices=["fig1", "fig3"], default=None)
    common(p)
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("curvature", help="sectional curvature report at a curve")
    p.add_argument("curve")
    p.add_argument("-d", "--direction", action="append", default=[])
    common(p)
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("integrate", help="integrate the geodesic flow")
    p.add_argument("curve")
    p.add_argument("velocity")
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=200)
    common(p)
    p.set_defaults(func=cmd_integrate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", "") == "geodesic" and not args.example:
        if not (args.curve0 and args.curve1):
            parser.error("geodesic needs two curve files or --example")
    try:
        return args.func(args)
    except CircleSingular as ex:
        print(f"singular input: {ex}", file=sys.stderr)
        return 3
    except ShapeGeoError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
