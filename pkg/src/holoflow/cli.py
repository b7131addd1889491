"""Command-line interface.

Commands: potential, classify-cubic, bernoulli, cycles, flowstats,
portrait, verify. Complex scalars are written "re,im"; polynomials are
ascending coefficient lists whose entries are bare reals or "(re,im)"
pairs, e.g. "1,0,(0,1)" for 1 + i z^2. Exit codes: 0 success, 1 solver
error, 2 usage error. HOLOFLOW_TOL overrides the default tolerance.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import classify, flowstats, odeint, pwcycles, render
from .cpoly import CPoly
from .errors import CenterContinuum, ContinuumDetected, HoloflowError
from .potential import (
    SystemKind,
    SystemSpec,
    anti_holomorphic,
    build_potential,
    holomorphic,
)


def parse_complex(text):
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) != 2:
        raise ValueError(f"expected 're' or 're,im', got {text!r}")
    return complex(float(parts[0]), float(parts[1]))


def parse_coeffs(text):
    """Ascending coefficient list: entries are reals or (re,im) pairs."""
    entries = []
    depth = 0
    current = []
    for ch in text:
        if ch == "(":
            depth += 1
            current.append(ch)
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ValueError(f"unbalanced parentheses in {text!r}")
            current.append(ch)
        elif ch == "," and depth == 0:
            entries.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    if depth != 0:
        raise ValueError(f"unbalanced parentheses in {text!r}")
    entries.append("".join(current).strip())
    coeffs = []
    for e in entries:
        if not e:
            raise ValueError(f"empty coefficient in {text!r}")
        if e.startswith("(") and e.endswith(")"):
            coeffs.append(parse_complex(e[1:-1]))
        else:
            coeffs.append(complex(float(e), 0.0))
    return coeffs


def _default_tol():
    raw = os.environ.get("HOLOFLOW_TOL")
    if raw is None:
        return 1e-10
    return float(raw)


def _spec_from_args(args):
    if getattr(args, "holo", None) is not None:
        return holomorphic(parse_coeffs(args.holo))
    if getattr(args, "antiholo", None) is not None:
        return anti_holomorphic(parse_coeffs(args.antiholo))
    raise ValueError("provide --holo or --antiholo coefficients")


def _window_from_args(args):
    vals = [float(v) for v in args.window.split(",")]
    if len(vals) != 4:
        raise ValueError("window must be x_min,x_max,y_min,y_max")
    return render.Window(*vals)


def _rep_to_json(rep):
    return {
        "poly": [[c.real, c.imag] for c in rep.poly_part.coeffs],
        "log_terms": [
            {"residue": [r.real, r.imag], "pole": [p.real, p.imag]}
            for r, p in rep.log_terms
        ],
        "rational_terms": [
            {"coeff": [c.real, c.imag], "pole": [p.real, p.imag], "order": order}
            for c, p, order in rep.rational_terms
        ],
    }


def cmd_potential(args):
    spec = _spec_from_args(args)
    rep = build_potential(spec)
    payload = {"kind": spec.kind.value, "potential": _rep_to_json(rep)}
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
    if args.grid_csv:
        window = _window_from_args(args)
        nx, ny = (int(v) for v in args.grid.split(","))
        xs, ys, phi, psi = render.potential_grid(rep, window, nx, ny)
        render.write_grid_csv(args.grid_csv, xs, ys, phi, psi)
    print(f"potential written to {args.out}")
    return 0


def _equilibria_json(infos):
    return [
        {
            "re": e.location.real,
            "im": e.location.imag,
            "multiplicity": e.multiplicity,
            "lambda_re": e.lam.real,
            "lambda_im": e.lam.imag,
            "type": e.etype.value,
        }
        for e in infos
    ]


def cmd_classify_cubic(args):
    a1 = parse_complex(args.a1)
    a0 = parse_complex(args.a0)
    portrait = classify.classify_cubic(a1, a0, eps=args.eps)
    report = {
        "config_label": portrait.config_label,
        "equilibria": _equilibria_json(portrait.equilibria),
        "regions": {
            "center": portrait.center_regions,
            "sepal": portrait.sepal_regions,
            "alpha_omega": portrait.alpha_omega_regions,
        },
        "infinity": [
            {"angle": e.angle, "det": e.saddle_det}
            for e in classify.infinity_equilibria(3)
        ],
    }
    _emit_json(report, args.out)
    return 0


def cmd_bernoulli(args):
    alpha = parse_complex(args.alpha)
    portrait = classify.bernoulli_portrait(args.n, alpha)
    report = {
        "n": portrait.n,
        "alpha": [alpha.real, alpha.imag],
        "equilibria": _equilibria_json(portrait.equilibria),
        "regions": {
            "center": portrait.center_regions,
            "alpha_omega": portrait.alpha_omega_regions,
        },
        "infinity": [
            {"angle": e.angle, "det": e.saddle_det} for e in portrait.infinity
        ],
    }
    _emit_json(report, args.out)
    return 0


def _candidates_json(candidates):
    return [
        {
            "x1": c.x1,
            "x2": c.x2,
            "multiplier": c.multiplier,
            "stability": c.stability.value,
            "verified": c.verified.value,
        }
        for c in candidates
    ]


def cmd_cycles(args):
    tol = args.tol if args.tol is not None else _default_tol()
    continuum = False
    system = {"family": args.family}
    if args.family == "antiholo":
        upper = anti_holomorphic(parse_coeffs(args.upper))
        lower = anti_holomorphic(parse_coeffs(args.lower))
        spec = pwcycles.PiecewiseSpec(upper, lower)
        system["upper"] = [[c.real, c.imag] for c in upper.p.coeffs]
        system["lower"] = [[c.real, c.imag] for c in lower.p.coeffs]
        bound = pwcycles.candidate_bound(spec)
        try:
            candidates = pwcycles.solve_antiholo_pair(spec, tol=tol)
        except ContinuumDetected:
            candidates, continuum = [], True
    elif args.family == "mixed-linear":
        params = [float(v) for v in args.params.split(",")]
        if len(params) != 7:
            raise ValueError("mixed-linear params: a1,a2,b1,b2,a,b,x0")
        spec = pwcycles.MixedLinearSpec(*params)
        system["params"] = params
        bound = 1
        try:
            candidates = pwcycles.solve_mixed_linear_on_sigma(spec)
        except CenterContinuum:
            candidates, continuum = [], True
    elif args.family == "mixed-general":
        params = [float(v) for v in args.params.split(",")]
        if len(params) != 8:
            raise ValueError("mixed-general params: a1,a2,b1,b2,a,b,x0,y0")
        constants = pwcycles.MixedGeneralConstants(*params)
        system["params"] = params
        bound = 3
        try:
            candidates = pwcycles.solve_mixed_general(constants, tol=tol)
        except CenterContinuum:
            candidates, continuum = [], True
    else:
        raise ValueError(f"unknown family {args.family!r}")
    report = {
        "family": args.family.replace("-", "_"),
        "system": system,
        "candidates": _candidates_json(candidates),
        "continuum": continuum,
        "bound": bound,
    }
    _emit_json(report, args.out)
    return 0


def cmd_flowstats(args):
    if args.antiholo is not None:
        field = anti_holomorphic(parse_coeffs(args.antiholo))
    else:
        field = holomorphic(parse_coeffs(args.holo))
    if args.circle:
        cx, cy, r = (float(v) for v in args.circle.split(","))
        curve = flowstats.Circle(complex(cx, cy), r)
    elif args.polygon:
        verts = [parse_complex(v) for v in args.polygon.split(";")]
        curve = flowstats.Polygon(tuple(verts))
    else:
        raise ValueError("provide --circle or --polygon")
    result = flowstats.contour_integral(field, curve, n_nodes=args.nodes)
    report = {"circulation": result.circulation, "net_flow": result.net_flow}
    _emit_json(report, args.out)
    return 0


def cmd_portrait(args):
    window = _window_from_args(args)
    nx, ny = (int(v) for v in args.grid.split(","))
    if args.upper is not None and args.lower is not None:
        upper = anti_holomorphic(parse_coeffs(args.upper))
        lower = anti_holomorphic(parse_coeffs(args.lower))
        xs, ys, psi = render.piecewise_psi_grid(upper, lower, window, nx, ny)
        phi = None
    else:
        spec = _spec_from_args(args)
        rep = build_potential(spec)
        xs, ys, phi, psi = render.potential_grid(rep, window, nx, ny)
    if args.levels_at:
        levels = [float(v) for v in args.levels_at.split(",")]
    else:
        levels = render.default_levels(psi, args.levels)
    groups = []
    for li, level in enumerate(levels):
        segments = render.marching_squares(xs, ys, psi, level)
        groups.append((f"psi-level-{li}", segments))
    if phi is not None and not args.levels_at:
        for li, level in enumerate(render.default_levels(phi, args.levels)):
            segments = render.marching_squares(xs, ys, phi, level)
            groups.append((f"phi-level-{li}", segments))
    svg = render.svg_document(groups, window)
    with open(args.out_svg, "w", encoding="utf-8") as fh:
        fh.write(svg)
    if args.out_csv:
        if phi is None:
            render.write_grid_csv(args.out_csv, xs, ys, psi)
        else:
            render.write_grid_csv(args.out_csv, xs, ys, phi, psi)
    print(f"portrait written to {args.out_svg}")
    return 0


def cmd_verify(args):
    tol = args.tol if args.tol is not None else 1e-6
    with open(args.report, encoding="utf-8") as fh:
        report = json.load(fh)
    system = report["system"]
    family = system["family"]
    if family == "antiholo":
        upper = anti_holomorphic([complex(r, i) for r, i in system["upper"]])
        lower = anti_holomorphic([complex(r, i) for r, i in system["lower"]])
        pw = pwcycles.PiecewiseSpec(upper, lower)
    elif family == "mixed-linear":
        pw = pwcycles.MixedLinearSpec(*system["params"]).as_piecewise()
    elif family == "mixed-general":
        pw = pwcycles.MixedGeneralConstants(*system["params"]).as_piecewise()
    else:
        raise ValueError(f"unknown family {family!r}")
    failures = 0
    for cand in report["candidates"]:
        if cand["verified"] != pwcycles.Verified.NUMERICALLY_CONFIRMED.value:
            print(f"SKIP x1={cand['x1']:.9g} ({cand['verified']})")
            continue
        ret = odeint.return_map(pw, cand["x1"])
        ok = ret is not None and abs(ret - cand["x1"]) <= tol * max(1.0, abs(cand["x1"]))
        print(f"{'PASS' if ok else 'FAIL'} x1={cand['x1']:.9g} return={ret}")
        if not ok:
            failures += 1
    return 1 if failures else 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="holoflow",
        description="Complex potentials and piecewise limit cycles for planar polynomial systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("potential", help="potential representation + sampled grid")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--holo", help="ascending coefficients of p for zdot = p(z)")
    g.add_argument("--antiholo", help="ascending coefficients of p for zdot = conj(p(z))")
    p.add_argument("--out", default="potential.json")
    p.add_argument("--grid-csv", default=None)
    p.add_argument("--window", default="-2,2,-2,2")
    p.add_argument("--grid", default="64,64")
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser("classify-cubic", help="configuration of zdot = z^3 + A1 z + A0")
    p.add_argument("--a1", required=True, help="A1 as re,im")
    p.add_argument("--a0", required=True, help="A0 as re,im")
    p.add_argument("--eps", type=float, default=1e-9)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_classify_cubic)

    p = sub.add_parser("bernoulli", help="portrait of zdot = z^n - alpha z")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", required=True, help="alpha as re,im")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bernoulli)

    p = sub.add_parser("cycles", help="limit-cycle candidates of a piecewise system")
    p.add_argument("--family", required=True,
                   choices=["antiholo", "mixed-linear", "mixed-general"])
    p.add_argument("--upper", help="antiholo: upper polynomial coefficients")
    p.add_argument("--lower", help="antiholo: lower polynomial coefficients")
    p.add_argument("--params", help="mixed families: comma-separated constants")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_cycles)

    p = sub.add_parser("flowstats", help="circulation and net flow around a closed curve")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--holo")
    g.add_argument("--antiholo")
    c = p.add_mutually_exclusive_group(required=True)
    c.add_argument("--circle", help="cx,cy,radius")
    c.add_argument("--polygon", help="vertices 're,im' separated by ';'")
    p.add_argument("--nodes", type=int, default=flowstats.DEFAULT_NODES)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_flowstats)

    p = sub.add_parser("portrait", help="streamline contours as SVG (+ grid CSV)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--holo")
    g.add_argument("--antiholo")
    p.add_argument("--upper", help="piecewise: upper antiholo coefficients")
    p.add_argument("--lower", help="piecewise: lower antiholo coefficients")
    p.add_argument("--window", default="-2,2,-2,2")
    p.add_argument("--grid", default="128,128")
    p.add_argument("--levels", type=int, default=12)
    p.add_argument("--levels-at", default=None, help="explicit comma-separated levels")
    p.add_argument("--out-svg", default="portrait.svg")
    p.add_argument("--out-csv", default=None)
    p.set_defaults(func=cmd_portrait)

    p = sub.add_parser("verify", help="re-run odeint handshakes on a cycle report")
    p.add_argument("--report", required=True)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_verify)

    return parser


def _emit_json(report, out_path):
    text = json.dumps(report, indent=2)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"report written to {out_path}")
    else:
        print(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        parser.exit(2, f"error: {exc}\n")
    except HoloflowError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
