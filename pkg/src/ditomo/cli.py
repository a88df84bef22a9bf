"""Batch command-line front end.

Subcommands::

    ditomo synth    --phi 0.09275644pi | --scan 0:pi/4:512 [--no-marginals]
                    [--setting-symmetric] [--exact] [--svg]
    ditomo bounds   --ineq mermin | --ineq-file expr.json
    ditomo seesaw   --ineq B1 [--seeds N] [--iters N] [--rng SEED]
    ditomo selftest --target {W|GHZ3|GHZ4|CL} [--ineq NAME]
                    [--qgrid a:b:n] [--level local2] [--tol T]
                    [--export-sdpa DIR] [--allow-heavy] [--svg]

Angles are plain floats or multiples of pi written with the literal
suffix ``pi``: ``0.25pi``, ``pi``, ``pi/4``, ``0.09275644pi``.  Grids
are ``start:stop:count`` with angle syntax allowed for the endpoints.

Every command writes its outputs plus a ``manifest.json`` run manifest
(command, parameters, package version, tolerances, wall-clock seconds
and SHA-256 digests of each output file) into ``--outdir``.

Exit codes: 0 success; 2 finished but some rows are flagged
(infeasible / no violation / inaccurate); 3 solver failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import re
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, catalog
from .exactnum import coeff_to_json
from .inequality_synth import scan, synthesize
from .moment import build_sequence_set, build_structure
from .pi_bell import GeneralBellExpression, local_bound
from .seesaw import SeesawConfig, seesaw_optimize
from .swap_fidelity import curve, fidelity_sdp_instance
from .solvers.sdpa import export_sdpa

EXIT_OK = 0
EXIT_FLAGGED = 2
EXIT_SOLVER_FAILURE = 3

_ANGLE_RE = re.compile(r"^([0-9.]*)\s*pi\s*(?:/\s*([0-9.]+))?$")


def parse_angle(text: str) -> float:
    """Parse '0.25pi', 'pi', 'pi/4', '0.7853', ... into radians."""
    token = text.strip().lower()
    m = _ANGLE_RE.match(token)
    if m:
        coef = float(m.group(1)) if m.group(1) else 1.0
        div = float(m.group(2)) if m.group(2) else 1.0
        return coef * math.pi / div
    try:
        return float(token)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse angle {text!r}") from None


def parse_grid(text: str, angle: bool = False):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"grid must be start:stop:count, got {text!r}")
    conv = parse_angle if angle else float
    start, stop = conv(parts[0]), conv(parts[1])
    try:
        count = int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"grid count must be an integer, got {parts[2]!r}") from None
    if count < 1:
        raise argparse.ArgumentTypeError("grid count must be >= 1")
    return np.linspace(start, stop, count)


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


class Run:
    """Collects outputs and writes the manifest at the end."""

    def __init__(self, outdir: str, command: str, params: dict,
                 tolerances: dict | None = None):
        self.dir = Path(outdir)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.command = command
        self.params = params
        self.tolerances = tolerances or {}
        self.outputs = []
        self.t0 = time.time()

    def write_text(self, name: str, text: str) -> Path:
        path = self.dir / name
        path.write_text(text)
        self.outputs.append(path)
        return path

    def write_json(self, name: str, obj) -> Path:
        return self.write_text(name, json.dumps(obj, indent=2, sort_keys=True)
                               + "\n")

    def finish(self) -> Path:
        manifest = {
            "command": self.command,
            "parameters": self.params,
            "version": __version__,
            "tolerances": self.tolerances,
            "wall_clock_seconds": round(time.time() - self.t0, 3),
            "outputs": {p.name: _digest(p) for p in self.outputs},
        }
        path = self.dir / "manifest.json"
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        return path


def render_svg_line_chart(rows, baseline: float | None = None,
                          width: int = 640, height: int = 420,
                          x_label: str = "x", y_label: str = "y") -> str:
    """Minimal SVG polyline chart; the baseline is a solid horizontal line."""
    xs = [r[0] for r in rows]
    ys = [r[1] for r in rows]
    x0, x1 = min(xs), max(xs)
    ylo = min(ys + ([baseline] if baseline is not None else []))
    yhi = max(ys + ([baseline] if baseline is not None else []))
    if x1 == x0:
        x1 = x0 + 1.0
    if yhi == ylo:
        yhi = ylo + 1.0
    pad = 50

    def px(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def py(y):
        return height - pad - (y - ylo) / (yhi - ylo) * (height - 2 * pad)

    points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<polyline points="{points}" fill="none" stroke="steelblue" '
        f'stroke-width="2"/>',
    ]
    if baseline is not None:
        y = py(baseline)
        parts.append(f'<line x1="{pad}" y1="{y:.2f}" x2="{width - pad}" '
                     f'y2="{y:.2f}" stroke="black" stroke-width="2"/>')
    parts.append(f'<text x="{width // 2}" y="{height - 12}" '
                 f'text-anchor="middle" font-size="14">{x_label}</text>')
    parts.append(f'<text x="16" y="{height // 2}" font-size="14" '
                 f'transform="rotate(-90 16 {height // 2})" '
                 f'text-anchor="middle">{y_label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# -- subcommands --------------------------------------------------------------

def cmd_synth(args) -> int:
    params = {k: getattr(args, k) for k in
              ("phi", "scan", "no_marginals", "setting_symmetric", "exact",
               "svg")}
    if (args.phi is None) == (args.scan is None):
        raise SystemExit("synth needs exactly one of --phi or --scan")
    run = Run(args.outdir, "synth", params)
    flagged = False
    if args.scan is not None:
        grid = parse_grid(args.scan, angle=True)
        rows = scan(grid, no_marginals=args.no_marginals,
                    setting_symmetric=args.setting_symmetric)
        lines = ["phi,Q_over_L"]
        for phi, q in rows:
            lines.append(f"{phi:.12g},{q:.12g}")
            if q <= 1.0 + 1e-9:
                flagged = True
        run.write_text("scan.csv", "\n".join(lines) + "\n")
        if args.svg:
            run.write_text("scan.svg", render_svg_line_chart(
                rows, baseline=1.0, x_label="phi", y_label="Q/L"))
    else:
        result = synthesize(parse_angle(args.phi),
                            no_marginals=args.no_marginals,
                            setting_symmetric=args.setting_symmetric,
                            exact=args.exact)
        run.write_json("synth.json", result.to_json())
        if result.status != "optimal":
            flagged = True
    run.finish()
    return EXIT_FLAGGED if flagged else EXIT_OK


def _load_inequality(args) -> tuple:
    if args.ineq_file:
        text = Path(args.ineq_file).read_text()
        return Path(args.ineq_file).stem, GeneralBellExpression.loads(text)
    try:
        return args.ineq, catalog.get_inequality(args.ineq)
    except KeyError as exc:
        raise SystemExit(str(exc)) from None


def cmd_bounds(args) -> int:
    name, g = _load_inequality(args)
    L, maximizers = local_bound(g)
    run = Run(args.outdir, "bounds", {"ineq": name})
    table = {
        "name": name,
        "parties": g.num_parties,
        "local_bound": coeff_to_json(L),
        "local_bound_float": float(L),
        "algebraic_max": float(g.algebraic_max()),
        "num_maximizers": len(maximizers),
    }
    run.write_json("bounds.json", table)
    lines = ["name,local_bound,algebraic_max",
             f"{name},{float(L):.12g},{float(g.algebraic_max()):.12g}"]
    run.write_text("bounds.csv", "\n".join(lines) + "\n")
    run.finish()
    print(f"{name}: local bound {float(L):.12g}, "
          f"algebraic max {float(g.algebraic_max()):.12g}")
    return EXIT_OK


def _observable_as_json(op) -> dict:
    """2x2 Hermitian involution as a planar angle when it lies in the
    X-Z plane, else as an explicit matrix."""
    m = np.asarray(op.entries if hasattr(op, "entries") else op)
    z, x = float(m[0, 0].real), float(m[0, 1].real)
    if abs(m[0, 1].imag) < 1e-9 and abs(z ** 2 + x ** 2 - 1.0) < 1e-9:
        return {"angle": math.atan2(x, z)}
    return {"matrix": [[[float(v.real), float(v.imag)] for v in row]
                       for row in m]}


def cmd_seesaw(args) -> int:
    name, g = _load_inequality(args)
    cfg = SeesawConfig(num_seeds=args.seeds, max_iters=args.iters,
                       rng_seed=args.rng)
    run = Run(args.outdir, "seesaw", {"ineq": name, "seeds": args.seeds,
                                      "iters": args.iters, "rng": args.rng},
              tolerances={"convergence_tol": cfg.convergence_tol})
    value, scenario = seesaw_optimize(g, cfg)
    result = {
        "ineq": name,
        "value": value,
        "state": [[float(a.real), float(a.imag)]
                  for a in scenario.state.amplitudes],
        "observables": [[_observable_as_json(o) for o in pair]
                        for pair in scenario.observables],
    }
    run.write_json("seesaw.json", result)
    run.finish()
    print(f"{name}: see-saw value {value:.10f}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    try:
        target = catalog.get_target(args.target, args.ineq) \
            if args.target == "W" and args.ineq else catalog.get_target(args.target)
    except KeyError as exc:
        raise SystemExit(str(exc)) from None
    if args.target in catalog.HEAVY_TARGETS and not args.allow_heavy:
        raise SystemExit(f"target {args.target} is a long-running four-party "
                         f"job; pass --allow-heavy to proceed")
    if args.qgrid:
        grid = parse_grid(args.qgrid)
    else:
        grid = np.linspace(target.local_bound_value, target.quantum_max, 33)
    run = Run(args.outdir, "selftest",
              {"target": args.target, "ineq": args.ineq, "qgrid": args.qgrid,
               "level": args.level, "allow_heavy": args.allow_heavy,
               "svg": args.svg},
              tolerances={"sdp_tol": args.tol})
    structure = build_structure(build_sequence_set(args.level))
    if args.export_sdpa:
        export_dir = Path(args.export_sdpa)
        export_dir.mkdir(parents=True, exist_ok=True)
        for k, q in enumerate(grid):
            instance = fidelity_sdp_instance(target, float(q), structure)
            (export_dir / f"point_{k:03d}.dat-s").write_text(
                export_sdpa(instance))
    result = curve(target, grid, structure=structure, tol=args.tol)
    lines = ["Q,f,status"]
    plot_rows = []
    for row in result.rows:
        f = "" if row["f"] is None else f"{row['f']:.10g}"
        lines.append(f"{row['Q']:.10g},{f},{row['status']}")
        if row["f"] is not None:
            plot_rows.append((row["Q"], row["f"]))
    run.write_text("curve.csv", "\n".join(lines) + "\n")
    run.write_json("curve_meta.json", {
        "target": target.name,
        "inequality": args.ineq if args.target == "W" else None,
        "baseline": target.baseline,
        "level": args.level,
        "sdp_tol": args.tol,
        "local_bound": target.local_bound_value,
        "quantum_max": target.quantum_max,
        "rows": result.rows,
    })
    if args.svg and plot_rows:
        run.write_text("curve.svg", render_svg_line_chart(
            plot_rows, baseline=target.baseline, x_label="Q",
            y_label="certified fidelity"))
    run.finish()
    statuses = {row["status"] for row in result.rows}
    if "failed" in statuses:
        return EXIT_SOLVER_FAILURE
    if statuses - {"optimal"}:
        return EXIT_FLAGGED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ditomo",
        description="Bell-inequality synthesis and device-independent "
                    "self-testing toolkit")
    parser.add_argument("--outdir", default=".",
                        help="directory for outputs and the run manifest")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("synth", help="synthesize W-state inequalities by LP")
    p.add_argument("--phi", help="measurement angle, e.g. 0.09275644pi")
    p.add_argument("--scan", help="angle grid start:stop:count")
    p.add_argument("--no-marginals", action="store_true")
    p.add_argument("--setting-symmetric", action="store_true")
    p.add_argument("--exact", action="store_true",
                   help="exact arithmetic over a + b sqrt(2) (phi = pi/4)")
    p.add_argument("--svg", action="store_true")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("bounds", help="local bound of an inequality")
    p.add_argument("--ineq", default=None)
    p.add_argument("--ineq-file", default=None)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("seesaw", help="heuristic quantum maximum")
    p.add_argument("--ineq", default=None)
    p.add_argument("--ineq-file", default=None)
    p.add_argument("--seeds", type=int, default=50)
    p.add_argument("--iters", type=int, default=500)
    p.add_argument("--rng", type=int, default=0)
    p.set_defaults(func=cmd_seesaw)

    p = sub.add_parser("selftest", help="certified fidelity curve")
    p.add_argument("--target", required=True,
                   choices=list(catalog.TARGET_NAMES))
    p.add_argument("--ineq", default="B1",
                   help="W-target inequality: B1, B2 or B3")
    p.add_argument("--qgrid", default=None, help="Bell-value grid a:b:n")
    p.add_argument("--level", default="local2")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--export-sdpa", default=None, metavar="DIR")
    p.add_argument("--allow-heavy", action="store_true")
    p.add_argument("--svg", action="store_true")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    code = args.func(args)
    return code


if __name__ == "__main__":
    sys.exit(main())
