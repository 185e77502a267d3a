"""Command-line front end.

Reports are ``key: value`` lines in a fixed order.  Exit status is 0 when
every check passes, 1 when a check fails or an input file is malformed, and
2 for usage errors and missing files.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import assembly, local_models, morse, reeb
from .delzant import PolygonError
from .folded import SvgOptions, euler_characteristic, render_image, validate_folded_polygon
from .lattice import LatticeError
from .polyfile import PolygonSyntaxError, load_polygon

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _emit(lines, out) -> None:
    for line in lines:
        out.write(line + "\n")


def _load(path: str, err):
    if not Path(path).is_file():
        raise UsageError(f"no such file: {path}")
    try:
        return load_polygon(path)
    except (PolygonSyntaxError, PolygonError, LatticeError) as exc:
        err.write(f"error: {path}: {exc}\n")
        return None


def _flag(ok: bool) -> str:
    return "pass" if ok else "fail"


def cmd_validate(args, out, err) -> int:
    poly = _load(args.file, err)
    if poly is None:
        return EXIT_FAIL
    rep = validate_folded_polygon(poly)
    folds = sum(1 for m in poly.marks if m.kind.value == "fold")
    lines = [
        f"file: {args.file}",
        f"loops: {len(poly.boundary_loops)}",
        f"corners: {euler_characteristic(poly)}",
        f"folds: {folds}",
    ]
    lines += [f"check: {m}" for m in rep.messages]
    lines += [f"failures: {len(rep.failures)}", f"result: {_flag(rep.ok)}"]
    _emit(lines, out)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_plot(args, out, err) -> int:
    poly = _load(args.file, err)
    if poly is None:
        return EXIT_FAIL
    svg = render_image(poly, SvgOptions(width=args.width))
    if args.output:
        Path(args.output).write_text(svg, encoding="utf-8")
        _emit([f"file: {args.file}", f"svg: {args.output}"], out)
    else:
        out.write(svg)
    return EXIT_OK


def _parse_xi(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"--xi expects 'a,b', got {text!r}")
    try:
        a, b = (float(p) for p in parts)
    except ValueError:
        raise UsageError(f"--xi expects two numbers, got {text!r}") from None
    if a == 0 and b == 0:
        raise UsageError("--xi must be nonzero")
    return a, b


def cmd_morse(args, out, err) -> int:
    xi = _parse_xi(args.xi)
    rep = morse.analyze(xi, separatrix_samples=args.samples)
    lines = rep.lines()
    if rep.separatrix is not None:
        s = rep.separatrix
        lines.append(f"separatrix_max_abs_p2: {float(np.max(np.abs(s[:, 1]))):.6e}")
        lines.append(f"separatrix_max_p1: {float(np.max(s[:, 0])):.6e}")
        lines.append(f"tangency_slope: {morse.tangency_slope(s):.6e}")
    _emit(lines, out)
    if args.output:
        if rep.separatrix is None:
            err.write("note: no separatrix when a = 0; CSV not written\n")
        else:
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                fh.write("p1,p2\n")
                for p1, p2 in rep.separatrix:
                    fh.write(f"{float(p1)!r},{float(p2)!r}\n")
    return EXIT_OK


def cmd_reeb(args, out, err) -> int:
    if args.k <= 0:
        raise UsageError("--k must be positive")
    if args.x3 * args.x3 > args.k:
        raise UsageError("|--x3| must not exceed sqrt(k)")
    if args.dt <= 0 or args.t < 0:
        raise UsageError("--dt must be positive and --t nonnegative")
    s0 = reeb.ReebState.on_sphere(args.k, args.x3)
    orbit = reeb.classify_orbit(args.x3, args.k)
    res = reeb.integrate_flow(s0, args.t, args.dt)
    lines = [
        f"k: {args.k!r}",
        f"x3: {args.x3!r}",
        f"orbit: {orbit.kind}",
        f"ratio: {orbit.ratio if orbit.ratio is not None else '-'}",
        f"R1: {orbit.r1 + 0.0!r}",
        f"R2: {orbit.r2 + 0.0!r}",
        f"steps: {len(res.times) - 1}",
        f"max_drift_x3: {res.max_drift_x3:.3e}",
        f"max_drift_r2: {res.max_drift_r2:.3e}",
        f"max_drift_sphere: {res.max_drift_sphere:.3e}",
    ]
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            reeb.write_csv(res, fh)
        _emit(lines + [f"csv: {args.output}"], out)
    else:
        reeb.write_csv(res, out)
        _emit(lines, err)
    return EXIT_OK


def forms_check_lines(n: int = 100, seed: int = 0) -> tuple[list[str], bool]:
    """Run the local-model invariant suite at ``n`` seeded random points."""
    rng = np.random.default_rng(seed)
    pts = local_models.random_points(rng, n)
    closed = max(local_models.closedness_defect(p) for p in pts)
    sd = max(local_models.self_duality_defect(p) for p in pts)
    lrep = local_models.extract_L(local_models.omega_A)
    ldef = float(np.max(np.abs(lrep.matrix - np.diag([1.0, 1.0, -2.0]))))
    cyl = [
        local_models.CylPoint(a, r, t, z)
        for a, r, t, z in zip(
            rng.uniform(0, 2 * math.pi, n),
            rng.uniform(1e-3, 1.0, n),
            rng.uniform(0, 2 * math.pi, n),
            rng.uniform(-1, 1, n),
        )
    ]
    mc = [local_models.moment_condition_defects(c) for c in cyl]
    a_plus = max(d.alpha_plus for d in mc)
    a_minus = max(d.alpha_minus for d in mc)
    t_plus = max(d.theta_plus for d in mc)
    prim = max(reeb.primitive_defect(p) for p in pts)
    vol = max(abs(reeb.contact_volume(p) - reeb.contact_volume_numeric(p)) for p in pts)
    states = []
    for x3, ph in zip(rng.uniform(-0.95, 0.95, n), rng.uniform(0, 2 * math.pi, n)):
        states.append(reeb.ReebState.on_sphere(1.0, x3, ph))
    norm = max(reeb.normalization_defect(s) for s in states)
    kern = max(reeb.kernel_defect(s) for s in states)
    checks = [
        ("closedness", closed, 1e-6),
        ("self_duality", sd, 1e-12),
        ("L_matrix", ldef, 1e-5),
        ("moment_alpha", a_minus, 1e-8),
        ("moment_theta", t_plus, 1e-8),
        ("d_lambda", prim, 1e-6),
        ("contact_volume", vol, 1e-8),
        ("reeb_normalization", norm, 1e-10),
        ("reeb_kernel", kern, 1e-8),
    ]
    lines = [f"points: {n}", f"seed: {seed}"]
    ok = True
    for name, val, tol in checks:
        good = val <= tol
        ok &= good
        lines.append(f"{name}: {_flag(good)} ({val:.3e} <= {tol:.0e})")
    lines.append(f"L_rank: {lrep.rank}")
    lines.append(f"L_signature: (+{lrep.signature[0]}, -{lrep.signature[1]})")
    lines.append(
        "moment_alpha_convention: contraction with d/dalpha gives -d(z^2 - r^2/2)"
        f" (same-sign residual {a_plus:.3e})"
    )
    lines.append(f"result: {_flag(ok)}")
    return lines, ok


def cmd_forms(args, out, err) -> int:
    lines, ok = forms_check_lines(args.points, args.seed)
    _emit(lines, out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_example(args, out, err) -> int:
    e = assembly.build_cp2cp2_example()
    rep = assembly.verify_example(e, args.samples)
    lines = ["example: cp2cp2"] + rep.lines()
    if args.output:
        Path(args.output).write_text(render_image(e.polygon), encoding="utf-8")
        lines.append(f"svg: {args.output}")
    _emit(lines, out)
    return EXIT_OK if rep.ok else EXIT_FAIL


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{message}\n{self.format_usage().rstrip()}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="foldedtoric", description="Folded Delzant polygons and near-symplectic local models.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    v = sub.add_parser("validate", help="validate a polygon file")
    v.add_argument("file")
    v.set_defaults(func=cmd_validate)

    pl = sub.add_parser("plot", help="render a polygon file as SVG")
    pl.add_argument("file")
    pl.add_argument("-o", "--output")
    pl.add_argument("--width", type=int, default=480)
    pl.set_defaults(func=cmd_plot)

    m = sub.add_parser("morse", help="Morse-Bott analysis of a moment component")
    m.add_argument("--xi", required=True, help="a,b")
    m.add_argument("--samples", type=int, default=200)
    m.add_argument("-o", "--output", help="CSV of separatrix samples")
    m.set_defaults(func=cmd_morse)

    r = sub.add_parser("reeb", help="integrate the Reeb flow on the level sphere")
    r.add_argument("--k", type=float, required=True)
    r.add_argument("--x3", type=float, required=True)
    r.add_argument("--t", type=float, default=10.0)
    r.add_argument("--dt", type=float, default=1e-3)
    r.add_argument("-o", "--output", help="CSV trajectory (stdout when omitted)")
    r.set_defaults(func=cmd_reeb)

    f = sub.add_parser("forms", help="local-model invariant suite")
    f.add_argument("action", choices=["check"])
    f.add_argument("--points", type=int, default=100)
    f.add_argument("--seed", type=int, default=0)
    f.set_defaults(func=cmd_forms)

    e = sub.add_parser("example", help="assemble and verify a worked example")
    e.add_argument("name", choices=["cp2cp2"])
    e.add_argument("--samples", type=int, default=assembly.DEFAULT_SAMPLES)
    e.add_argument("-o", "--output", help="SVG of the example's polygon")
    e.set_defaults(func=cmd_example)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, out, err)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE


def run(argv: Sequence[str]) -> tuple[int, str, str]:
    """Call :func:`main` capturing stdout and stderr."""
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


if __name__ == "__main__":
    sys.exit(main())
