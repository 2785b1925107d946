"""Command line front end.

Exit codes: 0 success, 2 invalid input, 3 method not applicable, 4
numerical failure. Every run prints (or writes) a JSON report with at least
the keys ``config``, ``residuals``, ``drift``, ``closure``, ``rms`` and
``timings``; timings are only filled in with ``--timings`` so that reports
are byte-identical across runs by default.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import io
from .canonical import canonicalize, gauge_functions
from .errors import SurfaceError
from .grid import Grid
from .invariants import InvariantField, all_residuals
from .minkowski import LorentzMotion
from .pde import GoursatProblem, solve_cosh_gordon
from .reconstruct import (
    SurfacePatch,
    compare_up_to_motion,
    patch_from_surface,
    reconstruct_from_invariants,
    reconstruct_from_kh,
)
from .surface import classify_patch, curvatures, forms_on_grid

EXIT_CODES = {"input": 2, "not_applicable": 3, "numerical": 4}

log = logging.getLogger("asymptotic_surfaces")


def _floats(text, n, name):
    try:
        vals = tuple(float(t) for t in text.split(","))
    except ValueError:
        raise SurfaceError(f"{name} must be {n} comma-separated numbers") from None
    if len(vals) != n:
        raise SurfaceError(f"{name} must be {n} comma-separated numbers")
    return vals


def _ints(text, n, name):
    vals = _floats(text, n, name)
    if any(v != int(v) or v < 2 for v in vals):
        raise SurfaceError(f"{name} must be {n} integers >= 2")
    return tuple(int(v) for v in vals)


def _positive(text):
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def _report(args, **parts):
    rep = {"config": _config(args), "residuals": None, "drift": None, "closure": None, "rms": None, "timings": None}
    rep.update(parts)
    if not args.timings:
        rep["timings"] = None
    return rep


def _config(args):
    return {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(vars(args).items()) if k != "func"}


def _emit(args, rep):
    text = io.report_json(rep)
    if args.report:
        Path(args.report).write_text(text)
    else:
        sys.stdout.write(text)


def _load_surface(args):
    s = io.read_surface_file(args.surface)
    kw = {}
    if getattr(args, "domain", None):
        d = _floats(args.domain, 4, "--domain")
        kw.update(u_range=d[:2], v_range=d[2:])
    if getattr(args, "grid", None):
        kw["shape"] = _ints(args.grid, 2, "--grid")
    if getattr(args, "base", None):
        kw["base"] = _floats(args.base, 2, "--base")
    if kw:
        try:
            s = s.with_domain(**kw)
        except ValueError as exc:
            raise SurfaceError(str(exc)) from None
    return s


# ---------------------------------------------------------------------------
# subcommands


def cmd_analyze(args):
    t = time.perf_counter()
    s = _load_surface(args)
    rep = classify_patch(s)
    timings = {"classify": time.perf_counter() - t}
    extra = {"classification": rep.to_dict(), "surface": {"x": s.texts[0], "y": s.texts[1], "z": s.texts[2]}}
    if args.csv or args.kh:
        forms = forms_on_grid(s)
        cp = curvatures(forms)
        if args.csv:
            io.write_grid_csv(
                args.csv, s.grid,
                {"E": forms.E, "F": forms.F, "G": forms.G, "L": forms.L, "M": forms.M, "N": forms.N, "K": cp.K, "H": cp.H},
            )
        if args.kh:
            io.write_kh_csv(args.kh, s.grid, cp.K, cp.H)
    _emit(args, _report(args, timings=timings, **extra))
    return 0 if rep.method_applicable else EXIT_CODES["not_applicable"]


def cmd_invariants(args):
    t = time.perf_counter()
    s = _load_surface(args)
    fld = InvariantField.from_surface(s)
    res = {k: v for k, v in all_residuals(fld).items()}
    if args.out:
        io.write_invariants_csv(args.out, fld)
    _emit(args, _report(args, residuals=res, timings={"invariants": time.perf_counter() - t}))
    return 0


def cmd_canonical(args):
    t = time.perf_counter()
    s = _load_surface(args)
    fld = InvariantField.from_surface(s)
    gp = gauge_functions(fld, s.base, tol=args.cross_tol)
    extra = {
        "canonical": {
            "base": list(s.base),
            "deviation": gp.deviation,
            "is_canonical": gp.deviation < args.tol,
            "cross_variation": gp.cross_variation,
        }
    }
    if args.apply:
        rmap, new = canonicalize(fld, s.base, cross_tol=args.cross_tol)
        after = gauge_functions(new, s.base, tol=args.cross_tol)
        extra["canonical"]["deviation_after"] = after.deviation
        if args.out:
            io.write_invariants_csv(args.out, new)
        if args.reparam:
            io.write_reparam_csv(args.reparam, rmap)
    _emit(args, _report(args, timings={"canonical": time.perf_counter() - t}, **extra))
    return 0


def cmd_reconstruct(args):
    t = time.perf_counter()
    base = _floats(args.base, 2, "--base")
    if args.kh:
        grid, K, H = io.read_kh_csv(args.kh)
        rec = reconstruct_from_kh(K, H, grid, base, branch=args.branch, reorthonormalize_every=args.reorthonormalize)
    else:
        fld = io.read_invariants_csv(args.invariants)
        metric = args.metric
        if metric == "auto":
            have = np.all(np.isfinite(fld.sqrtE)) and np.all(np.isfinite(fld.sqrtMinusG))
            have = have and np.all(np.isfinite(fld.gamma1)) and np.all(np.isfinite(fld.gamma2))
            metric = "field" if have else "solve"
        rec = reconstruct_from_invariants(fld, base, metric=metric, reorthonormalize_every=args.reorthonormalize)
    d = rec.diagnostics
    patch = rec.patch
    rms = None
    if args.truth:
        s = io.read_surface_file(args.truth)
        truth = patch_from_surface(s, patch.grid, base)
        rms = compare_up_to_motion(patch, truth).rms
    if args.obj:
        io.write_obj(args.obj, patch.z)
        frames = args.frames or str(args.obj) + ".frame.json"
        io.write_frame_json(frames, patch.grid.index_of(*base), patch.base_point, patch.base_frame)
    timings = dict(d["timings"])
    timings["cli"] = time.perf_counter() - t
    _emit(args, _report(
        args, residuals=d["residuals"], drift=d["drift"], closure=d["closure"], rms=rms, timings=timings,
    ))
    return 0


def cmd_solve_cosh_gordon(args):
    t = time.perf_counter()
    d = _floats(args.domain, 4, "--domain")
    if d[0] != 0 or d[2] != 0:
        raise SurfaceError("the Goursat domain must start at 0,0")
    shape = _ints(args.grid, 2, "--grid")
    p = GoursatProblem(d[1], d[3], shape, bu=args.bu, bv=args.bv, source=args.source)
    sol = solve_cosh_gordon(p)
    if args.out:
        io.write_omega_csv(args.out, sol.grid, sol.omega)
    _emit(args, _report(
        args, residuals={"cosh_gordon": sol.max_residual}, timings={"solve": time.perf_counter() - t},
    ))
    return 0


def cmd_compare(args):
    za, zb = io.read_obj(args.a), io.read_obj(args.b)
    if za.shape != zb.shape:
        raise SurfaceError("meshes have different grid shapes")
    fa, fb = (args.frames.split(",") if args.frames else (str(args.a) + ".frame.json", str(args.b) + ".frame.json"))
    ia, pa, Fa = io.read_frame_json(fa)
    ib, pb, Fb = io.read_frame_json(fb)
    nu, nv = za.shape[:2]
    grid = Grid(np.arange(nu, dtype=float), np.arange(nv, dtype=float))
    A = SurfacePatch(grid, za, (float(ia[0]), float(ia[1])), Fa)
    B = SurfacePatch(grid, zb, (float(ib[0]), float(ib[1])), Fb)
    try:
        cmp = compare_up_to_motion(A, B, tol=args.tol)
    except ValueError as exc:
        raise SurfaceError(str(exc)) from None
    m: LorentzMotion = cmp.motion
    _emit(args, _report(args, rms=cmp.rms, motion={"A": m.A, "b": m.b}))
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser():
    p = argparse.ArgumentParser(prog="asymptotic-surfaces", description="Time-like surfaces with real asymptotic lines.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--report", type=Path, help="write the JSON report here instead of stdout")
        sp.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")

    def surface_args(sp):
        sp.add_argument("surface", type=Path)
        sp.add_argument("--domain", help="u0,u1,v0,v1")
        sp.add_argument("--grid", help="Nu,Nv")
        sp.add_argument("--base", help="u0,v0")

    sp = sub.add_parser("analyze", help="fundamental forms, K, H and classification")
    surface_args(sp)
    sp.add_argument("--csv", type=Path, help="forms and curvature grid CSV")
    sp.add_argument("--kh", type=Path, help="K,H grid CSV")
    common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("invariants", help="basic asymptotic invariants and compatibility residuals")
    surface_args(sp)
    sp.add_argument("--out", type=Path, help="invariants CSV")
    common(sp)
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("canonical", help="gauge functions and canonical parameters")
    surface_args(sp)
    sp.add_argument("--apply", action="store_true", help="resample the invariants in canonical parameters")
    sp.add_argument("--out", type=Path, help="canonical invariants CSV (with --apply)")
    sp.add_argument("--reparam", help="prefix for the PREFIX.u.csv (u,ubar) and PREFIX.v.csv (v,vbar) tables")
    sp.add_argument("--tol", type=_positive, default=1e-6)
    sp.add_argument("--cross-tol", type=_positive, default=1e-6)
    common(sp)
    sp.set_defaults(func=cmd_canonical)

    sp = sub.add_parser("reconstruct", help="integrate a surface from invariants or from K,H")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--invariants", type=Path)
    src.add_argument("--kh", type=Path)
    sp.add_argument("--base", required=True, help="u0,v0")
    sp.add_argument("--branch", choices=("+", "-"), default="+")
    sp.add_argument("--metric", choices=("auto", "solve", "field"), default="auto")
    sp.add_argument("--reorthonormalize", type=int, default=None, metavar="K")
    sp.add_argument("--obj", type=Path)
    sp.add_argument("--frames", type=Path, help="frame JSON sidecar (default: <obj>.frame.json)")
    sp.add_argument("--truth", type=Path, help="surface file to measure the RMS distance against")
    common(sp)
    sp.set_defaults(func=cmd_reconstruct)

    sp = sub.add_parser("solve-cosh-gordon", help="Goursat problem for w_uv + cosh w = 0")
    sp.add_argument("--domain", required=True, help="0,U,0,V")
    sp.add_argument("--grid", required=True, help="Nu,Nv")
    sp.add_argument("--bu", default="0", help="w(u, 0) as an expression in u")
    sp.add_argument("--bv", default="0", help="w(0, v) as an expression in v")
    sp.add_argument("--source", default=None, help="optional forcing g(u, v)")
    sp.add_argument("--out", type=Path, help="omega CSV")
    common(sp)
    sp.set_defaults(func=cmd_solve_cosh_gordon)

    sp = sub.add_parser("compare", help="align two meshes by a Lorentz motion")
    sp.add_argument("a", type=Path)
    sp.add_argument("b", type=Path)
    sp.add_argument("--frames", help="fa.json,fb.json")
    sp.add_argument("--tol", type=_positive, default=1e-8)
    common(sp)
    sp.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except SurfaceError as exc:
        code = EXIT_CODES.get(exc.category, 4)
        err = {"error": {"type": type(exc).__name__, "category": exc.category, "message": str(exc), "detail": exc.detail}}
        sys.stderr.write(io.report_json(err))
        if getattr(args, "report", None):
            Path(args.report).write_text(io.report_json(_report(args, **err)))
        return code
    except (OSError, ValueError) as exc:
        sys.stderr.write(io.report_json({"error": {"type": type(exc).__name__, "category": "input", "message": str(exc)}}))
        return EXIT_CODES["input"]


if __name__ == "__main__":
    sys.exit(main())
