"""Command line entry point.

    hexfinsler verify <scenario.toml> [--report PATH] [--samples N] [--seed S] [--tol-scale K]
    hexfinsler sample <scenario.toml> [--x ...] [--y ...] [--u ...] [--v ...]

Exit codes: 0 every identity passed, 1 at least one failed, 2 configuration error.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from .connection import difference_tensors, spray_and_connection
from .errors import ConfigError, HexFinslerError
from .expchange import change_sample, star_space
from .finsler import metric_sample
from .hypersurface import surface_sample
from .runner import ambient_points, format_table, run_scenario, surface_points, write_report
from .scenario import build_hvector, build_space, build_surface, load_scenario

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _build_parser():
    parser = argparse.ArgumentParser(prog="hexfinsler", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hexfinsler {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run every selected identity battery of a scenario")
    v.add_argument("scenario", help="scenario TOML file")
    v.add_argument("--report", help="write the JSON Lines report here")
    v.add_argument("--samples", type=int, help="override every sample count")
    v.add_argument("--seed", type=int, help="override the scenario seed")
    v.add_argument("--tol-scale", type=float, default=1.0, help="multiply every tolerance")
    v.add_argument("--quiet", action="store_true", help="suppress the summary table")

    s = sub.add_parser("sample", help="print closed-form and differentiated tensors at one point")
    s.add_argument("scenario", help="scenario TOML file")
    s.add_argument("--x", type=float, nargs="+", help="ambient position")
    s.add_argument("--y", type=float, nargs="+", help="ambient direction")
    s.add_argument("--u", type=float, nargs="+", help="surface parameters")
    s.add_argument("--v", type=float, nargs="+", help="surface direction")
    return parser


def _cmd_verify(args):
    if args.tol_scale <= 0 or not math.isfinite(args.tol_scale):
        raise ConfigError("--tol-scale must be a positive number")
    sc = load_scenario(args.scenario).with_overrides(args.samples, args.seed)
    result = run_scenario(sc, tol_scale=args.tol_scale)
    if args.report:
        write_report(result, args.report)
    if not args.quiet:
        print(format_table(result))
    return EXIT_FAIL if result.failed else EXIT_OK


def _vec(vals, n, what):
    if vals is None:
        return None
    if len(vals) != n:
        raise ConfigError(f"--{what} needs {n} values, got {len(vals)}")
    return np.asarray(vals, float)


def _show(name, closed, ad):
    np.set_printoptions(precision=6, suppress=False, linewidth=110)
    print(f"-- {name}")
    if closed is None:
        print(f"   differentiated: {np.array2string(np.asarray(ad), prefix='   differentiated: ')}")
        return
    closed, ad = np.asarray(closed, float), np.asarray(ad, float)
    print(f"   closed form:    {np.array2string(closed, prefix='   closed form:    ')}")
    print(f"   differentiated: {np.array2string(ad, prefix='   differentiated: ')}")
    print(f"   max |diff| = {float(np.abs(closed - ad).max()):.3e}")


def _cmd_sample(args):
    sc = load_scenario(args.scenario)
    space, hv, hs = build_space(sc), build_hvector(sc), build_surface(sc)
    star = star_space(space, hv)
    n = sc.dimension
    u = v = None
    if hs is not None and args.x is None and args.y is None:
        u = _vec(args.u, n - 1, "u")
        v = _vec(args.v, n - 1, "v")
        if u is None or v is None:
            pts, _ = surface_points(space, hs, 1, sc.seed)
            if not pts:
                raise ConfigError("no admissible surface point found")
            u = pts[0][0] if u is None else u
            v = pts[0][1] if v is None else v
        x, y = hs.embed(u), hs.B(u) @ v
    else:
        x, y = _vec(args.x, n, "x"), _vec(args.y, n, "y")
        if x is None or y is None:
            pts, _ = ambient_points(space, 1, sc.sampling.box, sc.seed)
            if not pts:
                raise ConfigError("no admissible ambient point found")
            x = pts[0][0] if x is None else x
            y = pts[0][1] if y is None else y
    if not space.contains(x, y):
        raise ConfigError("the requested point lies outside the metric's domain")

    print(f"scenario {sc.name}: x = {x.tolist()}, y = {y.tolist()}")
    ms = metric_sample(space, x, y)
    sms = metric_sample(star, x, y)
    cs = change_sample(space, hv, x, y, ms)
    _show("L", None, ms.L)
    _show("l_i", None, ms.l)
    _show("g_ij", None, ms.g)
    _show("C_ijk", None, ms.C)
    print(f"-- tau = {cs.tau:.12g}, nu = {cs.nu:.12g}, rho = {cs.rho:.12g}, m^2 = {cs.m2:.12g}")
    _show("m_i", None, cs.m)
    _show("*L", cs.starL, sms.L)
    _show("*l_i", cs.star_l, sms.l)
    _show("*g_ij", cs.star_g, sms.g)
    _show("*g^ij", cs.star_ginv, sms.ginv)
    _show("*C_ijk", cs.star_C, sms.C)
    conn = spray_and_connection(space, x, y)
    sconn = spray_and_connection(star, x, y)
    dt = difference_tensors(space, hv, x, y, conn)
    _show("D^i_00", dt.D00, (sconn.F - conn.F) @ y @ y)
    _show("D^i_0j", dt.D0j, np.einsum("ijk,j->ik", sconn.F - conn.F, y))
    _show("D^i_jk", dt.Djk, sconn.F - conn.F)
    if u is not None:
        base = surface_sample(space, hs, u, v, conn=conn)
        sstar = surface_sample(star, hs, u, v, conn=sconn, orient=base.N_low)
        sq = math.sqrt(cs.nu) * math.exp(cs.tau)
        print(f"-- surface point u = {u.tolist()}, v = {v.tolist()}, kind = {base.kind}, "
              f"starred kind = {sstar.kind}, b_j N^j = {float(cs.b @ base.N_up):.3e}")
        _show("N^i", None, base.N_up)
        _show("*N^i (N^i e^-tau nu^-1/2 vs normal solve)", base.N_up / sq, sstar.N_up)
        _show("H_alpha", None, base.H_a)
        _show("*H_alpha (relation vs direct)", sq * (base.H_a + base.N_low @ dt.D0j @ base.B), sstar.H_a)
        _show("H_alpha beta", None, base.H_ab)
        _show("M_alpha beta", None, base.M_ab)
        _show("*M_alpha beta (sqrt(nu) e^tau M vs direct)", sq * base.M_ab, sstar.M_ab)
    return EXIT_OK


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_sample(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except HexFinslerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
