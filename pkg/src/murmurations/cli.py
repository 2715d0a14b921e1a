"""Command-line entry point.

Every subcommand writes deterministic CSV (fixed summation orders, shortest
round-trip float formatting), so identical flags and cache state reproduce
byte-identical output.  SVG emission is a pure view over the CSV data.
Exit codes: 0 success / verdict pass, 1 verdict failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from pathlib import Path

from .arith import build_sieve
from .classnumbers import hurwitz_sieve, load_table, save_table
from .constants import euler_constant, q_weighted_sums, qsqrt_product
from .density import (DensityConfig, dyadic_closed_form_constants,
                      murmuration_density, murmuration_density_bessel,
                      universal_asymptotic)
from .multfns import is_admissible, phi_circ, phi_circ_bruteforce, theta, \
    theta_bruteforce, _smooth_square_gs
from .signcheck import SignCheckConfig, grid_verify, second_peak_probe
from .traceformula import dyadic_average, interval_average


def cache_dir() -> Path:
    """Persistent cache location; MURMUR_CACHE_DIR overrides the default."""
    env = os.environ.get("MURMUR_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "murmurations"


def _write_csv(path: str | None, header: list[str],
               rows: list[list[object]]) -> None:
    out = open(path, "w", newline="") if path else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(x) if isinstance(x, float) else x for x in row])
    finally:
        if path:
            out.close()


def _write_svg(path: str, xs: list[float], ys: list[float]) -> None:
    """Minimal fixed-viewport polyline plot, no styling dependencies."""
    W, H, pad = 800, 400, 40
    xlo, xhi = min(xs), max(xs)
    ylo, yhi = min(ys), max(ys)
    if xhi == xlo:
        xhi = xlo + 1.0
    if yhi == ylo:
        yhi = ylo + 1.0
    pts = " ".join(
        f"{pad + (W - 2 * pad) * (x - xlo) / (xhi - xlo):.2f},"
        f"{H - pad - (H - 2 * pad) * (y - ylo) / (yhi - ylo):.2f}"
        for x, y in zip(xs, ys))
    with open(path, "w") as fh:
        fh.write(
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" '
            f'height="{H}" viewBox="0 0 {W} {H}">\n'
            f'<rect width="{W}" height="{H}" fill="white"/>\n'
            f'<polyline points="{pts}" fill="none" stroke="black" '
            f'stroke-width="1"/>\n</svg>\n')


def _parse_grid(spec: str) -> list[float]:
    try:
        start, stop, step = (float(t) for t in spec.split(":"))
    except ValueError as exc:
        raise SystemExit(f"bad grid spec {spec!r}; expected start:stop:step"
                         ) from exc
    if step <= 0 or stop < start:
        raise SystemExit(f"bad grid spec {spec!r}")
    n = int(round((stop - start) / step))
    return [start + i * step for i in range(n + 1)]


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_sieve_classnumbers(args: argparse.Namespace) -> int:
    table = hurwitz_sieve(args.dmin, args.dmax)
    path = Path(args.hurwitz_cache) if args.hurwitz_cache else (
        cache_dir() / f"hurwitz_{table.dmin}_{table.dmax}.murh1")
    path.parent.mkdir(parents=True, exist_ok=True)
    save_table(table, str(path))
    nonzero = sum(1 for d in range(table.dmin, table.dmax + 1) if table[d])
    _write_csv(args.out, ["dmin", "dmax", "nonzero_entries", "cache_path"],
               [[table.dmin, table.dmax, nonzero, str(path)]])
    return 0


def _load_table_if_covering(path: str | None, need: int):
    if not path:
        return None
    table = load_table(path)
    if table.dmax >= need:
        return table
    print(f"note: cache {path} covers d <= {table.dmax} < {need}; "
          "falling back to per-value computation", file=sys.stderr)
    return None


def _cmd_trace_average(args: argparse.Namespace) -> int:
    table = _load_table_if_covering(args.hurwitz_cache,
                                    4 * args.P * (args.X + args.Y))
    rep = interval_average(args.X, args.Y, args.P, args.k, table=table)
    _write_csv(args.out,
               ["N_low", "N_high", "P", "k", "numerator", "denominator",
                "average", "predicted", "residual"],
               [[args.X, args.X + args.Y, args.P, args.k, rep.numerator,
                 rep.denominator, rep.average, rep.predicted, rep.residual]])
    return 0


def _cmd_dyadic_average(args: argparse.Namespace) -> int:
    table = _load_table_if_covering(args.hurwitz_cache,
                                    int(4 * args.P * args.c * args.X) + 4)
    rep = dyadic_average(args.X, args.c, args.P, args.k, table=table)
    _write_csv(args.out,
               ["N_low", "N_high", "P", "k", "numerator", "denominator",
                "average", "predicted", "residual"],
               [[args.X, int(args.c * args.X), args.P, args.k, rep.numerator,
                 rep.denominator, rep.average, rep.predicted, rep.residual]])
    return 0


def _cmd_density(args: argparse.Namespace) -> int:
    ys = _parse_grid(args.y_grid)
    cfg = DensityConfig(k=args.k, pmax=args.pmax)
    rows: list[list[object]] = []
    for y in ys:
        if y == 0.0:
            # continuous limit at the origin; no asymptotic value there
            rows.append([y, 0.0 if args.form != "asymptotic" else math.nan,
                         0.0])
            continue
        if args.form == "chebyshev":
            val, tail = murmuration_density(cfg, y), 0.0
        elif args.form == "bessel":
            val, tail = murmuration_density_bessel(cfg, y)
        else:
            val, tail = universal_asymptotic(math.sqrt(y), cfg), math.nan
        rows.append([y, val, tail])
    _write_csv(args.out, ["y", "value", "tail_bound"], rows)
    if args.svg:
        _write_svg(args.svg, [r[0] for r in rows], [r[1] for r in rows])
    return 0


def _cmd_signcheck(args: argparse.Namespace) -> int:
    offsets = tuple(float(t) for t in args.offsets.split(","))
    cfg = SignCheckConfig(S=args.S, offsets=offsets)
    cert = grid_verify(cfg)
    rows: list[list[object]] = [
        ["grid", v.offset, v.sign, v.worst_margin, v.worst_k,
         "pass" if v.passed else "fail"]
        for v in cert.verdicts]
    if not args.skip_probe:
        probe = second_peak_probe()
        rows.append(["second_peak", probe.argmax, -1 if probe.max_value < 0
                     else 1, probe.max_value, probe.dmax,
                     "pass" if probe.certified_negative else "fail"])
    _write_csv(args.report,
               ["check", "offset_or_argmax", "sign", "worst_margin_or_max",
                "k_or_dmax", "verdict"],
               rows)
    print(f"budget {cert.error_budget:.6f}  inner tail {cert.inner_tail:.6f}"
          f"  grid {cert.grid} x {len(cert.verdicts)}", file=sys.stderr)
    return 0 if all(r[-1] == "pass" for r in rows) else 1


def _cmd_verify_constants(args: argparse.Namespace) -> int:
    rows: list[list[object]] = []
    vals = {}
    for kind in ("alpha", "beta", "gamma", "A", "B", "dimC", "Delta"):
        ev = euler_constant(kind, args.pmax)
        vals[kind] = ev.value
        rows.append(["constant", kind, ev.value, ev.pmax, ev.tail_bound])
    qsum, qdsum, _ = q_weighted_sums(10 ** 6)
    r1 = abs(qsum - vals["beta"] / vals["alpha"])
    r2 = abs(vals["alpha"] / vals["gamma"] * qdsum - 1.0 / math.pi)
    r3 = abs(qsqrt_product(10 ** 6) - 3.0907)
    rows.append(["identity", "sum_Q_vs_beta_over_alpha", r1, 10 ** 6, 1e-5])
    rows.append(["identity", "sum_Q_over_d_vs_inv_pi", r2, 10 ** 6, 1e-5])
    rows.append(["identity", "qsqrt_partial_product", r3, 10 ** 6, 1e-3])
    a, b, c = dyadic_closed_form_constants(args.pmax)
    rows.append(["derived", "dyadic_a", a, args.pmax, math.nan])
    rows.append(["derived", "dyadic_b", b, args.pmax, math.nan])
    rows.append(["derived", "dyadic_c", c, args.pmax, math.nan])
    _write_csv(args.out, ["kind", "name", "value", "pmax", "tolerance"], rows)
    ok = r1 <= 1e-5 and r2 <= 1e-5 and r3 <= 1e-3
    return 0 if ok else 1


def _cmd_verify_multfns(args: argparse.Namespace) -> int:
    sieve = build_sieve(max(args.mmax, args.gmax, 4 * args.dmax * args.dmax,
                            100))
    rows: list[list[object]] = []
    ok = True
    for P in (5, 7, 11, 101):
        for r in range(1, args.rmax + 1):
            for m in range(1, args.mmax + 1):
                if m % P == 0 or m % 4 == 2 or (m % 8 == 4):
                    continue
                good = theta(r, m, P, sieve) == theta_bruteforce(r, m, P)
                ok &= good
                if not good:
                    rows.append(["theta", r, m, P, "fail"])
    rows.append(["theta", args.rmax, args.mmax, 0,
                 "pass" if ok else "fail"])
    phi_ok = True
    for r in range(1, args.dmax + 1):
        for d in range(1, args.dmax + 1):
            if not is_admissible(r, d):
                continue
            for g in _smooth_square_gs(d, args.gmax, sieve):
                for P in (7, 11):
                    try:
                        closed = phi_circ(r, d, g, P, sieve)
                    except ValueError:
                        continue
                    good = closed == phi_circ_bruteforce(r, d, g, P, sieve)
                    phi_ok &= good
                    if not good:
                        rows.append(["phi_circ", r, d, g, "fail"])
    rows.append(["phi_circ", args.dmax, args.dmax, args.gmax,
                 "pass" if phi_ok else "fail"])
    _write_csv(args.out, ["function", "r", "m_or_d", "P_or_g", "verdict"],
               rows)
    return 0 if ok and phi_ok else 1


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="murmur",
        description="Deterministic pipelines for class-number sieves, trace "
                    "averages, density evaluation, and sign certification.")
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("sieve-classnumbers",
                       help="build and cache the weighted class-number table")
    s.add_argument("--dmin", type=int, default=3)
    s.add_argument("--dmax", type=int, required=True)
    s.add_argument("--hurwitz-cache", help="cache file path (MURH1 format)")
    s.add_argument("--out", help="summary CSV path (default stdout)")
    s.set_defaults(func=_cmd_sieve_classnumbers)

    s = sub.add_parser("trace-average",
                       help="interval average of traces vs predicted density;"
                            " CSV columns: N_low,N_high,P,k,numerator,"
                            "denominator,average,predicted,residual")
    s.add_argument("--X", type=int, required=True)
    s.add_argument("--Y", type=int, required=True)
    s.add_argument("--P", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--hurwitz-cache")
    s.add_argument("--out")
    s.set_defaults(func=_cmd_trace_average)

    s = sub.add_parser("dyadic-average",
                       help="dyadic average of traces vs the dyadic density")
    s.add_argument("--X", type=int, required=True)
    s.add_argument("--c", type=float, required=True)
    s.add_argument("--P", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--hurwitz-cache")
    s.add_argument("--out")
    s.set_defaults(func=_cmd_dyadic_average)

    s = sub.add_parser("density",
                       help="evaluate the density on a y-grid; CSV columns: "
                            "y,value,tail_bound")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--y-grid", required=True, metavar="START:STOP:STEP")
    s.add_argument("--form", choices=("chebyshev", "bessel", "asymptotic"),
                   default="chebyshev")
    s.add_argument("--pmax", type=int, default=10 ** 6)
    s.add_argument("--out")
    s.add_argument("--svg", help="also write a polyline plot")
    s.set_defaults(func=_cmd_density)

    s = sub.add_parser("signcheck",
                       help="one-period sign certification and second-peak "
                            "probe; CSV of worst margins per offset")
    s.add_argument("--offsets", default="0,0.5,0.162")
    s.add_argument("--S", type=int, default=4_010_000)
    s.add_argument("--skip-probe", action="store_true")
    s.add_argument("--report", help="CSV path (default stdout)")
    s.set_defaults(func=_cmd_signcheck)

    s = sub.add_parser("verify-constants",
                       help="Euler-product constants, tail bounds, and "
                            "identity residuals as CSV")
    s.add_argument("--pmax", type=int, default=10 ** 6)
    s.add_argument("--out")
    s.set_defaults(func=_cmd_verify_constants)

    s = sub.add_parser("verify-multfns",
                       help="closed forms vs brute-force character sums")
    s.add_argument("--rmax", type=int, default=12)
    s.add_argument("--mmax", type=int, default=200)
    s.add_argument("--dmax", type=int, default=12)
    s.add_argument("--gmax", type=int, default=1000)
    s.add_argument("--out")
    s.set_defaults(func=_cmd_verify_multfns)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return int(args.func(args))
    except SystemExit as exc:
        print(str(exc), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
