"""Command-line interface: ``xspectra simulate | estimate | study``.

Exit codes: 0 success, 2 usage or validation error, 1 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from .arfima import DEFAULT_BURN_IN, ArfimaSpec, McArfimaSpec, simulate_correlated_arfima, simulate_mc_arfima
from .errors import InsufficientPointsError, NonPositiveSpectrumError, XSpectraError
from .estimators import APE_PARTS, ESTIMATORS, EstimatorConfig, estimate_from_spectrum
from .spectral import MIN_LENGTH, smoothed_cross_periodogram
from .study import Model, StudyGrid, run_study
from .svg import mean_chart, variance_chart

log = logging.getLogger("xspectra")


class UsageError(Exception):
    """Invalid flag value; carries the flag name for the diagnostic."""

    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _check_d(flag: str, d: float):
    if not -0.5 < d < 0.5:
        raise UsageError(flag, f"must lie in (-0.5, 0.5), got {d}")


def _check_common_sim(args):
    if not -1.0 <= args.rho <= 1.0:
        raise UsageError("--rho", f"must lie in [-1, 1], got {args.rho}")
    if args.T < MIN_LENGTH:
        raise UsageError("--T", f"must be at least {MIN_LENGTH}, got {args.T}")
    if args.burn_in < 0:
        raise UsageError("--burn-in", f"must be nonnegative, got {args.burn_in}")


# --- simulate --------------------------------------------------------------


def cmd_simulate(args) -> int:
    _check_common_sim(args)
    if args.model == Model.CORRELATED_ARFIMA.value:
        for flag in ("d1", "d2"):
            _check_d(f"--{flag}", getattr(args, flag))
        spec = ArfimaSpec(args.d1, args.d2, args.rho, args.T, args.burn_in)
        x, y = simulate_correlated_arfima(spec, np.random.default_rng(args.seed))
    else:
        d = {k: getattr(args, k) for k in ("d1", "d2", "d3", "d4")}
        defaults = {"d1": 0.4, "d2": 0.2, "d3": 0.2, "d4": 0.4}
        for k, v in d.items():
            if v is None:
                d[k] = defaults[k]
            _check_d(f"--{k}", d[k])
        spec = McArfimaSpec.study_family(args.rho, args.T, args.burn_in, **d)
        x, y = simulate_mc_arfima(spec, np.random.default_rng(args.seed))
    print(f"simulate: {spec!r} seed={args.seed}", file=sys.stderr)
    out = sys.stdout if args.out in (None, "-") else open(args.out, "w", newline="")
    try:
        out.write("x,y\n")
        for a, b in zip(x, y):
            out.write(f"{float(a)!r},{float(b)!r}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


# --- estimate --------------------------------------------------------------


def read_series_file(path: str) -> tuple[np.ndarray, np.ndarray]:
    """Read a two-column ``x,y`` CSV with an optional header row."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if rows:
        try:
            float(rows[0][0])
        except ValueError:
            rows = rows[1:]
    xs, ys = [], []
    for lineno, row in enumerate(rows, 1):
        if len(row) != 2:
            raise ValueError(f"row {lineno}: expected 2 columns, got {len(row)}")
        try:
            a, b = float(row[0]), float(row[1])
        except ValueError:
            raise ValueError(f"row {lineno}: non-numeric value in {row}")
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError(f"row {lineno}: non-finite value")
        xs.append(a)
        ys.append(b)
    if len(xs) < MIN_LENGTH:
        raise ValueError(f"need at least {MIN_LENGTH} rows, got {len(xs)}")
    return np.array(xs), np.array(ys)


def _diag_text(diag: dict) -> list[str]:
    out = []
    for k, v in diag.items():
        if isinstance(v, bool):
            out.append(f"{k}={str(v).lower()}")
        else:
            out.append(f"{k}={v:.10g}")
    return out


def cmd_estimate(args) -> int:
    if args.m is not None and args.m < 2:
        raise UsageError("--m", f"insufficient points: bandwidth must be at least 2, got {args.m}")
    if args.m_frac is not None and not 0.0 < args.m_frac <= 0.5:
        raise UsageError("--m-frac", f"must lie in (0, 0.5], got {args.m_frac}")
    if not 0.0 < args.q < 1.0:
        raise UsageError("--q", f"must lie in (0, 1), got {args.q}")
    if args.window and (args.window < 3 or args.window % 2 == 0):
        raise UsageError("--window", f"must be 0 or an odd integer >= 3, got {args.window}")
    names = ESTIMATORS if args.estimator == "all" else (args.estimator.upper(),)
    if "XPE" in names and args.m is not None and args.m < 3:
        raise UsageError("--m", "insufficient points: XPE needs at least 3 frequencies")

    x, y = read_series_file(args.input)
    config = EstimatorConfig(
        m=args.m, m_over_T=None if args.m is not None else (args.m_frac or 0.1),
        q=args.q, ape_part=args.ape_part, smoothing_span=args.window,
    )
    T = x.size
    try:
        m = config.resolve_m(T)
    except XSpectraError as exc:
        raise UsageError("--m" if args.m is not None else "--m-frac", str(exc))
    if args.window and args.window > T // 2:
        raise UsageError("--window", f"span {args.window} exceeds the {T // 2} Fourier frequencies")
    spectrum = smoothed_cross_periodogram(x, y, span=args.window)

    lines = []
    for name in names:
        try:
            res = estimate_from_spectrum(name, spectrum, m, config)
        except NonPositiveSpectrumError as exc:
            print(f"warning: {name.lower()}: {exc}", file=sys.stderr)
            lines.append([name.lower(), "NA", str(m)])
            continue
        except InsufficientPointsError as exc:
            raise UsageError("--m", f"insufficient points: {exc}")
        lines.append([name.lower(), f"{res.h_xy:.10g}", str(res.m_used)] + _diag_text(res.diagnostics))
    for line in lines:
        if args.format == "csv":
            print(",".join(line))
        else:
            print(f"{line[0].upper():<4} H_xy = {line[1]:<14} m = {line[2]:<6} " + " ".join(line[3:]))
    return 0


# --- study -----------------------------------------------------------------


def cmd_study(args) -> int:
    if args.T < MIN_LENGTH:
        raise UsageError("--T", f"must be at least {MIN_LENGTH}, got {args.T}")
    if args.replications < 1:
        raise UsageError("--replications", f"must be at least 1, got {args.replications}")
    for r in args.rho_list:
        if not -1.0 <= r <= 1.0:
            raise UsageError("--rho-list", f"rho {r} outside [-1, 1]")
    for f in args.m_frac_list:
        if not 0.0 < f <= 0.5:
            raise UsageError("--m-frac-list", f"m/T value {f} outside (0, 0.5]")
    if args.window and (args.window < 3 or args.window % 2 == 0):
        raise UsageError("--window", f"must be 0 or an odd integer >= 3, got {args.window}")
    try:
        grid = StudyGrid(
            model=Model(args.model), rho_values=tuple(args.rho_list),
            m_over_T_values=tuple(args.m_frac_list), T=args.T, replications=args.replications,
            smoothing_span=args.window, base_seed=args.seed, burn_in=args.burn_in,
            q=args.q, ape_part=args.ape_part,
        )
    except XSpectraError as exc:
        raise UsageError("--model", str(exc))

    out_dir = Path(args.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        probe = out_dir / "summary.csv"
        probe.touch()
    except OSError as exc:
        print(f"error: cannot write to {out_dir}: {exc}", file=sys.stderr)
        return 1

    print(f"study: {grid.model.value} T={grid.T} replications={grid.replications} "
          f"rho={list(grid.rho_values)} m/T={list(grid.m_over_T_values)} seed={grid.base_seed}",
          file=sys.stderr)
    summary = run_study(grid, workers=args.workers)
    (out_dir / "summary.csv").write_text(summary.to_csv())
    if args.svg:
        for name in ESTIMATORS:
            (out_dir / f"mean_{name.lower()}.svg").write_text(mean_chart(summary, name))
            (out_dir / f"var_{name.lower()}.svg").write_text(variance_chart(summary, name, grid.T))
    failed = sum(r.failed for r in summary.rows)
    if failed:
        print(f"warning: {failed} estimator evaluations failed and were excluded", file=sys.stderr)
    return 0


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="xspectra", description="Spectral estimators of the bivariate Hurst exponent.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    models = [m.value for m in Model]

    s = sub.add_parser("simulate", help="simulate a correlated or mixed-correlated ARFIMA pair")
    s.add_argument("--model", choices=models, default="arfima")
    s.add_argument("--d1", type=float, default=0.4)
    s.add_argument("--d2", type=float, default=None)
    s.add_argument("--d3", type=float, default=None)
    s.add_argument("--d4", type=float, default=None)
    s.add_argument("--rho", type=float, default=0.8,
                   help="innovation correlation (sigma_23 for mc-arfima)")
    s.add_argument("--T", type=int, default=5000)
    s.add_argument("--burn-in", type=int, default=DEFAULT_BURN_IN)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_simulate)

    e = sub.add_parser("estimate", help="estimate H_xy from a two-column CSV")
    e.add_argument("--in", dest="input", required=True)
    e.add_argument("--estimator", choices=["ape", "xpe", "lxw", "all"], default="all")
    g = e.add_mutually_exclusive_group()
    g.add_argument("--m", type=int)
    g.add_argument("--m-frac", type=float, help="bandwidth as a fraction of T (default 0.1)")
    e.add_argument("--q", type=float, default=0.5)
    e.add_argument("--ape-part", choices=APE_PARTS, default="modulus")
    e.add_argument("--window", type=int, default=21)
    e.add_argument("--format", choices=["csv", "plain"], default="csv")
    e.set_defaults(func=cmd_estimate)

    st = sub.add_parser("study", help="run the Monte Carlo bias/variance study")
    st.add_argument("--model", choices=models, default="arfima")
    st.add_argument("--T", type=int, default=5000)
    st.add_argument("--replications", type=int, default=1000)
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--out-dir", required=True)
    st.add_argument("--svg", action="store_true")
    st.add_argument("--rho-list", type=_float_list, default=[0.2, 0.4, 0.6, 0.8, 1.0])
    st.add_argument("--m-frac-list", type=_float_list,
                    default=[round(0.05 * k, 2) for k in range(1, 11)])
    st.add_argument("--window", type=int, default=21)
    st.add_argument("--burn-in", type=int, default=DEFAULT_BURN_IN)
    st.add_argument("--q", type=float, default=0.5)
    st.add_argument("--ape-part", choices=APE_PARTS, default="modulus")
    st.add_argument("--workers", type=int, default=None,
                    help="worker processes (default: $XSPECTRA_THREADS, 0 = all cores)")
    st.set_defaults(func=cmd_study)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "simulate" and args.d2 is None and args.model == "arfima":
        args.d2 = args.d1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"xspectra {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"xspectra {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
