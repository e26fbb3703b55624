"""Command-line surface: evaluate correlators, run parameter scans,
emit the figure datasets as CSV, and run the verification suite.

Output format: RFC-4180-style CSV (comma separators, LF line endings,
header row, UTF-8).  Numbers are written as shortest round-trip decimals
(at most 17 significant digits), so identical configurations produce
byte-identical files.

A flat ``key = value`` config file (``--config``) may supply any long
option; explicit flags override file values.  Lines starting with ``#``
are comments.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from .analytic import GridSpacing, TimeGrid, evaluate_closed
from .errors import ConvergenceError, DivergenceError, DomainError, FitError
from .nonhermitian import hermitian_equivalent
from .spectral import BathSpec, ModelSpec
from .verification import run_all_checks

__all__ = ["main"]

_FIG3_TAUS = (0.0, 0.2, 0.4, 0.6, 1.0, 2.0)
_FIG4_TIMES = (0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0)


def _fmt(x) -> str:
    """Shortest round-trip decimal (<= 17 significant digits)."""
    return repr(float(x))


def _write_csv(path: str, header: List[str], rows) -> None:
    text_rows = [",".join(header)]
    for row in rows:
        text_rows.append(",".join(c if isinstance(c, str) else _fmt(c) for c in row))
    data = "\n".join(text_rows) + "\n"
    if path == "-":
        sys.stdout.write(data)
    else:
        Path(path).write_text(data, encoding="utf-8", newline="\n")


def _read_config(path: str) -> Dict[str, str]:
    cfg: Dict[str, str] = {}
    for lineno, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise DomainError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        cfg[key.strip().replace("-", "_")] = value.strip()
    return cfg


class _Options:
    """Flag > config-file > built-in default resolution."""

    def __init__(self, args: argparse.Namespace):
        self.args = vars(args)
        self.cfg = _read_config(args.config) if getattr(args, "config", None) else {}

    def get(self, name: str, cast, default):
        value = self.args.get(name)
        if value is not None:
            return value
        if name in self.cfg:
            raw = self.cfg[name]
            if cast is bool:
                return raw.lower() in ("1", "true", "yes", "on")
            return cast(raw)
        return default

    def flag(self, name: str, default=False) -> bool:
        if self.args.get(name):
            return True
        return self.get(name, bool, default)


def _time_grid(opt: _Options) -> TimeGrid:
    t_min = opt.get("tmin", float, 1e-2)
    t_max = opt.get("tmax", float, 1e2)
    points = opt.get("points", int, 100)
    if opt.flag("log"):
        return TimeGrid.log(t_min, t_max, points)
    return TimeGrid.linear(t_min, t_max, points)


def _series_rows(model: ModelSpec, grid: TimeGrid, prefix=()):
    series = evaluate_closed(model, grid)
    for i, t in enumerate(series.times):
        yield (*prefix, t, series.gamma[i], series.p_x[i],
               series.phi[i], series.c_x[i], "closed")


def _effective_model(s, A, B, eps, tau) -> ModelSpec:
    bath = hermitian_equivalent(BathSpec(s=s, A=A, B=B, tau=tau))
    return ModelSpec(bath=bath, epsilon=eps)


def cmd_eval(opt: _Options) -> int:
    model = _effective_model(
        opt.get("s", float, 1.0), opt.get("A", float, 1.0),
        opt.get("B", float, 1.0), opt.get("eps", float, 0.0),
        opt.get("tau", float, 0.0),
    )
    grid = _time_grid(opt)
    _write_csv(
        opt.get("out", str, "-"),
        ["t", "gamma", "P_x", "phi", "C_x", "source"],
        _series_rows(model, grid),
    )
    return 0


def _float_list(raw: str) -> List[float]:
    return [float(tok) for tok in raw.split(",") if tok.strip()]


def cmd_scan(opt: _Options) -> int:
    s_list = opt.get("s", _float_list, [1.0])
    a_list = opt.get("A", _float_list, [1.0])
    b_list = opt.get("B", _float_list, [1.0])
    eps_list = opt.get("eps", _float_list, [0.0])
    tau_list = opt.get("tau", _float_list, [0.0])
    grid = _time_grid(opt)

    def rows():
        for s in s_list:
            for a in a_list:
                for b in b_list:
                    for eps in eps_list:
                        for tau in tau_list:
                            model = _effective_model(s, a, b, eps, tau)
                            yield from _series_rows(
                                model, grid, prefix=(s, a, b, eps, tau)
                            )

    _write_csv(
        opt.get("out", str, "-"),
        ["s", "A", "B", "eps", "tau", "t", "gamma", "P_x", "phi", "C_x", "source"],
        rows(),
    )
    return 0


# --------------------------------------------------------------------------
# figure datasets
# --------------------------------------------------------------------------

def _fig1_rows():
    short = TimeGrid.log(1e-4, 1.0, 161)
    long = TimeGrid.log(1.0, 1e4, 161)
    for panel, grid, a_values in (
        ("a", short, (0.8, 1.0, 2.0)),
        ("b", long, (0.8,)),
        ("c", long, (1.0,)),
        ("d", long, (2.0,)),
    ):
        for a in a_values:
            series = evaluate_closed(ModelSpec(BathSpec(1.0, a, 1.0)), grid)
            for i, t in enumerate(series.times):
                yield (panel, a, t, series.p_x[i], abs(series.c_x[i]))


def _fig2_short_rows():
    grid = TimeGrid.log(1e-4, 1.0, 161)
    for s in (0.5, 1.0, 1.5, 2.0, 2.5, 3.0):
        series = evaluate_closed(ModelSpec(BathSpec(s, 1.0, 1.0)), grid)
        for i, t in enumerate(series.times):
            yield ("a", s, t, series.p_x[i], abs(series.c_x[i]))


def _fig2_long_rows():
    from .numerics import gamma_fn

    grid = TimeGrid.log(10.0, 1e6, 201)
    panels = (("b", (1.5, 2.5)), ("c", (2.0, 3.0)), ("d", (0.3, 0.5, 0.7)))
    for panel, s_values in panels:
        for s in s_values:
            series = evaluate_closed(ModelSpec(BathSpec(s, 1.0, 1.0)), grid)
            # P0 = e^{-A Gamma(s-1)}: long-time plateau for s > 1, the
            # stretched-exponential prefactor for s < 1
            ln_p0 = -gamma_fn(s - 1.0)
            for i, t in enumerate(series.times):
                ln_p_ratio = -series.gamma[i] - ln_p0
                cx = series.c_x[i]
                if cx == 0.0:
                    continue  # log of zero crossing is undefined
                ln_c_ratio = math.log(abs(cx)) - ln_p0
                yield (panel, s, t, abs(ln_p_ratio), abs(ln_c_ratio))


def _fig3_rows():
    grid = TimeGrid.log(1e-2, 1e3, 181)
    for s in (1.0, 0.5, 2.5):
        for tau in _FIG3_TAUS:
            model = _effective_model(s, 1.0, 1.0, 0.0, tau)
            series = evaluate_closed(model, grid)
            for i, t in enumerate(series.times):
                yield (s, tau, t, series.p_x[i])


def _fig4_rows():
    from .nonhermitian import p_x_nh

    taus = np.linspace(0.0, 2.0, 41)
    for s in (1.0, 0.5, 2.5):
        for t in _FIG4_TIMES:
            for tau in taus:
                yield (s, t, tau, p_x_nh(BathSpec(s, 1.0, 1.0, float(tau)), t))


_FIGURES = {
    1: [("fig1.csv", ["panel", "A", "t", "P_x", "abs_C_x"], _fig1_rows)],
    2: [
        ("fig2_short.csv", ["panel", "s", "t", "P_x", "abs_C_x"], _fig2_short_rows),
        ("fig2_long.csv",
         ["panel", "s", "t", "abs_ln_Px_over_P0", "abs_ln_absCx_over_P0"],
         _fig2_long_rows),
    ],
    3: [("fig3.csv", ["s", "tau", "t", "P_x"], _fig3_rows)],
    4: [("fig4.csv", ["s", "t", "tau", "P_x"], _fig4_rows)],
}


def cmd_fig(opt: _Options) -> int:
    fig_id = opt.get("id", int, None)
    if fig_id not in _FIGURES:
        raise DomainError(f"unknown figure id {fig_id!r}; choose 1..4")
    outdir = Path(opt.get("outdir", str, "."))
    outdir.mkdir(parents=True, exist_ok=True)
    for name, header, rows in _FIGURES[fig_id]:
        path = outdir / name
        _write_csv(str(path), header, rows())
        print(path)
    return 0


def cmd_verify(opt: _Options) -> int:
    tol_scale = opt.get("tol_scale", float, 1.0)
    results = run_all_checks(tol_scale=tol_scale)
    all_passed = True
    for r in results:
        status = "pass" if r.passed else "fail"
        all_passed &= r.passed
        print(f"CHECK {r.name} {status} {_fmt(r.max_residual)}")
    print(f"VERIFY {'pass' if all_passed else 'fail'} ({len(results)} checks)")
    return 0 if all_passed else 1


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

def _add_model_flags(p: argparse.ArgumentParser, as_list: bool):
    kind = str if as_list else float
    extra = " (comma-separated list)" if as_list else ""
    p.add_argument("--s", type=kind, help=f"bath exponent s > 0{extra}")
    p.add_argument("--A", type=kind, help=f"coupling strength A >= 0{extra}")
    p.add_argument("--B", type=kind, help=f"cutoff energy B > 0{extra}")
    p.add_argument("--eps", type=kind, help=f"bias epsilon{extra}")
    p.add_argument("--tau", type=kind, help=f"bath non-Hermiticity tau >= 0{extra}")


def _add_grid_flags(p: argparse.ArgumentParser):
    p.add_argument("--tmin", type=float, help="first sample time (default 1e-2)")
    p.add_argument("--tmax", type=float, help="last sample time (default 1e2)")
    p.add_argument("--points", type=int, help="number of samples (default 100)")
    p.add_argument("--log", action="store_true", default=None,
                   help="log-spaced times (default: linear)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinboson",
        description=(
            "Pure-dephasing qubit correlators for power-law bosonic baths. "
            "CSV output columns are fixed per command and numbers are "
            "shortest round-trip decimals, so runs are byte-reproducible."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser(
        "eval", help="closed-form correlators on a time grid "
        "(CSV columns: t,gamma,P_x,phi,C_x,source)")
    _add_model_flags(p_eval, as_list=False)
    _add_grid_flags(p_eval)
    p_eval.add_argument("--out", help="output path ('-' = stdout)")
    p_eval.add_argument("--config", help="key = value config file")
    p_eval.set_defaults(func=cmd_eval)

    p_scan = sub.add_parser(
        "scan", help="cartesian parameter scan "
        "(CSV columns: s,A,B,eps,tau,t,gamma,P_x,phi,C_x,source)")
    _add_model_flags(p_scan, as_list=True)
    _add_grid_flags(p_scan)
    p_scan.add_argument("--out", help="output path ('-' = stdout)")
    p_scan.add_argument("--config", help="key = value config file")
    p_scan.set_defaults(func=cmd_scan)

    p_fig = sub.add_parser(
        "fig", help="figure datasets: 1 = Ohmic P_x/|C_x| short+long, "
        "2 = P_x/|C_x| across s with plateau-relative long-time columns, "
        "3 = P_x(t) for tau sweeps, 4 = P_x(tau) at fixed times")
    p_fig.add_argument("--id", type=int, help="figure number 1..4")
    p_fig.add_argument("--outdir", help="output directory (default '.')")
    p_fig.add_argument("--config", help="key = value config file")
    p_fig.set_defaults(func=cmd_fig)

    p_verify = sub.add_parser(
        "verify", help="run the invariant suite; exit 0 iff all checks pass")
    p_verify.add_argument("--tol-scale", dest="tol_scale", type=float,
                          help="multiply all tolerances (default 1.0)")
    p_verify.add_argument("--config", help="key = value config file")
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        opt = _Options(args)
        if args.command == "scan":
            # scan flags arrive as raw comma-separated strings
            for name in ("s", "A", "B", "eps", "tau"):
                raw = opt.args.get(name)
                if raw is not None:
                    opt.args[name] = _float_list(raw)
        return args.func(opt)
    except (DomainError, DivergenceError, ConvergenceError, FitError,
            OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
