"""Command-line front end.

Exit status: 0 on success, 2 on a domain error, 3 when a series or root
search fails to converge, 64 on malformed arguments.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

from . import applications as app
from .errors import DomainError, NotConverged, UnderflowError
from .kprime import KPrimeParams, kprime_cdf, kprime_quantile
from .ksquare import KSquareParams, ksquare_cdf, ksquare_quantile
from .series_engine import EvalOptions, EvalReport, Strategy

EXIT_DOMAIN = 2
EXIT_NOT_CONVERGED = 3
EXIT_USAGE = 64

BENCH_COLUMNS = ["dist", "x", "p", "q", "r", "ncp", "cdf", "m1_iters", "m2_iters", "hybrid_iters", "gain_pct"]

# Benchmark inputs: (x, q, r, a) for K-prime and (x, p, q, r, a^2) for K-square.
TABLE1 = [
    (1, 5, 20, 10),
    (11, 5, 20, 50),
    (40, 50, 50, 50),
    (40, 50, 5, 50),
    (50, 50, 20, 30),
    (40, 100, 5, 50),
    (45, 100, 10, 40),
    (65, 1000, 15, 50),
]
TABLE2 = [
    (36, 2, 20, 18, 46.667),
    (0.19444, 4, 11, 7, 4.7143),
    (288, 3, 99, 96, 891),
    (972, 11, 1199, 1188, 10791),
    (795.2, 5, 999, 994, 3996),
    (475.2, 5, 599, 594, 2396),
    (715.2, 5, 899, 894, 3596),
    (202.909, 11, 1499, 1488, 2248.5),
    (216.545, 11, 1599, 1588, 2398.5),
    (223.364, 11, 1649, 1638, 2473.5),
    (11.6978, 4, 99, 95, 99),
]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


@dataclass(frozen=True)
class BenchRow:
    dist: str
    x: float
    p: float | None
    q: float
    r: float
    ncp: float
    cdf: float
    m1_iters: int | None
    m2_iters: int | None
    hybrid_iters: int | None

    @property
    def gain_pct(self) -> int | None:
        if not self.m1_iters or self.m2_iters is None:
            return None
        return round(100.0 * (self.m1_iters - self.m2_iters) / self.m1_iters)

    def cells(self) -> list[str]:
        def fmt(v):
            return "" if v is None else (str(v) if isinstance(v, int) else f"{v:g}")
        return [self.dist, fmt(self.x), fmt(self.p), fmt(self.q), fmt(self.r), fmt(self.ncp),
                f"{self.cdf:.4f}", fmt(self.m1_iters), fmt(self.m2_iters), fmt(self.hybrid_iters),
                fmt(self.gain_pct)]


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _options(ns) -> EvalOptions:
    return EvalOptions(tolerance=ns.tol, strategy=ns.strategy, max_iterations=ns.max_iter)


def _emit(value: float, report: EvalReport | None, show: bool) -> None:
    print(_fmt(value))
    if show and report is not None:
        print(f"iterations={report.iterations} bound={report.achieved_bound:.3e} "
              f"start={report.start_index} strategy={report.strategy_used.value} "
              f"underflow_adjusted={report.underflow_adjusted} converged={report.converged}")


def _iters(fn, strategy: Strategy, tol: float) -> int | None:
    try:
        return fn(EvalOptions(tolerance=tol, strategy=strategy)).iterations
    except (UnderflowError, NotConverged):
        return None


def bench_rows(table: int, tol: float) -> list[BenchRow]:
    rows = []
    if table == 1:
        for x, q, r, a in TABLE1:
            fn = lambda o, x=x, p=KPrimeParams(q, r, a): kprime_cdf(p, x, o)
            rows.append(BenchRow("kprime", x, None, q, r, a, fn(EvalOptions(tolerance=tol)).value,
                                 _iters(fn, Strategy.METHOD1, tol), _iters(fn, Strategy.METHOD2, tol),
                                 _iters(fn, Strategy.HYBRID, tol)))
    else:
        for x, p, q, r, a2 in TABLE2:
            fn = lambda o, x=x, k=KSquareParams(p, q, r, a2): ksquare_cdf(k, x, o)
            rows.append(BenchRow("ksquare", x, p, q, r, a2, fn(EvalOptions(tolerance=tol)).value,
                                 _iters(fn, Strategy.METHOD1, tol), _iters(fn, Strategy.METHOD2, tol),
                                 _iters(fn, Strategy.HYBRID, tol)))
    return rows


def write_bench(rows: list[BenchRow], stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(BENCH_COLUMNS)
    for row in rows:
        w.writerow(row.cells())


def _build_parser() -> _Parser:
    parser = _Parser(prog="kdist", description="K-prime and K-square distribution functions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def series_cmd(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--tol", type=float, default=1e-12)
        sp.add_argument("--strategy", choices=[s.value for s in Strategy], default=Strategy.AUTO.value)
        sp.add_argument("--max-iter", type=int, default=200_000)
        sp.add_argument("--report", action="store_true", help="print evaluation diagnostics")
        return sp

    sp = series_cmd("kprime", "CDF of K'_{q,r}(a)")
    for f in ("--q", "--r", "--a", "--x"):
        sp.add_argument(f, type=float, required=True)
    sp = series_cmd("ksquare", "CDF of K^2_{p,q,r}(a2)")
    for f in ("--p", "--q", "--r", "--a2", "--x"):
        sp.add_argument(f, type=float, required=True)
    sp = series_cmd("kprime-quantile", "quantile of K'_{q,r}(a)")
    for f in ("--q", "--r", "--a", "--prob"):
        sp.add_argument(f, type=float, required=True)
    sp = series_cmd("ksquare-quantile", "quantile of K^2_{p,q,r}(a2)")
    for f in ("--p", "--q", "--r", "--a2", "--prob"):
        sp.add_argument(f, type=float, required=True)

    sp = sub.add_parser("prep", help="replication probability p_rep")
    sp.add_argument("--t1", type=float, required=True)
    sp.add_argument("--n1", type=float, required=True)

    sp = series_cmd("predict-t", "predictive probability that a replication t exceeds a threshold")
    for f in ("--t1", "--n1", "--n", "--threshold"):
        sp.add_argument(f, type=float, required=True)
    sp.add_argument("--tail", choices=["upper", "lower"], default="upper")

    sp = series_cmd("predict-f", "predictive probability that a future F exceeds a threshold")
    for f in ("--f0", "--n0", "--n", "--threshold"):
        sp.add_argument(f, type=float, required=True)
    sp.add_argument("--g", type=int, required=True)

    sp = series_cmd("corr", "sampling CDF of a correlation coefficient")
    for f in ("--n", "--rho", "--robs"):
        sp.add_argument(f, type=float, required=True)
    sp = series_cmd("corr-ci", "exact confidence limits for a correlation coefficient")
    for f in ("--n", "--robs", "--level"):
        sp.add_argument(f, type=float, required=True)
    sp = series_cmd("mcorr", "sampling CDF of a squared multiple correlation")
    sp.add_argument("--n", type=float, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--rho2", type=float, required=True)
    sp.add_argument("--r2obs", type=float, required=True)

    sp = sub.add_parser("bench", help="regenerate a benchmark table as CSV")
    sp.add_argument("--table", type=int, choices=[1, 2], required=True)
    sp.add_argument("--tol", type=float, choices=[1e-4, 1e-12], default=1e-4)
    sp.add_argument("--out", default="-", help="output path, '-' for stdout")
    return parser


def _dispatch(ns) -> None:
    cmd = ns.command
    if cmd == "bench":
        rows = bench_rows(ns.table, ns.tol)
        if ns.out == "-":
            write_bench(rows, sys.stdout)
        else:
            with open(ns.out, "w", newline="", encoding="utf-8") as fh:
                write_bench(rows, fh)
        return
    if cmd == "prep":
        print(_fmt(app.p_rep(ns.t1, ns.n1)))
        return
    opts = _options(ns)
    if cmd == "kprime":
        rep = kprime_cdf(KPrimeParams(ns.q, ns.r, ns.a), ns.x, opts)
        _emit(rep.value, rep, ns.report)
    elif cmd == "ksquare":
        rep = ksquare_cdf(KSquareParams(ns.p, ns.q, ns.r, ns.a2), ns.x, opts)
        _emit(rep.value, rep, ns.report)
    elif cmd == "kprime-quantile":
        print(_fmt(kprime_quantile(KPrimeParams(ns.q, ns.r, ns.a), ns.prob, opts)))
    elif cmd == "ksquare-quantile":
        print(_fmt(ksquare_quantile(KSquareParams(ns.p, ns.q, ns.r, ns.a2), ns.prob, opts)))
    elif cmd == "predict-t":
        print(_fmt(app.prob_replication_exceeds(ns.t1, ns.n1, ns.n, ns.threshold, ns.tail, opts)))
    elif cmd == "predict-f":
        pred = app.predictive_f_params(ns.f0, ns.g, ns.n0, ns.n)
        print(_fmt(1.0 - pred.cdf(ns.threshold, opts)))
    elif cmd == "corr":
        print(_fmt(app.corr_sampling_cdf(ns.n, ns.rho, ns.robs, opts)))
    elif cmd == "corr-ci":
        lo, hi = app.corr_confidence_limits(ns.n, ns.robs, ns.level, opts)
        print(f"{_fmt(lo)} {_fmt(hi)}")
    elif cmd == "mcorr":
        print(_fmt(app.mcorr_sampling_cdf(ns.n, ns.m, ns.rho2, ns.r2obs, opts)))


def run(arguments: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(arguments)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        _dispatch(ns)
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (NotConverged, UnderflowError) as exc:
        print(f"not converged: {exc}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return 0


def main() -> None:
    sys.exit(run())
