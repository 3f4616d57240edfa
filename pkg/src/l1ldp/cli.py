"""Command-line front end: ``l1ldp <command> [options]``.

Exit codes: 0 success, 1 usage or input error, 2 partial result (some grid
points failed), 3 too many indeterminate trials, 4 a verification check
failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import hdg_core, ldp_core, monte_carlo as mc, verification
from .errors import L1LdpError
from .pt_core import Mode, pt_curve

EXIT_OK, EXIT_USAGE, EXIT_PARTIAL, EXIT_INDETERMINATE, EXIT_VERIFY = 0, 1, 2, 3, 4
INDETERMINATE_LIMIT = 0.01

TABLE_ALPHAS = {
    "T1": (ldp_core.Mode.SIGNED, mc.TABLE2_BETA, (0.35, 0.40, 0.45, 0.50, 0.55, 0.60, 0.65)),
    "T3": (ldp_core.Mode.NONNEGATIVE, mc.TABLE4_BETA, (0.40, 0.45, 0.50, 0.55, 0.60)),
}
TABLE_FIELDS = ("beta_w", "beta_0", "nu", "a0", "c3", "gamma", "I_ldp")
LDP_FIELDS = ("alpha", "beta_w", "beta_0", "nu", "a0", "c3", "gamma", "I_ldp", "Psi_net", "abs_diff")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class Output:
    """Where and how rows are written; ``precision`` is in significant digits."""

    def __init__(self, fmt="csv", path=None, precision=17):
        if not 4 <= precision <= 17:
            raise UsageError("precision must be between 4 and 17")
        self.fmt, self.path, self.precision = fmt, path, precision

    def number(self, v):
        if v is None or isinstance(v, (bool, int, str)):
            return v
        v = float(v)
        if not math.isfinite(v):
            return None
        return v if self.precision == 17 else float(f"{v:.{self.precision}g}")

    def _cell(self, v):
        if v is None:
            return ""
        if isinstance(v, float):
            # repr is the shortest string that parses back to the same double
            return repr(v) if self.precision == 17 else f"{v:.{self.precision}g}"
        return str(v)

    def _tree(self, obj):
        if isinstance(obj, dict):
            return {k: self._tree(v) for k, v in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [self._tree(v) for v in obj]
        return self.number(obj)

    def write(self, fields, rows, document=None):
        """CSV of ``rows`` (dicts over ``fields``), or JSON of ``document`` (default: the rows)."""
        buf = io.StringIO()
        if self.fmt == "json":
            json.dump(self._tree(rows if document is None else document), buf, indent=2)
            buf.write("\n")
        else:
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(fields)
            for row in rows:
                w.writerow([self._cell(self.number(row.get(f))) for f in fields])
        text = buf.getvalue()
        if self.path in (None, "-"):
            sys.stdout.write(text)
        else:
            Path(self.path).write_text(text)


def _grid(lo, hi, points):
    if points < 1:
        raise UsageError("--points must be at least 1")
    if not 0.0 < lo <= hi < 1.0 or (points > 1 and lo == hi):
        raise UsageError("need 0 < --from < --to < 1")
    return [lo] if points == 1 else [float(a) for a in np.linspace(lo, hi, points)]


def cmd_pt_curve(args, out):
    curve = pt_curve(args.mode, _grid(args.alpha_min, args.alpha_max, args.points))
    for a, msg in curve.failures:
        print(f"alpha={a}: {msg}", file=sys.stderr)
    out.write(("alpha", "beta_w"), [{"alpha": a, "beta_w": b} for a, b in curve.rows])
    return EXIT_OK if curve.ok else EXIT_PARTIAL


def _ldp_row(alpha, beta, mode):
    sol = ldp_core.optimal_point(alpha, beta, mode)
    net = hdg_core.psi_net(alpha, beta, mode).psi_net
    return {"alpha": alpha, "beta_w": sol.beta_w, "beta_0": sol.beta_0, "nu": sol.nu, "a0": sol.a0,
            "c3": sol.c3, "gamma": sol.gamma, "I_ldp": sol.rate, "Psi_net": net, "abs_diff": abs(sol.rate - net)}


def cmd_ldp_rate(args, out):
    if not 0.0 < args.beta < 1.0:
        raise UsageError("--beta must lie in (0, 1)")
    lo = args.alpha_min if args.alpha_min is not None else args.beta + 0.01
    hi = args.alpha_max
    if hi is None:
        hi = 0.95 if args.mode is Mode.SIGNED else min(0.95, 0.5 * (1.0 + args.beta) - 0.01)
    rows, failed = [], 0
    for a in _grid(lo, hi, args.points):
        try:
            rows.append(_ldp_row(a, args.beta, args.mode))
        except L1LdpError as exc:
            failed += 1
            print(f"alpha={a}: {exc}", file=sys.stderr)
    out.write(LDP_FIELDS, rows)
    return EXIT_OK if not failed else EXIT_PARTIAL


def theory_table(which):
    mode, beta, alphas = TABLE_ALPHAS[which]
    cols = []
    for a in alphas:
        sol = ldp_core.optimal_point(a, beta, mode)
        cols.append({"alpha": a, "beta_w": sol.beta_w, "beta_0": sol.beta_0, "nu": sol.nu, "a0": sol.a0,
                     "c3": sol.c3, "gamma": sol.gamma, "I_ldp": sol.rate})
    return mode, beta, cols


def cmd_table(args, out):
    which = args.which.upper()
    if which in TABLE_ALPHAS:
        mode, beta, cols = theory_table(which)
        fields = ["quantity"] + [f"{c['alpha']:.2f}" for c in cols]
        rows = [dict(zip(fields, [q] + [c[q] for c in cols])) for q in ("alpha",) + TABLE_FIELDS]
        doc = {"table": which, "mode": mode.value, "beta": beta, "columns": cols}
        out.write(fields, rows, doc)
        return EXIT_OK
    configs = mc.schedule_configs(which, trials=args.trials, seed=args.seed)
    rows = [{"alpha": a, **cfg.to_dict()} for a, cfg in configs.items()]
    out.write(("alpha", "n", "k", "m", "trials", "seed", "mode", "success_test"), rows,
              [cfg.to_dict() for cfg in configs.values()])
    return EXIT_OK


def theory_row(batch):
    cfg = batch.config
    row = {"alpha": cfg.alpha, "beta": cfg.beta, "I_ldp": None, "tail": None, "finite_n_bound": None,
           "p_err": batch.p_err if batch.decided else None, "p_cor": batch.p_cor if batch.decided else None}
    try:
        sol = ldp_core.optimal_point(cfg.alpha, cfg.beta, cfg.mode)
        row.update(I_ldp=sol.rate, tail=sol.tail.value)
        row["finite_n_bound"] = ldp_core.finite_n_bound(cfg.n, cfg.k, cfg.m, cfg.mode)
    except L1LdpError:
        pass  # outside the rate's domain (e.g. k = 0); the batch itself is still valid
    return row


BATCH_FIELDS = ("n", "k", "m", "trials", "seed", "mode", "success_test", "errors", "corrects",
                "indeterminate", "i_err_hat", "i_cor_hat", "ci_half_width", "p_err", "p_cor", "I_ldp",
                "finite_n_bound")


def _load_configs(path):
    data = json.loads(Path(path).read_text())
    items = data if isinstance(data, list) else [data]
    return [mc.ExperimentConfig.from_dict(d) for d in items]


def cmd_simulate(args, out):
    if args.config:
        configs = _load_configs(args.config)
    else:
        if None in (args.n, args.k, args.m):
            raise UsageError("simulate needs --n, --k and --m, or --config")
        if args.seed is None:
            raise UsageError("simulate needs an explicit --seed")
        configs = [mc.ExperimentConfig(args.n, args.k, args.m, args.trials, args.seed, args.mode, args.success_test)]
    docs, rows, code = [], [], EXIT_OK
    for cfg in configs:
        batch = mc.run_experiment(cfg, workers=args.workers)
        record, theory = batch.to_dict(), theory_row(batch)
        docs.append({"batch": record, "theory": theory})
        rows.append({**record, "ci_half_width": record["ci"]["half_width"], **theory})
        if batch.indeterminate > INDETERMINATE_LIMIT * cfg.trials:
            print(f"{batch.indeterminate} of {cfg.trials} trials indeterminate", file=sys.stderr)
            code = EXIT_INDETERMINATE
    out.write(BATCH_FIELDS, rows, docs[0] if len(docs) == 1 else docs)
    return code


def cmd_verify(args, out):
    results = verification.run_all(args.grid, perturb=1e-6 if args.inject_failure else 0.0)
    rows = [{"check": r.name, "passed": "PASS" if r.passed else "FAIL", "worst": r.worst, "tol": r.tol,
             "points": r.count} for r in results]
    out.write(("check", "passed", "worst", "tol", "points"), rows)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def _output_options(fmt="csv"):
    # A fresh parent per command: parents share Action objects, so one
    # shared parent would let a command's defaults leak into the others.
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=fmt)
    common.add_argument("--output", "-o", default=None, help="file path; default standard output")
    common.add_argument("--precision", type=int, default=17, help="significant digits, 4 to 17")
    return [common]


def build_parser():
    p = _Parser(prog="l1ldp", description="Phase transitions and large deviations of l1 recovery.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("pt-curve", parents=_output_options(), help="weak threshold curve beta_w(alpha)")
    s.add_argument("--mode", type=Mode.parse, default=Mode.SIGNED)
    s.add_argument("--from", dest="alpha_min", type=float, default=0.05)
    s.add_argument("--to", dest="alpha_max", type=float, default=0.95)
    s.add_argument("--points", type=int, default=19)
    s.set_defaults(func=cmd_pt_curve)

    s = sub.add_parser("ldp-rate", parents=_output_options(), help="rate I_ldp(alpha) at fixed beta")
    s.add_argument("--mode", type=Mode.parse, default=Mode.SIGNED)
    s.add_argument("--beta", type=float, default=mc.TABLE2_BETA)
    s.add_argument("--from", dest="alpha_min", type=float, default=None)
    s.add_argument("--to", dest="alpha_max", type=float, default=None)
    s.add_argument("--points", type=int, default=19)
    s.set_defaults(func=cmd_ldp_rate)

    s = sub.add_parser("table", parents=_output_options(), help="theory tables and experiment schedules")
    s.add_argument("which", choices=("T1", "T2schedule", "T3", "T4schedule"), type=_table_name)
    s.add_argument("--trials", type=int, default=10_000, help="trials per schedule point")
    s.add_argument("--seed", type=int, default=1)
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("simulate", parents=_output_options("json"), help="Monte-Carlo recovery experiment")
    s.add_argument("--config", help="JSON file with one config or a list of configs")
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--trials", type=int, default=10_000)
    s.add_argument("--seed", type=int)
    s.add_argument("--mode", type=Mode.parse, default=Mode.SIGNED)
    s.add_argument("--success-test", type=mc.SuccessTest.parse, default=mc.SuccessTest.SOLVE_LP)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("verify", parents=_output_options(), help="run the property battery")
    s.add_argument("--grid", type=int, default=30, help="points per mode on the theory grid")
    s.add_argument("--inject-failure", action="store_true", help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_verify)
    return p


def _table_name(s):
    for name in ("T1", "T2schedule", "T3", "T4schedule"):
        if s.lower() == name.lower():
            return name
    return s


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help and usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    try:
        out = Output(args.format, args.output, args.precision)
        return args.func(args, out)
    except (UsageError, L1LdpError, OSError, ValueError, KeyError) as exc:
        print(f"l1ldp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
