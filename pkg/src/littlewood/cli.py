"""``lwl`` command-line front end.

Exit codes: 0 success, 1 a check or certificate failed (or a quadrature did
not converge), 2 bad input or flags.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import constants, diophantine, inequalities, suite
from .errors import HypothesisViolated, InputError, NonConvergence, NotFound
from .model import ExponentialSum, load_problem, normalize_affine
from .quadrature import (QuadratureConfig, besicovitch_l1, l1_norm_interval,
                         l2_norm_sq_interval_exact)
from .window import P_MAX
from .witness import certify_lower_bound

FORMATS = ("text", "csv", "structured")

CURVE_PRESETS = {
    # 1 + e(t) + exp(20 i t) and the same with exp(30 i t) added
    "figure-a": ([0.0, 1.0, 10.0 / math.pi], [1.0, 1.0, 1.0]),
    "figure-b": ([0.0, 1.0, 10.0 / math.pi, 15.0 / math.pi], [1.0, 1.0, 1.0, 1.0]),
}


class UsageError(Exception):
    """Flag combination rejected before any computation."""


@dataclass
class RunConfig:
    subcommand: str
    input: str | None = None
    out: str | None = None
    format: str = "text"
    tol: float | None = None
    seed: int = 0
    p: int = 8
    delta: int = 4
    eps: float | None = None
    eta: float | None = None
    T: float | None = None
    grid: int | None = None
    normalize: bool = False


def fmt(x) -> str:
    """17 significant digits: enough to round-trip a double."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) if not isinstance(v, str) else v for v in r])
    return buf.getvalue()


def _load(cfg: RunConfig) -> ExponentialSum:
    if not cfg.input:
        raise UsageError("--input is required")
    try:
        s = load_problem(cfg.input)
    except FileNotFoundError:
        raise InputError(f"input file not found: {cfg.input}") from None
    except OSError as exc:
        raise InputError(f"cannot read {cfg.input}: {exc}") from None
    if cfg.normalize:
        s = normalize_affine(s)[0]
    return s


def _quad_cfg(cfg: RunConfig) -> QuadratureConfig:
    return QuadratureConfig() if cfg.tol is None else QuadratureConfig(rel_tol=cfg.tol)


def _validate(cfg: RunConfig):
    if cfg.format not in FORMATS:
        raise UsageError(f"--format must be one of {', '.join(FORMATS)}")
    if cfg.tol is not None and not cfg.tol > 0:
        raise UsageError("--tol must be positive")
    if cfg.T is not None and not (math.isfinite(cfg.T) and cfg.T > 0):
        raise UsageError("--T must be a positive number")
    if cfg.subcommand == "certify":
        if not 2 <= cfg.p <= P_MAX:
            raise UsageError(f"--p must lie in [2, {P_MAX}]")
        if cfg.delta < 2:
            raise UsageError("--delta must be an integer >= 2")
        if cfg.eps is not None and not 0 < cfg.eps < 1:
            raise UsageError("--eps must lie in (0, 1)")
        if cfg.eta is not None and not 0 < cfg.eta <= 1:
            raise UsageError("--eta must lie in (0, 1]")
        if cfg.grid is not None and (cfg.grid < 16 or cfg.grid & (cfg.grid - 1)):
            raise UsageError("--grid must be a power of two >= 16")
    if cfg.subcommand == "dirichlet" and cfg.eps is not None and not 0 < cfg.eps < 0.5:
        raise UsageError("--eps must lie in (0, 1/2)")


# ------------------------------------------------------------------ commands

def cmd_eval(cfg: RunConfig) -> int:
    s = _load(cfg)
    T = 1.0 if cfg.T is None else cfg.T
    qcfg = _quad_cfg(cfg)
    l1 = l1_norm_interval(s, T, qcfg)
    if not l1.converged:
        raise NonConvergence(f"L1 quadrature on [-{T / 2:g}, {T / 2:g}] did not converge "
                             f"(last change {l1.error:.3g})")
    bes = besicovitch_l1(s, qcfg)
    report = {
        "N": s.N,
        "T": T,
        "l1_integral": l1.value,
        "l1_mean": l1.value / T,
        "l2_sq_mean": l2_norm_sq_interval_exact(s, T) / T,
        "besicovitch_l1": bes.value,
        "besicovitch_converged": bool(bes.converged),
        "besicovitch_period": bes.exact_period,
    }
    if cfg.format == "structured":
        text = json.dumps(report, indent=1) + "\n"
    elif cfg.format == "csv":
        text = _csv_text(["quantity", "value"],
                         [(k, "" if v is None else v) for k, v in report.items()])
    else:
        text = "".join(f"{k:22s} {'-' if v is None else fmt(v)}\n" for k, v in report.items())
    _emit(text, cfg.out)
    return 0


def cmd_certify(cfg: RunConfig) -> int:
    s = _load(cfg)
    kwargs = dict(p=cfg.p, delta=cfg.delta, eps=0.5 if cfg.eps is None else cfg.eps,
                  eta=cfg.eta, cfg=_quad_cfg(cfg))
    if cfg.grid is not None:
        kwargs["M"] = cfg.grid
    report = certify_lower_bound(s, **kwargs)
    text = report.to_json() + "\n"
    _emit(text, cfg.out)
    if cfg.out:
        verdict = "pass" if report.passed else "FAIL"
        print(f"{verdict}: mean={fmt(report.measured_norm)} "
              f"lower_bound={fmt(report.lower_bound)} constant={fmt(report.certified_constant)}")
    failed = [k for k, v in report.checks.items() if not v]
    if failed:
        print("failed checks: " + ", ".join(failed), file=sys.stderr)
    return 0 if report.passed else 1


def cmd_check(cfg: RunConfig, only, n) -> int:
    tol = inequalities.DEFAULT_TOL if cfg.tol is None else cfg.tol
    rows = suite.run_suite(seed=cfg.seed, only=only, n=n, T=cfg.T, tol=tol)
    table = [(name, r.lhs, r.rhs, r.margin, r.passed) for name, r in rows]
    if cfg.format == "structured":
        text = json.dumps([dict(zip(("name", "lhs", "rhs", "margin", "pass"), t))
                           for t in table], indent=1) + "\n"
    else:
        text = _csv_text(["name", "lhs", "rhs", "margin", "pass"], table)
    _emit(text, cfg.out)
    failures = sum(1 for t in table if not t[4])
    if failures:
        print(f"{failures} of {len(table)} checks failed", file=sys.stderr)
    return 1 if failures else 0


def cmd_optimize(cfg: RunConfig, objective, density, grid_dump) -> int:
    res = constants.optimize(objective, grid_density=density)
    report = {
        "objective": res.objective,
        "min": res.argmin.value,
        "eps": res.argmin.eps,
        "delta": res.argmin.delta,
        "eta_inf": res.argmin.eta_inf,
        "grid_min": res.grid_argmin.value,
        "grid_eps": res.grid_argmin.eps,
        "grid_delta": res.grid_argmin.delta,
        "iterations": res.iterations,
    }
    if cfg.format == "structured":
        text = json.dumps(report, indent=1) + "\n"
    elif cfg.format == "csv":
        text = _csv_text(["quantity", "value"], list(report.items()))
    else:
        text = "".join(f"{k:12s} {v if isinstance(v, str) else fmt(v)}\n"
                       for k, v in report.items())
    _emit(text, cfg.out)
    if grid_dump:
        eps, delta, vals = constants.objective_grid(objective, density)
        rows = [(e, d, v) for e, row in zip(eps, vals) for d, v in zip(delta, row)]
        Path(grid_dump).write_text(_csv_text(["eps", "delta", "value"], rows),
                                   encoding="utf-8")
    return 0


def cmd_dirichlet(cfg: RunConfig, mcap) -> int:
    s = _load(cfg)
    eps = 0.1 if cfg.eps is None else cfg.eps
    approx = diophantine.dirichlet_approx(s.lambdas, eps, mcap)
    gap = diophantine.periodization_gap(s, approx)
    bound = diophantine.periodization_bound(s, approx)
    hl = diophantine.hl_compare(s, approx, _quad_cfg(cfg))
    report = {"M": approx.M, "numerators": list(approx.numerators), "eps": eps,
              "quality": approx.quality, "periodization_gap": gap,
              "periodization_bound": bound, "hl_lhs": hl.lhs, "hl_rhs": hl.rhs,
              "hl_pass": hl.passed}
    if cfg.format == "structured":
        text = json.dumps(report, indent=1) + "\n"
    else:
        text = "".join(
            f"{k:20s} {' '.join(map(str, v)) if isinstance(v, list) else fmt(v)}\n"
            for k, v in report.items())
    _emit(text, cfg.out)
    return 0 if hl.passed and gap <= bound else 1


def cmd_curve(cfg: RunConfig, preset, samples) -> int:
    if preset:
        s = ExponentialSum(*CURVE_PRESETS[preset])
    else:
        s = _load(cfg)
    T = 5.0 if cfg.T is None else cfg.T
    t, P = inequalities.curve_trace(s, T, samples)
    trace = _csv_text(["t", "re", "im"], zip(t, P.real, P.imag))
    length = inequalities.curve_length(s, T, _quad_cfg(cfg))
    lines = [f"arc_length {fmt(length.value)}", f"converged {fmt(length.converged)}"]
    status = 0 if length.converged else 1
    if T >= inequalities.FINITE_T_MIN:
        res = inequalities.curve_length_bound(s, T, cfg=_quad_cfg(cfg))
        lines += [f"lower_bound {fmt(res.rhs)}", f"pass {fmt(res.passed)}"]
        status = max(status, 0 if res.passed else 1)
    if cfg.out:
        Path(cfg.out).write_text(trace, encoding="utf-8")
        print("\n".join(lines))
    else:
        sys.stdout.write(trace)
        print("\n".join(lines), file=sys.stderr)
    return status


# ------------------------------------------------------------------ parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="problem file (JSON with lambdas and [re, im] coeffs)")
    common.add_argument("--out", help="write the main output here instead of stdout")
    common.add_argument("--format", default="text", choices=FORMATS)
    common.add_argument("--tol", type=float, help="quadrature tolerance or check tolerance")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--normalize", action="store_true",
                        help="rescale frequencies so the minimum gap is 1")

    parser = argparse.ArgumentParser(prog="lwl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    ev = sub.add_parser("eval", parents=[common], help="L1/L2 interval and Besicovitch norms")
    ev.add_argument("--T", type=float)

    ce = sub.add_parser("certify", parents=[common], help="build the witness and certify")
    ce.add_argument("--p", type=int, default=8)
    ce.add_argument("--delta", type=int, default=4)
    ce.add_argument("--eps", type=float)
    ce.add_argument("--eta", type=float)
    ce.add_argument("--grid", type=int, help="DFT grid size M on I_p (power of two)")

    ch = sub.add_parser("check", parents=[common], help="seeded suite of inequality checks")
    ch.add_argument("--only", help="comma-separated subset of: " + ", ".join(suite.CHECK_NAMES))
    ch.add_argument("--n", type=int, help="instances per selected check")
    ch.add_argument("--T", type=float)

    op = sub.add_parser("optimize", parents=[common], help="minimise a constant objective")
    op.add_argument("objective", nargs="?", default="general",
                    choices=sorted(constants.OBJECTIVES))
    op.add_argument("--grid-density", type=int, default=200)
    op.add_argument("--grid-dump", help="CSV file for the (eps, delta, value) grid")

    di = sub.add_parser("dirichlet", parents=[common], help="simultaneous rational approximation")
    di.add_argument("--eps", type=float)
    di.add_argument("--mcap", type=int, default=10**6)

    cu = sub.add_parser("curve", parents=[common], help="trace of t -> P(t) and its length")
    cu.add_argument("--T", type=float)
    cu.add_argument("--samples", type=int, default=2000)
    cu.add_argument("--preset", choices=sorted(CURVE_PRESETS))
    return parser


def _config(args) -> RunConfig:
    fields = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in vars(args).items() if k in fields and v is not None})


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = _config(args)
    try:
        _validate(cfg)
        if cfg.subcommand == "eval":
            return cmd_eval(cfg)
        if cfg.subcommand == "certify":
            return cmd_certify(cfg)
        if cfg.subcommand == "check":
            if args.n is not None and args.n < 0:
                raise UsageError("--n must be >= 0")
            only = [c.strip() for c in args.only.split(",")] if args.only else None
            for c in only or ():
                if c not in suite.CHECK_NAMES:
                    raise UsageError(f"unknown check {c!r}")
            return cmd_check(cfg, only, args.n)
        if cfg.subcommand == "optimize":
            if args.grid_density < 50:
                raise UsageError("--grid-density must be >= 50")
            return cmd_optimize(cfg, args.objective, args.grid_density, args.grid_dump)
        if cfg.subcommand == "dirichlet":
            if args.mcap < 1:
                raise UsageError("--mcap must be >= 1")
            return cmd_dirichlet(cfg, args.mcap)
        if cfg.subcommand == "curve":
            if args.samples < 2:
                raise UsageError("--samples must be >= 2")
            return cmd_curve(cfg, args.preset, args.samples)
    except (UsageError, InputError) as exc:
        print(f"lwl {cfg.subcommand}: error: {exc}", file=sys.stderr)
        return 2
    except HypothesisViolated as exc:
        print(f"lwl {cfg.subcommand}: hypothesis violated ({exc.hypothesis}): {exc}",
              file=sys.stderr)
        return 1
    except (NonConvergence, NotFound) as exc:
        print(f"lwl {cfg.subcommand}: {exc}", file=sys.stderr)
        return 1
    raise AssertionError(cfg.subcommand)


if __name__ == "__main__":
    sys.exit(main())
