"""Command-line front end.

Every tabular command renders through tableio with a metadata header
(tool version, exact command line, canonical config JSON) and supports
--format csv|json plus --out; data payloads never contain timestamps or
thread-dependent content, so reruns are byte-identical. Every flag can be
seeded from the environment as PWDYN_<FLAG> (dashes to underscores), with
the command line winning.

Exit codes: 0 success, 1 failed verification or numeric integrity, 2 bad
arguments or domain violations, 3 sweep rule leaving the unit square.
"""

from __future__ import annotations

import argparse
import os
import shlex
import sys

from . import tableio
from ._version import __version__
from .chaos import (
    BRule,
    band_count,
    bifurcation_sweep,
    lyapunov,
    lyapunov_sweep,
)
from .errors import (
    DegenerateParameterError,
    DomainError,
    NumericIntegrityError,
    PreconditionError,
    RuleRangeError,
    SimplexViolationError,
)
from .map_core import MapParams, branch_of, eval_f, eval_f_deriv, eval_f_vec
from .orbits import (
    RecordPolicy,
    SimplexState,
    backward_orbit,
    entry_time,
    invariant_interval,
    orbit,
    simplex_orbit,
    simplex_piecewise_orbit,
)
from .periodic import (
    block_partition,
    find_cycles,
    fixed_points,
    odd_period_scan,
    transition_check,
    two_cycle_a_window,
    two_cycle_b_window,
    two_cycle_closed_form,
    two_cycle_ratio_test,
)
from .verify import available_suites, run_suites

ENV_PREFIX = "PWDYN_"


def _env(flag: str) -> str | None:
    return os.environ.get(ENV_PREFIX + flag.lstrip("-").replace("-", "_").upper())


def _add(sp, flag: str, **kw):
    env = _env(flag)
    if env is not None:
        kw["default"] = env
        kw["required"] = False
    sp.add_argument(flag, **kw)


def _add_params(sp, required=True):
    _add(sp, "--a", type=float, required=required, default=None, help="left-branch parameter in [0, 1]")
    _add(sp, "--b", type=float, required=required, default=None, help="right-branch parameter in [0, 1]")


def _add_output(sp):
    _add(sp, "--format", type=str, default="csv", help="output format: csv or json")
    _add(sp, "--out", type=str, default=None, help="write to this path instead of stdout")


def _add_sweep(sp):
    _add(sp, "--rule", type=str, required=True, default=None,
         help="b-as-function-of-a rule, e.g. 'b=a', 'b=a/2', 'b=4a/(4-a^2)', 'b=0.7', 'b=0.9a'")
    _add(sp, "--a-min", type=float, default=0.05)
    _add(sp, "--a-max", type=float, default=1.0)
    _add(sp, "--steps", type=int, default=200)
    _add(sp, "--x0", type=float, default=0.3)
    _add(sp, "--burn", type=int, default=10_000)
    _add(sp, "--threads", type=int, default=1, help="worker threads; 0 picks the CPU count")


def _write_out(args, text: str) -> int:
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _emit(args, columns, rows, cfg: dict, notes=()) -> int:
    meta = [
        ("tool", f"pwdyn {__version__}"),
        ("command", shlex.join(["pwdyn", *args.raw_argv])),
        ("config", tableio.config_json(cfg)),
    ]
    fmt = args.format
    if fmt == "json":
        text = tableio.render_json(columns, rows, meta, notes)
    elif fmt == "csv":
        text = tableio.render_csv(columns, rows, meta, notes)
    else:
        raise DomainError(f"unknown format {fmt!r}, choose csv or json")
    return _write_out(args, text)


def _params(args) -> MapParams:
    if args.a is None or args.b is None:
        raise DomainError("both --a and --b are required here")
    return MapParams(args.a, args.b)


def cmd_point(args) -> int:
    p = _params(args)
    x = float(args.x)
    fx = eval_f(p, x)
    d = eval_f_deriv(p, x)
    rows = [(x, branch_of(x).value, fx, "undefined" if d is None else d)]
    return _emit(args, ("x", "branch", "fx", "deriv"), rows,
                 {"a": p.a, "b": p.b, "x": x})


def cmd_orbit(args) -> int:
    p = _params(args)
    policy = RecordPolicy(args.record)
    rec = orbit(p, args.x0, args.n, policy)
    rows = list(enumerate(rec.iterates))
    notes = [
        f"entered trapping interval at n={rec.entered_at}" if rec.entered_at is not None
        else "never entered the trapping interval",
        f"terminated: {rec.terminated.value}",
    ]
    return _emit(args, ("n", "x"), rows,
                 {"a": p.a, "b": p.b, "x0": float(args.x0), "n": args.n, "record": policy.value},
                 notes)


def cmd_interval(args) -> int:
    p = _params(args)
    trap = invariant_interval(p)
    rows = [(trap.lo, trap.hi, True, False)]
    return _emit(args, ("lo", "hi", "lo_open", "hi_open"), rows, {"a": p.a, "b": p.b})


def cmd_entry_time(args) -> int:
    p = _params(args)
    t = entry_time(p, args.x0, cap=args.cap)
    notes = [] if t is not None else [f"never entered within cap {args.cap}; -1 encodes no entry"]
    rows = [(float(args.x0), -1 if t is None else t)]
    return _emit(args, ("x0", "entry"), rows,
                 {"a": p.a, "b": p.b, "x0": float(args.x0), "cap": args.cap}, notes)


def cmd_preimage(args) -> int:
    chain = backward_orbit(args.b, args.x, args.steps)
    rows = list(enumerate(chain))
    return _emit(args, ("n", "x"), rows,
                 {"b": float(args.b), "x": float(args.x), "steps": args.steps},
                 ["n counts steps backwards through the right-branch inverse"])


def cmd_simplex(args) -> int:
    y0 = 1.0 - float(args.x0) if args.y0 is None else float(args.y0)
    states = simplex_orbit(args.a, SimplexState(args.x0, y0), args.n)
    rows = [(k, s.x, s.y) for k, s in enumerate(states)]
    return _emit(args, ("n", "x", "y"), rows,
                 {"a": float(args.a), "x0": float(args.x0), "y0": y0, "n": args.n})


def cmd_simplex_piecewise(args) -> int:
    p = _params(args)
    y0 = 1.0 - float(args.x0) if args.y0 is None else float(args.y0)
    states = simplex_piecewise_orbit(p, SimplexState(args.x0, y0), args.n)
    rows = [(k, s.x, s.y) for k, s in enumerate(states)]
    return _emit(args, ("n", "x", "y"), rows,
                 {"a": p.a, "b": p.b, "x0": float(args.x0), "y0": y0, "n": args.n})


def cmd_conjugacy(args) -> int:
    import numpy as np

    p = _params(args)
    xs = np.linspace(0.0, 1.0, args.grid + 1)
    mask = xs != 0.5
    lhs = 1.0 - eval_f_vec(p, xs)
    rhs = eval_f_vec(p.swapped(), 1.0 - xs)
    worst = float(np.abs(lhs[mask] - rhs[mask]).max())
    passed = worst < args.tol
    rows = [(p.a, p.b, args.grid, worst, passed)]
    rc = _emit(args, ("a", "b", "grid", "max_abs_diff", "passed"), rows,
               {"a": p.a, "b": p.b, "grid": args.grid, "tol": float(args.tol)},
               ["the switching point x = 1/2 is excluded by construction"])
    return rc if passed else 1


def cmd_fixed_points(args) -> int:
    p = _params(args)
    fp = fixed_points(p)
    rows = [("point", v, v, False, False) for v in fp.points]
    rows += [("interval", iv.lo, iv.hi, iv.lo_open, iv.hi_open) for iv in fp.intervals]
    rows.sort(key=lambda r: r[1])
    return _emit(args, ("kind", "lo", "hi", "lo_open", "hi_open"), rows, {"a": p.a, "b": p.b})


def cmd_two_cycle(args) -> int:
    p = _params(args)
    c = two_cycle_closed_form(p)
    notes = [
        f"b-window satisfied: {two_cycle_b_window(p.a, p.b)}",
        f"a-window satisfied: {two_cycle_a_window(p.a, p.b)}",
        f"ratio variant satisfied: {two_cycle_ratio_test(p.a, p.b)}",
    ]
    rows = []
    if c is None:
        notes.append("no period-2 orbit at these parameters")
    else:
        for i, x in enumerate(c.points):
            rows.append((i, x, c.prime_period,
                         "undefined" if c.multiplier is None else c.multiplier,
                         c.classification.value))
    return _emit(args, ("index", "x", "period", "multiplier", "classification"), rows,
                 {"a": p.a, "b": p.b}, notes)


def _cycle_rows(cycles):
    rows = []
    for ci, c in enumerate(cycles):
        for i, x in enumerate(c.points):
            rows.append((ci, i, c.prime_period, x,
                         "undefined" if c.multiplier is None else c.multiplier,
                         c.classification.value))
    return rows


def cmd_cycles(args) -> int:
    p = _params(args)
    cycles = find_cycles(p, args.max_period, grid=args.grid)
    return _emit(args, ("cycle", "index", "period", "x", "multiplier", "classification"),
                 _cycle_rows(cycles),
                 {"a": p.a, "b": p.b, "max_period": args.max_period, "grid": args.grid},
                 [f"{len(cycles)} cycles found"])


def cmd_odd_cycles(args) -> int:
    p = _params(args)
    cycles = odd_period_scan(p, max_odd=args.max_odd, grid=args.grid)
    return _emit(args, ("cycle", "index", "period", "x", "multiplier", "classification"),
                 _cycle_rows(cycles),
                 {"a": p.a, "b": p.b, "max_odd": args.max_odd, "grid": args.grid},
                 [f"{len(cycles)} odd-period cycles found"])


def cmd_blocks(args) -> int:
    p = _params(args)
    part = block_partition(p)
    named = [
        ("outer-left", part.outer_left),
        ("gap-left", part.gap_left),
        ("inner-left", part.inner_left),
        ("inner-right", part.inner_right),
        ("gap-right", part.gap_right),
        ("outer-right", part.outer_right),
    ]
    rows = [(name, iv.lo, iv.hi, iv.lo_open, iv.hi_open) for name, iv in named]
    return _emit(args, ("name", "lo", "hi", "lo_open", "hi_open"), rows, {"a": p.a, "b": p.b})


def cmd_transition_check(args) -> int:
    p = _params(args)
    rep = transition_check(p, samples=args.samples)
    rows = [(c.name, c.samples, c.violations, c.passed) for c in rep.checks]
    rc = _emit(args, ("check", "samples", "violations", "passed"), rows,
               {"a": p.a, "b": p.b, "samples": args.samples})
    return rc if rep.all_passed else 1


def cmd_lyapunov(args) -> int:
    if args.rule is not None and args.a is not None:
        raise DomainError("give either --rule (sweep mode) or --a/--b (point mode), not both")
    if args.rule is None:
        p = _params(args)
        est = lyapunov(p, args.x0, burn=args.burn, n=args.n)
        notes = [f"n_used={est.n_used}, n_skipped={est.n_skipped}"]
        return _emit(args, ("a", "b", "lambda"), [(p.a, p.b, est.exponent)],
                     {"a": p.a, "b": p.b, "x0": float(args.x0), "burn": args.burn, "n": args.n},
                     notes)
    rule = BRule.parse(args.rule)
    rows = lyapunov_sweep(rule, args.a_min, args.a_max, args.steps,
                          x0=args.x0, burn=args.burn, n=args.n, threads=args.threads)
    cfg = {"rule": rule.label(), "a_min": args.a_min, "a_max": args.a_max, "steps": args.steps,
           "x0": float(args.x0), "burn": args.burn, "n": args.n, "threads": args.threads}
    return _emit(args, ("a", "b", "lambda"), rows, cfg)


def cmd_bifurcation(args) -> int:
    rule = BRule.parse(args.rule)
    samples = bifurcation_sweep(rule, args.a_min, args.a_max, args.steps,
                                x0=args.x0, burn=args.burn, keep=args.keep, threads=args.threads)
    rows = [(s.a, s.b, x) for s in samples for x in s.retained]
    cfg = {"rule": rule.label(), "a_min": args.a_min, "a_max": args.a_max, "steps": args.steps,
           "x0": float(args.x0), "burn": args.burn, "keep": args.keep, "threads": args.threads}
    notes = []
    degenerate = sum(1 for s in samples if s.a * s.b == 0.0)
    if degenerate:
        notes.append(f"{degenerate} sweep points have a*b = 0 and no trapping interval")
    return _emit(args, ("a", "b", "x"), rows, cfg, notes)


def cmd_bands(args) -> int:
    rule = BRule.parse(args.rule)
    try:
        a_values = [float(tok) for tok in str(args.a).split(",") if tok.strip()]
    except ValueError:
        raise DomainError(f"--a wants a comma-separated float list, got {args.a!r}") from None
    if not a_values:
        raise DomainError("--a gave no values")
    rows = []
    for a in a_values:
        sample = bifurcation_sweep(rule, a, a, 1, x0=args.x0, burn=args.burn,
                                   keep=args.keep, threads=args.threads)[0]
        rows.append((sample.a, sample.b, band_count(sample, gap=args.gap)))
    cfg = {"rule": rule.label(), "a": str(args.a), "x0": float(args.x0), "burn": args.burn,
           "keep": args.keep, "gap": float(args.gap), "threads": args.threads}
    return _emit(args, ("a", "b", "bands"), rows, cfg)


def cmd_verify(args) -> int:
    names = [tok.strip() for tok in str(args.suite).split(",") if tok.strip()]
    results = run_suites(names, seed=args.seed)
    for res in results:
        for line in res.summary_lines():
            print(line)
    all_passed = all(r.passed for r in results)
    print(f"overall: {'PASS' if all_passed else 'FAIL'}")
    if args.out:
        payload = {
            "tool": f"pwdyn {__version__}",
            "passed": all_passed,
            "suites": [
                {
                    "suite": r.suite,
                    "passed": r.passed,
                    "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail}
                               for c in r.checks],
                }
                for r in results
            ],
        }
        with open(args.out, "w") as fh:
            fh.write(tableio.render_record(payload))
    return 0 if all_passed else 1


def cmd_report(args) -> int:
    from .report import write_report

    rule = BRule.parse(args.rule)
    paths = write_report(
        args.out_dir, rule, args.a_min, args.a_max, args.steps,
        x0=args.x0, burn=args.burn, keep=args.keep, n=args.n, threads=args.threads,
        command=shlex.join(["pwdyn", *args.raw_argv]),
    )
    for path in paths:
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pwdyn",
        description="Orbits, periodic points, and stretching statistics of a "
                    "two-parameter piecewise-quadratic interval map.",
    )
    parser.add_argument("--version", action="version", version=f"pwdyn {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("point", help="evaluate the map, branch, and derivative at one point")
    _add_params(sp)
    _add(sp, "--x", type=float, required=True, default=None)
    _add_output(sp)
    sp.set_defaults(func=cmd_point)

    sp = sub.add_parser("orbit", help="forward orbit with trapping-interval annotations")
    _add_params(sp)
    _add(sp, "--x0", type=float, required=True, default=None)
    _add(sp, "--n", type=int, default=100)
    _add(sp, "--record", type=str, default="full", help="full, until-fixed, or until-entry")
    _add_output(sp)
    sp.set_defaults(func=cmd_orbit)

    sp = sub.add_parser("interval", help="the trapping interval (1/2 - b/4, 1/2 + a/4]")
    _add_params(sp)
    _add_output(sp)
    sp.set_defaults(func=cmd_interval)

    sp = sub.add_parser("entry-time", help="first iterate index inside the trapping interval")
    _add_params(sp)
    _add(sp, "--x0", type=float, required=True, default=None)
    _add(sp, "--cap", type=int, default=1_000_000)
    _add_output(sp)
    sp.set_defaults(func=cmd_entry_time)

    sp = sub.add_parser("preimage", help="backward orbit through the right-branch inverse (a = 0)")
    _add(sp, "--b", type=float, required=True, default=None)
    _add(sp, "--x", type=float, required=True, default=None)
    _add(sp, "--steps", type=int, default=10)
    _add_output(sp)
    sp.set_defaults(func=cmd_preimage)

    sp = sub.add_parser("simplex", help="orbit of the one-parameter simplex operator x' = x(1 + a y)")
    _add(sp, "--a", type=float, required=True, default=None, help="coupling in [-1, 1]")
    _add(sp, "--x0", type=float, required=True, default=None)
    _add(sp, "--y0", type=float, default=None, help="defaults to 1 - x0")
    _add(sp, "--n", type=int, default=100)
    _add_output(sp)
    sp.set_defaults(func=cmd_simplex)

    sp = sub.add_parser("simplex-piecewise", help="orbit of the two-parameter piecewise simplex operator")
    _add_params(sp)
    _add(sp, "--x0", type=float, required=True, default=None)
    _add(sp, "--y0", type=float, default=None, help="defaults to 1 - x0")
    _add(sp, "--n", type=int, default=100)
    _add_output(sp)
    sp.set_defaults(func=cmd_simplex_piecewise)

    sp = sub.add_parser("conjugacy", help="check the reflection identity between (a,b) and (b,a)")
    _add_params(sp)
    _add(sp, "--grid", type=int, default=100_000)
    _add(sp, "--tol", type=float, default=1e-14)
    _add_output(sp)
    sp.set_defaults(func=cmd_conjugacy)

    sp = sub.add_parser("fixed-points", help="the exact fixed-point set in every parameter regime")
    _add_params(sp)
    _add_output(sp)
    sp.set_defaults(func=cmd_fixed_points)

    sp = sub.add_parser("two-cycle", help="closed-form period-2 orbit and its existence window")
    _add_params(sp)
    _add_output(sp)
    sp.set_defaults(func=cmd_two_cycle)

    sp = sub.add_parser("cycles", help="scan for all cycles up to a period bound")
    _add_params(sp)
    _add(sp, "--max-period", type=int, default=7)
    _add(sp, "--grid", type=int, default=10_000)
    _add_output(sp)
    sp.set_defaults(func=cmd_cycles)

    sp = sub.add_parser("odd-cycles", help="scan for odd-period cycles (empty inside the four-block regime)")
    _add_params(sp)
    _add(sp, "--max-odd", type=int, default=7)
    _add(sp, "--grid", type=int, default=100_000)
    _add_output(sp)
    sp.set_defaults(func=cmd_odd_cycles)

    sp = sub.add_parser("blocks", help="four-block partition of the trapping interval")
    _add_params(sp)
    _add_output(sp)
    sp.set_defaults(func=cmd_blocks)

    sp = sub.add_parser("transition-check", help="sampled verification of the block circulation")
    _add_params(sp)
    _add(sp, "--samples", type=int, default=10_000)
    _add_output(sp)
    sp.set_defaults(func=cmd_transition_check)

    sp = sub.add_parser("lyapunov", help="orbit-averaged log derivative, point or sweep mode")
    _add_params(sp, required=False)
    _add(sp, "--rule", type=str, default=None, help="sweep mode: b-as-function-of-a rule")
    _add(sp, "--a-min", type=float, default=0.05)
    _add(sp, "--a-max", type=float, default=1.0)
    _add(sp, "--steps", type=int, default=200)
    _add(sp, "--x0", type=float, default=0.3)
    _add(sp, "--burn", type=int, default=10_000)
    _add(sp, "--n", type=int, default=100_000)
    _add(sp, "--threads", type=int, default=1)
    _add_output(sp)
    sp.set_defaults(func=cmd_lyapunov)

    sp = sub.add_parser("bifurcation", help="attractor samples along a one-parameter slice")
    _add_sweep(sp)
    _add(sp, "--keep", type=int, default=500)
    _add_output(sp)
    sp.set_defaults(func=cmd_bifurcation)

    sp = sub.add_parser("bands", help="attractor band counts at listed a-values")
    _add(sp, "--rule", type=str, required=True, default=None)
    _add(sp, "--a", type=str, required=True, default=None, help="comma-separated a-values")
    _add(sp, "--x0", type=float, default=0.3)
    _add(sp, "--burn", type=int, default=10_000)
    _add(sp, "--keep", type=int, default=500)
    _add(sp, "--gap", type=float, default=0.01)
    _add(sp, "--threads", type=int, default=1)
    _add_output(sp)
    sp.set_defaults(func=cmd_bands)

    sp = sub.add_parser("verify", help="run the named verification suites")
    _add(sp, "--suite", type=str, default="all",
         help=f"comma-separated from: all, {', '.join(available_suites())}")
    _add(sp, "--seed", type=int, default=20_260_816)
    _add(sp, "--out", type=str, default=None, help="also write a JSON report here")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("report", help="sweep figures and tables written to a directory")
    _add_sweep(sp)
    _add(sp, "--keep", type=int, default=500)
    _add(sp, "--n", type=int, default=100_000)
    _add(sp, "--out-dir", type=str, default="pwdyn-report")
    sp.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    raw = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(raw)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 0
    args.raw_argv = raw
    try:
        return args.func(args)
    except RuleRangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (DomainError, DegenerateParameterError, PreconditionError, SimplexViolationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericIntegrityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
