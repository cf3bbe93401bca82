"""Command-line interface: ``efdfsim {check,simulate,compare,gen,bench-queues}``.

Exit status: 0 success or schedulable, 1 unschedulable or tasks rejected,
2 usage error, 3 input parse error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import bench
from .feasibility import (applicable_test, density, edf_schedulable_constrained,
                          edf_schedulable_implicit, utilization)
from .model import Machine, UnsupportedInputError, as_rational, format_rational
from .schedulers import POLICIES
from .sim import MODES, simulate
from .workload import TaskSetParseError, dumps_taskset, generate, load_taskset, parse_gen

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 3

METRIC_COLUMNS = ("released", "completions", "misses", "aborts", "migrations",
                  "preemptions", "rejected")


class InputError(Exception):
    """Bad input file or value; maps to exit status 3."""


def _csv_list(text, conv=str):
    try:
        return [conv(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad list {text!r}: {exc}") from None


def _machine(args) -> Machine:
    try:
        return Machine(_csv_list(args.speeds, as_rational))
    except ValueError as exc:
        raise InputError(f"--speeds: {exc}") from None


def _horizon(text):
    if text is None or text == "hyperperiod":
        return None
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad horizon {text!r}") from None


def _genspec(args, util=None):
    try:
        spec = parse_gen(args.gen)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"--gen: {exc}") from None
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if util is not None:
        changes["target_util"] = util
    return dataclasses.replace(spec, **changes) if changes else spec


def _tasks(args, util=None):
    if args.taskset:
        try:
            return load_taskset(args.taskset)
        except OSError as exc:
            raise InputError(str(exc)) from None
        except TaskSetParseError as exc:
            raise InputError(str(exc)) from None
    try:
        return generate(_genspec(args, util))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _pct(x: Fraction) -> str:
    return f"{float(x) * 100:.1f}%"


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def cmd_check(args, out) -> int:
    tasks = _tasks(args)
    u = utilization(tasks)
    kind = applicable_test(tasks)
    constrained_ok = edf_schedulable_constrained(tasks)
    ok = edf_schedulable_implicit(tasks) if kind == "implicit" else constrained_ok
    print(f"U={format_rational(u)} ({_pct(u)}) schedulable={_yes(ok)}", file=out)
    print(f"tasks={len(tasks)} test={kind}", file=out)
    if kind == "implicit":
        print(f"implicit test: U <= 1: {_yes(u <= 1)}", file=out)
    else:
        print("implicit test: not applicable (some deadline differs from its period)", file=out)
    print(f"constrained test: sum e/min(p,d) = {format_rational(density(tasks))} <= 1: "
          f"{_yes(constrained_ok)}", file=out)
    if not ok and any(t.rel_deadline > t.period for t in tasks):
        print("note: some deadline exceeds its period; the density test is only "
              "sufficient there, so the set may still be EDF-schedulable", file=out)
    return EXIT_OK if ok else EXIT_FAIL


def _summary(report) -> str:
    m = report.metrics()
    parts = [f"{k}={m[k] if k != 'rejected' else len(m[k])}" for k in METRIC_COLUMNS]
    return f"policy={report.policy} mode={report.mode} horizon={m['horizon']} " + " ".join(parts)


def cmd_simulate(args, out) -> int:
    tasks = _tasks(args)
    machine = _machine(args)
    try:
        report = simulate(tasks, machine, args.policy, args.mode, _horizon(args.horizon),
                          queue=args.queue)
    except UnsupportedInputError as exc:
        raise InputError(str(exc)) from None
    if args.trace:
        report.write_trace(args.trace)
    if args.metrics:
        report.write_metrics(args.metrics)
    print(_summary(report), file=out)
    if report.rejected:
        print(f"rejected tasks: {' '.join(map(str, report.rejected))}", file=out)
        return EXIT_FAIL
    return EXIT_OK


def _run_cell(cell):
    tasks, speeds, policy, mode, horizon = cell
    report = simulate(tasks, Machine(speeds), policy, mode, horizon)
    row = report.metrics()
    row["rejected"] = len(row["rejected"])
    return {k: row[k] for k in METRIC_COLUMNS}


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.2f}"
    return str(x)


def cmd_compare(args, out) -> int:
    machine = _machine(args)
    policies = _csv_list(args.policies)
    bad = [p for p in policies if p not in POLICIES]
    if bad:
        raise InputError(f"unknown policies {bad}")
    horizon = _horizon(args.horizon)
    sweep = _csv_list(args.sweep, as_rational) if args.sweep else [None]
    if args.sweep and not args.gen:
        raise InputError("--sweep needs --gen")
    runs = args.runs if args.gen else 1

    cells, keys = [], []
    for util in sweep:
        for run in range(runs):
            if args.gen:
                spec = _genspec(args, util)
                spec = dataclasses.replace(spec, seed=spec.seed + run)
                try:
                    tasks = generate(spec)
                except ValueError as exc:
                    raise InputError(str(exc)) from None
            else:
                tasks = _tasks(args)
            u = utilization(tasks)
            for policy in policies:
                cells.append((tasks, machine.speeds, policy, args.mode, horizon))
                keys.append((u if util is None else util, policy))
    try:
        if args.workers > 1:
            with ProcessPoolExecutor(args.workers) as pool:
                rows = list(pool.map(_run_cell, cells))
        else:
            rows = [_run_cell(c) for c in cells]
    except UnsupportedInputError as exc:
        raise InputError(str(exc)) from None

    table = {}
    for (util, policy), row in zip(keys, rows):
        acc = table.setdefault((util, policy), {k: 0 for k in METRIC_COLUMNS})
        for k in METRIC_COLUMNS:
            acc[k] += row[k]
    header = ("util", "policy") + METRIC_COLUMNS
    lines = []
    for (util, policy), acc in table.items():
        vals = [acc[k] / runs if runs > 1 else acc[k] for k in METRIC_COLUMNS]
        lines.append((format_rational(util), policy) + tuple(vals))

    widths = [max(len(h), *(len(_fmt(r[i])) for r in lines)) for i, h in enumerate(header)]
    print("  ".join(h.rjust(w) for h, w in zip(header, widths)), file=out)
    for r in lines:
        print("  ".join(_fmt(v).rjust(w) for v, w in zip(r, widths)), file=out)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for r in lines:
                writer.writerow([_fmt(v) for v in r])
    return EXIT_OK


def cmd_gen(args, out) -> int:
    text = dumps_taskset(_tasks(args))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_bench_queues(args, out) -> int:
    sizes = _csv_list(args.sizes, int)
    if not sizes or min(sizes) < 1:
        raise InputError("--sizes must be positive integers")
    costs = bench.bench_queues(sizes, args.classes, args.pairs)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("queue", "n", "insert_cmp", "pop_cmp", "per_op_cmp"))
    for c in costs:
        writer.writerow((c.kind, c.n, f"{c.insert:.3f}", f"{c.pop:.3f}", f"{c.per_op:.3f}"))
    out.write(buf.getvalue())
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            fh.write(buf.getvalue())
    if len(sizes) >= 2:
        for kind in ("heap", "class"):
            a, b = bench.fit_log2([c for c in costs if c.kind == kind])
            print(f"# {kind}: per-op comparisons ~ {a:.3f}*log2(n) {b:+.3f}", file=out)
    return EXIT_OK


def _add_source(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--taskset", metavar="PATH", help="task-set file (JSON lines)")
    g.add_argument("--gen", metavar="SPEC", help="generate tasks, e.g. n=5,util=0.9,seed=1")
    p.add_argument("--seed", type=int, help="override the generator seed")


def _add_machine(p):
    p.add_argument("--speeds", default="1", help="processor speeds, e.g. 2,1,1 (default 1)")
    p.add_argument("--mode", choices=MODES, default="soft")
    p.add_argument("--horizon", default="hyperperiod", help="T or 'hyperperiod'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="efdfsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="utilization and density tests")
    _add_source(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("simulate", help="simulate one policy")
    _add_source(p)
    _add_machine(p)
    p.add_argument("--policy", choices=POLICIES, default="efdf")
    p.add_argument("--queue", choices=("heap", "class"), default="heap")
    p.add_argument("--trace", metavar="PATH", help="write the event trace (CSV)")
    p.add_argument("--metrics", metavar="PATH", help="write metrics (JSON)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="compare policies, optionally over a utilization sweep")
    _add_source(p)
    _add_machine(p)
    p.add_argument("--policies", default="edf,efdf,partitioned-ff")
    p.add_argument("--sweep", metavar="U1,U2,..", help="target utilizations (needs --gen)")
    p.add_argument("--runs", type=int, default=1, help="seeds per sweep point (with --gen)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--csv", metavar="PATH", help="write the table as CSV")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gen", help="generate a task-set file")
    p.add_argument("--gen", metavar="SPEC", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output", metavar="PATH")
    p.set_defaults(func=cmd_gen, taskset=None)

    p = sub.add_parser("bench-queues", help="comparison counts of both ready queues")
    p.add_argument("--sizes", default="10,100,1000,10000")
    p.add_argument("--classes", type=int, default=4)
    p.add_argument("--pairs", type=int, default=256)
    p.add_argument("--csv", metavar="PATH")
    p.set_defaults(func=cmd_bench_queues)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"efdfsim: error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
