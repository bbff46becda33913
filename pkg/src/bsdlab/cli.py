"""Command line entry point: bsdlab {list, run, sweep, all}."""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .experiments import convergence_study, default_spec, list_experiments, run_all, run_experiment
from .report import dumps_json, write_report


def _complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise argparse.ArgumentTypeError(f"expected RE or RE,IM, got {text!r}")


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _values(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _add_overrides(p: argparse.ArgumentParser) -> None:
    p.add_argument("--r", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--s", type=_complex, metavar="RE[,IM]")
    p.add_argument("--nu", type=float)
    p.add_argument("--delta", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--step", type=float)
    p.add_argument("--order", type=int, choices=(2, 4))
    p.add_argument("--nodes", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--seed", type=_seed)


def _spec_from(args):
    fields = ("r", "b", "s", "nu", "delta", "samples", "step", "order", "nodes", "tol", "seed")
    overrides = {k: getattr(args, k) for k in fields if getattr(args, k) is not None}
    return default_spec(args.name, **overrides)


def _line(rep) -> str:
    status = "PASS" if rep.passed else "FAIL"
    se = "" if rep.stderr is None else f" stderr={rep.stderr:.3e}"
    tail = f"  ({rep.message})" if rep.message else ""
    return f"{status} {rep.name:<18} [{rep.statement}] abs_err={rep.abs_err:.3e} rel_err={rep.rel_err:.3e}{se}{tail}"


def _emit(reports, out, fmt, timing):
    if out:
        write_report(reports, out, fmt, timing=timing)
    else:
        sys.stdout.write(dumps_json([r.to_dict(timing) for r in reports]))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bsdlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list registered experiments")

    run = sub.add_parser("run", help="run one experiment")
    run.add_argument("name")
    _add_overrides(run)
    run.add_argument("--out")
    run.add_argument("--format", choices=("json", "csv"), default="json")
    run.add_argument("--timing", action="store_true", help="include runtime_ms in the written report")

    sweep = sub.add_parser("sweep", help="convergence study over samples or step")
    sweep.add_argument("name")
    sweep.add_argument("--param", choices=("samples", "step"), required=True)
    sweep.add_argument("--values", type=_values, required=True)
    _add_overrides(sweep)
    sweep.add_argument("--out")
    sweep.add_argument("--format", choices=("json", "csv"), default="json")
    sweep.add_argument("--timing", action="store_true")

    every = sub.add_parser("all", help="run every experiment with its defaults")
    every.add_argument("--out", help="directory for per-experiment JSON and a summary CSV")
    every.add_argument("--timing", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list":
            for name, statement, spec in list_experiments():
                print(f"{name:<18} {statement:<30} r={spec.r} b={spec.b} s={spec.s} nu={spec.nu} delta={spec.delta}")
            return 0
        if args.command == "run":
            rep = run_experiment(_spec_from(args))
            print(_line(rep), file=sys.stderr)
            _emit([rep], args.out, args.format, args.timing)
            return 0 if rep.passed else 1
        if args.command == "sweep":
            res = convergence_study(_spec_from(args), args.param, args.values)
            for v, rep in zip(res.values, res.reports):
                print(f"{args.param}={v:g} " + _line(rep), file=sys.stderr)
            slope = "absent" if res.slope is None else f"{res.slope:.4f}"
            print(f"fitted log-log slope: {slope}", file=sys.stderr)
            _emit(res.reports, args.out, args.format, args.timing)
            return 0 if all(r.passed for r in res.reports) else 1
        if args.command == "all":
            reports = run_all()
            for rep in reports:
                print(_line(rep), file=sys.stderr)
            if args.out:
                out = Path(args.out)
                out.mkdir(parents=True, exist_ok=True)
                for rep in reports:
                    write_report(rep, out / f"{rep.name}.json", "json", timing=args.timing)
                write_report(reports, out / "summary.csv", "csv", timing=args.timing)
            return 0 if all(r.passed for r in reports) else 1
    except (KeyError, ValueError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
