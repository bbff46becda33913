"""Run every registered experiment and write JSON reports plus a CSV summary."""
import argparse
import sys
from pathlib import Path

from bsdlab.experiments import run_all
from bsdlab.report import write_report


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="reports")
    parser.add_argument("--timing", action="store_true")
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    reports = run_all()
    for rep in reports:
        write_report(rep, out / f"{rep.name}.json", timing=args.timing)
        print(f"{'PASS' if rep.passed else 'FAIL'} {rep.name:<18} {rep.statement:<30} rel_err={rep.rel_err:.2e}")
    write_report(reports, out / "summary.csv", "csv", timing=args.timing)
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
