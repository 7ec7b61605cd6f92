#!/usr/bin/env python3
"""Scan fundamental discriminants and summarize the genus-theory verdicts.

Writes the per-discriminant rows to a CSV file and prints aggregate counts:
how many discriminants were scanned, how many fall in the exceptional real
case, and how many (if any) violate each verdict.
"""

import argparse
import sys
import time

from qknorm.cli import ScanConfig, _emit, run_scan


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--min", type=int, default=-100_000)
    ap.add_argument("--max", type=int, default=100_000)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default="scan.csv")
    args = ap.parse_args()

    t0 = time.time()
    cfg = ScanConfig(min=args.min, max=args.max, jobs=args.jobs,
                     out=args.out, fmt="csv")
    rows, summary = run_scan(cfg)
    _emit({"rows": rows}, "csv", cfg.out, rows_key="rows")
    dt = time.time() - t0

    n = len(rows)
    real = sum(1 for r in rows if int(r["delta"]) > 0)
    exc = sum(1 for r in rows if r["exceptional"] == "true")
    print(f"scanned {n} fundamental discriminants "
          f"({real} real, {n - real} imaginary) in {dt:.1f}s")
    print(f"exceptional real cases: {exc}")
    for verdict in ("verdict_67", "verdict_68", "verdict_69"):
        bad = [r["delta"] for r in rows if r[verdict] == "false"]
        print(f"{verdict}: {len(bad)} violations"
              + (f" (first: {bad[:5]})" if bad else ""))
    print(f"rows written to {args.out}")
    return 0 if summary["violations"] == "0" else 1


if __name__ == "__main__":
    sys.exit(main())
