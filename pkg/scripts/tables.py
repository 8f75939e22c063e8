"""Recompute the complexity tables as CSV, optionally for another linear-algebra exponent.

    python scripts/tables.py --which all --omega 2.0
"""

import argparse
import csv
import sys

from aogb.complexity import CSV_HEADER, TABLES, reproduce_tables


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--which", default="all", choices=["all", *TABLES])
    ap.add_argument("--omega", type=float, default=2.0)
    args = ap.parse_args()
    out = csv.writer(sys.stdout)
    out.writerow(CSV_HEADER)
    for row in reproduce_tables(args.which, omega=args.omega):
        out.writerow(row.csv())


if __name__ == "__main__":
    main()
