"""Tabulate the linear-layer rank criterion for generalized Feistel networks.

    python scripts/rank_table.py --q 11 13 101 --layer shift
"""

import argparse
import csv
import sys

from aogb.genpos import feistel_rank_criterion
from aogb.systems import CipherSpec


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--q", nargs="+", type=int, default=[11, 13, 101])
    ap.add_argument("--families", nargs="+", default=["gmimc_crf", "gmimc_erf"])
    ap.add_argument("--branches", nargs="+", type=int, default=[3, 4, 5])
    ap.add_argument("--rounds", nargs="+", type=int, default=list(range(8, 18)))
    ap.add_argument("--layer", default="shift")
    args = ap.parse_args()

    out = csv.writer(sys.stdout)
    out.writerow(["q", "family", "branches", "rounds", "verdict", "full_rank"])
    for q in args.q:
        for fam in args.families:
            for n in args.branches:
                for r in args.rounds:
                    rep = feistel_rank_criterion(CipherSpec(fam, q, r, branches=n, layer=args.layer))
                    out.writerow([q, fam, n, r, rep.verdict, rep.witness.get("full_rank")])


if __name__ == "__main__":
    main()
