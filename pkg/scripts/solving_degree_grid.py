"""Measure solving degrees of the desk-scale attack models and compare with the expected laws.

    python scripts/solving_degree_grid.py --q 11 23 29 --r 2 3 --seeds 0 1 2
"""

import argparse
import csv
import sys

from aogb.complexity import desk_solving_degree, macaulay_bound
from aogb.groebner import solving_degree
from aogb.systems import attack_instance


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--models", nargs="+", default=["field_eq", "two_plaintext", "feistel", "hash"])
    ap.add_argument("--q", nargs="+", type=int, default=[11, 23, 29])
    ap.add_argument("--r", nargs="+", type=int, default=[2, 3])
    ap.add_argument("--seeds", nargs="+", type=int, default=[0])
    ap.add_argument("--time-budget", type=float, default=60.0)
    args = ap.parse_args()

    out = csv.writer(sys.stdout)
    out.writerow(["model", "q", "r", "seed", "nvars", "solving_degree", "expected", "upper_bound",
                  "gb_max_degree", "macaulay_bound", "seconds"])
    for model in args.models:
        for q in args.q:
            for r in args.r:
                desk = desk_solving_degree(model, q, r)
                for seed in args.seeds:
                    S = attack_instance(model, q, r, seed).system
                    mb = macaulay_bound(S.degrees(), S.ring.nvars)
                    res = solving_degree(S, d_max=mb, time_budget=args.time_budget)
                    gbd = res.gb.max_degree() if res.gb is not None else ""
                    deg = "" if res.exhausted else res.degree
                    out.writerow([model, q, r, seed, S.ring.nvars, deg, desk["expected"], desk["upper_bound"],
                                  gbd, mb, f"{res.seconds:.2f}"])
                    sys.stdout.flush()


if __name__ == "__main__":
    main()
