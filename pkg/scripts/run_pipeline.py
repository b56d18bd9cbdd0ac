"""Run the lemma and harness checks over a small grid and print a one-line summary per case."""

import argparse
import json

from engelcheck.grading import GradingAssignment, verify_lemma1_collection
from engelcheck.harness import verify_eq1_implies_vanishing


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-W", type=int, default=6)
    ap.add_argument("--json", action="store_true", help="dump full reports")
    args = ap.parse_args()
    reports = {}
    for n, m in [(2, 1), (2, 2)]:
        rep = verify_lemma1_collection(n, m, GradingAssignment.from_signs("+-"), args.W)
        reports[f"lemma1 n={n} m={m}"] = rep
    for n, k, m, K in [(2, 2, 1, 1), (2, 2, 1, 2), (2, 3, 1, 1)]:
        rep = verify_eq1_implies_vanishing(n, k, m, K, args.W)
        reports[f"harness n={n} k={k} m={m} K={K}"] = rep
    for name, rep in reports.items():
        print(f"{name}: {'PASS' if rep.passed else 'FAIL'}")
        for c in rep.checks:
            print(f"    {c.name}: {c.status}")
    if args.json:
        print(json.dumps({name: rep.to_dict() for name, rep in reports.items()}, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
