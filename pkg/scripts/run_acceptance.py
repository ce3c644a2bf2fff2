"""Run every acceptance suite and print one line per criterion.

    python3 scripts/run_acceptance.py [--seed 0] [--json out.json] [--suite NAME ...]

Exits 1 when any suite fails.
"""

import argparse
import json
import sys

from polyprod.verify import SUITES, SuiteConfig, run_suite


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n", type=int)
    ap.add_argument("--m", type=int)
    ap.add_argument("--suite", action="append", default=[])
    ap.add_argument("--json", help="also write the full results here")
    args = ap.parse_args(argv)
    cfg = SuiteConfig(args.seed, args.n, args.m)
    results = []
    for name in args.suite or list(SUITES):
        res = run_suite(name, cfg)
        results.append(res)
        print(res.line(), flush=True)
        for w in res.witnesses:
            print(f"    witness: {w}")
        if res.note and not res.passed:
            print(f"    note: {res.note}")
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} suites passed")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump([r.to_json() for r in results], fh, indent=2, sort_keys=True)
    return 0 if passed == len(results) else 1


if __name__ == "__main__":
    sys.exit(main())
