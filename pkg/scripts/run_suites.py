#!/usr/bin/env python3
"""Run every verification suite and print a one-line summary per suite.

Exits non-zero if any suite fails. Suite parameters default to the
acceptance settings; pass --quick for a fast smoke run.
"""

import argparse
import sys
import time
from pathlib import Path

from mcgseq import textio
from mcgseq.verify import (
    exactness_suite,
    normalization_suite,
    pi1_suite,
    relations_suite,
    roundtrip_suite,
    spotted_suite,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--manifold", default=str(FIXTURES / "mstar.txt"))
    parser.add_argument("--spotted", default=str(FIXTURES / "spotted.txt"))
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--quick", action="store_true")
    args = parser.parse_args()

    manifold = textio.parse_manifold(Path(args.manifold).read_text())
    marking = textio.parse_spotted_marking(Path(args.spotted).read_text())

    exact_len = 2 if args.quick else 4
    mixed_len = 2 if args.quick else 3
    pairs = 50 if args.quick else 300

    runs = [
        ("exactness", lambda: exactness_suite(manifold, exact_len, mixed_len)),
        ("normalization", lambda: normalization_suite(manifold)),
        ("pi1", lambda: pi1_suite(manifold, seed=args.seed, pairs=pairs)),
        ("relations", lambda: relations_suite(manifold)),
        ("spotted", lambda: spotted_suite(marking, max_len=mixed_len)),
        ("roundtrip", lambda: roundtrip_suite(manifold, seed=args.seed)),
    ]
    all_ok = True
    for name, run in runs:
        t0 = time.time()
        report = run()
        status = "PASS" if report["ok"] else "FAIL"
        counts = {
            k: v
            for k, v in report.items()
            if k not in ("suite", "ok", "failures")
        }
        print(f"{status} {name:14s} {time.time() - t0:6.1f}s  {counts}")
        all_ok = all_ok and report["ok"]
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
