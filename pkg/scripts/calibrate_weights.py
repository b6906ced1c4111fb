#!/usr/bin/env python3
"""Fit the quadratic-closed-form constants and write the calibration file.

The closed form kappa * ((tr Var)^2 + 2 tr Var^2) applies to the pairs with
d(d-k) = 6.  kappa is a one-constant least-squares fit of the Monte Carlo
weight over a canonical seeded suite of unit-trace configurations; the worst
relative residual is recorded alongside and doubles as a proportionality
audit (a genuinely proportional pair has residual at the Monte Carlo noise
floor).

Usage: python scripts/calibrate_weights.py [--samples 1000000] [--configs 100]
       [--seed 31415926] [--out src/kplane_audit/data/weight_calibration.txt]
"""

import argparse
import time
from pathlib import Path

from kplane_audit.weights import calibrate_quadratic, write_calibration

PAIRS = ((3, 1), (6, 5))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=1_000_000)
    parser.add_argument("--configs", type=int, default=100)
    parser.add_argument("--seed", type=int, default=31415926)
    parser.add_argument("--workers", type=int, default=4)
    parser.add_argument(
        "--out",
        type=Path,
        default=Path(__file__).resolve().parent.parent / "src" / "kplane_audit" / "data" / "weight_calibration.txt",
    )
    args = parser.parse_args()

    entries = []
    for d, k in PAIRS:
        t0 = time.time()
        entry = calibrate_quadratic(d, k, args.samples, args.configs, args.seed, workers=args.workers)
        print(
            f"({d},{k}): kappa = {entry.kappa:.10g} +- {entry.stderr:.2g}, "
            f"worst relative residual = {entry.residual:.4g}  [{time.time() - t0:.0f}s]"
        )
        entries.append(entry)
    write_calibration(entries, args.out)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
