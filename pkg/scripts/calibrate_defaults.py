"""Recompute the shipped calibration constants.

Produces the default analog-memory sigma (targeting the published accuracy
gap at length 1024) and the default access-count multipliers (targeting the
published energy reductions).  Run from the repo root:

    python scripts/calibrate_defaults.py [--jobs N]

The resulting values are pasted into stochmem/harness.py
(DEFAULT_NOISE_SIGMA) and stochmem/costs.py (AccessMultipliers defaults).
"""

import argparse
import time

from stochmem.harness import ExperimentConfig, calibrate_access, calibrate_noise


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--jobs", type=int, default=2)
    ap.add_argument("--target-gap", type=float, default=0.19)
    ap.add_argument("--runs", type=int, default=5)
    args = ap.parse_args()

    t0 = time.time()
    mult, red_ml, red_sm = calibrate_access()
    print(f"access multipliers: {mult.as_dict()}")
    print(f"  mtj-vs-lfsr reduction:    {red_ml:.2f}% (target 45.7)")
    print(f"  stochmem-vs-mtj reduction: {red_sm:.2f}% (target 11.1)")

    noise, gap = calibrate_noise(args.target_gap, ExperimentConfig(),
                                 n_seeds=args.runs, jobs=args.jobs)
    print(f"noise sigma: {noise.write_sigma:.6f} (write = read)")
    print(f"  achieved five-app gap: {gap:.4f}pp (target {args.target_gap})")
    print(f"[{time.time() - t0:.0f}s]")


if __name__ == "__main__":
    main()
