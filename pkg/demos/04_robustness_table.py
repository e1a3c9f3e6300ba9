#!/usr/bin/env python3
"""
A small version of the headline robustness experiment.

Ten trials per cell instead of a hundred, three outlier fractions instead of
six, both noise levels. Prints the mean RMSE grid per tracker. The full run
is one command:

    hedgetrack bench --sigma-o 1 --trials 100 --out results/sigma1
    hedgetrack bench --sigma-o 8 --trials 100 --out results/sigma8
"""

import time

from hedgetrack.bench import ExperimentSpec, run_experiment

RHOS = (0.0, 0.05, 0.20)
TRIALS = 10


def main():
    print(f"{TRIALS} trials per cell, rho in {RHOS} (takes ~10s)\n")
    t0 = time.perf_counter()
    for sigma in (1.0, 8.0):
        spec = ExperimentSpec(sigma_o=sigma, rho_list=RHOS, trials=TRIALS)
        agg = run_experiment(spec)
        print(f"mean rmse at sigma_o = {sigma:g}:")
        print("    rho | " + " | ".join(f"{t:>12s}" for t in spec.trackers))
        for rho in RHOS:
            cells = [agg.cell(t, rho) for t in spec.trackers]
            row = " | ".join(f"{c.mean_rmse:6.2f}±{c.std_rmse:5.2f}" for c in cells)
            print(f"  {rho:5.2f} | {row}")
        print()
    print(f"done in {time.perf_counter() - t0:.0f}s")
    print("\nReading the grid: the exact filter owns the clean column, the\n"
          "particle filter falls off a cliff as soon as outliers appear, and\n"
          "the hedge tracker degrades the most gently as contamination grows.")


if __name__ == "__main__":
    main()
