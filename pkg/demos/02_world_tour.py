#!/usr/bin/env python3
"""
A tour of the synthetic world the trackers live in.

The hidden target walks the grid in piecewise-constant-velocity legs and
carries a square pulse of half-width 50. Every cell of every frame is hit
with noise, and a fraction rho of cells get outliers drawn from a much wider
component. This script prints what that does to the signal and writes a
sample trace to demos/out/.
"""

from pathlib import Path

import numpy as np

from hedgetrack import WorldConfig, derive_rng, export_trace_csv, pulse, simulate
from hedgetrack.world import OUTLIER_SCALE

OUT = Path(__file__).parent / "out"


def describe(cfg, label):
    trace = simulate(cfg, derive_rng(cfg.seed, 0, 0))
    z = trace.true_states
    speeds = np.abs(np.diff(z))
    frames = trace.frames
    cells = np.arange(cfg.grid_min, cfg.grid_max + 1, dtype=float)

    # signal-to-noise from the frames themselves: pulse cells carry +1
    in_pulse = np.array([
        f[np.abs(cells - zt) <= cfg.half_width].mean()
        for f, zt in zip(frames, z)
    ])
    out_pulse = np.array([
        f[np.abs(cells - zt) > cfg.half_width].mean()
        for f, zt in zip(frames, z)
    ])

    print(f"--- {label} ---")
    print(f"  horizon {cfg.horizon}, grid [{cfg.grid_min}, {cfg.grid_max}], "
          f"pulse half-width {cfg.half_width}")
    print(f"  trajectory: start {z[0]:.0f}, span [{z.min():.0f}, {z.max():.0f}], "
          f"mean |step| {speeds.mean():.2f}")
    print(f"  cell noise std {cfg.noise_scale:g}, outlier fraction {cfg.outlier_frac:g}")
    print(f"  mean frame value inside the pulse  {in_pulse.mean():+.3f}")
    print(f"  mean frame value outside the pulse {out_pulse.mean():+.3f}")
    # outliers come from the same Gaussian stretched by OUTLIER_SCALE
    mix_std = cfg.noise_scale * np.sqrt(1 + (OUTLIER_SCALE**2 - 1) * cfg.outlier_frac)
    print(f"  per-cell signal-to-noise ratio     {1.0 / mix_std:6.3f}")
    print()
    return trace


def main():
    OUT.mkdir(exist_ok=True)

    print("square pulse at z=0, half-width 3, on an 11-cell strip:")
    strip = np.arange(-5.0, 6.0)
    print("  cells :", " ".join(f"{c:+4.0f}" for c in strip))
    print("  pulse :", " ".join(f"{v:4.0f}" for v in pulse(strip, 0.0, 3)))
    print()

    easy = WorldConfig(noise_scale=1.0, outlier_frac=0.1, seed=11)
    hard = WorldConfig(noise_scale=8.0, outlier_frac=0.1, seed=11)
    trace = describe(easy, "sigma_o = 1 (easy)")
    describe(hard, "sigma_o = 8 (hard)")

    path = OUT / "trace_sigma1_rho010.csv"
    export_trace_csv(trace, path, easy)
    print(f"wrote the easy trace's true states to {path}")

    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not available; skipping the frame heatmap")
        return
    fig, ax = plt.subplots(figsize=(9, 4))
    ax.imshow(np.array(trace.frames).T, aspect="auto", origin="lower",
              extent=(1, easy.horizon, easy.grid_min, easy.grid_max),
              cmap="gray", vmin=-3, vmax=4)
    ax.plot(np.arange(1, easy.horizon + 1), trace.true_states, "r", lw=1,
            label="true state")
    ax.set_xlabel("t"), ax.set_ylabel("cell"), ax.legend(loc="upper right")
    fig.tight_layout()
    png = OUT / "frames_sigma1_rho010.png"
    fig.savefig(png, dpi=110)
    print(f"wrote a frame heatmap to {png} (the pale band is the pulse)")


if __name__ == "__main__":
    main()
