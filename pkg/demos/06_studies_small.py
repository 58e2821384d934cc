"""Scaled-down runs of the three studies.

The full-size runs live behind ``mpot exp``; this script runs shrunken
configurations in under a minute and prints the headline numbers. CSVs land
in ./demo_out and are accepted by the figure renderer.
"""

import numpy as np

from mpot.experiments import (ExperimentConfig, run_barycenter,
                              run_convergence, run_robustness)

cfg = ExperimentConfig(
    seed=0,
    out_dir="demo_out",
    clean_count=5,
    outlier_counts=(0, 1, 2, 3),
    masses=(0.6, 0.8),
    grid_size=24,
    convergence_n=5,
    etas=(0.01, 1.0),
    convergence_tol=1e-4,
)

rows, path = run_robustness(cfg)
print(f"robustness -> {path}")
for n0 in cfg.outlier_counts:
    mot = next(r[3] for r in rows if r[0] == n0 and r[1] == "mot")
    partial = min(r[3] for r in rows if r[0] == n0 and r[1] == "mpot")
    print(f"  outliers={n0}: balanced {mot:8.3f} | partial(0.6) {partial:7.3f}")

rows, path, outcomes = run_convergence(cfg)
print(f"convergence -> {path}")
opt = rows[0][2]
for eta, out in outcomes.items():
    print(f"  eta={eta}: {out.iterations} sweeps, gap {abs(out.objective - opt):.4f}")

rows, path = run_barycenter(cfg)
print(f"barycenter -> {path}")
grid = np.array([r[0] for r in rows])
outside = (grid < 35) | (grid > 65)
for name, col in zip(("balanced", "pairwise", "multimarginal"),
                     np.array([r[1:] for r in rows]).T):
    print(f"  {name:13} barycenter: {col[outside].sum():.4f} mass outside [35, 65]")
