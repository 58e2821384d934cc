"""Seeded experiment pipelines writing deterministic CSV files.

Three studies: sensitivity of the transport cost to injected outlier
supports, one-dimensional partial barycenters of contaminated histograms,
and the convergence of the entropic solver across regularization strengths.
Each run is a pure function of its config (fixed seed means byte-identical
CSV output); the CSV schemas are consumed by the figure renderer.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exact import solve_mot_exact, solve_mpot_exact
from .measures import (DiscreteMeasure, MpotInstance, barycentric_cost,
                       barycentric_points, squared_euclidean_cost)
from .sinkhorn import SinkhornConfig, approx_mpot, round_to_polytope, sinkhorn_mot
from .tensors import DenseTensor, marginal

CLEAN_MEANS = ((0.0, 0.0), (1.0, 1.0), (-1.0, 1.0))
OUTLIER_MEANS = ((0.0, 5.0), (5.0, 5.0), (-5.0, 5.0))


@dataclass
class ExperimentConfig:
    seed: int = 0
    out_dir: str = "out"
    # outlier study
    clean_count: int = 10
    outlier_counts: tuple = (0, 1, 2, 3, 4, 5)
    masses: tuple = (0.6, 0.7, 0.8, 0.9)
    oracle_cap: int = 4096
    fallback_eta: float = 0.05
    # barycenter study
    grid_size: int = 100
    barycenter_mass: float = 0.8
    barycenter_eta: float = 1.0
    # visualization-grade stopping: rounding restores exact marginals anyway
    barycenter_tol: float = 1e-3
    barycenter_max_iters: int = 4000
    pairwise_sweeps: int = 12
    # convergence study
    convergence_n: int = 10
    convergence_mass: float = 0.8
    etas: tuple = (0.01, 0.1, 1.0)
    convergence_tol: float = 1e-4
    convergence_max_iters: int = 60000


def gaussian_samples(rng: np.random.Generator, count: int, dim: int = 1) -> np.ndarray:
    """Standard normals via Box-Muller on the generator's uniform stream."""
    pairs = (count * dim + 1) // 2
    u1 = rng.random(pairs)
    u2 = rng.random(pairs)
    radius = np.sqrt(-2.0 * np.log1p(-u1))
    z = np.concatenate([radius * np.cos(2.0 * np.pi * u2),
                        radius * np.sin(2.0 * np.pi * u2)])
    out = z[: count * dim]
    return out.reshape(count, dim) if dim > 1 else out


def _point_cloud(rng, mean, count) -> np.ndarray:
    return np.asarray(mean) + gaussian_samples(rng, count, dim=2)


def _write_csv(path: Path, header, rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return path


def _fmt(value):
    if isinstance(value, float):
        return repr(value)
    return value


def robustness_measures(cfg: ExperimentConfig):
    """Fixed clean clouds plus incrementally revealed outliers, per measure."""
    rng = np.random.default_rng(cfg.seed)
    clean = [_point_cloud(rng, mu, cfg.clean_count) for mu in CLEAN_MEANS]
    noisy = [_point_cloud(rng, mu, max(cfg.outlier_counts)) for mu in OUTLIER_MEANS]
    by_n0 = {}
    for n0 in cfg.outlier_counts:
        measures = []
        for pts, extra in zip(clean, noisy):
            support = np.vstack([pts, extra[:n0]]) if n0 else pts
            weights = np.full(len(support), 1.0 / len(support))
            measures.append(DiscreteMeasure(support, weights))
        by_n0[n0] = measures
    return by_n0


def run_robustness(cfg: ExperimentConfig):
    """Transport cost versus injected outlier count, balanced and partial.

    One row per (outlier count, method): the balanced problem plus the
    partial problem at each configured mass. Solved exactly while the
    flattened plan fits the oracle cap, otherwise by the entropic pipeline.
    """
    rows = []
    for n0, measures in robustness_measures(cfg).items():
        cost = squared_euclidean_cost(measures)
        size = math.prod(cost.shape)
        use_oracle = size <= cfg.oracle_cap
        if use_oracle:
            _, mot_obj = solve_mot_exact(cost, [mu.weights for mu in measures],
                                         cap=cfg.oracle_cap)
            engine = "exact"
        else:
            out = sinkhorn_mot(cost, [mu.weights for mu in measures],
                               SinkhornConfig(eta=cfg.fallback_eta, tol=1e-6,
                                              max_iters=20000, record_trace=False))
            mot_obj = out.objective
            engine = "sinkhorn"
        rows.append((n0, "mot", 1.0, mot_obj, engine))
        for s in cfg.masses:
            inst = MpotInstance(measures, cost, s)
            if use_oracle:
                _, obj = solve_mpot_exact(inst, cap=cfg.oracle_cap)
            else:
                obj = approx_mpot(inst, cfg=SinkhornConfig(
                    eta=cfg.fallback_eta, tol=1e-6, max_iters=20000,
                    record_trace=False)).objective
            rows.append((n0, "mpot", float(s), obj, engine))
    path = _write_csv(Path(cfg.out_dir) / "robustness.csv",
                      ("n0", "method", "s", "objective", "engine"), rows)
    return rows, path


def _normal_pdf(x, mean, var):
    return np.exp(-((x - mean) ** 2) / (2.0 * var)) / np.sqrt(2.0 * np.pi * var)


def contaminated_histograms(grid: np.ndarray):
    """Three unit-mass histograms, each 0.9 clean Gaussian + 0.1 far noise."""
    specs = (
        ((50.0, 25.0), (5.0, 4.0)),
        ((45.0, 16.0), (90.0, 4.0)),
        ((55.0, 9.0), (10.0, 9.0)),
    )
    out = []
    for (m_clean, v_clean), (m_noise, v_noise) in specs:
        w = 0.9 * _normal_pdf(grid, m_clean, v_clean) + 0.1 * _normal_pdf(grid, m_noise, v_noise)
        out.append(w / w.sum())
    return out


def _pushforward(plan, measures, grid) -> np.ndarray:
    """Bin plan mass at the per-index barycentric points onto the grid."""
    points = barycentric_points(measures)[..., 0]
    idx = np.clip(np.searchsorted(grid, points.ravel()), 0, len(grid) - 1)
    left = np.clip(idx - 1, 0, len(grid) - 1)
    use_left = np.abs(grid[left] - points.ravel()) < np.abs(grid[idx] - points.ravel())
    idx = np.where(use_left, left, idx)
    hist = np.bincount(idx, weights=np.asarray(plan.a).ravel(), minlength=len(grid))
    total = hist.sum()
    return hist / total if total > 0 else hist


def _pairwise_partial_pushforwards(histograms, grid, s, eta, tol=1e-6, sweeps=12):
    """Fixed-point baseline: average the grid marginals of two-marginal
    partial plans from each input to the current barycenter estimate."""
    n = len(grid)
    pair_cost = DenseTensor((grid[:, None] - grid[None, :]) ** 2)
    bary = np.full(n, 1.0 / n)
    cfg = SinkhornConfig(eta=eta, tol=tol, max_iters=5000,
                         eta_schedule=True, record_trace=False)
    for _ in range(sweeps):
        pushed = []
        for hist in histograms:
            measures = [DiscreteMeasure(grid, hist),
                        DiscreteMeasure(grid, np.maximum(bary, 1e-12))]
            inst = MpotInstance(measures, pair_cost, s)
            out = approx_mpot(inst, cfg=cfg)
            col = marginal(out.cropped, 2)
            pushed.append(col / col.sum())
        bary = np.mean(pushed, axis=0)
    return bary


def run_barycenter(cfg: ExperimentConfig):
    """Balanced, pairwise-partial, and multimarginal-partial barycenters.

    All histograms live on a common grid of ``grid_size`` points spanning
    [0, 100). The multimarginal route pushes the cropped partial plan's mass
    to the per-index mean points; the balanced route does the same with the
    full plan. Output columns are normalized to unit mass.
    """
    grid = np.linspace(0.0, 100.0, cfg.grid_size, endpoint=False)
    hists = contaminated_histograms(grid)
    measures = [DiscreteMeasure(grid, h) for h in hists]
    cost = barycentric_cost(measures)

    mot_cfg = SinkhornConfig(eta=cfg.barycenter_eta, tol=cfg.barycenter_tol,
                             max_iters=cfg.barycenter_max_iters,
                             eta_schedule=True, record_trace=False)
    mot_out = sinkhorn_mot(cost, hists, mot_cfg)
    mot_plan = round_to_polytope(mot_out.plan, hists)
    ot_bary = _pushforward(mot_plan, measures, grid)

    inst = MpotInstance(measures, cost, cfg.barycenter_mass)
    mpot_out = approx_mpot(inst, cfg=SinkhornConfig(
        eta=cfg.barycenter_eta, tol=cfg.barycenter_tol,
        max_iters=cfg.barycenter_max_iters, eta_schedule=True,
        record_trace=False))
    mpot_bary = _pushforward(mpot_out.cropped, measures, grid)

    # the two-marginal subproblems are tiny, so the baseline can afford a
    # much tighter stopping tolerance than the multimarginal solves
    pot_bary = _pairwise_partial_pushforwards(
        hists, grid, cfg.barycenter_mass, cfg.barycenter_eta,
        tol=min(1e-6, cfg.barycenter_tol), sweeps=cfg.pairwise_sweeps)

    rows = [(float(grid[i]), float(ot_bary[i]), float(pot_bary[i]), float(mpot_bary[i]))
            for i in range(len(grid))]
    path = _write_csv(Path(cfg.out_dir) / "barycenter.csv",
                      ("support", "ot_bary", "pot_bary", "mpot_bary"), rows)
    return rows, path


def convergence_instance(cfg: ExperimentConfig) -> MpotInstance:
    rng = np.random.default_rng(cfg.seed)
    measures = []
    for mean in CLEAN_MEANS:
        pts = _point_cloud(rng, mean, cfg.convergence_n)
        measures.append(DiscreteMeasure(pts, np.full(len(pts), 1.0 / len(pts))))
    return MpotInstance(measures, squared_euclidean_cost(measures), cfg.convergence_mass)


def run_convergence(cfg: ExperimentConfig):
    """Objective trace of the entropic pipeline per regularization strength.

    Appends a reference row holding the exact optimum of the unregularized
    problem (eta column 'exact'). The traced objective is the extended-cost
    value of the raw iterate.
    """
    inst = convergence_instance(cfg)
    _, opt = solve_mpot_exact(inst, cap=cfg.oracle_cap)
    rows = [("exact", 0, opt)]
    outcomes = {}
    for eta in cfg.etas:
        out = approx_mpot(inst, cfg=SinkhornConfig(
            eta=eta, tol=cfg.convergence_tol, max_iters=cfg.convergence_max_iters))
        outcomes[eta] = out
        for rec in out.trace:
            rows.append((repr(float(eta)), rec.iteration, rec.objective))
    path = _write_csv(Path(cfg.out_dir) / "convergence.csv",
                      ("eta", "iter", "objective"), rows)
    return rows, path, outcomes


def run_all(cfg: ExperimentConfig) -> dict:
    paths = {}
    _, paths["robustness"] = run_robustness(cfg)
    _, paths["barycenter"] = run_barycenter(cfg)
    _, paths["convergence"], _ = run_convergence(cfg)
    return paths
