"""Discrete measures and partial-transport problem instances.

A problem instance bundles m weighted point sets, a nonnegative cost tensor
over their support grid, and the mass s to transport. Feasible plans are
nonnegative tensors whose axis marginals are dominated by the measure
weights and whose total mass is s.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .tensors import DenseTensor, as_array, load_tensor, marginal, total_mass


@dataclass(frozen=True)
class DiscreteMeasure:
    """Weighted points in R^d; weights are nonnegative masses, not normalized."""

    supports: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = np.array(self.supports, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2:
            raise ValueError("supports must be an (n, d) array")
        w = np.array(self.weights, dtype=float).reshape(-1)
        if len(w) != len(pts):
            raise ValueError(f"{len(pts)} supports but {len(w)} weights")
        if w.size and float(w.min()) < 0.0:
            raise ValueError("weights must be nonnegative")
        if float(w.sum()) <= 0.0:
            raise ValueError("total mass must be positive")
        pts.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "supports", pts)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def dim(self) -> int:
        return self.supports.shape[1]

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    def padded(self, n: int) -> "DiscreteMeasure":
        """Pad with zero-weight copies of the first support point up to n points."""
        if n < self.n:
            raise ValueError(f"cannot pad from {self.n} down to {n} points")
        if n == self.n:
            return self
        extra = n - self.n
        pts = np.vstack([self.supports, np.tile(self.supports[:1], (extra, 1))])
        w = np.concatenate([self.weights, np.zeros(extra)])
        return DiscreteMeasure(pts, w)


def pad_to_common_size(measures) -> list[DiscreteMeasure]:
    """Zero-weight padding so every measure has the same support count."""
    n = max(mu.n for mu in measures)
    return [mu.padded(n) for mu in measures]


class MpotInstance:
    """m measures with a common support count, a cost tensor, and a mass s."""

    __slots__ = ("measures", "cost", "s")

    def __init__(self, measures, cost: DenseTensor, s: float):
        measures = list(measures)
        if len(measures) < 2:
            raise ValueError("need at least two measures")
        if cost.ndim != len(measures):
            raise ValueError(f"cost has {cost.ndim} axes for {len(measures)} measures")
        for k, mu in enumerate(measures):
            if cost.shape[k] != mu.n:
                raise ValueError(
                    f"cost axis {k + 1} has length {cost.shape[k]} "
                    f"but measure {k + 1} has {mu.n} supports"
                )
        smin = min(mu.total_mass for mu in measures)
        s = float(s)
        if not 0.0 <= s <= smin + 1e-12:
            raise ValueError(f"s={s} outside [0, min mass={smin}]")
        self.measures = measures
        self.cost = cost
        self.s = min(s, smin)

    @property
    def m(self) -> int:
        return len(self.measures)

    @property
    def n(self) -> int:
        return self.cost.shape[0]

    @property
    def weights(self) -> list[np.ndarray]:
        return [mu.weights for mu in self.measures]

    @property
    def masses(self) -> np.ndarray:
        return np.array([mu.total_mass for mu in self.measures])


@dataclass(frozen=True)
class PlanFeasibilityReport:
    """Per-axis worst marginal excess over the measure weights, and |mass - s|."""

    marginal_violations: np.ndarray
    mass_gap: float

    @property
    def max_violation(self) -> float:
        return float(self.marginal_violations.max())

    def feasible(self, tol: float = 0.0) -> bool:
        return self.max_violation <= tol and self.mass_gap <= tol


def check_partial_feasibility(plan, inst: MpotInstance, tol: float = 0.0) -> PlanFeasibilityReport:
    """Measure how far ``plan`` is from the feasible set of ``inst``.

    The plan belongs to the coupling set exactly when every reported quantity
    is within ``tol``. Only positive marginal excess counts; dominated
    marginals are free.
    """
    a = as_array(plan)
    if a.shape != inst.cost.shape:
        raise ValueError(f"plan shape {a.shape} != cost shape {inst.cost.shape}")
    violations = np.array(
        [float(np.maximum(marginal(a, k + 1) - inst.measures[k].weights, 0.0).max())
         for k in range(inst.m)]
    )
    gap = abs(total_mass(a) - inst.s)
    report = PlanFeasibilityReport(violations, gap)
    _ = tol  # callers evaluate report.feasible(tol); kept for signature clarity
    return report


def _common_dim(measures) -> int:
    dims = {mu.dim for mu in measures}
    if len(dims) != 1:
        raise ValueError(f"measures live in different ambient dimensions: {sorted(dims)}")
    return dims.pop()


def squared_euclidean_cost(measures) -> DenseTensor:
    """Pairwise-sum ground cost: C_v = sum over pairs j<k of |x_j(v_j) - x_k(v_k)|^2."""
    measures = list(measures)
    _common_dim(measures)
    dims = tuple(mu.n for mu in measures)
    m = len(measures)
    cost = np.zeros(dims)
    for j in range(m):
        for k in range(j + 1, m):
            d2 = ((measures[j].supports[:, None, :] - measures[k].supports[None, :, :]) ** 2).sum(-1)
            shape = [1] * m
            shape[j], shape[k] = dims[j], dims[k]
            cost += d2.reshape(shape)
    return DenseTensor(cost, copy=False)


def _weight_vector(lambdas, m: int) -> np.ndarray:
    if lambdas is None:
        return np.full(m, 1.0 / m)
    lam = np.asarray(lambdas, dtype=float).reshape(-1)
    if len(lam) != m or lam.min() < 0 or abs(lam.sum() - 1.0) > 1e-9:
        raise ValueError("lambdas must be m nonnegative weights summing to 1")
    return lam


def barycentric_points(measures, lambdas=None) -> np.ndarray:
    """Weighted mean point A(v) for every index v; shape dims + (d,)."""
    measures = list(measures)
    d = _common_dim(measures)
    dims = tuple(mu.n for mu in measures)
    m = len(measures)
    lam = _weight_vector(lambdas, m)
    mean = np.zeros(dims + (d,))
    for k in range(m):
        shape = [1] * m + [d]
        shape[k] = dims[k]
        mean += lam[k] * measures[k].supports.reshape(shape)
    return mean


def barycentric_cost(measures, lambdas=None) -> DenseTensor:
    """Spread around the weighted mean: C_v = sum_k lam_k |x_k(v_k) - A(v)|^2."""
    measures = list(measures)
    m = len(measures)
    dims = tuple(mu.n for mu in measures)
    lam = _weight_vector(lambdas, m)
    mean = barycentric_points(measures, lam)
    cost = np.zeros(dims)
    for k in range(m):
        shape = [1] * m + [measures[k].dim]
        shape[k] = dims[k]
        cost += lam[k] * ((measures[k].supports.reshape(shape) - mean) ** 2).sum(-1)
    return DenseTensor(np.maximum(cost, 0.0), copy=False)


# --- text formats -----------------------------------------------------------
#
# Measure file: line 1 "n d", then n lines "w x1 ... xd".
# Instance manifest: "measure PATH" per measure, "cost pairwise|barycentric|file PATH",
# "s VALUE", optional "lambda l1 ... lm".

def save_measure(mu: DiscreteMeasure, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{mu.n} {mu.dim}\n")
        for w, x in zip(mu.weights, mu.supports):
            fh.write(" ".join([repr(float(w))] + [repr(float(c)) for c in x]) + "\n")


def load_measure(path) -> DiscreteMeasure:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    n, d = (int(tok) for tok in lines[0].split())
    if len(lines) - 1 != n:
        raise ValueError(f"{path}: expected {n} rows, found {len(lines) - 1}")
    rows = [list(map(float, ln.split())) for ln in lines[1:]]
    if any(len(r) != d + 1 for r in rows):
        raise ValueError(f"{path}: rows must have 1 weight and {d} coordinates")
    arr = np.array(rows)
    return DiscreteMeasure(arr[:, 1:], arr[:, 0])


def load_instance(path) -> MpotInstance:
    base = os.path.dirname(os.path.abspath(path))
    measure_paths, cost_spec, s, lambdas = [], None, None, None
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, rest = line.partition(" ")
            rest = rest.strip()
            if key == "measure":
                measure_paths.append(os.path.join(base, rest))
            elif key == "cost":
                cost_spec = rest.split()
            elif key == "s":
                s = float(rest)
            elif key == "lambda":
                lambdas = [float(tok) for tok in rest.split()]
            else:
                raise ValueError(f"{path}: unknown manifest key {key!r}")
    if not measure_paths or cost_spec is None or s is None:
        raise ValueError(f"{path}: manifest needs measure lines, a cost mode, and s")
    measures = pad_to_common_size([load_measure(p) for p in measure_paths])
    mode = cost_spec[0]
    if mode == "pairwise":
        cost = squared_euclidean_cost(measures)
    elif mode == "barycentric":
        cost = barycentric_cost(measures, lambdas)
    elif mode == "file":
        cost = load_tensor(os.path.join(base, cost_spec[1]))
    else:
        raise ValueError(f"{path}: unknown cost mode {mode!r}")
    return MpotInstance(measures, cost, s)
