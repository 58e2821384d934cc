"""Entropic multimarginal transport solver and the extend/solve/crop pipeline.

The balanced solver keeps everything in the log domain: the iterate is
``X(beta)_v = exp(sum_k beta[k][v_k] - C_v / eta)`` and each axis update adds
``log(target) - log(current marginal)`` to that axis's potential, which makes
the axis marginal match exactly. Marginalization uses shifted log-sum-exp, so
small eta does not underflow.

``approx_mpot`` runs the full approximate pipeline for a partial instance:
extend the cost and marginals with one dummy slot per axis, solve the
balanced extended problem, repair the marginals exactly by rounding, then
crop the dummy coordinates. The cropped plan's marginals are dominated by the
measure weights by construction.

One solver call is single-threaded; distinct solves share no state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .extension import crop, extend
from .measures import MpotInstance
from .tensors import DenseTensor, as_array, inner_product

#: Positivity floor for zero marginal entries (legal at the boundary of the
#: form-1 condition): keeps log-domain potentials finite while placing only
#: negligible mass on the affected slices.
MARGINAL_FLOOR = 1e-300


@dataclass
class SinkhornConfig:
    """Solver knobs.

    Either set ``eta`` directly or set ``target_eps`` and let the solver pick
    ``eta = eps / (2 m log(n+1))`` and a stopping tolerance
    ``eps / (8 max cost)``; explicit values always win. ``max_iters`` counts
    full update sweeps for the cyclic rule and single axis updates for the
    greedy rule. ``eta_schedule`` warm-starts from a large eta and halves down
    to the target, which is much faster when eta is far below the cost scale.
    """

    eta: float | None = None
    tol: float | None = None
    max_iters: int = 10000
    update_rule: str = "cyclic"
    target_eps: float | None = None
    eta_schedule: bool = False
    record_trace: bool = True

    def __post_init__(self):
        if self.eta is not None and self.eta <= 0:
            raise ValueError("eta must be positive")
        if self.tol is not None and self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.update_rule not in ("cyclic", "greedy"):
            raise ValueError(f"unknown update rule {self.update_rule!r}")

    def resolve(self, cost_max: float, m: int, n: int) -> tuple[float, float]:
        eta = self.eta
        tol = self.tol
        if eta is None:
            if self.target_eps is not None:
                eta = self.target_eps / (2.0 * m * math.log(n + 1))
            else:
                eta = 0.1
        if tol is None:
            if self.target_eps is not None:
                tol = self.target_eps / (8.0 * max(cost_max, 1e-30))
            else:
                tol = 1e-9
        return float(eta), float(tol)


@dataclass
class DualPotentials:
    """Per-axis log-domain potentials of the balanced solver."""

    beta: list

    def copy(self) -> "DualPotentials":
        return DualPotentials([b.copy() for b in self.beta])


class TraceRow(NamedTuple):
    iteration: int
    marginal_err_l1: float
    reg_objective: float
    objective: float


@dataclass
class SinkhornOutcome:
    plan: DenseTensor
    cropped: DenseTensor | None
    iterations: int
    converged: bool
    trace: list
    objective: float
    potentials: DualPotentials
    marginal_error: float
    form: int | None = None
    extension: object = None
    instance_objective: float | None = None


def gibbs_plan(cost, potentials: DualPotentials, eta: float) -> DenseTensor:
    """The strictly positive plan exp(sum_k beta[k][v_k] - C_v / eta)."""
    c = as_array(cost)
    log_plan = -c / eta
    for axis, b in enumerate(potentials.beta):
        b = np.asarray(b, dtype=float)
        if len(b) != c.shape[axis]:
            raise ValueError(f"potential {axis + 1} has length {len(b)}, "
                             f"axis needs {c.shape[axis]}")
        shape = [1] * c.ndim
        shape[axis] = len(b)
        log_plan = log_plan + b.reshape(shape)
    return DenseTensor(np.exp(log_plan), copy=False, check_negative=False)


def _log_marginal(log_plan: np.ndarray, axis: int) -> np.ndarray:
    others = tuple(i for i in range(log_plan.ndim) if i != axis)
    shift = log_plan.max(axis=others, keepdims=True)
    summed = np.exp(log_plan - shift).sum(axis=others)
    return np.log(summed) + shift.reshape(-1)


def _entropy(plan: np.ndarray) -> float:
    positive = plan[plan > 0]
    return float(positive.sum() - (positive * np.log(positive)).sum())


def sinkhorn_mot(cost, marginals, cfg: SinkhornConfig | None = None) -> SinkhornOutcome:
    """Balanced multimarginal solver; returns the raw (unrounded) plan.

    Marginals must be nonnegative with equal totals. Stops when the summed
    l1 marginal error drops below the tolerance or the iteration budget runs
    out (the outcome is then flagged unconverged).
    """
    cfg = cfg or SinkhornConfig()
    c = as_array(cost)
    m = c.ndim
    targets = [np.asarray(r, dtype=float).reshape(-1) for r in marginals]
    if len(targets) != m:
        raise ValueError(f"{len(targets)} marginals for {m} axes")
    for axis, r in enumerate(targets):
        if len(r) != c.shape[axis]:
            raise ValueError(f"marginal {axis + 1} has length {len(r)}, "
                             f"axis needs {c.shape[axis]}")
        if r.min() < 0:
            raise ValueError("marginals must be nonnegative")
    totals = np.array([r.sum() for r in targets])
    if np.ptp(totals) > 1e-9 * max(1.0, float(totals.max())):
        raise ValueError(f"marginals are unbalanced: totals {totals}")

    cost_max = float(np.abs(c).max())
    eta, tol = cfg.resolve(cost_max, m, max(c.shape) - 1)
    log_targets = [np.log(np.maximum(r, MARGINAL_FLOOR)) for r in targets]

    if cfg.eta_schedule and cost_max > 4.0 * eta:
        stages = []
        e = cost_max / 4.0
        while e > 2.0 * eta:
            stages.append(e)
            e /= 2.0
        stages.append(eta)
    else:
        stages = [eta]

    beta = [np.zeros(c.shape[axis]) for axis in range(m)]
    trace: list[TraceRow] = []
    iterations = 0
    converged = False
    err = np.inf
    total = float(totals.max())
    for stage_idx, stage_eta in enumerate(stages):
        final = stage_idx == len(stages) - 1
        stage_tol = tol if final else max(tol, 1e-3 * max(total, 1.0))
        log_plan = -c / stage_eta
        for axis in range(m):
            shape = [1] * m
            shape[axis] = c.shape[axis]
            log_plan += beta[axis].reshape(shape)
        while iterations < cfg.max_iters:
            iterations += 1
            if cfg.update_rule == "cyclic":
                for axis in range(m):
                    delta = log_targets[axis] - _log_marginal(log_plan, axis)
                    beta[axis] += delta
                    shape = [1] * m
                    shape[axis] = c.shape[axis]
                    log_plan += delta.reshape(shape)
                current = [np.exp(_log_marginal(log_plan, axis)) for axis in range(m)]
                err = float(sum(np.abs(cur - tgt).sum()
                                for cur, tgt in zip(current, targets)))
            else:
                current = [np.exp(_log_marginal(log_plan, axis)) for axis in range(m)]
                errs = [float(np.abs(cur - tgt).sum())
                        for cur, tgt in zip(current, targets)]
                err = float(sum(errs))
                if err <= stage_tol:
                    break
                axis = int(np.argmax(errs))
                delta = log_targets[axis] - np.log(np.maximum(current[axis], MARGINAL_FLOOR))
                beta[axis] += delta
                shape = [1] * m
                shape[axis] = c.shape[axis]
                log_plan += delta.reshape(shape)
            if cfg.record_trace and final:
                plan_now = np.exp(log_plan)
                linear = float(np.vdot(c, plan_now))
                trace.append(TraceRow(iterations, err,
                                      linear - stage_eta * _entropy(plan_now), linear))
            if err <= stage_tol:
                break
        if final and err <= stage_tol:
            converged = True

    plan_arr = np.exp(log_plan)
    plan = DenseTensor(plan_arr, copy=False, check_negative=False)
    return SinkhornOutcome(
        plan=plan,
        cropped=None,
        iterations=iterations,
        converged=converged,
        trace=trace,
        objective=float(np.vdot(c, plan_arr)),
        potentials=DualPotentials(beta),
        marginal_error=err,
    )


def _scale_axis(plan: np.ndarray, axis: int, factors: np.ndarray) -> None:
    shape = [1] * plan.ndim
    shape[axis] = len(factors)
    plan *= factors.reshape(shape)


def _marginals(plan: np.ndarray) -> list[np.ndarray]:
    return [plan.sum(axis=tuple(i for i in range(plan.ndim) if i != k))
            for k in range(plan.ndim)]


def _enforce_domination(plan: np.ndarray, bounds, max_rounds: int = 8) -> None:
    """Scale axis slices down until no marginal exceeds its bound, exactly.

    Down-scaling one axis never lifts another, so the loop converges; late
    rounds deflate slightly below the ratio to beat float rounding. In-place.
    """
    for round_idx in range(max_rounds):
        dirty = False
        for axis, bound in enumerate(bounds):
            current = plan.sum(axis=tuple(i for i in range(plan.ndim) if i != axis))
            over = current > bound
            if not over.any():
                continue
            dirty = True
            factors = np.ones_like(current)
            safe = current > 0
            factors[over & safe] = bound[over & safe] / current[over & safe]
            if round_idx >= 2:
                factors[over & safe] *= 1.0 - 1e-15 * (round_idx - 1)
            _scale_axis(plan, axis, factors)
        if not dirty:
            return
    raise RuntimeError("could not enforce marginal domination exactly")


def round_to_polytope(plan, marginals) -> DenseTensor:
    """Repair a positive plan so its marginals equal the targets (to ~1e-12).

    Scale-then-patch: scale each axis down wherever its marginal exceeds the
    target, then add the product tensor of the per-axis deficits. The result
    moves away from the input by at most the order of the initial l1 marginal
    violation.
    """
    a = as_array(plan).copy()
    targets = [np.asarray(r, dtype=float).reshape(-1) for r in marginals]
    for axis, r in enumerate(targets):
        if len(r) != a.shape[axis]:
            raise ValueError(f"marginal {axis + 1} has length {len(r)}, "
                             f"axis needs {a.shape[axis]}")
    _enforce_domination(a, targets)
    deficits = [r - cur for r, cur in zip(targets, _marginals(a))]
    deficits = [np.maximum(d, 0.0) for d in deficits]
    gaps = np.array([d.sum() for d in deficits])
    smallest = float(gaps.min())
    if smallest > 0.0:
        patch = np.array(smallest)
        for d, g in zip(deficits, gaps):
            patch = np.multiply.outer(patch, d / g)
        a += patch
    _enforce_domination(a, targets)
    return DenseTensor(a, copy=False, check_negative=False)


def approx_mpot(inst: MpotInstance, form="auto", cfg: SinkhornConfig | None = None) -> SinkhornOutcome:
    """Approximate partial transport: extend, solve balanced, round, crop.

    The returned ``cropped`` plan has marginals dominated by the measure
    weights exactly (the rounding step leaves every extended marginal equal
    to its target and cropping only removes mass); ``objective`` is its cost
    under the original tensor. The total cropped mass approaches s as eta
    shrinks but is reported, not enforced.
    """
    cfg = cfg or SinkhornConfig()
    ext = extend(inst, form)
    result = sinkhorn_mot(ext.cost, ext.marginals, cfg)
    rounded = round_to_polytope(result.plan, ext.marginals)
    cropped = crop(rounded)
    _enforce_domination(cropped.a, [mu.weights for mu in inst.measures])
    result.plan = rounded
    result.cropped = cropped
    result.form = ext.form
    result.extension = ext
    result.instance_objective = inner_product(inst.cost, cropped)
    result.objective = result.instance_objective
    return result
