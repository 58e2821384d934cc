"""Exact desk-scale solutions of partial and balanced multimarginal transport.

Both problems are flattened into dense LPs and handed to the in-house
simplex. Sizes are capped: the flattened plan may not exceed ORACLE_CAP
variables. These solvers are the ground truth against which the extensions
and the entropic solver are verified.
"""

from __future__ import annotations

import math

import numpy as np

from .measures import MpotInstance
from .simplex import LpStandardForm, solve_lp
from .tensors import DenseTensor, as_array

ORACLE_CAP = 4096


def _axis_coordinate_rows(dims) -> list[np.ndarray]:
    """For each axis, the coordinate of every flattened cell (row-major)."""
    size = math.prod(dims)
    coords = np.unravel_index(np.arange(size), dims)
    return [c for c in coords]


def _check_cap(size: int, cap: int) -> None:
    if size > cap:
        raise ValueError(f"LP with {size} variables exceeds the oracle cap {cap}")


def mpot_lp(inst: MpotInstance) -> LpStandardForm:
    """Flatten a partial-transport instance: nm '<=' marginal rows, one '=' mass row."""
    dims = inst.cost.shape
    size = math.prod(dims)
    coords = _axis_coordinate_rows(dims)
    rows, rhs, senses = [], [], []
    for k in range(inst.m):
        for j in range(dims[k]):
            rows.append((coords[k] == j).astype(float))
            rhs.append(inst.measures[k].weights[j])
            senses.append("<=")
    rows.append(np.ones(size))
    rhs.append(inst.s)
    senses.append("=")
    return LpStandardForm(np.vstack(rows), np.array(rhs), inst.cost.a.ravel(), senses)


def solve_mpot_exact(inst: MpotInstance, cap: int = ORACLE_CAP):
    """Optimal partial plan and objective via the LP oracle."""
    size = math.prod(inst.cost.shape)
    _check_cap(size, cap)
    sol = solve_lp(mpot_lp(inst))
    if sol.status != "optimal":
        raise RuntimeError(f"partial-transport LP ended {sol.status} for a valid instance")
    plan = DenseTensor(sol.x.reshape(inst.cost.shape), copy=False, check_negative=False)
    return plan, sol.objective


def mot_lp(cost, marginals) -> LpStandardForm:
    """Flatten a balanced problem: equality marginal rows for every axis."""
    a = as_array(cost)
    dims = a.shape
    marginals = [np.asarray(r, dtype=float).reshape(-1) for r in marginals]
    if len(marginals) != a.ndim:
        raise ValueError(f"{len(marginals)} marginals for {a.ndim} axes")
    for k, r in enumerate(marginals):
        if len(r) != dims[k]:
            raise ValueError(f"marginal {k + 1} has length {len(r)}, axis needs {dims[k]}")
    totals = np.array([r.sum() for r in marginals])
    if np.ptp(totals) > 1e-9 * max(1.0, totals.max()):
        raise ValueError(f"marginals are unbalanced: totals {totals}")
    size = math.prod(dims)
    coords = _axis_coordinate_rows(dims)
    rows, rhs = [], []
    for k in range(a.ndim):
        for j in range(dims[k]):
            rows.append((coords[k] == j).astype(float))
            rhs.append(marginals[k][j])
    senses = ["="] * len(rows)
    return LpStandardForm(np.vstack(rows), np.array(rhs), a.ravel(), senses)


def solve_mot_exact(cost, marginals, cap: int = ORACLE_CAP):
    """Optimal balanced plan and objective via the LP oracle."""
    a = as_array(cost)
    _check_cap(math.prod(a.shape), cap)
    sol = solve_lp(mot_lp(cost, marginals))
    if sol.status != "optimal":
        raise RuntimeError(f"balanced-transport LP ended {sol.status}")
    plan = DenseTensor(sol.x.reshape(a.shape), copy=False, check_negative=False)
    return plan, sol.objective


def mpot_monotone_check(inst: MpotInstance, s_list, cap: int = ORACLE_CAP) -> list[float]:
    """Exact objectives for an increasing list of transported masses.

    With nonnegative costs these are non-decreasing in s: trimming mass from
    an optimal larger-s plan stays feasible for any smaller s.
    """
    s_list = [float(s) for s in s_list]
    if any(b < a for a, b in zip(s_list, s_list[1:])):
        raise ValueError("s values must be non-decreasing")
    out = []
    for s in s_list:
        variant = MpotInstance(inst.measures, inst.cost, s)
        out.append(solve_mpot_exact(variant, cap)[1])
    return out
