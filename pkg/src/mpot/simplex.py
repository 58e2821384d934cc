"""Dense two-phase simplex with Bland's anti-cycling rule.

Worst-case slow but dependable at desk scale (a few thousand variables).
Rows may be "<=" or "="; variables are nonnegative. Each solve owns its
tableau, so independent solves can run concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PIVOT_TOL = 1e-10
RC_TOL = 1e-9
FEAS_TOL = 1e-8


@dataclass
class LpStandardForm:
    """min c.x  s.t.  A x (<= or =) b,  x >= 0."""

    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    senses: list

    def __post_init__(self):
        self.A = np.atleast_2d(np.asarray(self.A, dtype=float))
        self.b = np.asarray(self.b, dtype=float).reshape(-1)
        self.c = np.asarray(self.c, dtype=float).reshape(-1)
        rows, cols = self.A.shape
        if len(self.b) != rows or len(self.c) != cols:
            raise ValueError("inconsistent LP dimensions")
        if len(self.senses) != rows:
            raise ValueError("one sense per row required")
        if any(s not in ("<=", "=") for s in self.senses):
            raise ValueError("senses must be '<=' or '='")


@dataclass
class LpSolution:
    x: np.ndarray          # original variables
    objective: float
    status: str            # optimal | infeasible | unbounded
    basis: np.ndarray      # column indices into the slack-augmented system
    x_full: np.ndarray     # original variables followed by slacks
    A_std: np.ndarray      # slack-augmented equality system (for certificates)
    b_std: np.ndarray
    c_std: np.ndarray


def _pivot(T: np.ndarray, row: int, col: int, basis: np.ndarray) -> None:
    T[row] /= T[row, col]
    colvals = T[:, col].copy()
    colvals[row] = 0.0
    T -= np.outer(colvals, T[row])
    basis[row] = col


def _run_simplex(T: np.ndarray, basis: np.ndarray, ncols: int) -> str:
    """Bland's rule on a tableau whose last row holds reduced costs."""
    while True:
        negative = np.flatnonzero(T[-1, :ncols] < -RC_TOL)
        if not len(negative):
            return "optimal"
        entering = int(negative[0])
        col = T[:-1, entering]
        positive = col > PIVOT_TOL
        if not positive.any():
            return "unbounded"
        ratios = np.full(len(col), np.inf)
        ratios[positive] = T[:-1, -1][positive] / col[positive]
        best = ratios.min()
        # Bland tie-break: among minimal ratios pick the smallest basis index.
        candidates = np.flatnonzero(ratios <= best + PIVOT_TOL)
        leave = candidates[np.argmin(basis[candidates])]
        _pivot(T, leave, entering, basis)


def solve_lp(lp: LpStandardForm) -> LpSolution:
    """Two-phase dense simplex. Never reports a wrong optimum: numerical
    trouble surfaces as an exception, infeasibility/unboundedness as status."""
    nrows, nvars = lp.A.shape
    slack_cols = [i for i, s in enumerate(lp.senses) if s == "<="]
    nslack = len(slack_cols)
    A = np.hstack([lp.A, np.zeros((nrows, nslack))])
    for j, i in enumerate(slack_cols):
        A[i, nvars + j] = 1.0
    b = lp.b.copy()
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0
    ntotal = nvars + nslack

    # Phase 1: artificial basis, minimize the artificial mass.
    nart = nrows
    T = np.zeros((nrows + 1, ntotal + nart + 1))
    T[:-1, :ntotal] = A
    T[:-1, ntotal:ntotal + nart] = np.eye(nrows)
    T[:-1, -1] = b
    basis = np.arange(ntotal, ntotal + nart)
    T[-1, :ntotal] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()
    status = _run_simplex(T, basis, ntotal + nart)
    if status != "optimal":  # pragma: no cover - phase 1 is always bounded
        raise RuntimeError(f"phase 1 ended with status {status}")
    if -T[-1, -1] > FEAS_TOL:
        empty = np.zeros(0)
        return LpSolution(np.zeros(nvars), np.nan, "infeasible",
                          basis.copy(), np.zeros(ntotal), A, b, empty)

    # Drive leftover artificial variables out of the basis; drop rows that
    # turn out redundant.
    keep_rows = np.ones(nrows, dtype=bool)
    for i in range(nrows):
        if basis[i] >= ntotal:
            row = T[i, :ntotal]
            pivots = np.flatnonzero(np.abs(row) > PIVOT_TOL)
            if len(pivots):
                _pivot(T, i, int(pivots[0]), basis)
            else:
                keep_rows[i] = False
    rows_idx = np.flatnonzero(keep_rows)
    T = np.vstack([T[rows_idx][:, list(range(ntotal)) + [-1]],
                   np.zeros(ntotal + 1)])
    basis = basis[rows_idx]

    # Phase 2: install the real objective.
    c_std = np.concatenate([lp.c, np.zeros(nslack)])
    T[-1, :ntotal] = c_std
    T[-1, -1] = 0.0
    for i, col in enumerate(basis):
        T[-1] -= c_std[col] * T[i]
    status = _run_simplex(T, basis, ntotal)
    if status == "unbounded":
        empty = np.zeros(0)
        return LpSolution(np.zeros(nvars), -np.inf, "unbounded",
                          basis.copy(), np.zeros(ntotal), A, b, c_std)

    x_full = np.zeros(ntotal)
    x_full[basis] = T[:-1, -1]
    if float(x_full.min()) < -FEAS_TOL:
        raise RuntimeError(f"simplex produced a negative basic value {x_full.min()}")
    x_full = np.maximum(x_full, 0.0)
    x = x_full[:nvars]
    return LpSolution(x, float(lp.c @ x), "optimal", basis.copy(), x_full, A, b, c_std)


def reduced_costs(sol: LpSolution) -> np.ndarray:
    """Recompute reduced costs of the returned basis from first principles."""
    B = sol.A_std[:, sol.basis]
    y = np.linalg.solve(B.T, sol.c_std[sol.basis])
    return sol.c_std - sol.A_std.T @ y
