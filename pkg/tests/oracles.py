"""Independent brute-force oracles used only by the tests.

These deliberately avoid the library's simplex and entropic code paths so
they can certify them: LPs are solved by enumerating basic solutions, and
the two-marginal entropic solver is a straight transcription of the
classical matrix iteration.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def enumerate_lp_optimum(A, b, c, senses):
    """Solve min c.x, A x (<=|=) b, x >= 0 by enumerating basis submatrices.

    Returns (objective, x) or (None, None) when no feasible basic solution
    exists. Exponential; keep the variable count tiny.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).reshape(-1)
    c = np.asarray(c, dtype=float).reshape(-1)
    rows, nvars = A.shape
    slack_cols = [i for i, s in enumerate(senses) if s == "<="]
    Astd = np.hstack([A, np.zeros((rows, len(slack_cols)))])
    for j, i in enumerate(slack_cols):
        Astd[i, nvars + j] = 1.0
    ntotal = Astd.shape[1]
    cstd = np.concatenate([c, np.zeros(len(slack_cols))])

    best_obj, best_x = None, None
    for cols in itertools.combinations(range(ntotal), rows):
        B = Astd[:, cols]
        if abs(np.linalg.det(B)) < 1e-12:
            continue
        xb = np.linalg.solve(B, b)
        if xb.min() < -1e-9:
            continue
        x = np.zeros(ntotal)
        x[list(cols)] = np.maximum(xb, 0.0)
        obj = float(cstd @ x)
        if best_obj is None or obj < best_obj - 1e-15:
            best_obj, best_x = obj, x[:nvars]
    return best_obj, best_x


def pot_optimum_bruteforce(a, b, cost, s):
    """Two-marginal partial transport optimum by basis enumeration."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    cost = np.asarray(cost, dtype=float)
    na, nb = cost.shape
    rows, rhs, senses = [], [], []
    for i in range(na):
        r = np.zeros(na * nb)
        r[i * nb:(i + 1) * nb] = 1.0
        rows.append(r)
        rhs.append(a[i])
        senses.append("<=")
    for j in range(nb):
        r = np.zeros(na * nb)
        r[j::nb] = 1.0
        rows.append(r)
        rhs.append(b[j])
        senses.append("<=")
    rows.append(np.ones(na * nb))
    rhs.append(s)
    senses.append("=")
    obj, _ = enumerate_lp_optimum(np.vstack(rows), rhs, cost.ravel(), senses)
    return obj


def mpot_optimum_bruteforce(weights, cost, s):
    """Multimarginal partial transport optimum by basis enumeration (tiny n, m)."""
    cost = np.asarray(cost, dtype=float)
    dims = cost.shape
    size = math.prod(dims)
    coords = np.unravel_index(np.arange(size), dims)
    rows, rhs, senses = [], [], []
    for k, w in enumerate(weights):
        for j in range(dims[k]):
            rows.append((coords[k] == j).astype(float))
            rhs.append(w[j])
            senses.append("<=")
    rows.append(np.ones(size))
    rhs.append(s)
    senses.append("=")
    obj, _ = enumerate_lp_optimum(np.vstack(rows), rhs, cost.ravel(), senses)
    return obj


def two_marginal_sinkhorn_log(a, b, cost, eta, iters):
    """Classical alternating log-domain iteration for the balanced problem."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    cost = np.asarray(cost, dtype=float)
    f = np.zeros(len(a))
    g = np.zeros(len(b))
    log_a, log_b = np.log(a), np.log(b)
    for _ in range(iters):
        # row balancing then column balancing
        mat = (f[:, None] + g[None, :]) - cost / eta
        f += log_a - _lse_rows(mat)
        mat = (f[:, None] + g[None, :]) - cost / eta
        g += log_b - _lse_cols(mat)
    return np.exp((f[:, None] + g[None, :]) - cost / eta)


def _lse_rows(mat):
    mx = mat.max(axis=1)
    return np.log(np.exp(mat - mx[:, None]).sum(axis=1)) + mx


def _lse_cols(mat):
    mx = mat.max(axis=0)
    return np.log(np.exp(mat - mx[None, :]).sum(axis=0)) + mx
