"""Dense m-way mass and cost tensors.

Provides marginal sums, total mass, inner products, enumeration of the
dummy-extended index layers, and a line-oriented text serialization used by
the CLI for plan dumps. Axes and multi-indices are 1-based in the public API
(the dummy slot of an extended axis of length n+1 is index n+1); everything
is converted to 0-based numpy indexing internally.

All operations are pure; distinct tensors can be processed concurrently
without shared state.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

# Dense storage budget, roughly 10^6 cells (16 MB of float64 at the cap).
MAX_CELLS = 2_000_000


class CapacityError(ValueError):
    """Requested tensor exceeds the dense-storage cell budget."""


def check_dims(dims) -> tuple[int, ...]:
    """Validate an index-hypercube shape: >= 2 axes, positive lengths, within budget."""
    dims = tuple(int(d) for d in dims)
    if len(dims) < 2:
        raise ValueError(f"need at least 2 axes, got shape {dims}")
    if any(d < 1 for d in dims):
        raise ValueError(f"axis lengths must be positive, got {dims}")
    cells = 1
    for d in dims:
        cells *= d
        if cells > MAX_CELLS:
            raise CapacityError(
                f"shape {dims} has more than {MAX_CELLS} cells; "
                "dense storage is capped at desk scale"
            )
    return dims


class DenseTensor:
    """A dense float64 array over a small index hypercube.

    Thin wrapper that validates shape and signs once at construction. The
    underlying array is exposed as ``.a`` for numpy work; treat tensors as
    immutable unless you own them (the mass-moving procedures mutate copies
    by default).
    """

    __slots__ = ("a",)

    def __init__(self, values, copy: bool = True, check_negative: bool = True):
        a = np.array(values, dtype=float, copy=copy)
        check_dims(a.shape)
        if check_negative and a.size and float(a.min()) < 0.0:
            raise ValueError("tensor entries must be nonnegative")
        self.a = a

    @classmethod
    def zeros(cls, dims) -> "DenseTensor":
        return cls(np.zeros(check_dims(dims)), copy=False, check_negative=False)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.a.shape

    @property
    def ndim(self) -> int:
        return self.a.ndim

    def copy(self) -> "DenseTensor":
        return DenseTensor(self.a, copy=True, check_negative=False)

    # 1-based element access, used by the mass-moving procedures.
    def get(self, index) -> float:
        return float(self.a[_to_zero_based(index)])

    def set(self, index, value) -> None:
        self.a[_to_zero_based(index)] = value

    def add(self, index, delta) -> None:
        self.a[_to_zero_based(index)] += delta

    def marginal(self, axis: int) -> np.ndarray:
        return marginal(self, axis)

    def total_mass(self) -> float:
        return total_mass(self)

    def __repr__(self) -> str:  # pragma: no cover
        return f"DenseTensor(shape={self.shape}, mass={self.total_mass():.6g})"


def _to_zero_based(index) -> tuple[int, ...]:
    return tuple(int(i) - 1 for i in index)


def as_array(x) -> np.ndarray:
    """Accept a DenseTensor or any array-like and return the ndarray view."""
    if isinstance(x, DenseTensor):
        return x.a
    return np.asarray(x, dtype=float)


def marginal(x, axis: int) -> np.ndarray:
    """Sum ``x`` over every axis except ``axis`` (1-based).

    Entry j of the result is the total mass of all cells whose ``axis``-th
    coordinate equals j+1; the vector sums to the total mass of ``x``.
    """
    a = as_array(x)
    if not 1 <= axis <= a.ndim:
        raise ValueError(f"axis {axis} out of range for {a.ndim} axes")
    others = tuple(i for i in range(a.ndim) if i != axis - 1)
    return a.sum(axis=others)


def total_mass(x) -> float:
    return float(as_array(x).sum())


def inner_product(cost, plan) -> float:
    """Entrywise dot product of two identically shaped tensors."""
    c, p = as_array(cost), as_array(plan)
    if c.shape != p.shape:
        raise ValueError(f"shape mismatch: {c.shape} vs {p.shape}")
    return float(np.vdot(c, p))


def sublayer_indices(n: int, m: int, axes=()) -> list[tuple[int, ...]]:
    """Indices of [n+1]^m whose coordinate is the dummy slot n+1 exactly on ``axes``.

    ``axes`` is a set of 1-based axis positions; the empty set gives the
    original [n]^m grid. The sublayers over all subsets partition [n+1]^m.
    """
    axes = frozenset(int(a) for a in axes)
    if not axes <= set(range(1, m + 1)):
        raise ValueError(f"axes {sorted(axes)} not within 1..{m}")
    ranges = [(n + 1,) if k in axes else tuple(range(1, n + 1)) for k in range(1, m + 1)]
    return list(itertools.product(*ranges))


def layer_size(n: int, m: int, k: int) -> int:
    """Number of indices of [n+1]^m with exactly k coordinates at the dummy slot."""
    return math.comb(m, k) * n ** (m - k)


def dummy_count_grid(n: int, m: int) -> np.ndarray:
    """Array over [n+1]^m counting how many coordinates sit at the dummy slot."""
    check_dims((n + 1,) * m)
    grid = np.zeros((n + 1,) * m, dtype=np.int8)
    hit = (np.arange(n + 1) == n).astype(np.int8)
    for ax in range(m):
        shape = [1] * m
        shape[ax] = n + 1
        grid = grid + hit.reshape(shape)
    return grid


# --- text serialization ----------------------------------------------------
#
# Line 1: "shape d1 d2 ... dm", then one value per line in row-major order.

def dump_tensor(x) -> str:
    a = as_array(x)
    lines = ["shape " + " ".join(str(d) for d in a.shape)]
    lines.extend(repr(float(v)) for v in a.ravel())
    return "\n".join(lines) + "\n"


def parse_tensor(text: str) -> DenseTensor:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("shape"):
        raise ValueError("tensor text must start with a 'shape d1 ... dm' line")
    dims = check_dims(int(tok) for tok in lines[0].split()[1:])
    size = math.prod(dims)
    if len(lines) - 1 != size:
        raise ValueError(f"expected {size} values for shape {dims}, got {len(lines) - 1}")
    values = np.array([float(v) for v in lines[1:]]).reshape(dims)
    return DenseTensor(values, copy=False, check_negative=False)


def save_tensor(x, path) -> None:
    with open(path, "w") as fh:
        fh.write(dump_tensor(x))


def load_tensor(path) -> DenseTensor:
    with open(path) as fh:
        return parse_tensor(fh.read())
