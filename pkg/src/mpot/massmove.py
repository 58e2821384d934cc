"""Mass shuffles on hyper-rectangles that leave every face sum unchanged.

A hyper-rectangle is spanned by two opposite corners u and v of a tensor's
index grid; its vertices mix the coordinates of u and v, and two vertices are
neighbours when they differ on exactly one active axis. The three procedures
below move mass between the corners and their neighbours in patterns whose
gains and losses cancel on every axis-aligned face, so all tensor marginals
restricted to the rectangle's slices are preserved.

They exist as executable checks and as a stress harness for the marginal
code, not as an optimization method. Procedures mutate a copy by default;
pass ``inplace=True`` to edit the caller's tensor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .tensors import DenseTensor


@dataclass(frozen=True)
class HyperRectangle:
    """Opposite corners u, v (1-based multi-indices) with k >= 1 differing axes."""

    u: tuple
    v: tuple

    def __post_init__(self):
        u = tuple(int(i) for i in self.u)
        v = tuple(int(i) for i in self.v)
        if len(u) != len(v):
            raise ValueError("corners must have the same number of coordinates")
        if not any(a != b for a, b in zip(u, v)):
            raise ValueError("corners must differ on at least one axis")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def active_axes(self) -> tuple[int, ...]:
        """1-based axes where the corners differ, ascending."""
        return tuple(i + 1 for i, (a, b) in enumerate(zip(self.u, self.v)) if a != b)

    @property
    def k(self) -> int:
        return len(self.active_axes)

    def vertices(self) -> list[tuple[int, ...]]:
        """All coordinate mixtures of the two corners (2^k vertices)."""
        choices = [(a,) if a == b else (a, b) for a, b in zip(self.u, self.v)]
        return list(itertools.product(*choices))

    def neighbours(self, corner) -> list[tuple[int, ...]]:
        """Vertices one active-axis flip away from ``corner``, lowest axis first."""
        corner = tuple(corner)
        out = []
        for axis in self.active_axes:
            i = axis - 1
            flipped = self.v[i] if corner[i] == self.u[i] else self.u[i]
            out.append(corner[:i] + (flipped,) + corner[i + 1:])
        return out

    def face(self, axis: int, coordinate: int) -> list[tuple[int, ...]]:
        """Rectangle vertices whose ``axis`` coordinate equals ``coordinate``."""
        return [w for w in self.vertices() if w[axis - 1] == coordinate]


def _prepare(x: DenseTensor, rect: HyperRectangle, inplace: bool) -> DenseTensor:
    if len(rect.u) != x.ndim:
        raise ValueError(f"rectangle has {len(rect.u)} coordinates for a {x.ndim}-way tensor")
    for idx in (rect.u, rect.v):
        for axis, coord in enumerate(idx):
            if not 1 <= coord <= x.shape[axis]:
                raise ValueError(f"corner {idx} leaves the tensor shape {x.shape}")
    return x if inplace else x.copy()


def _check_eps(eps: float, available: float, what: str) -> None:
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    if eps > available + 1e-12:
        raise ValueError(f"eps={eps} exceeds available mass {available} at {what}")


def procedure_a(x: DenseTensor, rect: HyperRectangle, axis_b: int, eps: float,
                inplace: bool = False) -> DenseTensor:
    """Shift eps/2 from each corner along a pair of parallel edges.

    ``axis_b`` picks the shared edge direction: u moves towards v on that
    axis and v moves towards u. Preserves every marginal of the tensor.
    """
    if axis_b not in rect.active_axes:
        raise ValueError(f"axis {axis_b} is not active for this rectangle")
    out = _prepare(x, rect, inplace)
    _check_eps(eps, min(out.get(rect.u), out.get(rect.v)), "the corners")
    if eps == 0:
        return out
    i = axis_b - 1
    u_t = rect.u[:i] + (rect.v[i],) + rect.u[i + 1:]
    v_t = rect.v[:i] + (rect.u[i],) + rect.v[i + 1:]
    out.add(rect.u, -eps / 2)
    out.add(u_t, +eps / 2)
    out.add(rect.v, -eps / 2)
    out.add(v_t, +eps / 2)
    return out


def procedure_b(x: DenseTensor, rect: HyperRectangle, eps: float,
                inplace: bool = False) -> DenseTensor:
    """Spread eps from each corner evenly over its k neighbours.

    Each corner loses eps; each of the 2k neighbouring vertices gains eps/k.
    Preserves every marginal of the tensor.
    """
    out = _prepare(x, rect, inplace)
    _check_eps(eps, min(out.get(rect.u), out.get(rect.v)), "the corners")
    if eps == 0:
        return out
    k = rect.k
    for corner in (rect.u, rect.v):
        out.add(corner, -eps)
        for nb in rect.neighbours(corner):
            out.add(nb, eps / k)
    return out


def procedure_c(x: DenseTensor, rect: HyperRectangle, eps: float,
                inplace: bool = False) -> DenseTensor:
    """Drain one corner pair: v loses eps, u loses eps/(k-1), v's neighbours gain.

    Each of the k neighbours of v receives eps/(k-1). Requires k >= 2. The
    gains and losses cancel on every face of the rectangle, so all face sums
    (hence all tensor marginals restricted to the rectangle's slices) are
    preserved.
    """
    out = _prepare(x, rect, inplace)
    k = rect.k
    if k < 2:
        raise ValueError("corner-pair drain needs at least two active axes")
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    _check_eps(eps, out.get(rect.v), "corner v")
    _check_eps(eps / (k - 1), out.get(rect.u), "corner u")
    if eps == 0:
        return out
    out.add(rect.v, -eps)
    out.add(rect.u, -eps / (k - 1))
    for nb in rect.neighbours(rect.v):
        out.add(nb, eps / (k - 1))
    return out
