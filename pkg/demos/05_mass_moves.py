"""Marginal-preserving mass moves on hyper-rectangles.

These are the elementary plan edits behind the equivalence arguments: they
shift mass between the corners of a hyper-rectangle and their neighbours in
patterns that cancel on every axis-aligned face. Run them on random tensors
and watch the marginals stay put.
"""

import numpy as np

from mpot import (DenseTensor, HyperRectangle, marginal, procedure_a,
                  procedure_b, procedure_c)

rng = np.random.default_rng(3)
x = DenseTensor(rng.random((3, 3, 3)) + 0.05)
rect = HyperRectangle((1, 1, 1), (3, 2, 3))
print("rectangle corners:", rect.u, rect.v, "| active axes:", rect.active_axes)

before = [marginal(x, k) for k in (1, 2, 3)]

moved = procedure_a(x, rect, axis_b=1, eps=0.04)
moved = procedure_b(moved, rect, eps=0.03)
moved = procedure_c(moved, rect, eps=0.02)

after = [marginal(moved, k) for k in (1, 2, 3)]
for k, (b, a) in enumerate(zip(before, after), start=1):
    print(f"axis {k}: max marginal drift {np.abs(a - b).max():.2e}")

print("plan changed:", not np.array_equal(moved.a, x.a))
print("no negative mass:", moved.a.min() >= 0.0)

# Face sums of the rectangle itself are preserved too (this is the precise
# statement for the corner-pair drain).
for axis in rect.active_axes:
    for coord in (rect.u[axis - 1], rect.v[axis - 1]):
        s_before = sum(x.get(w) for w in rect.face(axis, coord))
        s_after = sum(moved.get(w) for w in rect.face(axis, coord))
        print(f"face (axis {axis}, coord {coord}): {s_before:.6f} -> {s_after:.6f}")
