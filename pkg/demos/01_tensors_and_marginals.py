"""Tensors, marginals, and the dummy-extended index layers.

Plans and costs are small dense m-way tensors. This walk-through builds one,
reads off its marginals, and enumerates the index layers that appear once
each axis gains a dummy slot.
"""

import numpy as np

from mpot import (DenseTensor, dump_tensor, inner_product, layer_size,
                  marginal, parse_tensor, sublayer_indices, total_mass)

# A three-way plan over a 2x2x2 grid: mass 0.3 at (1,1,1), 0.7 at (2,1,2).
plan = DenseTensor.zeros((2, 2, 2))
plan.set((1, 1, 1), 0.3)
plan.set((2, 1, 2), 0.7)

print("total mass:", total_mass(plan))
for axis in (1, 2, 3):
    print(f"marginal along axis {axis}:", marginal(plan, axis))

# The transport objective is just an entrywise dot product with a cost tensor.
cost = DenseTensor(np.arange(8, dtype=float).reshape(2, 2, 2))
print("objective <C, X>:", inner_product(cost, plan))

# Extending each axis with a dummy slot (index n+1) tiles the bigger grid
# into layers: the set of axes sitting at the dummy slot identifies a
# sublayer, and layer k collects all sublayers with k dummy coordinates.
n, m = 2, 3
print("\nsublayer with axes {1,2} at the dummy slot:", sublayer_indices(n, m, {1, 2}))
for k in range(m + 1):
    print(f"layer {k} holds {layer_size(n, m, k)} indices")

# Tensors serialize to a simple line format, handy for CLI plan dumps.
text = dump_tensor(plan)
print("\nserialized header:", text.splitlines()[0])
round_tripped = parse_tensor(text)
print("round trip intact:", np.array_equal(round_tripped.a, plan.a))
