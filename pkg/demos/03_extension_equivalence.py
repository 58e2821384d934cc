"""The two dummy-point extensions and their exact equivalence.

Appending one dummy slot per axis and charging layer-constant costs turns
the inequality-constrained partial problem into a balanced equality one.
Form 1 (costs increasing from zero) needs the measure masses to be close;
form 2 (a concave cost profile anchored at the max ground cost) works
unconditionally. Either way: same optimal value, and cropping the balanced
optimum recovers a partial optimum.
"""

import numpy as np

from mpot import (DenseTensor, DiscreteMeasure, MpotInstance,
                  check_form1_condition, crop, expand_plan_form2, extend,
                  inner_product, marginal, solve_mot_exact, solve_mpot_exact)

rng = np.random.default_rng(11)


def make_instance(masses, s):
    measures = []
    for mass in masses:
        w = rng.random(3) + 0.2
        measures.append(DiscreteMeasure(rng.random((3, 2)), w / w.sum() * mass))
    return MpotInstance(measures, DenseTensor(rng.random((3, 3, 3))), s)


for masses, s in (((1.0, 1.0, 1.0), 0.7), ((1.0, 1.0, 2.5), 0.5)):
    inst = make_instance(masses, s)
    cond = check_form1_condition(inst)
    print(f"\nmasses {masses}, s={s}: mass-closeness slacks {np.round(cond.slacks, 3)}")

    _, partial_opt = solve_mpot_exact(inst)
    ext = extend(inst, form="auto")
    print(f"auto picked form {ext.form}")

    balanced_plan, balanced_opt = solve_mot_exact(ext.cost, ext.marginals)
    print(f"partial optimum {partial_opt:.9f} | balanced optimum {balanced_opt:.9f}")

    cropped = crop(balanced_plan)
    print(f"cropped mass {cropped.total_mass():.9f} (target {inst.s})",
          f"| cropped objective {inner_product(inst.cost, cropped):.9f}")

# The reverse direction is constructive: any feasible partial plan expands to
# a balanced plan of the extension with the same objective.
inst = make_instance((1.0, 1.0, 2.5), 0.5)
plan, opt = solve_mpot_exact(inst)
ext = extend(inst, form=2)
lifted = expand_plan_form2(plan, inst)
worst = max(float(np.abs(marginal(lifted, k + 1) - ext.marginals[k]).max())
            for k in range(inst.m))
print("\nexpansion: worst marginal error", worst,
      "| objective match", abs(inner_product(ext.cost, lifted) - opt) < 1e-12)
