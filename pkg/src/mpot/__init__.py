"""Multimarginal partial optimal transport at desk scale.

Exact LP solutions, two dummy-point extensions to the balanced problem, an
entropic extend/solve/crop pipeline, marginal-preserving mass moves, and the
experiment reproductions built on top of them.
"""

from .exact import (ORACLE_CAP, mot_lp, mpot_lp, mpot_monotone_check,
                    solve_mot_exact, solve_mpot_exact)
from .extension import (ExtensionResult, Form1Condition, Form1Spec, Form2Spec,
                        build_form2_costs, check_form1_condition, crop, extend,
                        extend_form1, extend_form2, expand_plan_form1,
                        expand_plan_form2)
from .massmove import HyperRectangle, procedure_a, procedure_b, procedure_c
from .measures import (DiscreteMeasure, MpotInstance, PlanFeasibilityReport,
                       barycentric_cost, barycentric_points,
                       check_partial_feasibility, load_instance, load_measure,
                       pad_to_common_size, save_measure, squared_euclidean_cost)
from .simplex import LpSolution, LpStandardForm, reduced_costs, solve_lp
from .sinkhorn import (DualPotentials, SinkhornConfig, SinkhornOutcome,
                       approx_mpot, gibbs_plan, round_to_polytope, sinkhorn_mot)
from .tensors import (MAX_CELLS, CapacityError, DenseTensor, dump_tensor,
                      dummy_count_grid, inner_product, layer_size, load_tensor,
                      marginal, parse_tensor, save_tensor, sublayer_indices,
                      total_mass)

__version__ = "0.1.0"
