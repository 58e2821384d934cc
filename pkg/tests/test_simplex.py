import numpy as np
import pytest

from mpot import (DenseTensor, MpotInstance, LpStandardForm,
                  check_partial_feasibility, mpot_monotone_check,
                  reduced_costs, solve_lp, solve_mot_exact, solve_mpot_exact)
from mpot.simplex import RC_TOL

from conftest import random_instance
from oracles import enumerate_lp_optimum, mpot_optimum_bruteforce


def unit_measures_2x2():
    from mpot import DiscreteMeasure

    return [DiscreteMeasure([[0.0], [1.0]], [0.5, 0.5]) for _ in range(2)]


class TestSolveLp:
    def test_single_equality(self):
        lp = LpStandardForm(A=[[1.0]], b=[1.0], c=[1.0], senses=["="])
        sol = solve_lp(lp)
        assert sol.status == "optimal"
        assert sol.x[0] == pytest.approx(1.0)
        assert sol.objective == pytest.approx(1.0)

    def test_infeasible(self):
        # x <= 1 and x >= 2
        lp = LpStandardForm(A=[[1.0], [-1.0]], b=[1.0, -2.0], c=[1.0],
                            senses=["<=", "<="])
        assert solve_lp(lp).status == "infeasible"

    def test_unbounded(self):
        lp = LpStandardForm(A=[[1.0, -1.0]], b=[0.0], c=[-1.0, 0.0], senses=["<="])
        assert solve_lp(lp).status == "unbounded"

    def test_redundant_equalities(self):
        # duplicated row must not break phase 1 cleanup
        lp = LpStandardForm(A=[[1.0, 1.0], [1.0, 1.0]], b=[1.0, 1.0],
                            c=[2.0, 1.0], senses=["=", "="])
        sol = solve_lp(lp)
        assert sol.status == "optimal"
        assert sol.objective == pytest.approx(1.0)

    def test_random_lps_match_basis_enumeration(self):
        rng = np.random.default_rng(7)
        solved = 0
        for _ in range(30):
            nvars, nrows = 6, 3
            A = rng.uniform(-1.0, 1.0, size=(nrows, nvars))
            x_feas = rng.uniform(0.0, 1.0, size=nvars)
            senses = [("<=" if rng.random() < 0.5 else "=") for _ in range(nrows)]
            b = A @ x_feas + np.where([s == "<=" for s in senses],
                                      rng.uniform(0.0, 0.5, nrows), 0.0)
            c = rng.uniform(0.0, 1.0, size=nvars)  # bounded below on x >= 0
            lp = LpStandardForm(A=A, b=b, c=c, senses=senses)
            sol = solve_lp(lp)
            expected, _ = enumerate_lp_optimum(A, b, c, senses)
            assert sol.status == "optimal"
            assert expected is not None
            assert sol.objective == pytest.approx(expected, abs=1e-9)
            solved += 1
        assert solved == 30

    def test_optimality_certificate(self, rng):
        inst = random_instance(rng, n=3, m=3)
        from mpot.exact import mpot_lp

        sol = solve_lp(mpot_lp(inst))
        assert sol.status == "optimal"
        assert reduced_costs(sol).min() >= -RC_TOL


class TestSolveMpotExact:
    def test_zero_cost_diagonal_suffices(self):
        cost = DenseTensor([[0.0, 1.0], [1.0, 0.0]])
        inst = MpotInstance(unit_measures_2x2(), cost, 0.6)
        plan, obj = solve_mpot_exact(inst)
        assert obj == pytest.approx(0.0, abs=1e-12)
        assert plan.total_mass() == pytest.approx(0.6)

    def test_two_by_two_derived_value(self):
        # full-mass 2x2 instance: plans are [[x,.5-x],[.5-x,x]], cost 2.5-4x,
        # minimized at x=.5 giving 0.5 (vertex enumeration agrees)
        cost = DenseTensor([[0.0, 2.0], [3.0, 1.0]])
        inst = MpotInstance(unit_measures_2x2(), cost, 1.0)
        _, obj = solve_mpot_exact(inst)
        expected = mpot_optimum_bruteforce([m.weights for m in inst.measures],
                                           cost.a, 1.0)
        assert expected == pytest.approx(0.5, abs=1e-12)
        assert obj == pytest.approx(expected, abs=1e-9)

    def test_zero_mass(self):
        cost = DenseTensor([[0.0, 2.0], [3.0, 1.0]])
        inst = MpotInstance(unit_measures_2x2(), cost, 0.0)
        plan, obj = solve_mpot_exact(inst)
        assert obj == 0.0
        assert plan.total_mass() == 0.0

    def test_plan_is_feasible_with_exact_mass(self, rng):
        for _ in range(5):
            inst = random_instance(rng, n=3, m=3, equal_masses=False)
            plan, _ = solve_mpot_exact(inst)
            report = check_partial_feasibility(plan, inst)
            assert report.max_violation <= 1e-9
            assert report.mass_gap <= 1e-9

    def test_matches_bruteforce_on_random_instances(self, rng):
        for _ in range(5):
            inst = random_instance(rng, n=2, m=3, equal_masses=False)
            _, obj = solve_mpot_exact(inst)
            expected = mpot_optimum_bruteforce([m.weights for m in inst.measures],
                                               inst.cost.a, inst.s)
            assert obj == pytest.approx(expected, abs=1e-9)

    def test_cap_enforced(self, rng):
        inst = random_instance(rng, n=4, m=3)
        with pytest.raises(ValueError):
            solve_mpot_exact(inst, cap=10)


class TestSolveMotExact:
    def test_zero_cost(self, rng):
        r = rng.random(3) + 0.1
        marginals = [r, rng.permutation(r)]
        # rebalance exactly
        marginals[1] = marginals[1] * (r.sum() / marginals[1].sum())
        _, obj = solve_mot_exact(DenseTensor.zeros((3, 3)), marginals)
        assert obj == pytest.approx(0.0, abs=1e-12)

    def test_unbalanced_rejected(self):
        with pytest.raises(ValueError):
            solve_mot_exact(DenseTensor.zeros((2, 2)), [[0.5, 0.5], [0.2, 0.2]])

    def test_two_marginal_agrees_with_full_mass_partial(self, rng):
        for _ in range(3):
            inst = random_instance(rng, n=3, m=2, equal_masses=True, s_fraction=1.0)
            _, partial_obj = solve_mpot_exact(inst)
            _, balanced_obj = solve_mot_exact(inst.cost,
                                              [m.weights for m in inst.measures])
            assert balanced_obj == pytest.approx(partial_obj, abs=1e-9)


def test_monotone_in_transported_mass(rng):
    inst = random_instance(rng, n=3, m=3, equal_masses=False)
    objs = mpot_monotone_check(inst, [0.0, 0.2 * inst.s, inst.s])
    assert objs[0] == pytest.approx(0.0, abs=1e-12)
    assert objs == sorted(objs)

    zero_cost = MpotInstance(inst.measures, DenseTensor.zeros(inst.cost.shape), inst.s)
    assert max(mpot_monotone_check(zero_cost, [0.1, 0.3])) <= 1e-12

    with pytest.raises(ValueError):
        mpot_monotone_check(inst, [0.5, 0.2])
