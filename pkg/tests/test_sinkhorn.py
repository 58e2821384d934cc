import warnings

import numpy as np
import pytest

from mpot import (DenseTensor, DiscreteMeasure, DualPotentials, MpotInstance,
                  SinkhornConfig, approx_mpot, check_partial_feasibility, crop,
                  extend, gibbs_plan, inner_product, marginal,
                  round_to_polytope, sinkhorn_mot, solve_mot_exact,
                  solve_mpot_exact, total_mass)
from mpot.sinkhorn import _log_marginal

from conftest import random_instance
from oracles import two_marginal_sinkhorn_log


def balanced_marginals(rng, dims, total=1.0):
    out = []
    for d in dims:
        r = rng.random(d) + 0.1
        out.append(r / r.sum() * total)
    return out


class TestGibbsPlan:
    def test_zero_cost_zero_potentials(self):
        beta = DualPotentials([np.zeros(2), np.zeros(2)])
        plan = gibbs_plan(DenseTensor.zeros((2, 2)), beta, eta=1.0)
        assert np.allclose(plan.a, 1.0)

    def test_huge_eta_washes_out_cost(self, rng):
        cost = DenseTensor(rng.random((3, 3)))
        beta = DualPotentials([np.zeros(3), np.zeros(3)])
        plan = gibbs_plan(cost, beta, eta=1e12)
        assert np.allclose(plan.a, 1.0, atol=1e-6)

    def test_single_axis_update_balances_that_axis(self, rng):
        cost = rng.random((3, 3)) * 3.0
        target = np.array([0.2, 0.3, 0.5])
        log_plan = -cost / 0.5
        delta = np.log(target) - _log_marginal(log_plan, 0)
        log_plan += delta[:, None]
        assert np.allclose(np.exp(log_plan).sum(axis=1), target, atol=1e-12)


class TestSinkhornMot:
    def test_zero_cost_fixed_point_in_one_cycle(self, rng):
        dims = (3, 3, 3)
        marginals = balanced_marginals(rng, dims, total=2.0)
        out = sinkhorn_mot(DenseTensor.zeros(dims), marginals,
                           SinkhornConfig(eta=0.7, tol=1e-12, max_iters=5))
        expected = np.einsum("i,j,k->ijk", *marginals) / 2.0 ** 2
        assert out.iterations == 1
        assert out.converged
        assert np.allclose(out.plan.a, expected, atol=1e-12)

    def test_matches_classical_two_marginal_solver(self, rng):
        cost = rng.random((4, 4))
        a, b = balanced_marginals(rng, (4, 4))
        eta = 0.2
        out = sinkhorn_mot(DenseTensor(cost), [a, b],
                           SinkhornConfig(eta=eta, tol=1e-12, max_iters=2000))
        reference = two_marginal_sinkhorn_log(a, b, cost, eta, iters=2000)
        assert np.abs(out.plan.a - reference).max() <= 1e-8

    def test_every_axis_exact_after_its_update(self, rng):
        inst = random_instance(rng, n=3, m=3)
        ext = extend(inst, "auto")
        out = sinkhorn_mot(ext.cost, ext.marginals,
                           SinkhornConfig(eta=0.3, tol=1e-9, max_iters=50))
        # the last updated axis (m) must match its target essentially exactly
        last = marginal(out.plan, inst.m)
        assert np.abs(last - ext.marginals[-1]).sum() <= 1e-10

    def test_unbalanced_marginals_rejected(self, rng):
        with pytest.raises(ValueError):
            sinkhorn_mot(DenseTensor.zeros((2, 2)), [[0.5, 0.5], [0.3, 0.3]])

    def test_max_iters_flags_unconverged(self, rng):
        inst = random_instance(rng, n=3, m=3)
        ext = extend(inst, "auto")
        out = sinkhorn_mot(ext.cost, ext.marginals,
                           SinkhornConfig(eta=0.01, tol=1e-12, max_iters=2))
        assert not out.converged
        assert out.iterations == 2

    def test_monitored_monotonicity(self, rng):
        """Marginal error should not increase across cycles; the regularized
        objective climbs towards the constrained optimum from below. Both are
        monitored: violations warn rather than fail."""
        inst = random_instance(rng, n=4, m=3, equal_masses=True)
        ext = extend(inst, "auto")
        out = sinkhorn_mot(ext.cost, ext.marginals,
                           SinkhornConfig(eta=0.2, tol=1e-11, max_iters=2000))
        errs = [r.marginal_err_l1 for r in out.trace]
        regs = [r.reg_objective for r in out.trace]
        err_bumps = sum(1 for x, y in zip(errs, errs[1:]) if y > x + 1e-12)
        reg_drops = sum(1 for x, y in zip(regs, regs[1:]) if y < x - 1e-12)
        if err_bumps or reg_drops:
            warnings.warn(f"monotonicity violations: err={err_bumps} reg={reg_drops}")
        assert errs[-1] <= errs[0] + 1e-12
        assert regs[-1] >= regs[0] - 1e-12

    def test_greedy_rule_converges(self, rng):
        inst = random_instance(rng, n=3, m=3)
        ext = extend(inst, "auto")
        out = sinkhorn_mot(ext.cost, ext.marginals,
                           SinkhornConfig(eta=0.3, tol=1e-8, max_iters=5000,
                                          update_rule="greedy"))
        assert out.converged


class TestRounding:
    def test_feasible_input_unchanged(self, rng):
        marginals = balanced_marginals(rng, (3, 3))
        plan = np.outer(marginals[0], marginals[1]) / marginals[0].sum()
        out = round_to_polytope(DenseTensor(plan), marginals)
        assert np.abs(out.a - plan).max() <= 1e-12

    def test_doubled_plan_rescaled(self, rng):
        marginals = balanced_marginals(rng, (3, 3))
        plan = 2.0 * np.outer(marginals[0], marginals[1]) / marginals[0].sum()
        out = round_to_polytope(DenseTensor(plan), marginals)
        for k in range(2):
            assert np.allclose(marginal(out, k + 1), marginals[k], atol=1e-9)

    def test_random_positive_plans(self, rng):
        for dims in ((3, 3), (3, 3, 3), (2, 4, 3)):
            marginals = balanced_marginals(rng, dims, total=1.7)
            plan = rng.random(dims) + 1e-3
            out = round_to_polytope(DenseTensor(plan), marginals)
            violation = sum(np.abs(marginal(plan, k + 1) - marginals[k]).sum()
                            for k in range(len(dims)))
            for k in range(len(dims)):
                assert np.allclose(marginal(out, k + 1), marginals[k], atol=1e-9)
            moved = np.abs(out.a - plan).sum()
            assert moved <= 2.0 * violation + 1e-9
            assert out.a.min() >= 0.0


class TestApproxMpot:
    def test_single_cell_converges_to_partial_mass(self):
        c = 3.0
        mus = [DiscreteMeasure([[float(i)]], [1.0]) for i in range(3)]
        inst = MpotInstance(mus, DenseTensor(np.full((1, 1, 1), c)), 0.5)
        out = approx_mpot(inst, cfg=SinkhornConfig(eta=1e-3, tol=1e-10,
                                                   max_iters=10000))
        assert out.objective == pytest.approx(0.5 * c, abs=1e-3 * c)

    def test_dominated_marginals_exactly(self, rng):
        inst = random_instance(rng, n=4, m=3, equal_masses=False)
        out = approx_mpot(inst, cfg=SinkhornConfig(eta=0.05, tol=1e-7,
                                                   max_iters=20000))
        report = check_partial_feasibility(out.cropped, inst)
        assert report.max_violation == 0.0

    def test_epsilon_contract_against_oracle(self, rng):
        inst = random_instance(rng, n=4, m=3, equal_masses=True, s_fraction=0.5)
        _, opt = solve_mpot_exact(inst)
        out = approx_mpot(inst, cfg=SinkhornConfig(target_eps=0.05, max_iters=100000))
        assert out.converged
        assert out.objective <= opt + 0.05

    def test_full_mass_reduces_to_balanced(self, rng):
        inst = random_instance(rng, n=3, m=3, equal_masses=True, s_fraction=1.0)
        _, opt = solve_mot_exact(inst.cost, [mu.weights for mu in inst.measures])
        out = approx_mpot(inst, cfg=SinkhornConfig(target_eps=0.05, max_iters=100000))
        assert out.objective <= opt + 0.05
        # mass may only fall short of s, never exceed it
        assert total_mass(out.cropped) <= inst.s + 1e-9

    def test_form1_on_violating_instance_raises(self):
        mus = [DiscreteMeasure(np.zeros((2, 1)), [0.5, 0.5]),
               DiscreteMeasure(np.zeros((2, 1)), [0.5, 0.5]),
               DiscreteMeasure(np.zeros((2, 1)), [1.5, 1.5])]
        inst = MpotInstance(mus, DenseTensor.zeros((2, 2, 2)), 0.5)
        with pytest.raises(ValueError):
            approx_mpot(inst, form=1)
        out = approx_mpot(inst, form="auto",
                          cfg=SinkhornConfig(eta=0.1, tol=1e-6, max_iters=5000))
        assert out.form == 2

    def test_trace_columns_present(self, rng):
        inst = random_instance(rng, n=3, m=3)
        out = approx_mpot(inst, cfg=SinkhornConfig(eta=0.2, tol=1e-8, max_iters=2000))
        rec = out.trace[-1]
        assert rec.iteration == out.iterations
        assert rec.marginal_err_l1 <= 1e-8
        assert np.isfinite(rec.reg_objective) and np.isfinite(rec.objective)
