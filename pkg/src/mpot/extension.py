"""Dummy-point extensions turning partial transport into balanced transport.

Each extension appends one dummy slot per axis and fills the new index layers
with layer-constant costs, so that solving the balanced multimarginal problem
on the extended data and cropping the dummy coordinates solves the partial
problem exactly.

Two constructions are provided. Form 1 uses layer costs increasing from zero
and needs the measure masses to be close to each other (the mass-closeness
condition below). Form 2 uses a concave layer-cost profile anchored at the
maximum ground cost and works for any masses with s <= each total. Both come
with plan expanders that lift a feasible partial plan to a balanced extended
plan of equal objective, which is the constructive half of the equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from .measures import MpotInstance
from .tensors import DenseTensor, as_array, dummy_count_grid, marginal

#: Extended-marginal entries in [-CLAMP_EPS, 0) are rounding debris; snap to 0.
CLAMP_EPS = 1e-12


@dataclass(frozen=True)
class Form1Spec:
    """Per-layer costs for layers 1..m: first entry 0, strictly increasing."""

    layer_costs: tuple

    def __post_init__(self):
        costs = tuple(float(c) for c in self.layer_costs)
        if len(costs) < 2:
            raise ValueError("need layer costs for at least layers 1..2")
        if costs[0] != 0.0:
            raise ValueError(f"layer-1 cost must be 0, got {costs[0]}")
        if any(b <= a for a, b in zip(costs, costs[1:])):
            raise ValueError(f"layer costs must be strictly increasing: {costs}")
        object.__setattr__(self, "layer_costs", costs)

    @property
    def m(self) -> int:
        return len(self.layer_costs)


@dataclass(frozen=True)
class Form2Spec:
    """Layer-cost profile D_0..D_m: D_0 anchors at max cost, D_{m-1} = 0, D_m > 0.

    Entry i >= 1 is the cost written on layer i; entry 0 participates only in
    the concavity chain. For m = 3 the head triple must be concave; for
    m >= 4 the second differences must satisfy
    ``d2[i] <= (m-1-i) * d2[i+1] <= 0`` for i = 1..m-3.
    """

    layer_costs: tuple

    def __post_init__(self):
        d = tuple(float(c) for c in self.layer_costs)
        m = len(d) - 1
        if m < 2:
            raise ValueError("need a D_0..D_m profile with m >= 2")
        if abs(d[m - 1]) > CLAMP_EPS:
            raise ValueError(f"next-to-last layer cost must be 0, got {d[m - 1]}")
        if d[m] <= 0:
            raise ValueError(f"last layer cost must be positive, got {d[m]}")
        if d[0] < 0:
            raise ValueError("cost ceiling D_0 must be nonnegative")
        second = [d[i + 1] + d[i - 1] - 2.0 * d[i] for i in range(1, m - 1)]
        if m == 3 and second[0] > CLAMP_EPS:
            raise ValueError(f"(D_0, D_1, D_2) must be concave, got second diff {second[0]}")
        if m >= 4:
            for i in range(1, m - 2):  # chain indices 1..m-3
                lhs, rhs = second[i - 1], (m - 1 - i) * second[i]
                if lhs > rhs + CLAMP_EPS or rhs > CLAMP_EPS:
                    raise ValueError(
                        f"second-difference chain fails at i={i}: "
                        f"need {lhs} <= {rhs} <= 0"
                    )
        if min(d[: m]) < -CLAMP_EPS:
            raise ValueError(f"layer costs must be nonnegative, got {d}")
        object.__setattr__(self, "layer_costs", d)

    @property
    def m(self) -> int:
        return len(self.layer_costs) - 1


@dataclass(frozen=True)
class ExtensionResult:
    """Extended cost over [n+1]^m, extended marginals, and which form built them."""

    cost: DenseTensor
    marginals: list
    form: int
    spec: object

    @property
    def balanced_total(self) -> float:
        return float(self.marginals[0].sum())


@dataclass(frozen=True)
class Form1Condition:
    """Mass-closeness check: sum of masses >= (m-1) * each mass + s."""

    holds: bool
    slacks: np.ndarray


def check_form1_condition(inst: MpotInstance) -> Form1Condition:
    """Slack of the mass-closeness condition per axis; all >= 0 means form 1 applies.

    Always holds for two measures, and for any m when the totals are equal
    and s <= that common total.
    """
    masses = inst.masses
    slacks = masses.sum() - (inst.m - 1) * masses - inst.s
    return Form1Condition(bool(slacks.min() >= -CLAMP_EPS), slacks)


def default_form1_spec(inst: MpotInstance) -> Form1Spec:
    # Scale the increments with the cost range so the entropic solver sees
    # comparable magnitudes across layers.
    step = float(as_array(inst.cost).max()) + 1.0
    return Form1Spec(tuple(i * step for i in range(inst.m)))


def _layered_cost(cost: np.ndarray, layer_values) -> np.ndarray:
    """Extended cost: original block on layer 0, constant value per higher layer."""
    n = cost.shape[0]
    m = cost.ndim
    counts = dummy_count_grid(n, m)
    extended = np.empty((n + 1,) * m)
    extended[(slice(0, n),) * m] = cost
    for i in range(1, m + 1):
        extended[counts == i] = layer_values[i - 1]
    return extended


def _clamp_nonneg(vec: np.ndarray, what: str) -> np.ndarray:
    if float(vec.min()) < -CLAMP_EPS:
        raise ValueError(f"{what} has a negative entry: {vec.min()}")
    return np.maximum(vec, 0.0)


def extend_form1(inst: MpotInstance, spec: Form1Spec | None = None) -> ExtensionResult:
    """Increasing-layer-cost extension; requires the mass-closeness condition.

    Axis k keeps its weights and gains a dummy entry
    ``sum(masses)/(m-1) - mass_k - s/(m-1)``; every extended marginal then
    totals ``(sum(masses) - s)/(m-1)``.
    """
    cond = check_form1_condition(inst)
    if not cond.holds:
        raise ValueError(
            f"mass-closeness condition fails (slacks {cond.slacks}); use form 2"
        )
    if spec is None:
        spec = default_form1_spec(inst)
    if spec.m != inst.m:
        raise ValueError(f"spec covers {spec.m} layers but instance has m={inst.m}")
    m = inst.m
    total = inst.masses.sum()
    marginals = []
    for mu in inst.measures:
        dummy = total / (m - 1) - mu.total_mass - inst.s / (m - 1)
        marginals.append(_clamp_nonneg(np.append(mu.weights, dummy), "extended marginal"))
    cost = _layered_cost(inst.cost.a, spec.layer_costs)
    return ExtensionResult(DenseTensor(cost, copy=False), marginals, 1, spec)


def build_form2_costs(m: int, cost_ceiling: float, second_diffs=None, top: float | None = None) -> Form2Spec:
    """Assemble a valid form-2 profile from its m-2 free second differences.

    The first difference is pinned so the next-to-last entry lands on zero:
    ``delta1_0 = -(sum_i (m-1-i) * d2[i] + D_0) / (m-1)``. When no second
    differences are given, defaults are ``-(m-1-j)!`` for m >= 4 and the flat
    head D_1 = D_0 for m = 3. ``top`` is the strictly positive final entry,
    defaulting to cost_ceiling + 1.
    """
    if m < 2:
        raise ValueError("need m >= 2")
    d0 = float(cost_ceiling)
    if second_diffs is None:
        if m == 3:
            second_diffs = (-d0,) if d0 > 0 else (-1.0,)
        else:
            second_diffs = tuple(-float(factorial(m - 1 - j)) for j in range(1, m - 1))
    d2 = [float(v) for v in second_diffs]
    if len(d2) != m - 2:
        raise ValueError(f"need {m - 2} second differences for m={m}, got {len(d2)}")
    if top is None:
        top = d0 + 1.0
    weighted = sum((m - 1 - i) * d2[i - 1] for i in range(1, m - 1))
    delta1 = -(weighted + d0) / (m - 1)
    levels = [d0]
    for j in range(1, m):
        levels.append(levels[-1] + delta1)
        if j - 1 < len(d2):
            delta1 += d2[j - 1]
    levels[m - 1] = 0.0 if abs(levels[m - 1]) <= 1e-9 else levels[m - 1]
    levels.append(float(top))
    return Form2Spec(tuple(levels))


def extend_form2(inst: MpotInstance, spec: Form2Spec | None = None) -> ExtensionResult:
    """Concave-layer-cost extension; needs no condition beyond s <= each mass.

    Axis k gains the dummy entry ``sum of the other masses - (m-1) * s``;
    every extended marginal totals ``sum(masses) - (m-1) * s``.
    """
    max_cost = float(as_array(inst.cost).max())
    if spec is None:
        spec = build_form2_costs(inst.m, max_cost)
    if spec.m != inst.m:
        raise ValueError(f"spec covers m={spec.m} but instance has m={inst.m}")
    if abs(spec.layer_costs[0] - max_cost) > 1e-9 * max(1.0, max_cost):
        raise ValueError(
            f"profile anchor {spec.layer_costs[0]} != max cost {max_cost}"
        )
    m = inst.m
    total = inst.masses.sum()
    marginals = []
    for mu in inst.measures:
        dummy = (total - mu.total_mass) - (m - 1) * inst.s
        marginals.append(_clamp_nonneg(np.append(mu.weights, dummy), "extended marginal"))
    cost = _layered_cost(inst.cost.a, spec.layer_costs[1:])
    return ExtensionResult(DenseTensor(cost, copy=False), marginals, 2, spec)


def extend(inst: MpotInstance, form="auto", spec=None) -> ExtensionResult:
    """Dispatch on form: 1, 2, or auto (form 1 when its condition holds)."""
    if form == "auto":
        form = 1 if check_form1_condition(inst).holds else 2
    if form in (1, "1"):
        return extend_form1(inst, spec)
    if form in (2, "2"):
        return extend_form2(inst, spec)
    raise ValueError(f"unknown form {form!r}; expected 1, 2, or 'auto'")


def crop(extended) -> DenseTensor:
    """Restrict an extended plan to the original grid, dropping dummy slices."""
    a = as_array(extended)
    dims = set(a.shape)
    if len(dims) != 1:
        raise ValueError(f"extended plan must be hypercubic, got shape {a.shape}")
    n = a.shape[0] - 1
    if n < 1:
        raise ValueError("nothing left after cropping a length-1 axis")
    return DenseTensor(a[(slice(0, n),) * a.ndim], copy=True, check_negative=False)


def _residuals(plan: np.ndarray, inst: MpotInstance) -> list[np.ndarray]:
    return [np.maximum(inst.measures[k].weights - marginal(plan, k + 1), 0.0)
            for k in range(inst.m)]


def expand_plan_form1(plan, inst: MpotInstance, spec: Form1Spec | None = None) -> DenseTensor:
    """Lift a feasible partial plan to a balanced plan for the form-1 extension.

    The dummy block of axis k receives the product coupling of the rescaled
    leftover marginals, so the extension has marginals exactly equal to the
    form-1 extended weights and, because layer 1 costs zero and higher layers
    carry no mass, the same objective as the partial plan.
    """
    a = as_array(plan)
    ext = extend_form1(inst, spec)
    n, m = inst.n, inst.m
    residuals = _residuals(a, inst)
    scale = max(1.0, float(inst.masses.sum()))
    out = np.zeros((n + 1,) * m)
    out[(slice(0, n),) * m] = a
    for k in range(m):
        dummy_mass = float(ext.marginals[k][-1])
        if dummy_mass <= CLAMP_EPS * scale:
            continue
        factors = []
        for axis in range(m):
            if axis == k:
                continue
            norm = float(residuals[axis].sum())
            if norm <= 0.0:
                # A zero leftover on another axis forces this dummy mass to
                # zero; reaching here means the plan was not feasible.
                raise ValueError(
                    f"axis {axis + 1} has no leftover mass but axis {k + 1} "
                    f"needs {dummy_mass} in its dummy block"
                )
            factors.append(residuals[axis] / norm)
        block = dummy_mass * _outer(factors)
        index = [slice(0, n)] * m
        index[k] = n
        out[tuple(index)] = block
    return DenseTensor(out, copy=False, check_negative=False)


def expand_plan_form2(plan, inst: MpotInstance, spec: Form2Spec | None = None) -> DenseTensor:
    """Lift a feasible partial plan to a balanced plan for the form-2 extension.

    For each axis k, the leftover weight of support j goes to the index that
    is dummy everywhere except coordinate j on axis k. Those indices sit on
    the zero-cost next-to-last layer and the all-dummy corner stays empty, so
    the objective is preserved exactly.
    """
    a = as_array(plan)
    _ = spec  # the expansion itself does not depend on the cost profile
    n, m = inst.n, inst.m
    residuals = _residuals(a, inst)
    out = np.zeros((n + 1,) * m)
    out[(slice(0, n),) * m] = a
    for k in range(m):
        index = [n] * m
        index[k] = slice(0, n)
        out[tuple(index)] = residuals[k]
    return DenseTensor(out, copy=False, check_negative=False)


def _outer(vectors) -> np.ndarray:
    result = np.array(1.0)
    for v in vectors:
        result = np.multiply.outer(result, v)
    return result
