"""Greedy subset selection (forward regression, OMP, oblivious) and the
exhaustive optimum.

All algorithms return min(k, n) indices; zero-gain iterations still pick the
lowest-index remaining variable, so runs are reproducible and match the
fixed-size loop of the algorithm definitions. Ties break to the lowest index
everywhere.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels, regression
from .errors import BudgetError
from .util import DEFAULT_ENUM_CAP


@dataclass(frozen=True)
class SelectionResult:
    """Outcome of one selection run.

    order : indices in the order they were chosen
    gains : R2 increment contributed by each pick (nonnegative up to fp)
    r2    : joint R2 of the full selection
    evaluations : number of candidate scores computed (deterministic)
    """

    algorithm: str
    order: tuple
    gains: tuple
    r2: float
    k: int
    evaluations: int = 0

    @property
    def subset(self):
        return tuple(sorted(self.order))


def _check_k(model, k):
    k = int(k)
    if not 1 <= k <= model.n:
        raise ValueError(f"k must lie in [1, {model.n}], got {k}")
    return k


def _gain_trace(model, target, order):
    """Per-pick R2 increments along the selection order."""
    gains = []
    prev = 0.0
    for i in range(1, len(order) + 1):
        cur = regression.r_squared(model, target, order[:i])
        gains.append(cur - prev)
        prev = cur
    return tuple(gains), prev


def forward_regression(model, target, k):
    """Greedily add the variable giving the largest joint R2."""
    k = _check_k(model, k)
    order = []
    chosen = set()
    gains = []
    r2_cur = 0.0
    evaluations = 0
    for _ in range(k):
        best_val = -np.inf
        best_j = -1
        for j in range(model.n):
            if j in chosen:
                continue
            val = regression.r_squared(model, target, order + [j])
            evaluations += 1
            if val > best_val:
                best_val = val
                best_j = j
        order.append(best_j)
        chosen.add(best_j)
        gains.append(best_val - r2_cur)
        r2_cur = best_val
    return SelectionResult(
        algorithm="FR",
        order=tuple(order),
        gains=tuple(gains),
        r2=r2_cur,
        k=k,
        evaluations=evaluations,
    )


def omp(model, target, k):
    """Greedily add the variable with the largest |covariance| with the
    current target residual; gains are still recorded as joint R2 increments.
    """
    k = _check_k(model, k)
    order = []
    chosen = set()
    evaluations = 0
    for _ in range(k):
        best_score = -np.inf
        best_j = -1
        for j in range(model.n):
            if j in chosen:
                continue
            score = abs(regression.residual_target_cov(model, target, order, j))
            evaluations += 1
            if score > best_score:
                best_score = score
                best_j = j
        order.append(best_j)
        chosen.add(best_j)
    gains, r2 = _gain_trace(model, target, tuple(order))
    return SelectionResult(
        algorithm="OMP",
        order=tuple(order),
        gains=gains,
        r2=r2,
        k=k,
        evaluations=evaluations,
    )


def oblivious(model, target, k):
    """Pick the k variables with the largest individual |correlation|.

    The algorithm definition reads "largest b_i"; since R2({i}) = b_i^2, the
    absolute value is the intended reading and is what we use. The reported
    R2 is the joint fit of the chosen set.
    """
    k = _check_k(model, k)
    b = model.target_vector(target)
    # stable sort on (-|b|, index) implements lowest-index tie-breaking
    order = tuple(sorted(range(model.n), key=lambda i: (-abs(b[i]), i))[:k])
    gains, r2 = _gain_trace(model, target, order)
    return SelectionResult(
        algorithm="OBL",
        order=order,
        gains=gains,
        r2=r2,
        k=k,
        evaluations=model.n,
    )


def exhaustive_opt(model, target, k, cap=DEFAULT_ENUM_CAP):
    """Exact optimum over all size-k subsets (lexicographically smallest tie).

    Raises BudgetError when C(n, k) exceeds the enumeration cap.
    """
    k = _check_k(model, k)
    count = math.comb(model.n, k)
    if cap is not None and count > cap:
        raise BudgetError(count, cap, f"size-{k} subsets of {model.n} variables")
    b = model.target_vector(target)
    _, subset, evaluated = kernels.best_r2_scan(model.C, b, k)
    order = tuple(int(i) for i in subset)
    gains, r2 = _gain_trace(model, target, order)
    return SelectionResult(
        algorithm="OPT",
        order=order,
        gains=gains,
        r2=r2,
        k=k,
        evaluations=evaluated,
    )
