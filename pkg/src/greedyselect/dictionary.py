"""Multi-target dictionary selection: the F / F-hat / F-OMP objectives, the
greedy SDS algorithms, and the exhaustive dictionary optimum.

All targets share one covariance model (one C, one b per target). F uses the
exact best inner subset per target (enumeration over C(|D|, k)); F-hat is the
modular top-k surrogate; F-OMP runs OMP restricted to the dictionary. When a
dictionary is still smaller than k the inner budget collapses to |D|.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import regression, selection
from .errors import BudgetError
from .util import DEFAULT_ENUM_CAP


@dataclass(frozen=True)
class DictionaryProblem:
    model: object
    d: int
    k: int

    def __post_init__(self):
        if not self.model.targets:
            raise ValueError("model has no targets")
        if not 1 <= self.k <= self.d <= self.model.n:
            raise ValueError(
                f"budgets must satisfy 1 <= k <= d <= n, got k={self.k}, "
                f"d={self.d}, n={self.model.n}"
            )


@dataclass(frozen=True)
class DictionaryResult:
    """Dictionary with exact per-target inner subsets and all three scores."""

    algorithm: str
    dictionary: tuple
    per_target: tuple  # (label, inner_subset, r2) triples
    F: float
    F_hat: float
    F_omp: float


def _inner_budget(problem, D):
    return min(problem.k, len(D))


def _best_inner(problem, target, D):
    """Exact best size-k subset of D for one target (lexicographic ties)."""
    kk = _inner_budget(problem, D)
    best = -1.0
    best_S = None
    for S in itertools.combinations(sorted(D), kk):
        val = regression.r_squared(problem.model, target, S)
        if val > best:
            best = val
            best_S = S
    return best_S, best


def eval_F(problem, D, cap=DEFAULT_ENUM_CAP):
    """Sum over targets of the exact best inner-subset R2 within D."""
    count = math.comb(len(D), _inner_budget(problem, D))
    if cap is not None and count * len(problem.model.targets) > cap:
        raise BudgetError(count, cap, "inner subsets")
    return sum(
        _best_inner(problem, label, D)[1] for label, _ in problem.model.targets
    )


def eval_F_hat(problem, D):
    """Modular surrogate: per target, the sum of the top-k singleton R2."""
    kk = _inner_budget(problem, D)
    Dl = list(D)
    total = 0.0
    for _, b in problem.model.targets:
        singles = np.sort((b[Dl] ** 2))[::-1]
        total += float(singles[:kk].sum())
    return total


def _omp_within(problem, target, D):
    """OMP restricted to the dictionary, mapped back to original indices."""
    D_sorted = tuple(sorted(D))
    sub = problem.model.restrict(D_sorted)
    res = selection.omp(sub, target, _inner_budget(problem, D))
    order = tuple(D_sorted[i] for i in res.order)
    return order, res.r2


def eval_F_omp(problem, D):
    """Sum over targets of the R2 of the OMP-selected inner subset."""
    return sum(
        _omp_within(problem, label, D)[1] for label, _ in problem.model.targets
    )


def _finalize(problem, algorithm, order):
    D = tuple(order)
    per_target = []
    F = 0.0
    for label, _ in problem.model.targets:
        S, r2 = _best_inner(problem, label, D)
        per_target.append((label, S, r2))
        F += r2
    return DictionaryResult(
        algorithm=algorithm,
        dictionary=D,
        per_target=tuple(per_target),
        F=F,
        F_hat=eval_F_hat(problem, D),
        F_omp=eval_F_omp(problem, D),
    )


def sds_ma(problem):
    """Greedy dictionary growth scored by the modular surrogate F-hat.

    Zero-gain iterations still add the lowest-index variable until |D| = d,
    matching the fixed-size loop of the definition.
    """
    n = problem.model.n
    order = []
    chosen = set()
    for _ in range(problem.d):
        best_val = -np.inf
        best_j = -1
        for j in range(n):
            if j in chosen:
                continue
            val = eval_F_hat(problem, order + [j])
            if val > best_val:
                best_val = val
                best_j = j
        order.append(best_j)
        chosen.add(best_j)
    return _finalize(problem, "SDS_MA", order)


def sds_omp(problem):
    """Greedy dictionary growth scored by F-OMP of the augmented dictionary."""
    n = problem.model.n
    order = []
    chosen = set()
    for _ in range(problem.d):
        best_val = -np.inf
        best_j = -1
        for j in range(n):
            if j in chosen:
                continue
            val = eval_F_omp(problem, order + [j])
            if val > best_val:
                best_val = val
                best_j = j
        order.append(best_j)
        chosen.add(best_j)
    return _finalize(problem, "SDS_OMP", order)


def exhaustive_dict_opt(problem, cap=DEFAULT_ENUM_CAP):
    """Exact maximizer of F over size-d dictionaries (F is monotone, so the
    optimum over |D| <= d is attained at |D| = d). Lexicographic ties.
    """
    n = problem.model.n
    s = len(problem.model.targets)
    count = math.comb(n, problem.d) * math.comb(problem.d, problem.k) * s
    if cap is not None and count > cap:
        raise BudgetError(count, cap, "dictionary evaluations")
    best = -1.0
    best_D = None
    for D in itertools.combinations(range(n), problem.d):
        val = eval_F(problem, D, cap=None)
        if val > best:
            best = val
            best_D = D
    return _finalize(problem, "OPT", best_D)
