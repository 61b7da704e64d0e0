"""Sparse eigenvalues, condition numbers, coherence, and the grid-search
lower bound on the smallest k-sparse eigenvalue.

Computing lam_min(C, k) exactly means enumerating all k x k principal
submatrices, which is capped; past the cap the report degrades to interlacing
plus the beta-alignment bound (mode "bound-only").
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels, numerics
from .errors import BudgetError, DimensionError
from .util import DEFAULT_ENUM_CAP

MAX_BETA_SUBSPACE = 3  # grid size grows as (2/delta)^j


@dataclass(frozen=True)
class SparseEigReport:
    """Extreme eigenvalues over k x k principal submatrices.

    In mode "exact" the fields are the enumerated extremes and kappa_k is the
    worst per-submatrix condition number. In mode "bound-only" lam_min_k is a
    certified lower bound, lam_max_k the interlacing upper bound lam_n(C),
    and kappa_k the corresponding pessimistic ratio.
    """

    k: int
    lam_min_k: float
    argmin_subset: tuple
    lam_max_k: float
    kappa_k: float
    interlace_lower: float
    interlace_upper: float
    mode: str


@dataclass(frozen=True)
class BetaEstimate:
    """Grid-search estimate of the k-sparse alignment with the low eigenspace.

    beta approximates, within factor 1 - epsilon, the maximum |x . y| over
    unit vectors y in the span of the j lowest eigenvectors and unit k-sparse
    x. lower_bound = lam_{j+1} * (1 - beta) is the implied bound on
    lam_min(C, k).
    """

    j: int
    epsilon: float
    beta: float
    lower_bound: float
    grid_points: int


def coherence(model):
    """Maximum absolute off-diagonal correlation."""
    if model.n < 2:
        raise DimensionError("coherence needs at least 2 variables")
    C = np.abs(model.C.copy())
    np.fill_diagonal(C, 0.0)
    return float(C.max())


def sparse_eig_min(model, k, cap=DEFAULT_ENUM_CAP):
    """Exact lam_min(C, k), lam_max(C, k) and kappa(C, k) by enumeration.

    Raises BudgetError past the cap; callers fall back to
    :func:`bound_only_report`.
    """
    k = int(k)
    if not 1 <= k <= model.n:
        raise ValueError(f"k must lie in [1, {model.n}], got {k}")
    count = math.comb(model.n, k)
    if cap is not None and count > cap:
        raise BudgetError(count, cap, f"size-{k} submatrices of {model.n} variables")
    lam_min, smin, lam_max, _, kappa, _ = kernels.eig_range_scan(model.C, k)
    w = np.linalg.eigvalsh(model.C)
    return SparseEigReport(
        k=k,
        lam_min_k=float(lam_min),
        argmin_subset=tuple(int(i) for i in smin),
        lam_max_k=float(lam_max),
        kappa_k=float(kappa),
        interlace_lower=float(w[0]),
        interlace_upper=float(w[model.n - k]),
        mode="exact",
    )


def sparse_lam_min(model, k, cap=DEFAULT_ENUM_CAP):
    """Just lam_min(C, k) and its argmin subset (faster than the full report)."""
    k = int(k)
    if not 1 <= k <= model.n:
        raise ValueError(f"k must lie in [1, {model.n}], got {k}")
    count = math.comb(model.n, k)
    if cap is not None and count > cap:
        raise BudgetError(count, cap, f"size-{k} submatrices of {model.n} variables")
    value, subset = kernels.lam_extreme_scan(model.C, k, False)
    return float(value), tuple(int(i) for i in subset)


def bound_only_report(model, k, j=2, epsilon=0.1):
    """Bracket lam_min(C, k) when enumeration is infeasible.

    lam_min_k is the better of the interlacing bound lam_1(C) and the
    beta-alignment bound; lam_max_k falls back to lam_n(C).
    """
    w = np.linalg.eigvalsh(model.C)
    est = lower_bound_via_beta(model, k, j=j, epsilon=epsilon)
    lower = max(float(w[0]), est.lower_bound)
    upper = float(w[-1])
    return SparseEigReport(
        k=int(k),
        lam_min_k=lower,
        argmin_subset=(),
        lam_max_k=upper,
        kappa_k=upper / lower if lower > 0 else float("inf"),
        interlace_lower=float(w[0]),
        interlace_upper=float(w[model.n - int(k)]),
        mode="bound-only",
    )


def sparse_eig_report(model, k, cap=DEFAULT_ENUM_CAP, j=2, epsilon=0.1):
    """Exact report when within the cap, bound-only otherwise."""
    try:
        return sparse_eig_min(model, k, cap=cap)
    except BudgetError:
        return bound_only_report(model, k, j=j, epsilon=epsilon)


def lower_bound_via_beta(model, k, j, epsilon):
    """Grid-search beta_j and the lower bound lam_{j+1} * (1 - beta_j).

    The search discretizes the coefficients eta in [-1, 1]^j of
    y = sum eta_i e_i over the j lowest eigenvectors at step
    delta = epsilon * sqrt(k / (n j)). Grid points whose unnormalized length
    strays from 1 by more than delta * sqrt(j) are skipped (the rounding
    argument guarantees a near-feasible point survives); survivors are
    renormalized and scored by the norm of their k largest coordinates, which
    is the closed-form inner maximization over x.
    """
    j = int(j)
    k = int(k)
    n = model.n
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    if j < 1 or j > min(MAX_BETA_SUBSPACE, n - 1):
        raise BudgetError(j, MAX_BETA_SUBSPACE, "subspace dimensions")
    dec = numerics.eig_sym(model.C)
    E = dec.vectors[:, :j]  # columns are the j lowest eigenvectors
    lam_next = float(dec.values[j])
    delta = epsilon * math.sqrt(k / (n * j))
    steps = int(math.floor(1.0 / delta))
    axis = delta * np.arange(-steps, steps + 1)
    window = delta * math.sqrt(j)
    beta = 0.0
    total = len(axis) ** j
    # stream over the first axis so only g^(j-1) points live at once
    if j == 1:
        blocks = [axis[:, None]]
    else:
        inner = np.meshgrid(*([axis] * (j - 1)), indexing="ij")
        inner = np.stack([g.ravel() for g in inner], axis=1)
        blocks = (
            np.concatenate(
                [np.full((len(inner), 1), v), inner], axis=1
            )
            for v in axis
        )
    for block in blocks:
        norms = np.sqrt((block**2).sum(axis=1))
        keep = np.abs(norms - 1.0) <= window
        if not keep.any():
            continue
        y = block[keep] @ E.T  # (B, n)
        y /= norms[keep][:, None]
        topk = np.partition(np.abs(y), n - k, axis=1)[:, n - k :]
        scores = np.sqrt((topk**2).sum(axis=1))
        m = float(scores.max())
        if m > beta:
            beta = m
    beta = min(beta, 1.0)
    return BetaEstimate(
        j=j,
        epsilon=float(epsilon),
        beta=beta,
        lower_bound=lam_next * (1.0 - beta),
        grid_points=total,
    )
