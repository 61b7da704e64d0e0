"""The submodularity ratio gamma(U, k): exact enumeration, greedy-aware
pruning, and a sampled upper-bound estimate.

gamma is the minimum over conditioning sets L inside U and disjoint nonempty
candidate sets S (|S| <= k) of

    sum_i [R2(L u {i}) - R2(L)]  /  [R2(L u S) - R2(L)].

Pairs whose denominator falls at or below DENOM_TOL are skipped and counted,
as are pairs removed by pruning; when everything is skipped the ratio is
reported as the +inf sentinel (the probed sets cannot improve the fit).
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels, regression
from .errors import BudgetError
from .util import DEFAULT_ENUM_CAP, count_pairs, lex_subsets

DENOM_TOL = 1e-12
MAX_U = 12  # 2^|U| outer loop


@dataclass(frozen=True)
class RatioReport:
    """gamma with the witnessing (L, S) pair and enumeration bookkeeping.

    mode is "exact", "pruned" (with eps set) or "sampled" (with trials and
    seed set); pruned and sampled values only remove candidates from the
    minimum, so they upper-bound the exact ratio.
    """

    U: tuple
    k: int
    gamma: float
    witness: tuple
    mode: str
    skipped_pairs: int
    evaluated_pairs: int
    eps: float = None
    trials: int = None
    seed: int = None


def _as_index_tuple(U, n):
    U = tuple(int(i) for i in U)
    if len(set(U)) != len(U):
        raise ValueError("U contains duplicates")
    for i in U:
        if not 0 <= i < n:
            raise IndexError(f"index {i} out of range for {n} variables")
    return U


def _scan(model, target, U, k, prune_eps, cap):
    n = model.n
    b = model.target_vector(target)
    if len(U) > MAX_U:
        raise BudgetError(2 ** len(U), 2**MAX_U, "conditioning subsets")
    total = count_pairs(n, len(U), k)
    if cap is not None and total > cap:
        raise BudgetError(total, cap, "(L, S) pairs")
    best = np.inf
    witness = None
    skipped = 0
    evaluated = 0
    for L in lex_subsets(sorted(U)):
        r2_L = regression.r_squared(model, target, L)
        cand = np.array([i for i in range(n) if i not in L], dtype=np.int64)
        gains = np.array(
            [regression.r_squared(model, target, L + (int(i),)) - r2_L for i in cand]
        )
        if prune_eps is None:
            floor = -np.inf
        else:
            floor = (1.0 + prune_eps) * r2_L
        val, S, skip, ev = kernels.ratio_scan(
            model.C, b, np.array(L, dtype=np.int64), cand, gains, k, DENOM_TOL, floor
        )
        skipped += skip
        evaluated += ev
        if val < best:
            best = val
            witness = (L, tuple(int(i) for i in S))
    return best, witness, skipped, evaluated, total


def ratio_exact(model, target, U, k, cap=DEFAULT_ENUM_CAP):
    """Exact gamma(U, k) over every valid (L, S) pair.

    Raises BudgetError when the pair count exceeds the cap; callers switch to
    :func:`ratio_sampled` in that case.
    """
    U = _as_index_tuple(U, model.n)
    best, witness, skipped, evaluated, _ = _scan(model, target, U, k, None, cap)
    return RatioReport(
        U=U,
        k=int(k),
        gamma=float(best),
        witness=witness,
        mode="exact",
        skipped_pairs=skipped,
        evaluated_pairs=evaluated,
    )


def ratio_pruned(model, target, U, k, eps=0.2, cap=DEFAULT_ENUM_CAP):
    """gamma(U, k) skipping pairs with R2(L u S) <= (1 + eps) R2(L).

    Justified only along the forward-regression selection chain: a pruned
    pair certifies the greedy prefix is already within 1/(1+eps) of optimal,
    so U must be the FR selection order (its prefix chain is what L ranges
    over). eps = 0 degenerates to skipping only zero-gain pairs. When every
    pair is pruned, gamma is the +inf sentinel.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    U = _as_index_tuple(U, model.n)
    if U:
        from .selection import forward_regression

        fr = forward_regression(model, target, len(U)).order
        if tuple(U) != fr:
            raise ValueError(
                f"pruning requires U to be the forward-regression order {fr}, got {U}"
            )
    best, witness, skipped, evaluated, _ = _scan(model, target, U, k, float(eps), cap)
    return RatioReport(
        U=U,
        k=int(k),
        gamma=float(best),
        witness=witness,
        mode="pruned",
        skipped_pairs=skipped,
        evaluated_pairs=evaluated,
        eps=float(eps),
    )


def _pair_counts(n, u_size, k):
    """Cumulative (L-size, S-size) class sizes for uniform pair sampling."""
    classes = []
    for l in range(u_size + 1):
        for s in range(1, min(k, n - l) + 1):
            classes.append((l, s, math.comb(u_size, l) * math.comb(n - l, s)))
    return classes


def _unrank_combination(rank, items, size):
    """rank-th size-`size` combination of `items` in lexicographic order."""
    out = []
    start = 0
    for pos in range(size):
        for idx in range(start, len(items)):
            block = math.comb(len(items) - idx - 1, size - pos - 1)
            if rank < block:
                out.append(items[idx])
                start = idx + 1
                break
            rank -= block
    return tuple(out)


def ratio_sampled(model, target, U, k, trials, seed):
    """Upper-bound estimate of gamma(U, k) from uniformly sampled pairs.

    Draws `trials` (L, S) pairs uniformly (with replacement) from all valid
    pairs via combinatorial unranking, deterministically from `seed`. The
    minimum over a sample can only exceed the exact minimum, so the result
    is an upper bound on the true ratio.
    """
    U = _as_index_tuple(U, model.n)
    if trials < 1:
        raise ValueError("trials must be positive")
    n = model.n
    U_sorted = tuple(sorted(U))
    classes = _pair_counts(n, len(U), k)
    weights = np.array([c[2] for c in classes], dtype=np.float64)
    total = int(weights.sum())
    rng = np.random.Generator(
        np.random.Philox(key=np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(1)]))
    )
    ranks = rng.integers(0, total, size=int(trials))
    cum = np.cumsum(weights)
    best = np.inf
    witness = None
    skipped = 0
    evaluated = 0
    cache = {}
    for r in ranks:
        ci = int(np.searchsorted(cum, r, side="right"))
        l, s, _ = classes[ci]
        within = int(r - (cum[ci] - weights[ci]))
        n_s_choices = math.comb(n - l, s)
        L = _unrank_combination(within // n_s_choices, U_sorted, l)
        if L not in cache:
            r2_L = regression.r_squared(model, target, L)
            cand = tuple(i for i in range(n) if i not in L)
            gains = {
                i: regression.r_squared(model, target, L + (i,)) - r2_L for i in cand
            }
            cache[L] = (r2_L, cand, gains)
        r2_L, cand, gains = cache[L]
        S = _unrank_combination(within % n_s_choices, cand, s)
        denom = regression.r_squared(model, target, L + S) - r2_L
        if denom <= DENOM_TOL:
            skipped += 1
            continue
        evaluated += 1
        num = max(sum(gains[i] for i in S), 0.0)
        val = num / denom
        if val < best:
            best = val
            witness = (L, S)
    return RatioReport(
        U=U,
        k=int(k),
        gamma=float(best),
        witness=witness,
        mode="sampled",
        skipped_pairs=skipped,
        evaluated_pairs=evaluated,
        trials=int(trials),
        seed=int(seed),
    )
