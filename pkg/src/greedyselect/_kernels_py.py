"""Pure-numpy fallback for the compiled enumeration kernels.

Semantics match greedyselect._kernels exactly: same zero-pivot Cholesky
convention, same skip rules, and lexicographically-first tie-breaks. Batched
evaluation keeps it usable when the extension is unavailable, at a constant
factor over the compiled core (see benchmarks/bench_kernels.py).
"""

import itertools

import numpy as np

MAX_DIM = None  # no hard dimension cap in the numpy path
COMPILED = False

PIVOT_TOL = 1e-12
_CHUNK = 8192


def _batched_chol_z(Cg, bg, tol=PIVOT_TOL):
    """Semidefinite Cholesky of a (B, t, t) stack; returns z = L^-1 b.

    Pivots at or below tol are zeroed, so linearly dependent variables
    contribute nothing (minimum-norm convention on consistent systems).
    """
    B, t, _ = Cg.shape
    L = np.zeros((B, t, t))
    z = np.zeros((B, t))
    for i in range(t):
        for j in range(i):
            s = Cg[:, i, j] - np.einsum("bm,bm->b", L[:, i, :j], L[:, j, :j])
            piv = L[:, j, j]
            safe = np.where(piv > 0.0, piv, 1.0)
            L[:, i, j] = np.where(piv > 0.0, s / safe, 0.0)
        d = Cg[:, i, i] - np.einsum("bm,bm->b", L[:, i, :i], L[:, i, :i])
        ok = d > tol
        L[:, i, i] = np.where(ok, np.sqrt(np.where(ok, d, 1.0)), 0.0)
        s = bg[:, i] - np.einsum("bm,bm->b", L[:, i, :i], z[:, :i])
        z[:, i] = np.where(ok, s / np.where(ok, L[:, i, i], 1.0), 0.0)
    return z


def _combo_chunks(items, size, chunk):
    it = itertools.combinations(items, size)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            return
        yield np.asarray(block, dtype=np.int64)


def _gather(C, subs):
    return C[subs[:, :, None], subs[:, None, :]]


def best_r2_scan(C, b, k):
    """Maximize b_S' C_S^{-1} b_S over size-k subsets; lex-first tie-break."""
    C = np.asarray(C, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    n = C.shape[0]
    if k < 1 or k > n:
        raise ValueError("k out of range")
    best = -1.0
    best_sub = None
    evaluated = 0
    for subs in _combo_chunks(range(n), k, _CHUNK):
        z = _batched_chol_z(_gather(C, subs), b[subs])
        r2 = np.einsum("bm,bm->b", z, z)
        evaluated += len(subs)
        i = int(np.argmax(r2))
        if r2[i] > best:
            best = float(r2[i])
            best_sub = tuple(int(v) for v in subs[i])
    return best, best_sub, evaluated


def eig_range_scan(C, k):
    """Extreme eigenvalues over k x k principal submatrices (see kernels)."""
    C = np.asarray(C, dtype=np.float64)
    n = C.shape[0]
    if k < 1 or k > n:
        raise ValueError("k out of range")
    cur_min = np.inf
    cur_max = -np.inf
    cur_kap = -np.inf
    min_sub = max_sub = kap_sub = None
    for subs in _combo_chunks(range(n), k, _CHUNK):
        w = np.linalg.eigvalsh(_gather(C, subs))
        lo = w[:, 0]
        hi = w[:, -1]
        ratio = np.where(lo > 0.0, hi / np.where(lo > 0.0, lo, 1.0), np.inf)
        i = int(np.argmin(lo))
        if lo[i] < cur_min:
            cur_min = float(lo[i])
            min_sub = tuple(int(v) for v in subs[i])
        i = int(np.argmax(hi))
        if hi[i] > cur_max:
            cur_max = float(hi[i])
            max_sub = tuple(int(v) for v in subs[i])
        i = int(np.argmax(ratio))
        if ratio[i] > cur_kap:
            cur_kap = float(ratio[i])
            kap_sub = tuple(int(v) for v in subs[i])
    return cur_min, min_sub, cur_max, max_sub, cur_kap, kap_sub


def lam_extreme_scan(C, k, want_max):
    """One extreme eigenvalue over k x k principal submatrices."""
    C = np.asarray(C, dtype=np.float64)
    n = C.shape[0]
    if k < 1 or k > n:
        raise ValueError("k out of range")
    cur = -np.inf if want_max else np.inf
    best_sub = None
    for subs in _combo_chunks(range(n), k, _CHUNK):
        w = np.linalg.eigvalsh(_gather(C, subs))
        col = w[:, -1] if want_max else w[:, 0]
        i = int(np.argmax(col) if want_max else np.argmin(col))
        if (want_max and col[i] > cur) or (not want_max and col[i] < cur):
            cur = float(col[i])
            best_sub = tuple(int(v) for v in subs[i])
    return cur, best_sub


def ratio_scan(C, b, L, cand, gains, k, denom_tol, prune_floor):
    """Minimum gain ratio over nonempty S subsets of cand with |S| <= k.

    Mirrors the compiled kernel: the denominator R2(L u S) - R2(L) is the
    suffix sum of z^2 past the L prefix, skipped pairs are counted, and exact
    ties resolve to the lexicographically smallest S tuple.
    """
    C = np.asarray(C, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    L = np.asarray(L, dtype=np.int64)
    cand = np.asarray(cand, dtype=np.int64)
    gains = np.asarray(gains, dtype=np.float64)
    nl = len(L)
    nc = len(cand)
    best = np.inf
    best_sub = ()
    skipped = 0
    evaluated = 0
    for size in range(1, min(k, nc) + 1):
        for pos in _combo_chunks(range(nc), size, _CHUNK):
            B = len(pos)
            T = np.concatenate([np.broadcast_to(L, (B, nl)), cand[pos]], axis=1)
            z = _batched_chol_z(_gather(C, T), b[T])
            r2_total = np.einsum("bm,bm->b", z, z)
            denom = np.einsum("bm,bm->b", z[:, nl:], z[:, nl:])
            num = np.maximum(gains[pos].sum(axis=1), 0.0)
            pruned = r2_total <= prune_floor
            degen = ~pruned & (denom <= denom_tol)
            valid = ~pruned & ~degen
            skipped += int(pruned.sum() + degen.sum())
            evaluated += int(valid.sum())
            if not valid.any():
                continue
            vals = np.where(valid, num / np.where(valid, denom, 1.0), np.inf)
            i = int(np.argmin(vals))
            sub = tuple(int(v) for v in cand[pos[i]])
            if vals[i] < best or (vals[i] == best and sub < best_sub):
                best = float(vals[i])
                best_sub = sub
    return best, best_sub, skipped, evaluated
