# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels.

Hot loops shared by exhaustive subset search, sparse-eigenvalue scans and
submodularity-ratio scans. A pure-numpy twin lives in _kernels_py; the
kernels module picks whichever is importable. Dimensions are capped at 64
(the package's design envelope), which keeps all scratch on the stack.
"""

from libc.math cimport INFINITY, fabs, sqrt

cdef enum:
    MAXN = 64

# Cholesky pivots at or below this are treated as zero (unit-diagonal input),
# matching the semidefinite convention of the numpy twin.
cdef double PIVOT_TOL = 1e-12

MAX_DIM = MAXN
COMPILED = True


# ---------------------------------------------------------------------------
# symmetric eigenvalues via cyclic Jacobi (values only, matrix destroyed)

cdef void _jacobi_values(double* A, int k, double* w) noexcept nogil:
    # classic upper-triangle rotation scheme; only r <= c entries are touched
    cdef int r, p, q, sweep
    cdef double off, apq, theta, t, c, s, tau, g, h, fnorm, tmp
    if k == 1:
        w[0] = A[0]
        return
    fnorm = 0.0
    for p in range(k):
        for q in range(p, k):
            fnorm += A[p * k + q] * A[p * k + q]
    fnorm = sqrt(2.0 * fnorm)
    if fnorm == 0.0:
        for p in range(k):
            w[p] = 0.0
        return
    for sweep in range(60):
        off = 0.0
        for p in range(k - 1):
            for q in range(p + 1, k):
                off += A[p * k + q] * A[p * k + q]
        if off <= (1e-15 * fnorm) * (1e-15 * fnorm):
            break
        for p in range(k - 1):
            for q in range(p + 1, k):
                apq = A[p * k + q]
                if fabs(apq) <= 1e-18 * fnorm:
                    continue
                theta = (A[q * k + q] - A[p * k + p]) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + sqrt(1.0 + theta * theta))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                tau = s / (1.0 + c)
                h = t * apq
                A[p * k + p] -= h
                A[q * k + q] += h
                A[p * k + q] = 0.0
                for r in range(p):
                    g = A[r * k + p]
                    h = A[r * k + q]
                    A[r * k + p] = g - s * (h + g * tau)
                    A[r * k + q] = h + s * (g - h * tau)
                for r in range(p + 1, q):
                    g = A[p * k + r]
                    h = A[r * k + q]
                    A[p * k + r] = g - s * (h + g * tau)
                    A[r * k + q] = h + s * (g - h * tau)
                for r in range(q + 1, k):
                    g = A[p * k + r]
                    h = A[q * k + r]
                    A[p * k + r] = g - s * (h + g * tau)
                    A[q * k + r] = h + s * (g - h * tau)
    for p in range(k):
        w[p] = A[p * k + p]
    # insertion sort ascending
    for p in range(1, k):
        tmp = w[p]
        q = p - 1
        while q >= 0 and w[q] > tmp:
            w[q + 1] = w[q]
            q -= 1
        w[q + 1] = tmp


# ---------------------------------------------------------------------------
# incremental semidefinite Cholesky of C[T, T] with running z = L^-1 b_T.
# R2 of the pushed prefix is the running sum of z_i^2; a zero pivot marks a
# linearly dependent push and contributes nothing (minimum-norm convention).

cdef void _chol_push(double* Lf, double* z, double* r2s, int t,
                     const double* C, const double* b, int n,
                     const int* sel, int j) noexcept nogil:
    cdef int i, m
    cdef double s, d, piv
    for i in range(t):
        s = C[sel[i] * n + j]
        for m in range(i):
            s -= Lf[i * MAXN + m] * Lf[t * MAXN + m]
        piv = Lf[i * MAXN + i]
        Lf[t * MAXN + i] = s / piv if piv > 0.0 else 0.0
    d = C[j * n + j]
    for m in range(t):
        d -= Lf[t * MAXN + m] * Lf[t * MAXN + m]
    if d > PIVOT_TOL:
        Lf[t * MAXN + t] = sqrt(d)
        s = b[j]
        for m in range(t):
            s -= Lf[t * MAXN + m] * z[m]
        z[t] = s / Lf[t * MAXN + t]
    else:
        Lf[t * MAXN + t] = 0.0
        z[t] = 0.0
    r2s[t + 1] = r2s[t] + z[t] * z[t]


def best_r2_scan(double[:, ::1] C, double[::1] b, int k):
    """Maximize b_S' C_S^{-1} b_S over all subsets of size k.

    Lexicographically first subset wins ties. Returns (r2, subset, evaluated).
    """
    cdef int n = C.shape[0]
    if n > MAXN:
        raise ValueError("kernel dimension cap exceeded")
    if k < 1 or k > n:
        raise ValueError("k out of range")
    cdef double Lf[MAXN * MAXN]
    cdef double z[MAXN]
    cdef double r2s[MAXN + 1]
    cdef int sel[MAXN]
    cdef int best_sel[MAXN]
    cdef double best = -1.0
    cdef long evaluated = 0
    cdef int d = 0, nxt = 0, i
    cdef const double* Cp = &C[0, 0]
    cdef const double* bp = &b[0]
    r2s[0] = 0.0
    with nogil:
        while True:
            if d < k and nxt <= n - (k - d):
                _chol_push(Lf, z, r2s, d, Cp, bp, n, sel, nxt)
                sel[d] = nxt
                d += 1
                if d == k:
                    evaluated += 1
                    if r2s[d] > best:
                        best = r2s[d]
                        for i in range(k):
                            best_sel[i] = sel[i]
                    d -= 1
                    nxt = sel[d] + 1
                else:
                    nxt = sel[d - 1] + 1
            else:
                if d == 0:
                    break
                d -= 1
                nxt = sel[d] + 1
    return float(best), tuple(best_sel[i] for i in range(k)), int(evaluated)


cdef inline bint _is_pd_shifted(const double* Cp, int n, const int* comb,
                                int k, double sign, double shift) noexcept nogil:
    """Cholesky feasibility of sign*C_S + shift*I with early abort."""
    cdef double Lf[MAXN * MAXN]
    cdef int i, j, m
    cdef double s, d
    for i in range(k):
        for j in range(i):
            s = sign * Cp[comb[i] * n + comb[j]]
            for m in range(j):
                s -= Lf[i * MAXN + m] * Lf[j * MAXN + m]
            Lf[i * MAXN + j] = s / Lf[j * MAXN + j]
        d = sign * Cp[comb[i] * n + comb[i]] + shift
        for m in range(i):
            d -= Lf[i * MAXN + m] * Lf[i * MAXN + m]
        if d <= 0.0:
            return False
        Lf[i * MAXN + i] = sqrt(d)
    return True


cdef double _extreme_scan(const double* Cp, int n, int k, bint want_max,
                          int* best_sel) noexcept nogil:
    """Exact extreme eigenvalue over k-subsets, lexicographically first tie.

    PD of C_S - cur*I certifies lam_min(S) > cur, PD of cur*I - C_S certifies
    lam_max(S) < cur; either way the submatrix cannot strictly improve the
    running extreme, so the eigensolver only runs on actual improvements.
    """
    cdef double A[MAXN * MAXN]
    cdef double w[MAXN]
    cdef int comb[MAXN]
    cdef double cur = -INFINITY if want_max else INFINITY
    cdef double sign = -1.0 if want_max else 1.0
    cdef double val
    cdef int i, a, t
    cdef bint skip
    for i in range(k):
        comb[i] = i
    while True:
        if cur == INFINITY or cur == -INFINITY:
            skip = False
        else:
            skip = _is_pd_shifted(Cp, n, comb, k, sign, -sign * cur)
        if not skip:
            for a in range(k):
                i = comb[a]
                for t in range(k):
                    A[a * k + t] = Cp[i * n + comb[t]]
            _jacobi_values(A, k, w)
            val = w[k - 1] if want_max else w[0]
            if (want_max and val > cur) or (not want_max and val < cur):
                cur = val
                for a in range(k):
                    best_sel[a] = comb[a]
        a = k - 1
        while a >= 0 and comb[a] == n - k + a:
            a -= 1
        if a < 0:
            break
        comb[a] += 1
        for t in range(a + 1, k):
            comb[t] = comb[t - 1] + 1
    return cur


cdef double _kappa_scan(const double* Cp, int n, int k, double lam_max_k,
                        int* best_sel) noexcept nogil:
    """Worst per-submatrix condition number, lexicographically first tie.

    Since lam_max(S) <= lam_max_k, PD of C_S - (lam_max_k/cur)*I certifies
    ratio(S) < cur strictly, which makes the skip exact.
    """
    cdef double A[MAXN * MAXN]
    cdef double w[MAXN]
    cdef int comb[MAXN]
    cdef double cur = -INFINITY
    cdef double ratio
    cdef int i, a, t
    cdef bint skip
    for i in range(k):
        comb[i] = i
    while True:
        if cur > 0.0:
            skip = _is_pd_shifted(Cp, n, comb, k, 1.0, -lam_max_k / cur)
        else:
            skip = False
        if not skip:
            for a in range(k):
                i = comb[a]
                for t in range(k):
                    A[a * k + t] = Cp[i * n + comb[t]]
            _jacobi_values(A, k, w)
            ratio = w[k - 1] / w[0] if w[0] > 0.0 else INFINITY
            if ratio > cur:
                cur = ratio
                for a in range(k):
                    best_sel[a] = comb[a]
        a = k - 1
        while a >= 0 and comb[a] == n - k + a:
            a -= 1
        if a < 0:
            break
        comb[a] += 1
        for t in range(a + 1, k):
            comb[t] = comb[t - 1] + 1
    return cur


def eig_range_scan(double[:, ::1] C, int k):
    """Extreme eigenvalues over all k x k principal submatrices.

    Returns (lam_min, argmin_subset, lam_max, argmax_subset, kappa,
    kappa_subset). Ties keep the lexicographically first subset.
    """
    cdef int n = C.shape[0]
    if n > MAXN:
        raise ValueError("kernel dimension cap exceeded")
    if k < 1 or k > n:
        raise ValueError("k out of range")
    cdef int min_sel[MAXN]
    cdef int max_sel[MAXN]
    cdef int kap_sel[MAXN]
    cdef double cur_min, cur_max, cur_kap
    cdef const double* Cp = &C[0, 0]
    with nogil:
        cur_min = _extreme_scan(Cp, n, k, False, min_sel)
        cur_max = _extreme_scan(Cp, n, k, True, max_sel)
        cur_kap = _kappa_scan(Cp, n, k, cur_max, kap_sel)
    return (
        float(cur_min),
        tuple(min_sel[i] for i in range(k)),
        float(cur_max),
        tuple(max_sel[i] for i in range(k)),
        float(cur_kap),
        tuple(kap_sel[i] for i in range(k)),
    )


def lam_extreme_scan(double[:, ::1] C, int k, bint want_max):
    """One extreme eigenvalue over all k x k principal submatrices.

    Exact value under the skip test of _extreme_scan; lexicographically first
    extremal subset wins, as in eig_range_scan. Returns (value, subset).
    """
    cdef int n = C.shape[0]
    if n > MAXN:
        raise ValueError("kernel dimension cap exceeded")
    if k < 1 or k > n:
        raise ValueError("k out of range")
    cdef int best_sel[MAXN]
    cdef double cur
    cdef const double* Cp = &C[0, 0]
    with nogil:
        cur = _extreme_scan(Cp, n, k, want_max, best_sel)
    return float(cur), tuple(best_sel[i] for i in range(k))


def ratio_scan(double[:, ::1] C, double[::1] b, long[::1] L, long[::1] cand,
               double[::1] gains, int k, double denom_tol, double prune_floor):
    """Scan nonempty S subsets of cand (|S| <= k) for the minimum gain ratio.

    The conditioning set L is pushed as a Cholesky prefix; for each S the
    denominator R2(L u S) - R2(L) is the exact suffix sum of z^2 terms, and
    the numerator is the sum of the caller-supplied per-candidate gains.
    Pairs with R2(L u S) <= prune_floor or denominator <= denom_tol are
    skipped and counted. Returns (ratio, S_values, skipped, evaluated) with
    ratio = inf and S empty when nothing was evaluated.
    """
    cdef int n = C.shape[0]
    cdef int nl = L.shape[0]
    cdef int nc = cand.shape[0]
    if n > MAXN:
        raise ValueError("kernel dimension cap exceeded")
    if nl + k > MAXN:
        raise ValueError("conditioning set plus k exceeds dimension cap")
    cdef double Lf[MAXN * MAXN]
    cdef double z[MAXN]
    cdef double r2s[MAXN + 1]
    cdef double numer[MAXN + 1]
    cdef int sel[MAXN]
    cdef int spos[MAXN]
    cdef int best_pos[MAXN]
    cdef int best_len = 0
    cdef double best = INFINITY
    cdef long skipped = 0, evaluated = 0
    cdef int d = 0, nxt = 0, i
    cdef double r2_base, denom, num, ratio
    cdef const double* Cp = &C[0, 0]
    cdef const double* bp = &b[0]
    r2s[0] = 0.0
    for i in range(nl):
        sel[i] = <int> L[i]
        _chol_push(Lf, z, r2s, i, Cp, bp, n, sel, sel[i])
    r2_base = r2s[nl]
    numer[0] = 0.0
    with nogil:
        while True:
            if d < k and nxt < nc:
                _chol_push(Lf, z, r2s, nl + d, Cp, bp, n, sel, <int> cand[nxt])
                sel[nl + d] = <int> cand[nxt]
                spos[d] = nxt
                numer[d + 1] = numer[d] + gains[nxt]
                d += 1
                # visit the current (L, S)
                if r2s[nl + d] <= prune_floor:
                    skipped += 1
                else:
                    denom = r2s[nl + d] - r2_base
                    if denom <= denom_tol:
                        skipped += 1
                    else:
                        evaluated += 1
                        num = numer[d]
                        if num < 0.0:
                            num = 0.0
                        ratio = num / denom
                        if ratio < best:
                            best = ratio
                            best_len = d
                            for i in range(d):
                                best_pos[i] = spos[i]
                nxt = spos[d - 1] + 1
            else:
                if d == 0:
                    break
                d -= 1
                nxt = spos[d] + 1
    return (
        float(best),
        tuple(int(cand[best_pos[i]]) for i in range(best_len)),
        int(skipped),
        int(evaluated),
    )
