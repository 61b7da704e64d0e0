"""The R-squared objective and residual (partial-correlation) machinery.

R2(S) = b_S' C_S^{-1} b_S under unit-variance normalization. Singular C_S is
handled by the eigen-pseudo-inverse at a relative tolerance, so greedy loops
stay total on collinear data.
"""

from dataclasses import dataclass

import numpy as np

from . import numerics
from .errors import TargetExplainedError
from .model import CovarianceModel

# Residual variances at or below this are treated as fully explained.
DEGENERATE_VAR = 1e-10


@dataclass(frozen=True)
class FitResult:
    """Least-squares fit of the target on the variables in `subset`."""

    subset: tuple
    coefficients: np.ndarray
    r2: float


def _subset_tuple(S):
    return tuple(sorted(int(i) for i in set(S)))


def fit(model, target, S):
    """Optimal regression coefficients C_S^{-1} b_S and the resulting R2."""
    S = _subset_tuple(S)
    b = model.target_vector(target)
    if not S:
        return FitResult(subset=(), coefficients=np.zeros(0), r2=0.0)
    CS = numerics.submatrix(model.C, S)
    bS = numerics.subvector(b, S)
    alpha = numerics.solve_spd(CS, bS)
    raw = float(bS @ alpha)
    return FitResult(subset=S, coefficients=alpha, r2=min(max(raw, 0.0), 1.0))


def r_squared(model, target, S):
    """Squared multiple correlation of the target with the subset S.

    Returns 0 for the empty set; clamped to [0, 1].
    """
    return fit(model, target, S).r2


def residual_variance(model, target, S):
    """Variance of the target residual after regressing on S: 1 - R2(S)."""
    return min(max(1.0 - r_squared(model, target, S), 0.0), 1.0)


def residual_target_cov(model, target, S, j):
    """Covariance of the target residual (after S) with variable j not in S."""
    S = _subset_tuple(S)
    j = int(j)
    if j in S:
        raise ValueError(f"index {j} is already in the conditioning set")
    b = model.target_vector(target)
    if not S:
        return float(b[j])
    CS = numerics.submatrix(model.C, S)
    bS = numerics.subvector(b, S)
    cjS = model.C[j, list(S)]
    return float(b[j] - cjS @ numerics.solve_spd(CS, bS))


def augmented_matrix(model, target):
    """(n+1) x (n+1) correlation matrix of (target, X_1, ..., X_n)."""
    b = model.target_vector(target)
    n = model.n
    A = np.empty((n + 1, n + 1))
    A[0, 0] = 1.0
    A[0, 1:] = b
    A[1:, 0] = b
    A[1:, 1:] = model.C
    return A


@dataclass(frozen=True)
class ResidualModel:
    """Renormalized model of the residuals after conditioning on a set L.

    kept[i] is the original index of the i-th variable of `model`; variables
    whose residual variance fell at or below DEGENERATE_VAR were dropped and
    are listed in `dropped`.
    """

    model: CovarianceModel
    target: str
    kept: tuple
    dropped: tuple
    conditioned_on: tuple


def residual_model(model, target, L):
    """Correlation model of {Res(X_i, L)} with target Res(Z, L).

    Raises TargetExplainedError when L already explains the target, in which
    case ratio computations must treat L as already optimal.
    """
    L = _subset_tuple(L)
    b = model.target_vector(target)
    C = model.C
    n = model.n
    if not L:
        M = C.copy()
        bt = b.copy()
        var_z = 1.0
    else:
        CL = numerics.submatrix(C, L)
        Lid = list(L)
        K = np.column_stack(
            [numerics.solve_spd(CL, C[Lid, j]) for j in range(n)]
        )  # C_L^{-1} C_{L,:}
        M = C - C[:, Lid] @ K
        M = (M + M.T) / 2.0
        bt = b - C[:, Lid] @ numerics.solve_spd(CL, b[Lid])
        var_z = residual_variance(model, target, L)
    if var_z <= DEGENERATE_VAR:
        raise TargetExplainedError(
            f"conditioning set {L} leaves target variance {var_z:.3e}"
        )
    kept = tuple(
        i for i in range(n) if i not in L and M[i, i] > DEGENERATE_VAR
    )
    dropped = tuple(i for i in range(n) if i not in L and i not in kept)
    idx = list(kept)
    scale = 1.0 / np.sqrt(np.diag(M)[idx])
    Cp = M[np.ix_(idx, idx)] * scale[:, None] * scale[None, :]
    np.fill_diagonal(Cp, 1.0)
    # borderline residual variances amplify rounding; keep correlations legal
    np.clip(Cp, -1.0, 1.0, out=Cp)
    bp = bt[idx] * scale / np.sqrt(var_z)
    np.clip(bp, -1.0, 1.0, out=bp)
    sub = CovarianceModel(
        names=tuple(model.names[i] for i in kept),
        C=Cp,
        targets=((target, bp),),
    )
    return ResidualModel(
        model=sub, target=target, kept=kept, dropped=dropped, conditioned_on=L
    )
