"""Dense symmetric linear algebra for small matrices (n <= 64 by design).

Everything operates on plain float64 numpy arrays. Symmetric inputs are
accepted once symmetrized through :func:`as_sym_matrix`; decompositions and
solves are deterministic for identical inputs.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InvalidMatrixError

# Relative eigenvalue threshold below which a matrix is treated as singular
# and solved through the eigen-pseudo-inverse (minimum-norm solution).
DEFAULT_REL_TOL = 1e-10


@dataclass(frozen=True)
class EigDecomposition:
    """Eigenvalues in nondecreasing order; vectors[:, i] pairs with values[i]."""

    values: np.ndarray
    vectors: np.ndarray

    @property
    def lam_min(self):
        return float(self.values[0])

    @property
    def lam_max(self):
        return float(self.values[-1])


def as_sym_matrix(entries):
    """Validate and symmetrize a square matrix.

    Returns a float64 array equal to (A + A.T) / 2, so entries[i, j] and
    entries[j, i] agree exactly. Raises InvalidMatrixError on non-square
    or non-finite input.
    """
    m = np.array(entries, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise InvalidMatrixError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidMatrixError("matrix contains non-finite entries")
    return (m + m.T) / 2.0


def as_vector(entries, dim=None):
    """Validate a finite 1-d float64 vector, optionally of a fixed dimension."""
    v = np.array(entries, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise InvalidMatrixError(f"expected a nonempty vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InvalidMatrixError("vector contains non-finite entries")
    if dim is not None and v.size != dim:
        raise DimensionError(f"expected dimension {dim}, got {v.size}")
    return v


def eig_sym(m):
    """Full symmetric eigendecomposition, eigenvalues ascending.

    Backed by LAPACK's symmetric solver (numpy.linalg.eigh), which meets the
    contract: ascending eigenvalues, orthonormal eigenvectors, deterministic
    output for identical input.
    """
    m = as_sym_matrix(m)
    values, vectors = np.linalg.eigh(m)
    return EigDecomposition(values=values, vectors=vectors)


def solve_spd(m, rhs, rel_tol=DEFAULT_REL_TOL):
    """Solve m @ x = rhs for symmetric positive (semi)definite m.

    If any eigenvalue falls at or below rel_tol times the largest absolute
    eigenvalue, the system is treated as singular and the minimum-norm
    least-squares solution is returned via the eigen-pseudo-inverse.
    """
    m = as_sym_matrix(m)
    rhs = as_vector(rhs)
    if rhs.size != m.shape[0]:
        raise DimensionError(
            f"matrix is {m.shape[0]}x{m.shape[0]} but rhs has size {rhs.size}"
        )
    values, vectors = np.linalg.eigh(m)
    lam_max = float(np.max(np.abs(values)))
    if lam_max == 0.0:
        return np.zeros_like(rhs)
    coeffs = vectors.T @ rhs
    keep = values > rel_tol * lam_max
    inv = np.zeros_like(values)
    inv[keep] = 1.0 / values[keep]
    return vectors @ (coeffs * inv)


def submatrix(m, idx):
    """Principal submatrix on the strictly increasing index tuple idx."""
    m = np.asarray(m, dtype=np.float64)
    idx = _check_indices(idx, m.shape[0])
    return m[np.ix_(idx, idx)]


def subvector(v, idx):
    """Vector restriction to the strictly increasing index tuple idx."""
    v = np.asarray(v, dtype=np.float64)
    idx = _check_indices(idx, v.shape[0])
    return v[idx]


def _check_indices(idx, n):
    idx = list(idx)
    for i in idx:
        if not 0 <= int(i) < n:
            raise IndexError(f"index {i} out of range for dimension {n}")
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValueError(f"indices must be strictly increasing, got {idx}")
    return np.asarray(idx, dtype=np.intp)
