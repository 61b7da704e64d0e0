import numpy as np
import pytest

from greedyselect import from_matrices


def random_correlation(rng, dim, extra=6):
    """Random full-rank correlation matrix (normalized Wishart)."""
    a = rng.standard_normal((dim, dim + extra))
    g = a @ a.T
    d = 1.0 / np.sqrt(np.diag(g))
    return g * d[:, None] * d[None, :]


def random_model(rng, n, extra=6):
    """Model drawn from a consistent joint distribution of (Z, X_1..X_n).

    Building the (n+1)-dim correlation matrix first guarantees R2 <= 1 and
    keeps every subset's covariance genuinely realizable.
    """
    g = random_correlation(rng, n + 1, extra)
    return from_matrices(g[1:, 1:], [("z", g[1:, 0])])


def random_multi_model(rng, n, s, extra=6):
    """Model with s targets sharing one observation pool."""
    g = random_correlation(rng, n + s, extra)
    C = g[s:, s:]
    targets = [(f"z{j}", g[s:, j]) for j in range(s)]
    return from_matrices(C, targets)


@pytest.fixture
def i3a():
    """3-variable reference instance: C_01 = 0.5, X_2 independent."""
    return from_matrices(
        [[1.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, 1.0]],
        [("z", [0.6, 0.5, 0.4])],
    )


@pytest.fixture
def i2b():
    """Suppressor instance: second variable useless alone, useful jointly."""
    return from_matrices([[1.0, 0.5], [0.5, 1.0]], [("z", [0.5, 0.0])])


@pytest.fixture
def diag4():
    """Independent variables; R2 is exactly modular here."""
    return from_matrices(np.eye(4), [("z", [0.6, 0.5, 0.4, 0.3])])
