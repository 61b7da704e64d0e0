import numpy as np
import pytest

from greedyselect.errors import DimensionError, InvalidMatrixError
from greedyselect.numerics import (
    as_sym_matrix,
    eig_sym,
    solve_spd,
    submatrix,
    subvector,
)

from conftest import random_correlation


class TestEigSym:
    def test_identity(self):
        dec = eig_sym(np.eye(3))
        np.testing.assert_allclose(dec.values, [1.0, 1.0, 1.0], atol=1e-12)

    def test_diagonal(self):
        dec = eig_sym(np.diag([0.5, 2.0]))
        np.testing.assert_allclose(dec.values, [0.5, 2.0], atol=1e-12)

    def test_equicorrelated(self):
        # eigenvector (1,1,1) gets 1 + 2*rho, the complement gets 1 - rho
        m = np.full((3, 3), 0.5)
        np.fill_diagonal(m, 1.0)
        dec = eig_sym(m)
        np.testing.assert_allclose(dec.values, [0.5, 0.5, 2.0], atol=1e-12)

    def test_invariants_on_random(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            m = random_correlation(rng, 6)
            dec = eig_sym(m)
            scale = max(1.0, abs(dec.lam_max))
            assert np.all(np.diff(dec.values) >= 0)
            for i in range(6):
                resid = m @ dec.vectors[:, i] - dec.values[i] * dec.vectors[:, i]
                assert np.linalg.norm(resid) <= 1e-8 * scale
            gram = dec.vectors.T @ dec.vectors
            assert np.abs(gram - np.eye(6)).max() <= 1e-8
            recon = (dec.vectors * dec.values) @ dec.vectors.T
            assert np.abs(recon - m).max() <= 1e-7 * scale

    def test_deterministic(self):
        rng = np.random.default_rng(7)
        m = random_correlation(rng, 5)
        a = eig_sym(m)
        b = eig_sym(m.copy())
        assert np.array_equal(a.values, b.values)
        assert np.array_equal(a.vectors, b.vectors)

    def test_rejects_nonfinite(self):
        with pytest.raises(InvalidMatrixError):
            eig_sym([[1.0, np.nan], [np.nan, 1.0]])

    def test_rejects_nonsquare(self):
        with pytest.raises(InvalidMatrixError):
            as_sym_matrix(np.ones((2, 3)))


class TestSolveSpd:
    def test_identity(self):
        x = solve_spd(np.eye(2), [3.0, -1.0])
        np.testing.assert_allclose(x, [3.0, -1.0], atol=1e-14)

    def test_two_by_two_closed_form(self):
        # independent closed-form inverse gives (7/15, 4/15)
        x = solve_spd([[1.0, 0.5], [0.5, 1.0]], [0.6, 0.5])
        np.testing.assert_allclose(x, [7.0 / 15.0, 4.0 / 15.0], atol=1e-12)

    def test_singular_minimum_norm(self):
        x = solve_spd([[1.0, 1.0], [1.0, 1.0]], [1.0, 1.0])
        np.testing.assert_allclose(x, [0.5, 0.5], atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            solve_spd(np.eye(3), [1.0, 2.0])

    def test_residual_on_random(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            m = random_correlation(rng, 7)
            rhs = rng.standard_normal(7)
            x = solve_spd(m, rhs)
            assert np.linalg.norm(m @ x - rhs) <= 1e-8 * np.linalg.norm(rhs)


class TestSubmatrix:
    def test_identity_restriction(self):
        np.testing.assert_array_equal(submatrix(np.eye(3), (0, 2)), np.eye(2))

    def test_reference_extraction(self):
        C = np.array([[1.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, 1.0]])
        np.testing.assert_array_equal(
            submatrix(C, (0, 1)), [[1.0, 0.5], [0.5, 1.0]]
        )

    def test_subvector(self):
        np.testing.assert_array_equal(subvector([0.6, 0.5, 0.4], (2,)), [0.4])

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            submatrix(np.eye(3), (0, 3))
        with pytest.raises(IndexError):
            subvector([1.0, 2.0], (-7,))

    def test_not_increasing(self):
        with pytest.raises(ValueError):
            submatrix(np.eye(3), (2, 0))


def test_interlacing_on_random_instances():
    # eigenvalues of any principal submatrix interlace the full spectrum
    rng = np.random.default_rng(5)
    for _ in range(25):
        m = random_correlation(rng, 6)
        full = eig_sym(m).values
        size = int(rng.integers(1, 6))
        idx = tuple(sorted(rng.choice(6, size=size, replace=False)))
        sub = eig_sym(submatrix(m, idx)).values
        for i in range(size):
            assert full[i] <= sub[i] + 1e-9
            assert sub[i] <= full[i + 6 - size] + 1e-9
