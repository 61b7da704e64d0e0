import math

import numpy as np
import pytest

from greedyselect.errors import BudgetError
from greedyselect.model import from_matrices
from greedyselect.regression import r_squared, residual_model
from greedyselect.selection import forward_regression
from greedyselect.spectral import sparse_eig_min
from greedyselect.submodularity import ratio_exact, ratio_pruned, ratio_sampled

from conftest import random_model


class TestExact:
    def test_diagonal_is_one(self, diag4):
        rep = ratio_exact(diag4, "z", (0, 1), 2)
        assert rep.gamma == pytest.approx(1.0, abs=1e-12)

    def test_suppressor_reference(self, i2b):
        rep = ratio_exact(i2b, "z", (), 2)
        assert rep.gamma == pytest.approx(0.75, abs=1e-12)
        assert rep.witness == ((), (0, 1))
        assert rep.skipped_pairs == 1  # the zero-denominator singleton {1}
        assert rep.evaluated_pairs == 2

    def test_reference_no_suppressors(self, i3a):
        rep = ratio_exact(i3a, "z", (), 2)
        assert rep.gamma == pytest.approx(1.0, abs=1e-12)

    def test_budget(self, i3a):
        with pytest.raises(BudgetError):
            ratio_exact(i3a, "z", (), 2, cap=3)

    def test_u_too_large(self):
        rng = np.random.default_rng(1)
        m = random_model(rng, 14)
        with pytest.raises(BudgetError):
            ratio_exact(m, "z", tuple(range(13)), 1)


class TestPruned:
    def test_eps_zero_matches_exact_on_suppressor(self, i2b):
        rep = ratio_pruned(i2b, "z", (), 2, eps=0.0)
        assert rep.gamma == pytest.approx(0.75, abs=1e-12)

    def test_saturated_pruning_reports_inf_sentinel(self):
        # every pair lands at or below the floor, so the report signals that
        # the probed sets cannot improve the greedy fit
        m = from_matrices(np.eye(3), [("z", [0.0, 0.0, 0.0])])
        rep = ratio_pruned(m, "z", (), 2, eps=10.0)
        assert rep.gamma == math.inf
        assert rep.witness is None
        assert rep.evaluated_pairs == 0
        assert rep.skipped_pairs == 6  # C(3,1) + C(3,2) pairs, all skipped

    def test_large_eps_leaves_empty_floor_pairs(self, i2b):
        # with L = {} the floor (1+eps)*R2({}) is zero, so positive-R2 pairs
        # always survive no matter how large eps is
        rep = ratio_pruned(i2b, "z", (), 2, eps=10.0)
        assert rep.gamma == pytest.approx(0.75, abs=1e-12)

    def test_requires_fr_chain(self, i3a):
        fr = forward_regression(i3a, "z", 2).order
        ratio_pruned(i3a, "z", fr, 2, eps=0.2)  # the valid chain passes
        with pytest.raises(ValueError):
            ratio_pruned(i3a, "z", (1, 0), 2, eps=0.2)

    def test_at_least_exact(self):
        rng = np.random.default_rng(107)
        for _ in range(10):
            m = random_model(rng, 6)
            k = int(rng.integers(2, 4))
            u = forward_regression(m, "z", k).order
            exact = ratio_exact(m, "z", u, k).gamma
            pruned = ratio_pruned(m, "z", u, k, eps=0.2).gamma
            assert pruned >= exact - 1e-9


class TestSampled:
    def test_covers_tiny_instance(self, i2b):
        rep = ratio_sampled(i2b, "z", (), 2, trials=200, seed=3)
        assert rep.gamma == pytest.approx(0.75, abs=1e-12)

    def test_deterministic(self, i3a):
        a = ratio_sampled(i3a, "z", (0,), 2, trials=50, seed=9)
        b = ratio_sampled(i3a, "z", (0,), 2, trials=50, seed=9)
        assert a == b

    def test_upper_bounds_exact(self):
        rng = np.random.default_rng(109)
        for _ in range(10):
            m = random_model(rng, 6)
            k = int(rng.integers(2, 4))
            u = tuple(sorted(int(i) for i in rng.choice(6, size=2, replace=False)))
            exact = ratio_exact(m, "z", u, k).gamma
            sampled = ratio_sampled(m, "z", u, k, trials=100, seed=11).gamma
            assert sampled >= exact - 1e-9


class TestInvariants:
    def test_supermod_lower_bound(self):
        # gamma(U, k) >= lam_min(C, k + |U|)
        rng = np.random.default_rng(113)
        for _ in range(15):
            n = int(rng.integers(4, 8))
            m = random_model(rng, n)
            k = int(rng.integers(1, 4))
            u_size = int(rng.integers(0, min(3, n - k) + 1))
            u = tuple(sorted(int(i) for i in rng.choice(n, size=u_size, replace=False)))
            gamma = ratio_exact(m, "z", u, k).gamma
            lam = sparse_eig_min(m, min(k + u_size, n)).lam_min_k
            assert gamma >= lam - 1e-8

    def test_matrix_form_cross_check(self):
        # Definition's renormalized-residual form agrees with R2 differences
        rng = np.random.default_rng(127)
        for _ in range(10):
            n = int(rng.integers(4, 8))
            m = random_model(rng, n)
            L = tuple(sorted(int(i) for i in rng.choice(n, size=2, replace=False)))
            rm = residual_model(m, "z", L)
            take = int(rng.integers(1, min(3, len(rm.kept)) + 1))
            pos = tuple(sorted(rng.choice(len(rm.kept), size=take, replace=False).tolist()))
            S = tuple(rm.kept[i] for i in pos)
            r2_L = r_squared(m, "z", L)
            num = sum(r_squared(m, "z", L + (i,)) - r2_L for i in S)
            den = r_squared(m, "z", L + S) - r2_L
            if den <= 1e-9:
                continue
            bp = rm.model.target_vector("z")[list(pos)]
            Cp = rm.model.C[np.ix_(list(pos), list(pos))]
            mat_num = float(bp @ bp)
            mat_den = float(bp @ np.linalg.solve(Cp, bp))
            assert num / den == pytest.approx(mat_num / mat_den, abs=1e-7)

    def test_nonnegative(self):
        rng = np.random.default_rng(131)
        for _ in range(10):
            m = random_model(rng, 5)
            rep = ratio_exact(m, "z", (0,), 2)
            assert rep.gamma >= 0.0
