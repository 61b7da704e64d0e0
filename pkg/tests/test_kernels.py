"""Compiled extension vs numpy fallback: identical selections and matching
values on the same inputs."""

import numpy as np
import pytest

from greedyselect import _kernels_py, kernels

from conftest import random_correlation, random_model

compiled = pytest.importorskip("greedyselect._kernels")


def _instance(seed, n=8):
    rng = np.random.default_rng(seed)
    m = random_model(rng, n)
    return m.C, m.target_vector("z")


@pytest.mark.parametrize("seed", [0, 1, 2])
@pytest.mark.parametrize("k", [1, 3, 5])
def test_best_r2_backends_agree(seed, k):
    C, b = _instance(seed)
    rc = compiled.best_r2_scan(np.ascontiguousarray(C), np.ascontiguousarray(b), k)
    rp = _kernels_py.best_r2_scan(C, b, k)
    assert tuple(rc[1]) == tuple(rp[1])
    assert rc[0] == pytest.approx(rp[0], abs=1e-10)
    assert rc[2] == rp[2]


@pytest.mark.parametrize("seed", [3, 4])
@pytest.mark.parametrize("k", [1, 2, 4, 7])
def test_eig_scans_agree(seed, k):
    C, _ = _instance(seed)
    C = np.ascontiguousarray(C)
    rc = compiled.eig_range_scan(C, k)
    rp = _kernels_py.eig_range_scan(C, k)
    assert rc[0] == pytest.approx(rp[0], abs=1e-9)
    assert tuple(rc[1]) == tuple(rp[1])
    assert rc[2] == pytest.approx(rp[2], abs=1e-9)
    assert tuple(rc[3]) == tuple(rp[3])
    assert rc[4] == pytest.approx(rp[4], rel=1e-7)
    for want_max in (False, True):
        ec = compiled.lam_extreme_scan(C, k, want_max)
        ep = _kernels_py.lam_extreme_scan(C, k, want_max)
        assert ec[0] == pytest.approx(ep[0], abs=1e-9)
        assert tuple(ec[1]) == tuple(ep[1])


@pytest.mark.parametrize("seed", [5, 6])
def test_ratio_scans_agree(seed):
    C, b = _instance(seed)
    rng = np.random.default_rng(seed + 100)
    for L in [(), (1,), (0, 4)]:
        cand = np.array([i for i in range(8) if i not in L], dtype=np.int64)
        # plausible gains: singleton improvements over the prefix
        r2L = 0.0 if not L else float(
            b[list(L)] @ np.linalg.solve(C[np.ix_(list(L), list(L))], b[list(L)])
        )
        gains = []
        for i in cand:
            T = sorted(L + (int(i),))
            gains.append(
                float(b[T] @ np.linalg.solve(C[np.ix_(T, T)], b[T])) - r2L
            )
        gains = np.array(gains)
        Larr = np.array(L, dtype=np.int64)
        rc = compiled.ratio_scan(
            np.ascontiguousarray(C), np.ascontiguousarray(b),
            Larr, cand, gains, 3, 1e-12, -np.inf,
        )
        rp = _kernels_py.ratio_scan(C, b, Larr, cand, gains, 3, 1e-12, -np.inf)
        assert rc[0] == pytest.approx(rp[0], abs=1e-9)
        assert tuple(rc[1]) == tuple(rp[1])
        assert rc[2] == rp[2] and rc[3] == rp[3]


def test_dispatcher_prefers_compiled_within_envelope():
    assert kernels.HAVE_COMPILED
    assert kernels.BACKEND == "compiled"


def test_dispatcher_falls_back_past_dimension_cap():
    rng = np.random.default_rng(8)
    C = random_correlation(rng, 70)
    lo, sub = kernels.lam_extreme_scan(C, 1, False)
    assert lo == pytest.approx(1.0, abs=1e-9)
    assert len(sub) == 1


def test_zero_pivot_convention_matches():
    # exactly collinear pair: both backends treat the clone as contributing 0
    C = np.array([[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    b = np.array([0.5, 0.5, 0.3])
    rc = compiled.best_r2_scan(np.ascontiguousarray(C), b, 2)
    rp = _kernels_py.best_r2_scan(C, b, 2)
    assert rc[0] == pytest.approx(rp[0], abs=1e-12)
    assert tuple(rc[1]) == tuple(rp[1]) == (0, 2)
