"""The numba and numpy/interpreted kernels must agree."""
import numpy as np
import pytest

from sklab import kernels
from sklab._accel import compile_always
from sklab.paths import StepPath
from sklab.skorokhod import completed_graph


def test_prw_variants_agree():
    rng = np.random.default_rng(0)
    xi = rng.standard_cauchy(5000)
    eta = rng.standard_cauchy(5000)
    w1, m1, p1 = kernels._prw_loop(xi, eta)
    w2, m2, p2 = kernels._prw_numpy(xi, eta)
    w3, m3, p3 = compile_always(kernels._prw_loop)(xi, eta)
    assert np.allclose(w1, w2, rtol=1e-12, atol=1e-9) and np.array_equal(m1, m3)
    assert np.array_equal(w1, w3) and np.array_equal(p1, p3)
    assert np.allclose(p1, p2, rtol=1e-12, atol=1e-9)


def test_ks_variants_agree():
    rng = np.random.default_rng(1)
    a = np.sort(rng.integers(0, 20, 300).astype(float))
    b = np.sort(rng.integers(0, 20, 200).astype(float))
    assert kernels._ks_loop(a, b) == pytest.approx(kernels._ks_numpy(a, b), abs=1e-15)


def test_decision_kernels_interpreted_vs_compiled():
    rng = np.random.default_rng(2)
    m1c = compile_always(kernels._m1_decide)
    j1c = compile_always(kernels._j1_decide)
    for _ in range(20):
        k1, k2 = rng.integers(0, 4, size=2)
        p = StepPath(np.concatenate(([0], np.sort(rng.uniform(0.05, 1, k1)))), rng.normal(size=k1 + 1), 1.0)
        q = StepPath(np.concatenate(([0], np.sort(rng.uniform(0.05, 1, k2)))), rng.normal(size=k2 + 1), 1.0)
        P = np.ascontiguousarray(completed_graph(p).vertices)
        Q = np.ascontiguousarray(completed_graph(q).vertices)
        for eps in (0.05, 0.3, 1.0):
            assert kernels._m1_decide(P, Q, eps) == m1c(P, Q, eps)
            args = (p.times, p.values, q.times, q.values, 1.0, eps)
            assert kernels._j1_decide(*args) == j1c(*args)


def test_oscillation_interpreted_vs_compiled():
    rng = np.random.default_rng(3)
    osc = compile_always(kernels._oscillation_loop)
    t = np.concatenate(([0], np.sort(rng.uniform(0, 1, 30))))
    v = rng.normal(size=31)
    for d in (0.01, 0.1, 0.5):
        assert kernels._oscillation_loop(t, v, d) == osc(t, v, d)
