import numpy as np
import pytest

from sklab.paths import StepPath, running_sup, sandwich_check, prw_trajectory
from sklab.skorokhod import uniform_distance
from sklab.theorem_lab import (DIAGONAL_ATOMS, atom_list_family, build_gn, counterexample,
                               dense_marks_family, diagonal_family, epsilon_restrict, j1_condition,
                               g_eps, get_family, gn_eps_decomposed, gn_eps_direct, limit_g0,
                               restriction_gap, verify_main10)

from .oracles import g0_brute


def test_counterexample_paths_n10():
    inst, f_n, g_n = counterexample(10)
    assert g_n == StepPath([0, 0.4, 0.5], [0, 1, 2], 1.0)
    assert f_n == StepPath([0, 0.5], [0, 2], 1.0)
    assert inst.nu0.tolist() == [[0.5, 2.0, 1.0]]
    _, f2, g2 = counterexample(2)
    assert f2 == StepPath([0, 0.5], [0, 2], 1.0)
    with pytest.raises(ValueError):
        counterexample(1)
    for n in (3, 7, 101):
        assert len(counterexample(n)[0].nu0) == 1


def test_all_zero_family():
    inst = atom_list_family([(0.5, 0.0, 0.0)])
    _, g = build_gn(inst, 50)
    assert g == StepPath.constant(0.0)


def test_single_mark_family():
    inst = atom_list_family([(1 / 3, 0.0, 5.0)])
    for n in (10, 30, 99):
        _, g = build_gn(inst, n)
        k = int(np.floor(n / 3 + 1e-9))
        assert g == StepPath([0, (k - 1) / n], [0, 5], 1.0)


def test_undefined_scale():
    inst = atom_list_family([(0.50, 1.0, 1.0), (0.52, 1.0, 1.0)])
    with pytest.raises(ValueError):
        build_gn(inst, 10)
    with pytest.raises(ValueError):
        get_family("nonexistent")


def test_limit_g0_examples():
    f0 = StepPath([0, 0.5], [0, 2], 1.0)
    assert limit_g0(f0, [(0.5, 2, 1)]) == f0
    g = StepPath([0, 0.2, 0.6], [0, 1, -1], 1.0)
    assert limit_g0(g, []) == running_sup(g)
    stair = limit_g0(StepPath.constant(0.0), [(0.3, 0, 1), (0.6, 0, 3)])
    assert stair == StepPath([0, 0.3, 0.6], [0, 1, 3], 1.0)
    with pytest.raises(ValueError):
        limit_g0(f0, [(0.0, 1, 1)])
    with pytest.raises(ValueError):
        limit_g0(f0, [(0.3, 1, 1), (0.3, 0, 2)])


def test_limit_g0_matches_brute():
    rng = np.random.default_rng(0)
    for _ in range(100):
        k = rng.integers(1, 6)
        times = np.concatenate(([0.0], np.sort(rng.uniform(0.01, 1, k))))
        f0 = StepPath(times, rng.normal(size=k + 1), 1.0)
        m = rng.integers(0, 5)
        at = np.column_stack((np.sort(rng.choice(times[1:], size=min(m, k), replace=False))
                              if m else np.empty(0),
                              np.zeros(min(m, k)), rng.exponential(size=min(m, k))))
        g = limit_g0(f0, at)
        assert g.is_nondecreasing()
        for t in np.linspace(0, 1, 37):
            assert g.eval(t) == g0_brute(f0, at, t)


def test_epsilon_restriction():
    f0 = StepPath.constant(0.0)
    nu = [(0.3, 0, 1), (0.6, 0, 3)]
    assert np.array_equal(epsilon_restrict(nu, 0.5), np.array(nu, dtype=float))
    assert g_eps(f0, nu, 0.5) == limit_g0(f0, nu)
    assert g_eps(f0, nu, 5.0) == running_sup(f0)
    assert restriction_gap(f0, nu, 5.0) <= 5.0
    assert g_eps(f0, nu, 2.0) == StepPath([0, 0.6], [0, 3], 1.0)
    assert restriction_gap(f0, nu, 2.0) == 1.0
    with pytest.raises(ValueError):
        epsilon_restrict(nu, 1.0)
    with pytest.raises(ValueError):
        epsilon_restrict(nu, 0.0)


@pytest.mark.parametrize("factory", [counterexample, diagonal_family, dense_marks_family])
def test_decomposition_consistency(factory):
    inst = factory()
    for n in (60, 250, 1000):
        for eps in (0.01, 0.07, 0.5, 1.1, 5.0):
            if np.any(inst.nu0[:, 2] == eps):
                continue
            assert gn_eps_direct(inst, n, eps) == gn_eps_decomposed(inst, n, eps)
            _, g_n = build_gn(inst, n)
            assert uniform_distance(g_n, gn_eps_direct(inst, n, eps)) <= eps


def test_j1_condition_predicate():
    assert not j1_condition([(0.5, 2, 1)])
    assert j1_condition(diagonal_family().nu0)
    assert j1_condition(dense_marks_family().nu0)
    assert j1_condition([(0.5, -1, 0.5)])
    with pytest.raises(ValueError):
        diagonal_family([(0.5, 1.0, 0.5)])


def test_verify_counterexample():
    rep = verify_main10(counterexample(), [10, 100, 1000])
    assert rep["j1_condition"] is False and rep["pass"]
    for row in rep["rows"]:
        assert row["d_m1"] <= 2 / row["n"]
        assert row["d_j1"] >= 0.4
        assert set(row) == {"family", "n", "d_m1", "d_j1", "j1_condition", "pass"}


def test_verify_positive_families():
    rep = verify_main10(diagonal_family(), [100, 1000])
    assert rep["j1_condition"] and rep["pass"]
    assert rep["rows"][-1]["d_j1"] <= 5e-3
    rep = verify_main10(dense_marks_family(), [100, 1000])
    assert rep["pass"] and rep["grid_error"] == pytest.approx(3.0 / 1000)
    assert rep["rows"][-1]["d_m1"] <= 1e-2


def test_dense_family_limit_formula():
    # with f0 continuous the marks read off f0(t_k) directly
    inst = dense_marks_family()
    g0 = limit_g0(inst.f0, inst.nu0)
    f0 = inst.f0
    for t in np.linspace(0.05, 1, 20):
        marks = [f0.eval(tk) + yk for tk, _, yk in inst.nu0 if tk <= t]
        ref = max([f0.eval(s) for s in f0.times if s <= t] + marks)
        assert abs(g0.eval(t) - ref) <= inst.grid_error + 1e-12


def test_sandwich_on_lab_paths():
    inst = diagonal_family()
    x, y = inst.inputs(200)
    traj = prw_trajectory(np.column_stack((x, y)), 200)
    assert sandwich_check(traj.prw_max, traj.perp, 200)


def test_diagonal_atoms_constant():
    assert len(DIAGONAL_ATOMS) == 5
    assert get_family("diagonal").family == "diagonal"
