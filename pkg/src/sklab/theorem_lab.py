"""Deterministic pre-limit pairs (f_n, nu_n) and their max-plus-marks limit.

Each :class:`DeterministicInstance` knows its limit ``f0``, the atoms
``nu0 = [(t_k, x_k, y_k)]`` and how to produce the input sequences
``x^(n), y^(n)`` for any n. ``g_n`` is then the running maximum of
``S_k + y_{k+1}``, and :func:`limit_g0` is its M1 limit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .paths import StepPath, n_steps, prw_trajectory, running_sup, sup_with_marks
from .skorokhod import DEFAULT_TOL, j1_distance, m1_distance, uniform_distance


def _as_atoms(nu) -> np.ndarray:
    a = np.asarray(nu, dtype=float).reshape(-1, 3)
    return a[np.argsort(a[:, 0], kind="stable")]


def check_atoms(nu) -> np.ndarray:
    a = _as_atoms(nu)
    if np.any(a[:, 0] <= 0):
        raise ValueError("nu0 must not charge time 0")
    if np.unique(a[:, 0]).size != a.shape[0]:
        raise ValueError("atom times must be distinct")
    if np.any(a[:, 2] <= 0):
        raise ValueError("atoms of nu0 need y_k > 0")
    return a


@dataclass
class DeterministicInstance:
    family: str
    horizon: float
    f0: StepPath
    nu0: np.ndarray
    prelimit: Callable[[int], tuple]
    grid_error: float = 0.0
    min_n: int = 1
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.nu0 = check_atoms(self.nu0)

    def inputs(self, n: int):
        if n < self.min_n:
            raise ValueError(f"family {self.family!r} is undefined at n = {n}")
        x, y = self.prelimit(n)
        return np.asarray(x, dtype=float), np.asarray(y, dtype=float)


def _index(t: float, n: int) -> int:
    return max(1, int(math.floor(n * t + 1e-9)))


def atom_list_family(atoms, horizon: float = 1.0, family: str = "atoms") -> DeterministicInstance:
    """f0 jumps by x_k at t_k; nu0 keeps the atoms with y_k > 0.

    At scale n atom k is placed at index [n t_k] (at least 1).
    """
    a = _as_atoms(atoms)
    if np.any(a[:, 0] <= 0) or np.any(a[:, 0] > horizon):
        raise ValueError("atom times must lie in (0, horizon]")
    if np.any(a[:, 2] < 0):
        raise ValueError("marks y_k must be nonnegative")
    times = np.concatenate(([0.0], a[:, 0]))
    f0 = StepPath(times, np.concatenate(([0.0], np.cumsum(a[:, 1]))), horizon)
    nu0 = a[a[:, 2] > 0]

    def prelimit(n):
        L = n_steps(n, horizon) + 1
        x = np.zeros(L)
        y = np.zeros(L)
        idx = [_index(t, n) for t in a[:, 0]]
        if len(set(idx)) != len(idx):
            raise ValueError(f"family {family!r} is undefined at n = {n}: atoms collide")
        for i, (_, xk, yk) in zip(idx, a):
            if i - 1 < L:
                x[i - 1] = xk
                y[i - 1] = yk
        return x, y

    gaps = np.diff(np.concatenate(([0.0], a[:, 0])))
    min_n = int(math.ceil(1.0 / gaps.min())) if a.shape[0] else 1
    return DeterministicInstance(family, horizon, f0, nu0, prelimit, min_n=min_n)


def counterexample(n: int | None = None):
    """x_[n/2] = 2, y_[n/2] = 1, all other inputs 0; nu0 = delta_(1/2, 2, 1).

    With ``n`` given, returns ``(instance, f_n, g_n)``.
    """
    inst = atom_list_family([(0.5, 2.0, 1.0)], 1.0, family="counterexample")
    inst.min_n = 2
    if n is None:
        return inst
    if n < 2:
        raise ValueError("the counterexample needs n >= 2")
    f_n, g_n = build_gn(inst, n)
    return inst, f_n, g_n


DIAGONAL_ATOMS = [(0.2, 1.0, 1.0), (0.35, -0.5, 0.0), (0.6, 0.8, 0.8),
                  (0.8, -1.2, 0.0), (0.9, 1.5, 1.5)]


def diagonal_family(atoms=DIAGONAL_ATOMS) -> DeterministicInstance:
    """Positive jumps carry a mark of the same size, so no atom has 0 < y < x."""
    a = _as_atoms(atoms)
    pos = a[:, 2] > 0
    if np.any(a[pos, 1] != a[pos, 2]):
        raise ValueError("diagonal family needs y_k = x_k wherever y_k > 0")
    return atom_list_family(a, 1.0, family="diagonal")


def dense_marks_family(marks: int = 49, grid: int = 1000) -> DeterministicInstance:
    """Continuous piecewise-linear f0 with marks at k/(marks+1).

    f0 is carried as a step path on a grid of mesh 1/grid; the grid error
    recorded in the instance is mesh times the Lipschitz constant of f0.
    """
    knots_t = np.array([0.0, 0.3, 0.6, 1.0])
    knots_v = np.array([0.0, 0.6, -0.3, 0.4])
    lip = float(np.max(np.abs(np.diff(knots_v) / np.diff(knots_t))))

    def f(t):
        return np.interp(t, knots_t, knots_v)

    k = np.arange(1, marks + 1)
    tk = k / (marks + 1)
    yk = 0.05 + 0.25 * (1.0 + np.sin(7.0 * k)) / 2.0
    nu0 = np.column_stack((tk, np.zeros_like(tk), yk))
    f0 = StepPath(np.arange(grid + 1) / grid, f(np.arange(grid + 1) / grid), 1.0)

    def prelimit(n):
        L = n_steps(n, 1.0) + 1
        pts = f(np.arange(L + 1) / n)
        x = np.diff(pts)
        y = np.zeros(L)
        idx = np.maximum(1, np.floor(n * tk + 1e-9).astype(int))
        if np.unique(idx).size != idx.size:
            raise ValueError(f"dense-marks family is undefined at n = {n}: marks collide")
        y[idx - 1] = yk
        return x, y

    inst = DeterministicInstance("dense", 1.0, f0, nu0, prelimit,
                                 grid_error=lip / grid, min_n=marks + 1)
    inst.meta["continuous_f0"] = True
    return inst


FAMILIES = {
    "counterexample": counterexample,
    "diagonal": diagonal_family,
    "dense": dense_marks_family,
}


def get_family(name: str) -> DeterministicInstance:
    if name not in FAMILIES:
        raise ValueError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}")
    return FAMILIES[name]()


# ---------------------------------------------------------------------------


def build_gn(instance: DeterministicInstance, n: int):
    """(f_n, g_n) at scale n."""
    x, y = instance.inputs(n)
    traj = prw_trajectory(np.column_stack((x, y)), n, instance.horizon)
    return traj.walk, traj.prw_max


def gn_eps_direct(instance: DeterministicInstance, n: int, eps: float) -> StepPath:
    """Running max of S_k + y_{k+1} 1{y_{k+1} > eps}."""
    x, y = instance.inputs(n)
    y = np.where(y > eps, y, 0.0)
    return prw_trajectory(np.column_stack((x, y)), n, instance.horizon).prw_max


def gn_eps_decomposed(instance: DeterministicInstance, n: int, eps: float) -> StepPath:
    """Same path assembled as max f_n v max_k (f_n(t_k - 1/n) + y_k) over marks above eps."""
    x, y = instance.inputs(n)
    f_n, _ = build_gn(instance, n)
    idx = np.flatnonzero(y > eps) + 1          # mark y_i sits at time i/n
    # the mark at i/n enters g_n at (i-1)/n with level f_n((i-1)/n)
    times = (idx - 1) / n
    levels = f_n.eval(times) + y[idx - 1]
    grid = f_n.times
    allt = np.union1d(grid, times)
    base = np.maximum.accumulate(f_n.eval(allt))
    best = np.maximum.accumulate(levels) if levels.size else levels
    k = np.searchsorted(times, allt, side="right") - 1
    marks = np.where(k >= 0, best[np.maximum(k, 0)] if best.size else 0.0, -np.inf)
    return StepPath(allt, np.maximum(base, marks), f_n.horizon)


def limit_g0(f0: StepPath, nu0) -> StepPath:
    """g_0 = sup_{s<=.} f0(s) v sup_{t_k<=.} (f0(t_k-) + y_k)."""
    a = check_atoms(nu0)
    if a.shape[0] == 0:
        return running_sup(f0)
    return sup_with_marks(f0, a[:, 0], a[:, 2])


def epsilon_restrict(nu, eps: float) -> np.ndarray:
    a = _as_atoms(nu)
    if not eps > 0:
        raise ValueError("eps must be positive")
    if np.any(a[:, 2] == eps):
        raise ValueError("eps coincides with a mark; choose a continuity level")
    return a[a[:, 2] > eps]


def g_eps(f0: StepPath, nu, eps: float) -> StepPath:
    return limit_g0(f0, epsilon_restrict(nu, eps))


def j1_condition(nu0) -> bool:
    """No atom with 0 < y < x."""
    a = _as_atoms(nu0)
    return not bool(np.any((a[:, 2] > 0) & (a[:, 2] < a[:, 1])))


def threshold(n: int, tol: float) -> float:
    return max(5.0 / n, 10.0 * tol)


def verify_main10(instance: DeterministicInstance, n_list, tol: float = DEFAULT_TOL) -> dict:
    """d_M1 and d_J1 of (g_n, g_0) over ``n_list``.

    A row passes when d_M1 is below max(5/n, 10 tol) and d_J1 is below the
    same threshold exactly when no atom has 0 < y < x. The overall verdict
    is the row at the largest n.
    """
    g0 = limit_g0(instance.f0, instance.nu0)
    pred = j1_condition(instance.nu0)
    rows = []
    for n in sorted(n_list):
        _, g_n = build_gn(instance, n)
        d_m1 = m1_distance(g_n, g0, tol)
        d_j1 = j1_distance(g_n, g0, tol)
        thr = threshold(n, tol)
        ok = d_m1 <= thr and (d_j1 <= thr) == pred
        rows.append({"family": instance.family, "n": int(n), "d_m1": d_m1,
                     "d_j1": d_j1, "j1_condition": pred, "pass": bool(ok)})
    return {"family": instance.family, "j1_condition": pred, "grid_error": instance.grid_error,
            "tol": tol, "rows": rows, "pass": bool(rows[-1]["pass"]) if rows else False}


def restriction_gap(f0: StepPath, nu, eps: float) -> float:
    """sup |g_0 - g_{0,eps}|; never exceeds eps."""
    return uniform_distance(limit_g0(f0, nu), g_eps(f0, nu, eps))
