"""Distances and moduli on the Skorokhod space, restricted to step paths.

``m1_distance`` and ``j1_distance`` bisect on a decision procedure that is
exact for step paths, so the returned value is within ``tol`` of the true
distance. Both searches start from the uniform distance, which dominates
them.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .paths import StepPath

DEFAULT_TOL = 1e-6


def m_gauge(x1: float, x2: float, x3: float) -> float:
    """0 if x2 lies between x1 and x3 (either order), else its distance to the nearer one."""
    lo, hi = min(x1, x3), max(x1, x3)
    if lo <= x2 <= hi:
        return 0.0
    return min(abs(x2 - x1), abs(x3 - x2))


def m1_oscillation(path: StepPath, delta: float) -> float:
    """sup of M(f(t1), f(t), f(t2)) over t1 <= t <= t2 with t2 - t1 <= delta."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    return float(kernels.oscillation(path.times, path.values, float(delta)))


@dataclass(frozen=True, eq=False)
class Polyline:
    """Completed graph as (time, value) vertices in traversal order."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 2:
            raise ValueError("vertices must have shape (k, 2) with k >= 2")
        if np.any(np.diff(v[:, 0]) < 0):
            raise ValueError("times must be nondecreasing along the polyline")
        moved = np.diff(v, axis=0) != 0
        if np.any(moved.sum(axis=1) != 1):
            raise ValueError("consecutive vertices must differ in exactly one coordinate")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    def __len__(self):
        return self.vertices.shape[0]

    def to_path(self) -> StepPath:
        v = self.vertices
        horizon = float(v[-1, 0])
        vertical = np.flatnonzero(v[1:, 0] == v[:-1, 0]) + 1
        times = np.concatenate(([0.0], v[vertical, 0]))
        values = np.concatenate(([v[0, 1]], v[vertical, 1]))
        return StepPath(times, values, horizon)


def completed_graph(path: StepPath) -> Polyline:
    t, v, h = path.times, path.values, path.horizon
    k = t.size
    pts = np.empty((2 * k, 2))
    pts[0] = (0.0, v[0])
    # each jump contributes its foot (left limit) and its head (new value)
    pts[1:2 * k - 1:2, 0] = t[1:]
    pts[1:2 * k - 1:2, 1] = v[:-1]
    pts[2:2 * k:2, 0] = t[1:]
    pts[2:2 * k:2, 1] = v[1:]
    pts[2 * k - 1] = (h, v[-1])
    if t[-1] == h:
        pts = pts[:-1]
    return Polyline(pts)


def _check_pair(p: StepPath, q: StepPath, tol: float | None = None):
    if p.horizon != q.horizon:
        raise ValueError(f"horizon mismatch: {p.horizon} vs {q.horizon}")
    if tol is not None and not tol > 0:
        raise ValueError("tol must be positive")


def uniform_distance(p: StepPath, q: StepPath) -> float:
    _check_pair(p, q)
    t = np.union1d(p.times, q.times)
    return float(np.max(np.abs(p.eval(t) - q.eval(t))))


def _bisect(decide, hi: float, tol: float) -> float:
    lo = 0.0
    if hi == 0.0 or decide(0.0):
        return 0.0
    while not decide(hi):
        # only reachable through rounding at the bracket end
        hi = hi * (1.0 + 1e-12) + 1e-15
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if decide(mid):
            hi = mid
        else:
            lo = mid
    return hi


def m1_decide(p: StepPath, q: StepPath, eps: float) -> bool:
    """Is d_M1(p, q) <= eps?"""
    P = np.ascontiguousarray(completed_graph(p).vertices)
    Q = np.ascontiguousarray(completed_graph(q).vertices)
    return bool(kernels.m1_decide(P, Q, float(eps)))


def m1_distance(p: StepPath, q: StepPath, tol: float = DEFAULT_TOL) -> float:
    """M1 distance: Frechet distance of the completed graphs in the sup norm."""
    _check_pair(p, q, tol)
    P = np.ascontiguousarray(completed_graph(p).vertices)
    Q = np.ascontiguousarray(completed_graph(q).vertices)
    return _bisect(lambda e: kernels.m1_decide(P, Q, e), uniform_distance(p, q), tol)


def j1_decide(p: StepPath, q: StepPath, eps: float) -> bool:
    """Is d_J1(p, q) <= eps?"""
    return bool(kernels.j1_decide(p.times, p.values, q.times, q.values, p.horizon, float(eps)))


def j1_distance(p: StepPath, q: StepPath, tol: float = DEFAULT_TOL) -> float:
    """J1 distance: inf over time changes lam of max(|lam - id|, |p o lam - q|)."""
    _check_pair(p, q, tol)
    args = (p.times, p.values, q.times, q.values, p.horizon)
    return _bisect(lambda e: kernels.j1_decide(*args, e), uniform_distance(p, q), tol)


def distance(p: StepPath, q: StepPath, mode: str = "m1", tol: float = DEFAULT_TOL) -> float:
    if mode == "m1":
        return m1_distance(p, q, tol)
    if mode == "j1":
        return j1_distance(p, q, tol)
    if mode == "uniform":
        return uniform_distance(p, q)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# convergence criteria for nondecreasing paths


@dataclass
class JumpMatch:
    jump_time: float
    matched_time: float
    left_gap: float
    right_gap: float

    @property
    def residual(self) -> float:
        return max(self.left_gap, self.right_gap)


@dataclass
class ConvergenceReport:
    mode: str
    m1_deviation: list = field(default_factory=list)
    jump_matches: list = field(default_factory=list)

    @property
    def j1_residual(self) -> list:
        return [max((m.residual for m in row), default=0.0) for row in self.jump_matches]

    def to_dict(self) -> dict:
        out = {"mode": self.mode, "m1_deviation": list(self.m1_deviation)}
        if self.mode == "J1":
            out["j1_residual"] = self.j1_residual
            out["jump_matches"] = [[vars(m) for m in row] for row in self.jump_matches]
        return out


def continuity_grid(limit: StepPath, points: int = 1000, guard: float = 1e-9) -> np.ndarray:
    """Uniform grid with points within ``guard`` of a jump of ``limit`` removed; keeps 0."""
    grid = np.linspace(0.0, limit.horizon, points + 1)
    jumps = limit.jump_times
    if jumps.size:
        idx = np.clip(np.searchsorted(jumps, grid), 0, jumps.size - 1)
        near = np.abs(grid - jumps[idx]) <= guard
        prev = np.clip(idx - 1, 0, jumps.size - 1)
        near |= np.abs(grid - jumps[prev]) <= guard
        near[0] = False
        grid = grid[~near]
    return grid


def _best_jump_match(h: StepPath, s: float, left: float, right: float, window: float):
    cand = h.jump_times[np.abs(h.jump_times - s) <= window]
    cand = np.append(cand, s)
    lv = h.eval_left(cand)
    rv = h.eval(cand)
    score = np.maximum(np.abs(lv - left), np.abs(rv - right))
    order = np.lexsort((np.abs(cand - s), score))
    k = order[0]
    return JumpMatch(float(s), float(cand[k]), float(abs(lv[k] - left)), float(abs(rv[k] - right)))


def monotone_convergence_check(paths, limit: StepPath, mode: str = "M1",
                               grid_points: int = 1000, window: float = 0.25) -> ConvergenceReport:
    """Pointwise criteria for convergence of nondecreasing paths.

    M1: sup over continuity points of the limit (including 0) of
    |h_n(t) - h_0(t)|. J1 additionally matches every jump s of the limit
    with the jump time s_n of h_n (within ``window``) minimising the larger
    of |h_n(s_n-) - h_0(s-)| and |h_n(s_n) - h_0(s)|.
    """
    mode = mode.upper()
    if mode not in ("M1", "J1"):
        raise ValueError("mode must be 'M1' or 'J1'")
    if not limit.is_nondecreasing():
        raise ValueError("limit path is not nondecreasing")
    grid = continuity_grid(limit, grid_points)
    base = limit.eval(grid)
    report = ConvergenceReport(mode)
    jumps = limit.jump_times
    for h in paths:
        if h.horizon != limit.horizon:
            raise ValueError("horizon mismatch")
        if not h.is_nondecreasing():
            raise ValueError("input path is not nondecreasing")
        report.m1_deviation.append(float(np.max(np.abs(h.eval(grid) - base))))
        if mode == "J1":
            row = [_best_jump_match(h, s, limit.eval_left(s), limit.eval(s), window)
                   for s in jumps]
            report.jump_matches.append(row)
    return report
