"""Right-continuous step paths on [0, horizon] and walk functionals."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels


def _frozen(a):
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StepPath:
    """Piecewise-constant cadlag path.

    ``times[0] == 0`` and times are strictly increasing inside
    ``[0, horizon]``; the path equals ``values[i]`` on
    ``[times[i], times[i+1])``. Consecutive equal values are merged on
    construction, so two paths are equal iff their arrays are.
    """

    times: np.ndarray
    values: np.ndarray
    horizon: float

    def __post_init__(self):
        t = np.asarray(self.times, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        h = float(self.horizon)
        if not h > 0:
            raise ValueError("horizon must be positive")
        if t.ndim != 1 or t.shape != v.shape or t.size == 0:
            raise ValueError("times and values must be 1-d arrays of equal nonzero length")
        if t[0] != 0.0:
            raise ValueError("first breakpoint must be 0")
        if np.any(np.diff(t) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if t[-1] > h:
            raise ValueError("breakpoints must lie in [0, horizon]")
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite")
        keep = np.ones(t.size, dtype=bool)
        keep[1:] = v[1:] != v[:-1]
        object.__setattr__(self, "times", _frozen(t[keep]))
        object.__setattr__(self, "values", _frozen(v[keep]))
        object.__setattr__(self, "horizon", h)

    @classmethod
    def constant(cls, value: float, horizon: float = 1.0) -> "StepPath":
        return cls(np.zeros(1), np.array([float(value)]), horizon)

    def __eq__(self, other):
        if not isinstance(other, StepPath):
            return NotImplemented
        return (self.horizon == other.horizon
                and np.array_equal(self.times, other.times)
                and np.array_equal(self.values, other.values))

    def __len__(self):
        return self.times.size

    @property
    def jump_times(self) -> np.ndarray:
        return self.times[1:]

    def eval(self, t):
        """Right-continuous value at t (scalar or array)."""
        ta = np.asarray(t, dtype=np.float64)
        if np.any(ta < 0) or np.any(ta > self.horizon):
            raise ValueError("t outside [0, horizon]")
        out = self.values[np.searchsorted(self.times, ta, side="right") - 1]
        return float(out) if out.ndim == 0 else out

    def eval_left(self, t):
        """Left limit at t > 0."""
        ta = np.asarray(t, dtype=np.float64)
        if np.any(ta <= 0) or np.any(ta > self.horizon):
            raise ValueError("left limits need t in (0, horizon]")
        out = self.values[np.searchsorted(self.times, ta, side="left") - 1]
        return float(out) if out.ndim == 0 else out

    def is_nondecreasing(self) -> bool:
        return bool(np.all(np.diff(self.values) >= 0))

    # -- csv ---------------------------------------------------------------

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(f"# horizon={self.horizon!r}\n")
            fh.write("time,value\n")
            for t, v in zip(self.times, self.values):
                fh.write(f"{float(t)!r},{float(v)!r}\n")

    @classmethod
    def from_csv(cls, path) -> "StepPath":
        horizon = None
        times, values = [], []
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    key, _, val = line[1:].strip().partition("=")
                    if key.strip() == "horizon":
                        horizon = float(val)
                    continue
                if line.startswith("time"):
                    continue
                t, v = line.split(",")
                times.append(float(t))
                values.append(float(v))
        if horizon is None:
            raise ValueError(f"{path}: missing '# horizon=' header")
        return cls(np.array(times), np.array(values), horizon)


def running_sup(path: StepPath) -> StepPath:
    return StepPath(path.times, np.maximum.accumulate(path.values), path.horizon)


def scale(path: StepPath, factor: float) -> StepPath:
    """Divide all values by ``factor``."""
    if not factor > 0:
        raise ValueError("factor must be positive")
    return StepPath(path.times, path.values / factor, path.horizon)


def eval(path: StepPath, t):
    return path.eval(t)


def eval_left(path: StepPath, t):
    return path.eval_left(t)


def grid_path(values, n: int, horizon: float) -> StepPath:
    """Step path taking ``values[k]`` on [k/n, (k+1)/n)."""
    values = np.asarray(values, dtype=np.float64)
    return StepPath(np.arange(values.size) / n, values, horizon)


@dataclass(frozen=True)
class Trajectory:
    walk: StepPath
    prw_max: StepPath
    perp: StepPath


def n_steps(n: int, horizon: float) -> int:
    """[n * horizon], guarded against representation error in the product."""
    return int(math.floor(n * horizon + 1e-9))


def prw_arrays(pairs, n: int, horizon: float):
    """S_k, max_{j<=k} T_{j+1} and log sum_{j<=k} exp(T_{j+1}) for k = 0..[n horizon]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    pairs = np.asarray(pairs, dtype=np.float64)
    K = n_steps(n, horizon)
    if pairs.ndim != 2 or pairs.shape[1] != 2 or pairs.shape[0] < K + 1:
        raise ValueError(f"need at least {K + 1} (xi, eta) pairs, got {len(pairs)}")
    xi = np.ascontiguousarray(pairs[:K + 1, 0])
    eta = np.ascontiguousarray(pairs[:K + 1, 1])
    return kernels.prw_functionals(xi, eta)


def prw_trajectory(pairs, n: int, horizon: float = 1.0) -> Trajectory:
    walk, pmax, perp = prw_arrays(pairs, n, horizon)
    return Trajectory(grid_path(walk, n, horizon), grid_path(pmax, n, horizon),
                      grid_path(perp, n, horizon))


def sandwich_check(prw_max: StepPath, perp: StepPath, n: int) -> bool:
    """prw_max <= perp <= log([nt] + 1) + prw_max at every breakpoint."""
    if prw_max.horizon != perp.horizon:
        raise ValueError("paths have different horizons")
    t = np.union1d(prw_max.times, perp.times)
    m = prw_max.eval(t)
    p = perp.eval(t)
    k = np.floor(t * n + 1e-9)
    return bool(np.all(m <= p) and np.all(p <= m + np.log(k + 1.0)))


def sup_with_marks(path: StepPath, times, marks) -> StepPath:
    """t -> sup_{s<=t} path(s) v max_{times_k <= t} (path(times_k-) + marks_k).

    Marks must sit at times in (0, horizon]. Without marks this is the
    running supremum.
    """
    times = np.asarray(times, dtype=np.float64)
    marks = np.asarray(marks, dtype=np.float64)
    if times.size == 0:
        return running_sup(path)
    if np.any(times <= 0) or np.any(times > path.horizon):
        raise ValueError("mark times must lie in (0, horizon]")
    order = np.argsort(times, kind="stable")
    times = times[order]
    h = path.eval_left(times) + marks[order]
    best = np.maximum.accumulate(h)
    grid = np.union1d(path.times, times)
    base = np.maximum.accumulate(path.eval(grid))
    idx = np.searchsorted(times, grid, side="right") - 1
    with_marks = np.where(idx >= 0, best[np.maximum(idx, 0)], -np.inf)
    return StepPath(grid, np.maximum(base, with_marks), path.horizon)
