"""Limit objects: Poisson atoms, stable Levy paths, the max-plus-marks limit."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .paths import StepPath, sup_with_marks
from .tails import LimitMeasureSpec, StableParams

COMPENSATOR_GRID = 1000
DEFAULT_TRUNCATION = 1e-3


@dataclass(frozen=True, eq=False)
class AtomSet:
    """Atoms (theta, i, j) of N^(nu) restricted to {|i| > eps or j > eps}."""

    horizon: float
    truncation: float
    theta: np.ndarray
    i: np.ndarray
    j: np.ndarray
    params: StableParams | None = None

    def __post_init__(self):
        th = np.asarray(self.theta, dtype=float)
        ii = np.asarray(self.i, dtype=float)
        jj = np.asarray(self.j, dtype=float)
        if not (th.shape == ii.shape == jj.shape) or th.ndim != 1:
            raise ValueError("theta, i, j must be 1-d arrays of equal length")
        if np.any(th <= 0) or np.any(th > self.horizon):
            raise ValueError("atom times must lie in (0, horizon]")
        if np.any(jj < 0):
            raise ValueError("marks j must be nonnegative")
        if np.any((np.abs(ii) < self.truncation) & (jj < self.truncation)):
            raise ValueError("every atom must exceed the truncation in one coordinate")
        if np.any(np.diff(th) < 0):
            order = np.argsort(th)
            th, ii, jj = th[order], ii[order], jj[order]
        if np.any(np.diff(th) == 0):
            raise ValueError("atom times must be distinct")
        for name, arr in (("theta", th), ("i", ii), ("j", jj)):
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self):
        return self.theta.size

    def __eq__(self, other):
        if not isinstance(other, AtomSet):
            return NotImplemented
        return (self.horizon == other.horizon and self.truncation == other.truncation
                and np.array_equal(self.theta, other.theta)
                and np.array_equal(self.i, other.i) and np.array_equal(self.j, other.j))

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(f"# horizon={self.horizon!r}, truncation={self.truncation!r}\n")
            fh.write("theta,i,j\n")
            for row in zip(self.theta, self.i, self.j):
                fh.write(",".join(repr(float(x)) for x in row) + "\n")

    @classmethod
    def from_csv(cls, path) -> "AtomSet":
        meta = {}
        rows = []
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    for part in line[1:].split(","):
                        key, _, val = part.strip().partition("=")
                        meta[key.strip()] = float(val)
                    continue
                if line.startswith("theta"):
                    continue
                rows.append([float(x) for x in line.split(",")])
        if "horizon" not in meta or "truncation" not in meta:
            raise ValueError(f"{path}: missing '# horizon=..., truncation=...' header")
        arr = np.array(rows, dtype=float).reshape(-1, 3)
        return cls(meta["horizon"], meta["truncation"], arr[:, 0], arr[:, 1], arr[:, 2])


def _component_draw(name, par, spec, truncation, u):
    alpha = spec.stable.alpha
    zero = np.zeros_like(u)
    if name == "i+":
        return truncation * u ** (-1.0 / alpha), zero
    if name == "i-":
        return -truncation * u ** (-1.0 / alpha), zero
    if name == "j":
        return zero, truncation * u ** (-1.0 / spec.mark_index)
    if name == "line+":
        i = par * u ** (-1.0 / alpha)
        return i, spec.r * i
    cos, sin, rmin = par
    rad = rmin * u ** (-1.0 / alpha)
    return rad * cos, rad * sin


def sample_poisson_atoms(spec: LimitMeasureSpec, horizon: float, truncation: float,
                         rng: np.random.Generator) -> AtomSet:
    """Atoms of a Poisson measure with mean LEB x nu above ``truncation``.

    Each atom class of ``spec.components`` is an independent Poisson
    process; their union is returned sorted by time.
    """
    if not truncation > 0:
        raise ValueError("truncation must be positive")
    comps = spec.components(truncation)
    while True:
        th, ii, jj = [np.empty(0)], [np.empty(0)], [np.empty(0)]
        for mass, name, par in comps:
            k = int(rng.poisson(horizon * mass))
            # times and radii from (0, 1]: no atom at time 0, no infinite radius
            th.append(horizon * (1.0 - rng.random(k)))
            i, j = _component_draw(name, par, spec, truncation, 1.0 - rng.random(k))
            ii.append(i)
            jj.append(j)
        theta = np.concatenate(th)
        order = np.argsort(theta)
        theta = theta[order]
        if theta.size < 2 or np.all(np.diff(theta) > 0):
            break
    return AtomSet(horizon, truncation, theta, np.concatenate(ii)[order],
                   np.concatenate(jj)[order], params=spec.stable)


def compensator_rate(params: StableParams, truncation: float) -> float:
    """Mean of nu* over {|x| > truncation}; used only for alpha in (1, 2)."""
    a = params.alpha
    if a <= 1.0:
        return 0.0
    return params.skew * a / (a - 1.0) * truncation ** (1.0 - a)


def small_jump_variance(params: StableParams, truncation: float) -> float:
    """Variance per unit time of the jumps of size <= truncation left out."""
    a = params.alpha
    return a / (2.0 - a) * truncation ** (2.0 - a)


def stable_from_atoms(atoms: AtomSet, params: StableParams,
                      grid_points: int = COMPENSATOR_GRID) -> StepPath:
    """Truncated Levy-Ito sum of the i-coordinates, compensated when alpha > 1."""
    if atoms.params is not None and atoms.params != params:
        raise ValueError("atoms were generated under different stable parameters")
    big = np.abs(atoms.i) >= atoms.truncation
    theta = atoms.theta[big]
    cum = np.concatenate(([0.0], np.cumsum(atoms.i[big])))
    rate = compensator_rate(params, atoms.truncation)
    h = atoms.horizon
    if rate != 0.0:
        grid = np.linspace(0.0, h, grid_points + 1)
        times = np.union1d(grid, theta)
        drift = rate * grid[np.searchsorted(grid, times, side="right") - 1]
    else:
        times = np.concatenate(([0.0], theta))
        drift = 0.0
    values = cum[np.searchsorted(theta, times, side="right")] - drift
    return StepPath(times, values, h)


def levy_ito_marginal(params: StableParams, t: float, truncation: float, size: int,
                      rng: np.random.Generator, batch: int = 2_000_000) -> np.ndarray:
    """``size`` independent draws of the truncated Levy-Ito sum at time t.

    Same law as ``stable_from_atoms(...).eval(t)`` on a grid containing t,
    without building the paths.
    """
    if not (t > 0 and truncation > 0):
        raise ValueError("t and truncation must be positive")
    a = params.alpha
    rate = t * truncation ** -a
    counts = rng.poisson(rate, size)
    out = np.empty(size)
    start = 0
    while start < size:
        # group replicates so each batch holds about ``batch`` jumps
        stop = start + 1 + int(np.searchsorted(np.cumsum(counts[start:]), batch))
        stop = min(stop, size)
        c = counts[start:stop]
        total = int(c.sum())
        u = 1.0 - rng.random(total)
        sign = np.where(rng.random(total) < params.c1, 1.0, -1.0)
        jumps = sign * truncation * u ** (-1.0 / a)
        sums = np.zeros(stop - start)
        nz = c > 0
        if total:
            offsets = np.concatenate(([0], np.cumsum(c)[:-1]))
            sums[nz] = np.add.reduceat(jumps, offsets[nz])
        out[start:stop] = sums
        start = stop
    return out - compensator_rate(params, truncation) * t


def stable_scale(params: StableParams) -> float:
    """sigma of the S_alpha(sigma, c1 - c2, 0) law with the target exponent."""
    a = params.alpha
    if a == 1.0:
        return math.pi / 2.0
    return (-math.gamma(2.0 - a) / (a - 1.0) * math.cos(math.pi * a / 2.0)) ** (1.0 / a)


def stable_char(z, params: StableParams):
    """E exp(i z S(1)) in closed form."""
    z = np.asarray(z, dtype=float)
    a = params.alpha
    if a == 1.0:
        return np.exp(-0.5 * math.pi * np.abs(z))
    k = math.gamma(2.0 - a) / (a - 1.0)
    expo = np.abs(z) ** a * k * (math.cos(math.pi * a / 2.0)
                                 - 1j * params.skew * math.sin(math.pi * a / 2.0) * np.sign(z))
    return np.exp(expo)


def standard_stable(alpha: float, skew: float, size, rng: np.random.Generator):
    """Chambers-Mallows-Stuck draws of S_alpha(1, skew, 0)."""
    v = rng.uniform(-math.pi / 2.0, math.pi / 2.0, size)
    if alpha == 1.0:
        if skew != 0.0:
            raise ValueError("alpha = 1 is supported only in the symmetric case")
        return np.tan(v)
    w = rng.standard_exponential(size)
    t = skew * math.tan(math.pi * alpha / 2.0)
    b = math.atan(t) / alpha
    s = (1.0 + t * t) ** (1.0 / (2.0 * alpha))
    av = alpha * (v + b)
    return (s * np.sin(av) / np.cos(v) ** (1.0 / alpha)
            * (np.cos(v - av) / w) ** ((1.0 - alpha) / alpha))


def stable_increments(params: StableParams, dt: float, size, rng: np.random.Generator):
    return stable_scale(params) * dt ** (1.0 / params.alpha) * standard_stable(
        params.alpha, params.skew, size, rng)


def stable_cms(params: StableParams, grid, rng: np.random.Generator) -> StepPath:
    """Stable Levy path sampled exactly on a uniform grid, held constant between."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or grid[0] != 0.0:
        raise ValueError("grid must start at 0 and have at least two points")
    dt = np.diff(grid)
    if not np.allclose(dt, dt[0], rtol=1e-9, atol=0.0):
        raise ValueError("grid must be uniform")
    inc = stable_increments(params, float(dt[0]), grid.size - 1, rng)
    values = np.concatenate(([0.0], np.cumsum(inc)))
    return StepPath(grid, values, float(grid[-1]))


def limit_max_process(stable: StepPath, atoms: AtomSet) -> StepPath:
    """sup_{s<=t} S*(s) v max_{theta_k<=t} (S*(theta_k-) + j_k)."""
    if stable.horizon != atoms.horizon:
        raise ValueError("stable path and atoms have different horizons")
    big = atoms.theta[np.abs(atoms.i) >= atoms.truncation]
    pos = np.minimum(np.searchsorted(stable.times, big), stable.times.size - 1)
    if big.size and not np.array_equal(stable.times[pos], big):
        raise ValueError("atom times are not jump times of the stable path; coupling broken")
    marked = atoms.j > 0
    # atoms with j = 0 cannot raise the maximum above the running sup
    return sup_with_marks(stable, atoms.theta[marked], atoms.j[marked])


def frechet_sup_cdf(t: float, x: float, beta: float, c_eta: float = 1.0) -> float:
    """P{sup_{theta_k<=t} j_k <= x} for marks with mu((x, inf]) = c_eta x**-beta."""
    if not (t > 0 and x > 0):
        raise ValueError("t and x must be positive")
    return math.exp(-c_eta * t * x ** -beta)


def frechet_extremal(times, beta: float, c_eta: float, rng: np.random.Generator):
    """Joint draw of the running max of the marks at increasing ``times``."""
    times = np.asarray(times, dtype=float)
    if np.any(np.diff(times) <= 0) or times[0] <= 0:
        raise ValueError("times must be positive and increasing")
    gaps = np.diff(np.concatenate(([0.0], times)))
    block = (c_eta * gaps / rng.standard_exponential(times.size)) ** (1.0 / beta)
    return np.maximum.accumulate(block)
