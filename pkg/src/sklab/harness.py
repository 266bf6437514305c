"""Monte Carlo comparison of scaled pre-limit functionals with their limits.

Replicate ``r`` draws its pre-limit inputs from the Philox stream keyed by
``(master_seed, 0, r)`` and its limit sample from ``(master_seed, 1, r)``,
so the report depends on the seed alone and not on how replicates are
spread over threads.
"""
from __future__ import annotations

import csv
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .limits import (DEFAULT_TRUNCATION, frechet_extremal, limit_max_process,
                     sample_poisson_atoms, small_jump_variance, stable_cms,
                     stable_from_atoms)
from .paths import n_steps
from .tails import VectorModel, model_from_dict, norming_a, norming_b

SCHEMA_VERSION = 1
REGIMES = ("comparable", "walk_dominates", "perturbation_dominates")
FUNCTIONALS = ("max", "log_perpetuity")
MIN_REPLICATES = 100
KS_CRIT_95 = 1.358
QUANTILES = (0.05, 0.25, 0.5, 0.75, 0.95)


def replicate_rng(master_seed: int, stream: int, rep: int) -> np.random.Generator:
    ss = np.random.SeedSequence(master_seed, spawn_key=(stream, rep))
    return np.random.Generator(np.random.Philox(ss))


def worker_count() -> int:
    cap = os.environ.get("SKLAB_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise ValueError(f"SKLAB_THREADS must be an integer, got {cap!r}") from None
    return n


def check_regime(model: VectorModel, regime: str) -> None:
    """Compare the eta tail with the |xi| tail on the built-in power laws."""
    if regime not in REGIMES:
        raise ValueError(f"regime must be one of {REGIMES}")
    alpha = model.stable.alpha
    coef, index, _ = model.tail_law("eta")
    if regime == "comparable":
        ok = coef > 0 and index == alpha
        why = "needs P{eta > x} ~ c P{|xi| > x} with c > 0"
    elif regime == "walk_dominates":
        ok = coef == 0 or index > alpha
        why = "needs P{eta > x} = o(P{|xi| > x})"
    else:
        ok = coef > 0 and index < alpha
        why = "needs P{|xi| > x} = o(P{eta > x})"
    if not ok:
        raise ValueError(f"regime {regime!r} {why}; model eta tail is {coef} x^-{index}")


@dataclass
class ExperimentConfig:
    model: VectorModel
    regime: str = "comparable"
    functional: str = "max"
    n: int = 10_000
    replicates: int = 10_000
    eval_times: tuple = (0.25, 0.5, 1.0)
    truncation: float = DEFAULT_TRUNCATION
    master_seed: int = 0
    output_path: str | None = None
    ks_factor: float = 2.5
    limit_grid: int = 1000
    chunk: int = 256

    def __post_init__(self):
        if isinstance(self.model, dict):
            self.model = model_from_dict(self.model)
        check_regime(self.model, self.regime)
        if self.functional not in FUNCTIONALS:
            raise ValueError(f"functional must be one of {FUNCTIONALS}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.replicates < MIN_REPLICATES:
            raise ValueError(f"at least {MIN_REPLICATES} replicates are required")
        times = tuple(float(t) for t in self.eval_times)
        if not times or any(t <= 0 for t in times) or list(times) != sorted(set(times)):
            raise ValueError("eval_times must be positive, distinct and increasing")
        self.eval_times = times
        if not self.truncation > 0:
            raise ValueError("truncation must be positive")
        if self.limit_grid < 1 or self.chunk < 1:
            raise ValueError("limit_grid and chunk must be >= 1")

    @property
    def horizon(self) -> float:
        return self.eval_times[-1]

    def norming(self) -> float:
        if self.regime == "perturbation_dominates":
            return norming_b(self.model, self.n)
        return norming_a(self.model, self.n)

    def to_dict(self) -> dict:
        return {"model": self.model.to_dict(), "regime": self.regime,
                "functional": self.functional, "n": self.n,
                "replicates": self.replicates, "eval_times": list(self.eval_times),
                "truncation": self.truncation, "master_seed": self.master_seed,
                "output_path": self.output_path, "ks_factor": self.ks_factor,
                "limit_grid": self.limit_grid, "chunk": self.chunk}

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "model" not in d:
            raise ValueError("config needs a 'model' entry")
        return cls(**d)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                return cls.from_dict(json.load(fh))
        except OSError as exc:
            raise OSError(f"cannot read config {path}: {exc}") from exc


@dataclass
class Report:
    config: dict
    metadata: dict
    results: list
    checks: dict
    runtime: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION
    samples: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self, runtime: bool = True) -> dict:
        out = {"schema_version": self.schema_version, "config": self.config,
               "metadata": self.metadata, "results": self.results,
               "checks": self.checks, "pass": self.passed}
        if runtime:
            out["runtime"] = self.runtime
        return out


def ks_two_sample(a, b) -> float:
    """sup |F_a - F_b| of the two empirical CDFs."""
    a = np.sort(np.asarray(a, dtype=np.float64).ravel())
    b = np.sort(np.asarray(b, dtype=np.float64).ravel())
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be nonempty")
    return float(kernels.ks_sorted(a, b))


def ks_critical(n1: int, n2: int, factor: float = 1.0) -> float:
    """factor times the asymptotic 95% two-sample critical value."""
    return factor * KS_CRIT_95 * math.sqrt((n1 + n2) / (n1 * n2))


# ---------------------------------------------------------------------------
# per-replicate simulation


def _prelimit(cfg: ExperimentConfig, idx: np.ndarray, rep: int):
    rng = replicate_rng(cfg.master_seed, 0, rep)
    xi, eta = cfg.model.sample(rng, idx[-1] + 1)
    _, pmax, perp = kernels.prw_functionals(np.ascontiguousarray(xi), np.ascontiguousarray(eta))
    k = np.arange(idx[-1] + 1)
    ok = bool(np.all(pmax <= perp) and np.all(perp <= pmax + np.log(k + 1.0)))
    return pmax[idx], perp[idx], ok


def _limit(cfg: ExperimentConfig, spec, rep: int) -> np.ndarray:
    rng = replicate_rng(cfg.master_seed, 1, rep)
    times = np.asarray(cfg.eval_times)
    h = cfg.horizon
    if cfg.regime == "comparable":
        atoms = sample_poisson_atoms(spec, h, cfg.truncation, rng)
        stable = stable_from_atoms(atoms, spec.stable)
        return limit_max_process(stable, atoms).eval(times)
    if cfg.regime == "walk_dominates":
        m = cfg.limit_grid
        path = stable_cms(spec.stable, h * np.arange(m + 1) / m, rng)
        return np.maximum.accumulate(path.values)[np.searchsorted(path.times, times, side="right") - 1]
    _, beta, _ = cfg.model.tail_law("eta")
    return frechet_extremal(times, beta, 1.0, rng)


def _run_chunk(cfg, spec, idx, reps):
    pre = np.empty((len(reps), idx.size))
    perp = np.empty_like(pre)
    lim = np.empty_like(pre)
    sandwich = 0
    for r, rep in enumerate(reps):
        pre[r], perp[r], ok = _prelimit(cfg, idx, rep)
        sandwich += not ok
        lim[r] = _limit(cfg, spec, rep)
    return pre, perp, lim, sandwich


def _quantiles(x) -> dict:
    return {str(q): float(v) for q, v in zip(QUANTILES, np.quantile(x, QUANTILES))}


def run_experiment(cfg: ExperimentConfig) -> Report:
    t0 = time.perf_counter()
    spec = cfg.model.limit_measure()
    scale = cfg.norming()
    idx = np.array([n_steps(cfg.n, t) for t in cfg.eval_times])
    reps = list(range(cfg.replicates))
    chunks = [reps[i:i + cfg.chunk] for i in range(0, len(reps), cfg.chunk)]
    workers = worker_count()
    if workers == 1:
        parts = [_run_chunk(cfg, spec, idx, c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _run_chunk(cfg, spec, idx, c), chunks))
    pmax = np.concatenate([p[0] for p in parts]) / scale
    perp = np.concatenate([p[1] for p in parts]) / scale
    lim = np.concatenate([p[2] for p in parts])
    violations = sum(p[3] for p in parts)

    pre = perp if cfg.functional == "log_perpetuity" else pmax
    N = cfg.replicates
    threshold = ks_critical(N, N, cfg.ks_factor)
    results = []
    for c, t in enumerate(cfg.eval_times):
        ks = ks_two_sample(pre[:, c], lim[:, c])
        row = {"eval_time": t, "ks": ks, "threshold": threshold, "pass": ks <= threshold,
               "n_prelimit": N, "n_limit": N,
               "quantiles_prelimit": _quantiles(pre[:, c]),
               "quantiles_limit": _quantiles(lim[:, c])}
        if cfg.functional == "log_perpetuity":
            # both functionals come from the same replicates, so this gap is
            # governed by the pathwise sandwich rather than sampling noise
            row["ks_perp_vs_max"] = ks_two_sample(perp[:, c], pmax[:, c])
            row["sandwich_gap"] = math.log(idx[c] + 1.0) / scale
        results.append(row)

    checks = {"ks": all(r["pass"] for r in results)}
    if cfg.functional == "log_perpetuity":
        checks["sandwich"] = violations == 0
    metadata = {
        "norming": "b(n)" if cfg.regime == "perturbation_dominates" else "a(n)",
        "norming_value": scale,
        "steps": idx.tolist(),
        "degenerate": spec.degenerate(),
        "topology": "J1" if spec.degenerate() else "M1",
        "truncation_variance": small_jump_variance(spec.stable, cfg.truncation),
        "sandwich_violations": int(violations),
        "sandwich_paths": N,
    }
    runtime = {"seconds": time.perf_counter() - t0, "workers": workers,
               "numba": kernels.USE_NUMBA}
    return Report(cfg.to_dict(), metadata, results, checks, runtime,
                  samples={"prelimit": pre, "limit": lim, "max": pmax, "perp": perp})


# ---------------------------------------------------------------------------
# persistence


def _csv_path(path) -> str:
    root, _ = os.path.splitext(str(path))
    return root + ".csv"


def write_report(report: Report, path) -> str:
    """Write JSON to ``path`` and the per-time table next to it; returns the CSV path."""
    cpath = _csv_path(path)
    try:
        with open(path, "w") as fh:
            json.dump(report.to_dict(), fh, indent=2)
        with open(cpath, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["eval_time", "ks", "threshold", "pass", "n_prelimit", "n_limit"])
            for r in report.results:
                w.writerow([repr(r["eval_time"]), repr(r["ks"]), repr(r["threshold"]),
                            int(r["pass"]), r["n_prelimit"], r["n_limit"]])
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
    return cpath


def read_report(path) -> Report:
    try:
        with open(path) as fh:
            d = json.load(fh)
    except OSError as exc:
        raise OSError(f"cannot read report {path}: {exc}") from exc
    if d.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"{path}: unsupported schema_version {d.get('schema_version')!r}")
    return Report(d["config"], d["metadata"], d["results"], d["checks"],
                  d.get("runtime", {}), d["schema_version"])
