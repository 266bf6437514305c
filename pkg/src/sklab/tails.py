"""Joint laws of (xi, eta) with exact power tails.

Four model families are supported. Each one maps a pair of uniforms in
(0, 1] to a draw of (xi, eta), so sampling is an explicit inverse transform
and reproducible from any counter-based stream.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

WHICH = ("xi_pos", "xi_neg", "xi_abs", "eta")


@dataclass(frozen=True)
class StableParams:
    """Index and tail weights of the stable law attracting the walk."""

    alpha: float
    c1: float = 0.5
    c2: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise ValueError(f"alpha must lie in (0, 2), got {self.alpha}")
        if self.c1 < 0 or self.c2 < 0 or abs(self.c1 + self.c2 - 1.0) > 1e-12:
            raise ValueError("c1, c2 must be nonnegative and sum to one")
        if self.alpha == 1.0 and (self.c1 != 0.5 or self.c2 != 0.5):
            raise ValueError("alpha = 1 requires c1 = c2 = 1/2")

    @property
    def skew(self) -> float:
        return self.c1 - self.c2


@dataclass(frozen=True)
class LimitMeasureSpec:
    """Vague limit of n P{(xi, eta^+)/a(n) in .} on the punctured quadrant.

    ``structure`` is ``"axes"`` (mass on the coordinate axes), ``"line"``
    (positive-xi mass on y = r x) or ``"polar"`` (image of a radial power law
    times a discrete angle law). When ``beta`` is set the marks live on the
    eta axis alone with mu((x, inf]) = perturb_constant * x**-beta.
    """

    stable: StableParams
    perturb_constant: float = 0.0
    structure: str = "axes"
    r: float | None = None
    angles: tuple = ()
    probs: tuple = ()
    beta: float | None = None

    def __post_init__(self):
        if self.structure not in ("axes", "line", "polar"):
            raise ValueError(f"unknown structure {self.structure!r}")
        if self.structure == "line" and not (self.r and self.r > 0):
            raise ValueError("line structure needs r > 0")
        if self.perturb_constant < 0:
            raise ValueError("perturb_constant must be >= 0")

    @property
    def mark_index(self) -> float:
        return self.stable.alpha if self.beta is None else self.beta

    def _polar_table(self):
        alpha = self.stable.alpha
        cos, sin = _snap_trig(np.asarray(self.angles, dtype=float))
        probs = np.asarray(self.probs, dtype=float)
        norm = float(np.sum(probs * np.abs(cos) ** alpha))
        reach = np.maximum(np.abs(cos), np.maximum(sin, 0.0))
        return cos, np.maximum(sin, 0.0), probs, norm, reach

    def degenerate(self) -> bool:
        """True iff nu puts no mass on {(x, y): 0 < y < x}."""
        if self.beta is not None or self.structure == "axes":
            return True
        if self.structure == "line":
            return self.r >= 1.0 or self.stable.c1 == 0.0
        cos, sin, probs, _, _ = self._polar_table()
        return not bool(np.any((probs > 0) & (sin > 0) & (cos > sin)))

    def components(self, eps: float):
        """Atom classes above the truncation level, as (mass, kind, param).

        kind is one of "i+", "i-", "j", "line+", "polar".
        """
        alpha = self.stable.alpha
        out = []
        if self.beta is not None:
            if self.perturb_constant > 0:
                out.append((self.perturb_constant * eps ** -self.beta, "j", None))
            return out
        c1, c2 = self.stable.c1, self.stable.c2
        if self.structure == "axes":
            if c1 > 0:
                out.append((c1 * eps ** -alpha, "i+", None))
            if c2 > 0:
                out.append((c2 * eps ** -alpha, "i-", None))
            if self.perturb_constant > 0:
                out.append((self.perturb_constant * eps ** -alpha, "j", None))
        elif self.structure == "line":
            lvl = eps / max(1.0, self.r)
            if c1 > 0:
                out.append((c1 * lvl ** -alpha, "line+", lvl))
            if c2 > 0:
                out.append((c2 * eps ** -alpha, "i-", None))
        else:
            cos, sin, probs, norm, reach = self._polar_table()
            for k in range(len(probs)):
                if probs[k] > 0 and reach[k] > 0:
                    mass = probs[k] * (reach[k] / eps) ** alpha / norm
                    out.append((mass, "polar", (cos[k], sin[k], eps / reach[k])))
        return out

    def mass_above(self, eps: float) -> float:
        """nu(E_eps), E_eps = {|x| > eps or y > eps}."""
        return float(sum(c[0] for c in self.components(eps)))


def _snap_trig(angles):
    cos = np.cos(angles)
    sin = np.sin(angles)
    cos[np.abs(cos) < 1e-15] = 0.0
    sin[np.abs(sin) < 1e-15] = 0.0
    return cos, sin


def pareto_from_uniform(u, alpha, scale=1.0):
    """Inverse survival transform of P{X > x} = (x/scale)**-alpha, x >= scale."""
    return scale * np.power(u, -1.0 / alpha)


class VectorModel:
    """Base class of the supported joint laws.

    Subclasses provide ``transform(u1, u2)`` and the tail coefficients. All
    tails are of the form coef * x**-index for x >= start.
    """

    scale: float

    @property
    def stable(self) -> StableParams:
        raise NotImplementedError

    def transform(self, u1, u2):
        raise NotImplementedError

    def tail_law(self, which: str):
        """Return (coefficient, index, start) of the requested tail."""
        raise NotImplementedError

    def limit_measure(self) -> LimitMeasureSpec:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, size=None):
        shape = (2,) if size is None else (2,) + tuple(np.atleast_1d(size))
        # uniforms on (0, 1] so that inverse power transforms stay finite
        u = 1.0 - rng.random(shape)
        xi, eta = self.transform(u[0], u[1])
        if size is None:
            return float(xi), float(eta)
        return xi, eta


def _centering(stable: StableParams, scale: float):
    """Tail start and core atom making E xi = 0 when alpha > 1.

    Returns (k, core_location): both tails are pure powers beyond k * scale,
    and the remaining mass 1 - k**-alpha sits at core_location.
    """
    alpha = stable.alpha
    if alpha <= 1.0 or stable.skew == 0.0:
        return 1.0, 0.0
    d = abs(stable.skew) * alpha / (alpha - 1.0)
    k = (1.0 + 2.0 * d) ** (1.0 / alpha)
    p = k ** -alpha
    tail_mean = stable.skew * scale * alpha / (alpha - 1.0) * k ** (1.0 - alpha)
    return k, -tail_mean / (1.0 - p)


def _two_sided_xi(stable: StableParams, scale: float, k: float, core: float, u):
    alpha = stable.alpha
    c1, c2 = stable.c1, stable.c2
    p = k ** -alpha
    u = np.asarray(u, dtype=float)
    xi = np.full(u.shape, core)
    pos = u <= c1 * p
    neg = (~pos) & (u <= p)
    if c1 > 0:
        xi[pos] = scale * np.power(u[pos] / c1, -1.0 / alpha)
    if c2 > 0:
        xi[neg] = -scale * np.power((u[neg] - c1 * p) / c2, -1.0 / alpha)
    return xi


@dataclass(frozen=True)
class Independent(VectorModel):
    """xi two-sided Pareto, eta independent with P{eta > x} = c_eta x**-beta."""

    alpha: float
    c1: float = 0.5
    c2: float = 0.5
    beta: float | None = None
    c_eta: float = 0.0
    scale: float = 1.0
    _k: float = field(init=False, repr=False, compare=False)
    _core: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        st = StableParams(self.alpha, self.c1, self.c2)
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        if self.c_eta < 0:
            raise ValueError("c_eta must be >= 0")
        if self.c_eta > 0 and not (self.beta and self.beta > 0):
            raise ValueError("a nonzero eta tail needs beta > 0")
        k, core = _centering(st, self.scale)
        object.__setattr__(self, "_k", k)
        object.__setattr__(self, "_core", core)

    @property
    def stable(self):
        return StableParams(self.alpha, self.c1, self.c2)

    def transform(self, u1, u2):
        xi = _two_sided_xi(self.stable, self.scale, self._k, self._core, u1)
        if self.c_eta == 0:
            eta = np.zeros_like(xi)
        else:
            eta = np.power(self.c_eta / np.asarray(u2, dtype=float), 1.0 / self.beta)
        return xi, eta

    def tail_law(self, which):
        s_a = self.scale ** self.alpha
        start = self._k * self.scale
        if which == "xi_pos":
            return self.c1 * s_a, self.alpha, start
        if which == "xi_neg":
            return self.c2 * s_a, self.alpha, start
        if which == "xi_abs":
            return s_a, self.alpha, start
        if which == "eta":
            if self.c_eta == 0:
                return 0.0, self.alpha, 0.0
            return self.c_eta, self.beta, self.c_eta ** (1.0 / self.beta)
        raise ValueError(f"which must be one of {WHICH}")

    def limit_measure(self):
        st = self.stable
        if self.c_eta == 0 or self.beta > self.alpha:
            return LimitMeasureSpec(st, 0.0, "axes")
        if self.beta < self.alpha:
            return LimitMeasureSpec(st, 1.0, "axes", beta=self.beta)
        return LimitMeasureSpec(st, self.c_eta / self.scale ** self.alpha, "axes")

    def to_dict(self):
        return {"variant": "independent", "alpha": self.alpha, "c1": self.c1,
                "c2": self.c2, "beta": self.beta, "c_eta": self.c_eta,
                "scale": self.scale}


@dataclass(frozen=True)
class Linear(VectorModel):
    """eta = r * xi exactly, xi as in :class:`Independent`."""

    alpha: float
    c1: float = 0.5
    c2: float = 0.5
    r: float = 1.0
    scale: float = 1.0
    _k: float = field(init=False, repr=False, compare=False)
    _core: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        st = StableParams(self.alpha, self.c1, self.c2)
        if self.r <= 0:
            raise ValueError("r must be positive")
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        k, core = _centering(st, self.scale)
        object.__setattr__(self, "_k", k)
        object.__setattr__(self, "_core", core)

    @property
    def stable(self):
        return StableParams(self.alpha, self.c1, self.c2)

    def transform(self, u1, u2):
        xi = _two_sided_xi(self.stable, self.scale, self._k, self._core, u1)
        return xi, self.r * xi

    def tail_law(self, which):
        s_a = self.scale ** self.alpha
        start = self._k * self.scale
        if which == "xi_pos":
            return self.c1 * s_a, self.alpha, start
        if which == "xi_neg":
            return self.c2 * s_a, self.alpha, start
        if which == "xi_abs":
            return s_a, self.alpha, start
        if which == "eta":
            return self.c1 * (self.r * self.scale) ** self.alpha, self.alpha, self.r * start
        raise ValueError(f"which must be one of {WHICH}")

    def limit_measure(self):
        return LimitMeasureSpec(self.stable, self.c1 * self.r ** self.alpha, "line", r=self.r)

    def to_dict(self):
        return {"variant": "linear", "alpha": self.alpha, "c1": self.c1,
                "c2": self.c2, "r": self.r, "scale": self.scale}


@dataclass(frozen=True)
class Polar(VectorModel):
    """xi = rho cos(zeta), eta = rho sin(zeta) with a discrete angle law."""

    alpha: float
    angles: tuple = (0.0, math.pi)
    probs: tuple = (0.5, 0.5)
    scale: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise ValueError("alpha must lie in (0, 2)")
        object.__setattr__(self, "angles", tuple(float(a) for a in self.angles))
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        ang = np.asarray(self.angles)
        pr = np.asarray(self.probs)
        if ang.shape != pr.shape or ang.size == 0:
            raise ValueError("angles and probs must be nonempty and of equal length")
        if np.any(pr < 0) or abs(pr.sum() - 1.0) > 1e-12:
            raise ValueError("probs must be a probability vector")
        if np.any(ang < -math.pi) or np.any(ang >= math.pi):
            raise ValueError("angles must lie in [-pi, pi)")
        cos, _ = _snap_trig(ang)
        if self.alpha > 1 and abs(float(np.sum(pr * cos))) > 1e-12:
            raise ValueError("alpha > 1 requires E cos(zeta) = 0")
        if self.alpha == 1 and not _symmetric(cos, pr):
            raise ValueError("alpha = 1 requires a symmetric law of cos(zeta)")

    def _moments(self):
        cos, sin = _snap_trig(np.asarray(self.angles))
        pr = np.asarray(self.probs)
        a = self.alpha
        pos = float(np.sum(pr * np.maximum(cos, 0.0) ** a))
        neg = float(np.sum(pr * np.maximum(-cos, 0.0) ** a))
        up = float(np.sum(pr * np.maximum(sin, 0.0) ** a))
        return pos, neg, up

    @property
    def stable(self):
        pos, neg, _ = self._moments()
        if pos + neg == 0:
            raise ValueError("E|cos(zeta)|^alpha = 0: xi is degenerate")
        if self.alpha == 1.0:
            return StableParams(1.0, 0.5, 0.5)
        return StableParams(self.alpha, pos / (pos + neg), neg / (pos + neg))

    def transform(self, u1, u2):
        rho = pareto_from_uniform(np.asarray(u1, dtype=float), self.alpha, self.scale)
        cos, sin = _snap_trig(np.asarray(self.angles))
        cdf = np.cumsum(self.probs)
        cdf[-1] = 1.0
        idx = np.searchsorted(cdf, 1.0 - np.asarray(u2, dtype=float), side="right")
        idx = np.minimum(idx, len(cdf) - 1)
        return rho * cos[idx], rho * sin[idx]

    def tail_law(self, which):
        pos, neg, up = self._moments()
        s_a = self.scale ** self.alpha
        coef = {"xi_pos": pos, "xi_neg": neg, "xi_abs": pos + neg, "eta": up}
        if which not in coef:
            raise ValueError(f"which must be one of {WHICH}")
        return coef[which] * s_a, self.alpha, self.scale

    def limit_measure(self):
        pos, neg, up = self._moments()
        return LimitMeasureSpec(self.stable, up / (pos + neg), "polar",
                                angles=self.angles, probs=self.probs)

    def to_dict(self):
        return {"variant": "polar", "alpha": self.alpha, "angles": list(self.angles),
                "probs": list(self.probs), "scale": self.scale}


def _symmetric(cos, probs):
    table = {}
    for c, p in zip(np.round(cos, 12), probs):
        table[c] = table.get(c, 0.0) + p
    return all(abs(table.get(-c if c != 0 else 0.0, 0.0) - p) < 1e-12 for c, p in table.items())


@dataclass(frozen=True)
class LogW(VectorModel):
    """xi = |log W|, eta = |log(1 - W)|.

    W = exp(-X) or 1 - exp(-X) with probability 1/2 each, X Pareto(alpha,
    scale). Both coordinates then have tail (x/scale)**-alpha / 2 while a
    large xi forces a small eta and vice versa.
    """

    alpha: float
    scale: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("LogW has xi >= 0, so alpha must lie in (0, 1)")
        if self.scale <= 0:
            raise ValueError("scale must be positive")

    @property
    def stable(self):
        return StableParams(self.alpha, 1.0, 0.0)

    def _start(self):
        return max(self.scale, -math.log1p(-math.exp(-self.scale)))

    def transform(self, u1, u2):
        u1 = np.asarray(u1, dtype=float)
        x = pareto_from_uniform(np.asarray(u2, dtype=float), self.alpha, self.scale)
        small = -np.log1p(-np.exp(-x))
        left = u1 <= 0.5
        return np.where(left, x, small), np.where(left, small, x)

    def tail_law(self, which):
        half = 0.5 * self.scale ** self.alpha
        coef = {"xi_pos": half, "xi_neg": 0.0, "xi_abs": half, "eta": half}
        if which not in coef:
            raise ValueError(f"which must be one of {WHICH}")
        return coef[which], self.alpha, self._start()

    def limit_measure(self):
        return LimitMeasureSpec(self.stable, 1.0, "axes")

    def to_dict(self):
        return {"variant": "logw", "alpha": self.alpha, "scale": self.scale}


_VARIANTS = {"independent": Independent, "linear": Linear, "polar": Polar, "logw": LogW}


def model_from_dict(d: dict) -> VectorModel:
    d = dict(d)
    variant = d.pop("variant", None)
    if variant not in _VARIANTS:
        raise ValueError(f"unknown model variant {variant!r}")
    if variant == "polar":
        d["angles"] = tuple(d.get("angles", (0.0, math.pi)))
        d["probs"] = tuple(d.get("probs", (0.5, 0.5)))
    return _VARIANTS[variant](**d)


# ---------------------------------------------------------------------------
# functional interface


def sample_pair(model: VectorModel, rng: np.random.Generator):
    """One draw of (xi, eta)."""
    return model.sample(rng)


def tail_prob(model: VectorModel, x: float, which: str) -> float:
    coef, index, start = model.tail_law(which)
    if x < start:
        raise ValueError(f"tail of {which} is a pure power only for x >= {start}")
    return coef * x ** -index


def norming_a(model: VectorModel, n: int) -> float:
    """Solution a of n P{|xi| > a} = 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    coef, index, start = model.tail_law("xi_abs")
    if coef <= 0:
        raise ValueError("the |xi| tail vanishes; a(n) is undefined")
    a = (coef * n) ** (1.0 / index)
    if a < start * (1 - 1e-12):
        raise ValueError(f"n = {n} too small: a(n) = {a} falls below the power-tail range")
    return a


def norming_b(model: VectorModel, n: int) -> float:
    """Solution b of n P{eta > b} = 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    coef, index, start = model.tail_law("eta")
    if coef <= 0:
        raise ValueError("eta has no power tail; b(n) is undefined")
    b = (coef * n) ** (1.0 / index)
    if b < start * (1 - 1e-12):
        raise ValueError(f"n = {n} too small: b(n) = {b} falls below the power-tail range")
    return b


def limit_measure_spec(model: VectorModel) -> LimitMeasureSpec:
    return model.limit_measure()
