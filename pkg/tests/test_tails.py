import math

import numpy as np
import pytest

from sklab.tails import (Independent, LimitMeasureSpec, Linear, LogW, Polar, StableParams,
                         limit_measure_spec, model_from_dict, norming_a, norming_b,
                         pareto_from_uniform, sample_pair, tail_prob)

MODELS = [
    Independent(0.5, 0.3, 0.7, beta=0.5, c_eta=1.0),
    Independent(1.0, beta=2.0, c_eta=0.5),
    Independent(1.5, 0.8, 0.2, beta=1.5, c_eta=2.0, scale=0.5),
    Linear(0.8, 0.6, 0.4, r=0.5),
    Linear(1.7, 0.25, 0.75, r=2.0),
    Polar(0.7, angles=(0.0, math.pi / 2, -math.pi / 2), probs=(0.5, 0.3, 0.2)),
    Polar(1.5, angles=(0.3, math.pi - 0.3), probs=(0.5, 0.5)),
    LogW(0.6),
]


def test_stable_params_invariants():
    with pytest.raises(ValueError):
        StableParams(2.0)
    with pytest.raises(ValueError):
        StableParams(0.0)
    with pytest.raises(ValueError):
        StableParams(0.5, 0.6, 0.6)
    with pytest.raises(ValueError):
        StableParams(1.0, 1.0, 0.0)
    assert StableParams(1.5, 0.75, 0.25).skew == 0.5


def test_inverse_cdf_example():
    # P{xi > x} = x^-1 on x >= 1 inverts to u^-1
    assert pareto_from_uniform(0.25, 1.0) == 4.0
    m = Independent(0.5, 1.0, 0.0)
    xi, eta = m.transform(np.array([0.0625]), np.array([0.3]))
    assert xi[0] == 256.0 and eta[0] == 0.0


def test_linear_example_and_bit_exact():
    m = Linear(0.8, 0.5, 0.5, r=0.5)
    # a uniform in the negative branch that inverts to xi = -2
    u = 0.5 + 0.5 * 2.0 ** -0.8
    xi, eta = m.transform(np.array([u]), np.array([0.7]))
    assert xi[0] == pytest.approx(-2.0, rel=1e-12) and eta[0] == 0.5 * xi[0]
    xi, eta = m.sample(np.random.default_rng(0), 10_000)
    assert np.array_equal(eta, 0.5 * xi)


def test_polar_deterministic_angle():
    m = Polar(0.7, angles=(math.pi / 2, 0.0), probs=(0.5, 0.5))
    u1 = np.array([3.0 ** -0.7])
    xi, eta = m.transform(u1, np.array([1.0]))  # 1 - u2 = 0 selects the first angle
    assert xi[0] == 0.0 and eta[0] == pytest.approx(3.0, rel=1e-14)


def test_sample_pair_reproducible():
    m = MODELS[0]
    a = [sample_pair(m, np.random.default_rng(5)) for _ in range(2)]
    assert a[0] == a[1]
    rng = np.random.default_rng(5)
    b = [sample_pair(m, rng) for _ in range(2)]
    assert b[0] == a[0] and b[1] != b[0]


def test_norming_examples():
    m = Independent(0.5)
    assert norming_a(m, 100) == pytest.approx(1e4, rel=1e-12)
    assert norming_a(m, 1) == 1.0
    assert norming_b(Independent(0.5, beta=1.0, c_eta=1.0), 1000) == pytest.approx(1000)
    assert norming_b(Independent(0.9, beta=0.5, c_eta=2.0), 8) == pytest.approx(256)
    assert norming_b(Independent(0.9, beta=0.5, c_eta=1.0), 1) == 1.0
    with pytest.raises(ValueError):
        norming_b(Independent(0.5), 10)
    with pytest.raises(ValueError):
        norming_a(m, 0)


def test_polar_norming():
    m = Polar(0.7, angles=(0.0, 2.0, -2.5), probs=(0.2, 0.5, 0.3))
    ecos = sum(p * abs(math.cos(a)) ** 0.7 for a, p in zip(m.angles, m.probs))
    assert norming_a(m, 500) == pytest.approx(ecos ** (1 / 0.7) * 500 ** (1 / 0.7), rel=1e-12)
    pos = sum(p * max(math.cos(a), 0) ** 0.7 for a, p in zip(m.angles, m.probs))
    assert tail_prob(m, 10.0, "xi_pos") == pytest.approx(pos * 10 ** -0.7, rel=1e-12)


def test_tail_prob_examples():
    m = Independent(1.5, 0.25, 0.75)
    sym = Independent(1.5)
    assert tail_prob(sym, 4.0, "xi_abs") == 0.125
    # with c1 != c2 the centred law is a pure power only past k * scale
    k = m.tail_law("xi_pos")[2]
    assert k > 1
    assert tail_prob(m, 4.0, "xi_pos") == pytest.approx(0.03125)
    with pytest.raises(ValueError):
        tail_prob(sym, 0.5, "xi_abs")
    with pytest.raises(ValueError):
        tail_prob(sym, 4.0, "nope")


@pytest.mark.parametrize("model", MODELS, ids=lambda m: type(m).__name__)
def test_norming_inverts_tail(model):
    for n in (10, 100, 1000, 10 ** 6):
        a = norming_a(model, n)
        assert n * tail_prob(model, a, "xi_abs") == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("model", MODELS, ids=lambda m: type(m).__name__)
def test_empirical_tail(model):
    N = 100_000
    xi, eta = model.sample(np.random.default_rng(11), N)
    for n in (10, 100):
        a = norming_a(model, n)
        count = np.sum(np.abs(xi) > a)
        p = 1.0 / n
        assert abs(count - N * p) <= 3 * math.sqrt(N * p * (1 - p))
    coef, index, start = model.tail_law("eta")
    if coef > 0:
        x = max(start, 1.0) * 2.0
        p = tail_prob(model, x, "eta")
        assert abs(np.sum(eta > x) - N * p) <= 3 * math.sqrt(N * p) + 1


@pytest.mark.parametrize("model", [MODELS[2], MODELS[4], MODELS[6]], ids=str)
def test_centred_when_alpha_above_one(model):
    # exact mean from the construction: tails plus the core atom
    xi, _ = model.sample(np.random.default_rng(2), 400_000)
    assert abs(np.median(xi)) < 5
    k = getattr(model, "_k", 1.0)
    s = model.scale
    a = model.alpha
    c1, c2 = model.stable.c1, model.stable.c2
    p = k ** -a
    tails = (c1 - c2) * s * a / (a - 1) * k ** (1 - a)
    core = getattr(model, "_core", 0.0)
    assert tails + (1 - p) * core == pytest.approx(0.0, abs=1e-12)


def test_limit_measure_degeneracy():
    assert not limit_measure_spec(Linear(0.8, r=0.5)).degenerate()
    assert limit_measure_spec(Linear(0.8, r=2.0)).degenerate()
    assert limit_measure_spec(Linear(0.8, r=1.0)).degenerate()
    # no angle in (0, pi/4): no mass on 0 < y < x
    m = Polar(0.7, angles=(0.0, math.pi / 3, -2.0), probs=(0.4, 0.3, 0.3))
    assert limit_measure_spec(m).degenerate()
    m = Polar(0.7, angles=(0.5, -math.pi), probs=(0.5, 0.5))
    assert not limit_measure_spec(m).degenerate()
    assert limit_measure_spec(Independent(0.5, beta=0.5, c_eta=1.0)).degenerate()
    assert limit_measure_spec(LogW(0.5)).degenerate()


def test_limit_measure_marginals_linear():
    spec = Linear(0.8, 0.6, 0.4, r=2.0).limit_measure()
    eps = 0.01
    comps = {c[1]: c for c in spec.components(eps)}
    # positive atoms sit on y = 2x; above eps in either coordinate means x > eps/2
    assert comps["line+"][0] == pytest.approx(0.6 * (eps / 2) ** -0.8)
    assert comps["i-"][0] == pytest.approx(0.4 * eps ** -0.8)
    assert spec.perturb_constant == pytest.approx(0.6 * 2 ** 0.8)


def test_polar_measure_matches_model_tails():
    m = Polar(0.7, angles=(0.0, 1.0, -2.0, 2.5), probs=(0.1, 0.4, 0.2, 0.3))
    spec = m.limit_measure()
    n = 100
    a = norming_a(m, n)
    N = 400_000
    xi, eta = m.sample(np.random.default_rng(4), N)
    # n P{(xi, eta+)/a(n) in E_eps} is exact once every radius involved exceeds the scale
    for eps in (0.5, 1.0, 2.0):
        hits = np.sum((np.abs(xi) > eps * a) | (eta > eps * a))
        expected = N * spec.mass_above(eps) / n
        assert abs(hits - expected) <= 4 * math.sqrt(expected)


def test_model_validation():
    with pytest.raises(ValueError):
        Polar(1.5, angles=(0.0, 1.0), probs=(0.5, 0.5))
    with pytest.raises(ValueError):
        Polar(1.0, angles=(0.0, 0.5), probs=(0.5, 0.5))
    with pytest.raises(ValueError):
        Polar(0.5, angles=(4.0,), probs=(1.0,))
    with pytest.raises(ValueError):
        Linear(0.5, r=0.0)
    with pytest.raises(ValueError):
        Independent(0.5, c_eta=1.0)
    with pytest.raises(ValueError):
        LogW(1.2)
    with pytest.raises(ValueError):
        LimitMeasureSpec(StableParams(0.5), structure="cube")


@pytest.mark.parametrize("model", MODELS, ids=lambda m: type(m).__name__)
def test_dict_round_trip(model):
    assert model_from_dict(model.to_dict()) == model
    with pytest.raises(ValueError):
        model_from_dict({"variant": "gamma"})


def test_logw_pairs():
    m = LogW(0.5)
    xi, eta = m.sample(np.random.default_rng(0), 1000)
    # the short side underflows to 0 once the long side passes ~745
    assert np.all(xi >= 0) and np.all(eta >= 0)
    assert np.allclose(np.exp(-xi) + np.exp(-eta), 1.0, atol=1e-12)
