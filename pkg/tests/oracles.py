"""Slow reference implementations used to cross-check the fast code."""
import itertools
import math

import numpy as np


def prw_enumerate(xi, eta, n, horizon):
    """Direct evaluation of S_k, max T_{j+1} and log sum exp(T_{j+1})."""
    K = int(math.floor(n * horizon + 1e-9))
    walk, pmax, perp = [], [], []
    for k in range(K + 1):
        s = sum(xi[:k])
        T = [sum(xi[:j]) + eta[j] for j in range(k + 1)]
        walk.append(s)
        pmax.append(max(T))
        m = max(T)
        perp.append(m + math.log(sum(math.exp(t - m) for t in T)))
    return np.array(walk), np.array(pmax), np.array(perp)


def eval_brute(times, values, t):
    out = values[0]
    for s, v in zip(times, values):
        if s <= t:
            out = v
    return out


def eval_left_brute(times, values, t):
    out = values[0]
    for s, v in zip(times, values):
        if s < t:
            out = v
    return out


def gauge(x1, x2, x3):
    if min(x1, x3) <= x2 <= max(x1, x3):
        return 0.0
    return min(abs(x2 - x1), abs(x3 - x2))


def oscillation_brute(path, delta):
    """Max gauge over triples drawn from breakpoints, left limits and window ends."""
    t, h = path.times, path.horizon
    cand = set(t.tolist()) | {h}
    for s in t:
        for d in (delta, -delta):
            if 0 <= s + d <= h:
                cand.add(s + d)
    pts = sorted(cand)
    # each candidate time contributes its value and (when positive) its left limit
    probes = []
    for s in pts:
        # the left limit stands for times just before s, so it is ordered first
        if s > 0:
            probes.append((s, True, path.eval_left(s)))
        probes.append((s, False, path.eval(s)))
    best = 0.0
    for (a, la, fa), (_, _, fb), (c, lc, fc) in itertools.combinations_with_replacement(probes, 3):
        # t1 strictly before a and t2 at c cannot close a gap of exactly delta
        ok = c - a < delta if la and not lc else c - a <= delta
        if ok:
            best = max(best, gauge(fa, fb, fc))
    return best


def _densify(vertices, h):
    pts = [vertices[0]]
    for p, q in zip(vertices[:-1], vertices[1:]):
        L = max(abs(q[0] - p[0]), abs(q[1] - p[1]))
        k = max(1, int(math.ceil(L / h)))
        for s in range(1, k + 1):
            pts.append(p + (q - p) * s / k)
    return np.array(pts)


def discrete_frechet(P, Q):
    """Discrete Frechet distance under the max norm."""
    n, m = len(P), len(Q)
    D = np.max(np.abs(P[:, None, :] - Q[None, :, :]), axis=2)
    ca = np.full((n, m), np.inf)
    ca[0, 0] = D[0, 0]
    for i in range(n):
        for j in range(m):
            if i == 0 and j == 0:
                continue
            prev = min(ca[i - 1, j] if i else np.inf, ca[i, j - 1] if j else np.inf,
                       ca[i - 1, j - 1] if i and j else np.inf)
            ca[i, j] = max(D[i, j], prev)
    return float(ca[-1, -1])


def m1_brute(p, q, h=0.01):
    """Discrete Frechet on graphs sampled at spacing h; within h of the truth."""
    from sklab.skorokhod import completed_graph
    P = _densify(completed_graph(p).vertices, h)
    Q = _densify(completed_graph(q).vertices, h)
    return discrete_frechet(P, Q)


def j1_brute(p, q, h=0.005):
    """Minimise over piecewise-linear time changes with knots at the jumps of q.

    Knot images range over a grid of mesh h plus the jump times of p and
    points just before them, so the result lies in [d_J1, d_J1 + h].
    """
    T = p.horizon
    taus = q.jump_times
    Qv = q.values
    pj = p.jump_times
    cand = np.union1d(np.linspace(0.0, T, int(round(T / h)) + 1), pj)
    cand = np.union1d(cand, np.maximum(pj - 1e-9, 0.0))
    cand = cand[(cand > 0) & (cand < T)] if taus.size else cand
    if taus.size and taus[-1] == T:
        cand = np.append(cand, T)

    def seg_cost(u0, u1, b):
        # sup |p - Q_b| over [u0, u1), or over [u0, T] on the last segment
        closed = u1 == T and b == len(Qv) - 1
        ts = p.times
        inside = ts[(ts > u0) & ((ts <= u1) if closed else (ts < u1))]
        vals = np.concatenate(([p.eval(u0)], p.eval(inside) if inside.size else []))
        return float(np.max(np.abs(vals - Qv[b])))

    if taus.size == 0:
        return seg_cost(0.0, T, 0)
    nb = taus.size
    best = {}
    for c, u in enumerate(cand):
        best[(0, c)] = max(abs(u - taus[0]), seg_cost(0.0, u, 0) if u > 0 else 0.0)
    for b in range(1, nb):
        nxt = {}
        for c, u in enumerate(cand):
            d = abs(u - taus[b])
            top = np.inf
            for c0 in range(c):
                prev = best.get((b - 1, c0))
                if prev is None or prev >= top:
                    continue
                top = min(top, max(prev, seg_cost(cand[c0], u, b)))
            if top < np.inf:
                nxt[(b, c)] = max(d, top)
        best = nxt
    out = np.inf
    for (b, c), val in best.items():
        u = cand[c]
        if u > T or (u == T and taus[-1] != T):
            continue
        out = min(out, max(val, seg_cost(u, T, nb)))
    return float(out)


def ks_brute(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    pts = np.union1d(a, b)
    return float(max(abs(np.mean(a <= x) - np.mean(b <= x)) for x in pts))


def running_sup_brute(values):
    out, m = [], -np.inf
    for v in values:
        m = max(m, v)
        out.append(m)
    return np.array(out)


def g0_brute(f0, atoms, t):
    """sup_{s<=t} f0(s) v max_{t_k<=t} (f0(t_k-) + y_k) by scanning breakpoints."""
    vals = [f0.eval(s) for s in f0.times if s <= t]
    for tk, _, yk in atoms:
        if tk <= t:
            vals.append(f0.eval_left(tk) + yk)
    return max(vals)
