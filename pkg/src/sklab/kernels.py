"""Hot inner loops.

Every kernel exists as a loop body (compiled with numba when enabled) and,
where the computation vectorises, as a numpy variant. The public names at the
bottom of the module pick one of the two according to ``USE_NUMBA``.
"""
import math

import numpy as np

from ._accel import USE_NUMBA, jit

# ---------------------------------------------------------------------------
# perturbed random walk functionals


def _prw_loop(xi, eta):
    n = xi.shape[0]
    walk = np.empty(n)
    pmax = np.empty(n)
    perp = np.empty(n)
    s = 0.0
    m = -np.inf
    acc = 0.0
    for k in range(n):
        if k > 0:
            s += xi[k - 1]
        walk[k] = s
        t = s + eta[k]
        if t > m:
            # renormalise the running sum to the new maximum
            acc = acc * math.exp(m - t) + 1.0
            m = t
        else:
            acc += math.exp(t - m)
        pmax[k] = m
        perp[k] = m + math.log(acc)
    return walk, pmax, perp


def _prw_numpy(xi, eta):
    n = xi.shape[0]
    walk = np.empty(n)
    walk[0] = 0.0
    np.cumsum(xi[:-1], out=walk[1:])
    t = walk + eta
    pmax = np.maximum.accumulate(t)
    perp = np.logaddexp.accumulate(t)
    # logaddexp accumulates rounding; project back onto the exact bounds
    upper = pmax + np.log(np.arange(1, n + 1, dtype=np.float64))
    np.maximum(perp, pmax, out=perp)
    np.minimum(perp, upper, out=perp)
    return walk, pmax, perp


prw_loop_jit = jit(_prw_loop)

# ---------------------------------------------------------------------------
# two-sample Kolmogorov-Smirnov statistic on sorted samples


def _ks_loop(a, b):
    n1 = a.shape[0]
    n2 = b.shape[0]
    i = 0
    j = 0
    d = 0.0
    while i < n1 and j < n2:
        x = a[i] if a[i] <= b[j] else b[j]
        while i < n1 and a[i] <= x:
            i += 1
        while j < n2 and b[j] <= x:
            j += 1
        diff = abs(i / n1 - j / n2)
        if diff > d:
            d = diff
    # once one sample is exhausted the gap only closes
    return d


def _ks_numpy(a, b):
    allv = np.concatenate((a, b))
    cdf1 = np.searchsorted(a, allv, side="right") / a.size
    cdf2 = np.searchsorted(b, allv, side="right") / b.size
    return float(np.max(np.abs(cdf1 - cdf2)))


ks_loop_jit = jit(_ks_loop)

# ---------------------------------------------------------------------------
# M1 oscillation of a step function


def _oscillation_loop(times, values, delta):
    n = values.shape[0]
    best = 0.0
    for i in range(n - 1):
        lo_int = np.inf
        hi_int = -np.inf
        for j in range(i + 1, n):
            if j > i + 1:
                if times[j] - times[i + 1] >= delta:
                    break
                v = values[j - 1]
                if v < lo_int:
                    lo_int = v
                if v > hi_int:
                    hi_int = v
                lo = min(values[i], values[j])
                hi = max(values[i], values[j])
                g = max(hi_int - hi, lo - lo_int)
                if g > best:
                    best = g
    return best


oscillation_jit = jit(_oscillation_loop)

# ---------------------------------------------------------------------------
# M1 decision: monotone traversal of two completed graphs (free space, sup norm)


def _free_interval(a0, a1, b0, b1, q0, q1, eps):
    """Parameters s in [0, 1] with |a + s(b - a) - q|_inf <= eps, as (lo, hi)."""
    lo = 0.0
    hi = 1.0
    d = b0 - a0
    c = q0 - a0
    if d == 0.0:
        if abs(c) > eps:
            return 1.0, 0.0
    else:
        s1 = (c - eps) / d
        s2 = (c + eps) / d
        if s1 > s2:
            s1, s2 = s2, s1
        lo = max(lo, s1)
        hi = min(hi, s2)
    d = b1 - a1
    c = q1 - a1
    if d == 0.0:
        if abs(c) > eps:
            return 1.0, 0.0
    else:
        s1 = (c - eps) / d
        s2 = (c + eps) / d
        if s1 > s2:
            s1, s2 = s2, s1
        lo = max(lo, s1)
        hi = min(hi, s2)
    return lo, hi


_free_interval_jit = jit(_free_interval)


def _m1_decide(P, Q, eps):
    N = P.shape[0] - 1
    M = Q.shape[0] - 1
    if max(abs(P[0, 0] - Q[0, 0]), abs(P[0, 1] - Q[0, 1])) > eps:
        return False
    if max(abs(P[N, 0] - Q[M, 0]), abs(P[N, 1] - Q[M, 1])) > eps:
        return False
    # reachable intervals on the left edge of cell (i, j), for the current i
    llo = np.empty(M)
    lhi = np.empty(M)
    chain = True
    for j in range(M):
        lo, hi = _free_interval_jit(Q[j, 0], Q[j, 1], Q[j + 1, 0], Q[j + 1, 1],
                                   P[0, 0], P[0, 1], eps)
        if chain and lo <= 0.0 and lo <= hi:
            llo[j] = 0.0
            lhi[j] = hi
            chain = hi >= 1.0
        else:
            llo[j] = 1.0
            lhi[j] = 0.0
            chain = False
    row_chain = True
    top_lo = 1.0
    top_hi = 0.0
    for i in range(N):
        lo, hi = _free_interval_jit(P[i, 0], P[i, 1], P[i + 1, 0], P[i + 1, 1],
                                   Q[0, 0], Q[0, 1], eps)
        if row_chain and lo <= 0.0 and lo <= hi:
            blo = 0.0
            bhi = hi
            row_chain = hi >= 1.0
        else:
            blo = 1.0
            bhi = 0.0
            row_chain = False
        for j in range(M):
            l_ok = llo[j] <= lhi[j]
            b_ok = blo <= bhi
            rlo, rhi = _free_interval_jit(Q[j, 0], Q[j, 1], Q[j + 1, 0], Q[j + 1, 1],
                                         P[i + 1, 0], P[i + 1, 1], eps)
            tlo, thi = _free_interval_jit(P[i, 0], P[i, 1], P[i + 1, 0], P[i + 1, 1],
                                         Q[j + 1, 0], Q[j + 1, 1], eps)
            if b_ok:
                nl_lo, nl_hi = rlo, rhi
            elif l_ok:
                nl_lo, nl_hi = max(rlo, llo[j]), rhi
            else:
                nl_lo, nl_hi = 1.0, 0.0
            if l_ok:
                nb_lo, nb_hi = tlo, thi
            elif b_ok:
                nb_lo, nb_hi = max(tlo, blo), thi
            else:
                nb_lo, nb_hi = 1.0, 0.0
            llo[j] = nl_lo
            lhi[j] = nl_hi
            blo = nb_lo
            bhi = nb_hi
        top_lo = blo
        top_hi = bhi
    if M > 0 and llo[M - 1] <= lhi[M - 1] and lhi[M - 1] >= 1.0:
        return True
    if N > 0 and top_lo <= top_hi and top_hi >= 1.0:
        return True
    return False


m1_decide_jit = jit(_m1_decide)

# ---------------------------------------------------------------------------
# J1 decision: order-preserving alignment of the two jump sequences


def _j1_decide(tp, vp, tq, vq, horizon, eps):
    k = vp.shape[0] - 1
    m = vq.shape[0] - 1
    if abs(vp[0] - vq[0]) > eps:
        return False
    inf = np.inf
    cur = np.full(m + 1, inf)
    nxt = np.full(m + 1, inf)
    cur[0] = 0.0
    for a in range(k + 1):
        for b in range(m + 1):
            nxt[b] = inf
        for b in range(m + 1):
            # q jumps alone: (a, b-1) -> (a, b) at time tq[b]
            if b > 0 and cur[b - 1] < inf and abs(vp[a] - vq[b]) <= eps:
                if cur[b - 1] <= tq[b] and tq[b] < cur[b]:
                    cur[b] = tq[b]
            c = cur[b]
            if c == inf or a == k:
                continue
            tau = tp[a + 1]
            # p jumps alone at u with |u - tau| <= eps, before the next q jump
            if abs(vp[a + 1] - vq[b]) <= eps:
                if tau >= horizon:
                    lo = horizon
                    hi = horizon
                else:
                    lo = max(tau - eps, 0.0)
                    hi = min(tau + eps, horizon)
                if c > lo:
                    lo = c
                bound = tq[b + 1] if b < m else horizon
                if lo <= hi and lo <= bound and lo < nxt[b]:
                    nxt[b] = lo
            # both jump together at tq[b+1]
            if b < m and abs(vp[a + 1] - vq[b + 1]) <= eps:
                s = tq[b + 1]
                if c <= s and abs(s - tau) <= eps and (s >= horizon) == (tau >= horizon):
                    if s < nxt[b + 1]:
                        nxt[b + 1] = s
        if a == k:
            return cur[m] < inf
        for b in range(m + 1):
            cur[b] = nxt[b]
    return False


j1_decide_jit = jit(_j1_decide)

# ---------------------------------------------------------------------------
# public selection

if USE_NUMBA:
    prw_functionals = prw_loop_jit
    ks_sorted = ks_loop_jit
    oscillation = oscillation_jit
    m1_decide = m1_decide_jit
    j1_decide = j1_decide_jit
else:
    prw_functionals = _prw_numpy
    ks_sorted = _ks_numpy
    oscillation = _oscillation_loop
    m1_decide = _m1_decide
    j1_decide = _j1_decide
