"""Numba trial kernel for the stochastic-geometry simulator.

Mirrors lrfhss._rng and the reference sampler in lrfhss.montecarlo draw for
draw: any change to the trial procedure here must be applied there too (the
test suite compares the two paths exactly).

Canonical per-trial draw order, in normalized units (unit gateway density):

  1. gateway count ~ Poisson(pi * radius^2), then per gateway (u_r, u_theta)
  2. gateways sorted by distance; considered prefixes chosen by the
     product/marginal pruning rule; interferer disk radius fixed
  3. per message (R header replicas, then L fragments):
       interferer count ~ Poisson, positions (u_r, u_theta each), marks
       (one exponential each), then one device-fading exponential per
       considered gateway until the first decode (loop breaks on success)

Pruned gateways are treated as non-receiving; the pruning thresholds bound
the resulting bias far below one Monte Carlo standard error.  Interference
from outside the sampled disk enters as its exact mean (an explicit
deterministic term), which removes the window-truncation bias.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit, prange

U64 = np.uint64
_GOLDEN = U64(0x9E3779B97F4A7C15)
_MIX_1 = U64(0xBF58476D1CE4E5B9)
_MIX_2 = U64(0x94D049BB133111EB)
_S30 = U64(30)
_S27 = U64(27)
_S31 = U64(31)
_S11 = U64(11)
_U53 = 2.0 ** -53
_PTRS_CUTOVER = 10.0
_EPS_DIST = 1e-6


@njit(cache=True)
def _mix64(z):
    z = (z ^ (z >> _S30)) * _MIX_1
    z = (z ^ (z >> _S27)) * _MIX_2
    return z ^ (z >> _S31)


@njit(cache=True)
def _stream_base(seed, trial_index):
    return _mix64(seed + _GOLDEN * (U64(trial_index) + U64(1)))


@njit(cache=True)
def _next_u64(state):
    state = state + _GOLDEN
    return _mix64(state), state


@njit(cache=True)
def _uniform(state):
    x, state = _next_u64(state)
    return float(x >> _S11) * _U53, state


@njit(cache=True)
def _exponential(state):
    x, state = _next_u64(state)
    m = x >> _S11
    if m == U64(0):
        m = U64(1)
    return -math.log1p(-float(m) * _U53), state


@njit(cache=True)
def _poisson(lam, state):
    if lam == 0.0:
        return 0, state
    if lam < _PTRS_CUTOVER:
        limit = math.exp(-lam)
        k = 0
        prod, state = _uniform(state)
        while prod > limit:
            k += 1
            u, state = _uniform(state)
            prod *= u
        return k, state
    log_lam = math.log(lam)
    b = 0.931 + 2.53 * math.sqrt(lam)
    a = -0.059 + 0.02483 * b
    inv_alpha = 1.1239 + 1.1328 / (b - 3.4)
    v_r = 0.9277 - 3.6224 / (b - 2.0)
    while True:
        u, state = _uniform(state)
        u -= 0.5
        v, state = _uniform(state)
        u_s = 0.5 - abs(u)
        if u_s == 0.0:
            continue
        k = math.floor((2.0 * a / u_s + b) * u + lam + 0.43)
        if u_s >= 0.07 and v <= v_r:
            return int(k), state
        if k < 0.0 or (u_s < 0.013 and v > u_s):
            continue
        lhs = math.log(v) + math.log(inv_alpha) - math.log(a / (u_s * u_s) + b)
        rhs = k * log_lam - lam - math.lgamma(k + 1.0)
        if lhs <= rhs:
            return int(k), state


@njit(cache=True)
def _uniform_open(state):
    x, state = _next_u64(state)
    m = x >> _S11
    if m == U64(0):
        m = U64(1)
    return float(m) * _U53, state


@njit(cache=True)
def _stable_onesided(beta, exp_1, exp_2, exp_3, state):
    """One-sided stable draw with Laplace transform exp(-s**beta)
    (Kanter's method); exp_1..exp_3 are the precomputed exponents
    beta/(1-beta), 1/(1-beta) and (1-beta)/beta."""
    u, state = _uniform_open(state)
    w, state = _exponential(state)
    a = (math.sin(beta * math.pi * u) ** exp_1
         * math.sin((1.0 - beta) * math.pi * u)
         / math.sin(math.pi * u) ** exp_2)
    return (a / w) ** exp_3, state


@njit(cache=True)
def _pow_neg_half_alpha(d2, half_alpha):
    # d2 ** (-half_alpha); sqrt chain for the common alpha = 3.5
    if half_alpha == 1.75:
        return 1.0 / (d2 * math.sqrt(d2 * math.sqrt(d2)))
    return d2 ** (-half_alpha)


@njit(cache=True)
def _one_trial(seed, trial_index, radius, lam_hat, half_alpha, sigma_h, sigma_p,
               a_h, a_p, n_rep, n_frag, noise, compensate,
               prune_union, prune_marginal, margin):
    """Run one deployment; returns (header_macro, frags_union, header_near,
    frags_near) with fragment counts in [0, n_frag]."""
    state = _stream_base(seed, trial_index)

    n_gw, state = _poisson(math.pi * radius * radius, state)
    if n_gw == 0:
        return 0, 0, 0, 0, state

    gx = np.empty(n_gw)
    gy = np.empty(n_gw)
    d2 = np.empty(n_gw)
    for k in range(n_gw):
        u1, state = _uniform(state)
        u2, state = _uniform(state)
        r = radius * math.sqrt(u1)
        th = 2.0 * math.pi * u2
        gx[k] = r * math.cos(th)
        gy[k] = r * math.sin(th)
        d = max(r, _EPS_DIST)
        d2[k] = d * d

    order = np.argsort(d2)

    # considered prefixes: stop when the remaining gateways cannot change
    # the union outcome (product of marginal miss probabilities below
    # prune_union) or are individually negligible (marginal decode below
    # prune_marginal)
    k_h = n_gw
    prod = 1.0
    for c in range(n_gw):
        p = math.exp(-a_h * d2[order[c]])
        prod *= 1.0 - p
        if prod < prune_union or p < prune_marginal:
            k_h = c + 1
            break
    k_p = n_gw
    prod = 1.0
    for c in range(n_gw):
        p = math.exp(-a_p * d2[order[c]])
        prod *= 1.0 - p
        if prod < prune_union or p < prune_marginal:
            k_p = c + 1
            break

    k_max = max(k_h, k_p)
    if compensate:
        disk = math.sqrt(d2[order[k_max - 1]]) + margin
    else:
        disk = radius

    # per-considered-gateway threshold scale sigma * y^alpha
    s_h = np.empty(k_max)
    s_p = np.empty(k_max)
    for c in range(k_max):
        y_alpha = d2[order[c]] ** half_alpha
        s_h[c] = sigma_h * y_alpha
        s_p[c] = sigma_p * y_alpha

    if compensate:
        alpha = 2.0 * half_alpha
        c0 = 2.0 * math.pi * lam_hat * disk ** (2.0 - alpha) / (alpha - 2.0)
        c2 = 0.5 * math.pi * alpha * lam_hat * disk ** (-alpha)
    else:
        c0 = 0.0
        c2 = 0.0

    mean_interferers = lam_hat * math.pi * disk * disk
    eps2 = _EPS_DIST * _EPS_DIST

    header_macro = 0
    header_near = 0
    frags_union = 0
    frags_near = 0

    for msg in range(n_rep + n_frag):
        is_header = msg < n_rep
        k_c = k_h if is_header else k_p

        n_int, state = _poisson(mean_interferers, state)
        ix = np.empty(n_int)
        iy = np.empty(n_int)
        marks = np.empty(n_int)
        for j in range(n_int):
            u1, state = _uniform(state)
            u2, state = _uniform(state)
            r = disk * math.sqrt(u1)
            th = 2.0 * math.pi * u2
            ix[j] = r * math.cos(th)
            iy[j] = r * math.sin(th)
        for j in range(n_int):
            marks[j], state = _exponential(state)

        decoded_any = False
        decoded_near = False
        for c in range(k_c):
            fade, state = _exponential(state)
            k = order[c]
            denom = noise + c0 + c2 * d2[k]
            x0 = gx[k]
            y0 = gy[k]
            for j in range(n_int):
                dx = ix[j] - x0
                dy = iy[j] - y0
                dd = dx * dx + dy * dy
                if dd < eps2:
                    dd = eps2
                denom += marks[j] * _pow_neg_half_alpha(dd, half_alpha)
            scale = s_h[c] if is_header else s_p[c]
            if fade > scale * denom:
                decoded_any = True
                if c == 0:
                    decoded_near = True
                break

        if is_header:
            if decoded_any:
                header_macro = 1
            if decoded_near:
                header_near = 1
        else:
            if decoded_any:
                frags_union += 1
            if decoded_near:
                frags_near += 1

    return header_macro, frags_union, header_near, frags_near, state


@njit(cache=True, parallel=True)
def run_trials(trials, seed, radius, lam_hat, half_alpha, sigma_h, sigma_p,
               a_h, a_p, n_rep, n_frag, noise, compensate,
               prune_union, prune_marginal, margin, out):
    for t in prange(trials):
        hm, xu, hn, xn, _ = _one_trial(
            seed, t, radius, lam_hat, half_alpha, sigma_h, sigma_p,
            a_h, a_p, n_rep, n_frag, noise, compensate,
            prune_union, prune_marginal, margin)
        out[t, 0] = hm
        out[t, 1] = xu
        out[t, 2] = hn
        out[t, 3] = xn


@njit(cache=True)
def _one_trial_mirrored(seed, trial_index, radius, stable_scale, half_alpha,
                        sigma_h, sigma_p, a_h, a_p, n_rep, n_frag, noise,
                        prune_union, prune_marginal):
    """One trial under the analytical independence assumptions: each
    (message, gateway) pair sees its own infinite-plane interference,
    sampled from the one-sided stable law of Poisson shot noise.

    Gateway positions enter only through distances, so only distances are
    drawn (one uniform per gateway).  Draw order: gateway count, gateway
    radii, then per message and considered gateway (stable uniform, stable
    exponential, fading exponential) until the first decode.
    """
    state = _stream_base(seed, trial_index)

    n_gw, state = _poisson(math.pi * radius * radius, state)
    if n_gw == 0:
        return 0, 0, 0, 0, state

    d2 = np.empty(n_gw)
    for k in range(n_gw):
        u, state = _uniform(state)
        d = max(radius * math.sqrt(u), _EPS_DIST)
        d2[k] = d * d
    d2 = np.sort(d2)

    k_h = n_gw
    prod = 1.0
    for c in range(n_gw):
        p = math.exp(-a_h * d2[c])
        prod *= 1.0 - p
        if prod < prune_union or p < prune_marginal:
            k_h = c + 1
            break
    k_p = n_gw
    prod = 1.0
    for c in range(n_gw):
        p = math.exp(-a_p * d2[c])
        prod *= 1.0 - p
        if prod < prune_union or p < prune_marginal:
            k_p = c + 1
            break

    k_max = max(k_h, k_p)
    s_h = np.empty(k_max)
    s_p = np.empty(k_max)
    for c in range(k_max):
        y_alpha = d2[c] ** half_alpha
        s_h[c] = sigma_h * y_alpha
        s_p[c] = sigma_p * y_alpha

    beta = 1.0 / half_alpha
    exp_1 = beta / (1.0 - beta)
    exp_2 = 1.0 / (1.0 - beta)
    exp_3 = (1.0 - beta) / beta

    header_macro = 0
    header_near = 0
    frags_union = 0
    frags_near = 0

    for msg in range(n_rep + n_frag):
        is_header = msg < n_rep
        k_c = k_h if is_header else k_p
        decoded_any = False
        decoded_near = False
        for c in range(k_c):
            x, state = _stable_onesided(beta, exp_1, exp_2, exp_3, state)
            fade, state = _exponential(state)
            interference = stable_scale * x
            scale = s_h[c] if is_header else s_p[c]
            if fade > scale * (noise + interference):
                decoded_any = True
                if c == 0:
                    decoded_near = True
                break
        if is_header:
            if decoded_any:
                header_macro = 1
            if decoded_near:
                header_near = 1
        else:
            if decoded_any:
                frags_union += 1
            if decoded_near:
                frags_near += 1

    return header_macro, frags_union, header_near, frags_near, state


@njit(cache=True, parallel=True)
def run_trials_mirrored(trials, seed, radius, stable_scale, half_alpha,
                        sigma_h, sigma_p, a_h, a_p, n_rep, n_frag, noise,
                        prune_union, prune_marginal, out):
    for t in prange(trials):
        hm, xu, hn, xn, _ = _one_trial_mirrored(
            seed, t, radius, stable_scale, half_alpha, sigma_h, sigma_p,
            a_h, a_p, n_rep, n_frag, noise, prune_union, prune_marginal)
        out[t, 0] = hm
        out[t, 1] = xu
        out[t, 2] = hn
        out[t, 3] = xn
