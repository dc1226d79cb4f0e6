"""Closed-form success probabilities for macro-diversity LR-FHSS reception.

The model is interference-limited: a Rayleigh-faded message survives at a
receiver when its SINR clears a linear threshold, interference comes from a
thinned Poisson field of concurrent transmitters, and noise is dropped.
Averaging over all gateway positions yields closed forms for the header
union success and the per-fragment union success; payload recovery is then a
binomial tail over the erasure-coded fragments.
"""

from __future__ import annotations

import math
from fractions import Fraction

from scipy.special import gammaln, logsumexp

from .parameters import (
    AirtimeModel,
    NetworkScenario,
    SuccessBreakdown,
    airtimes,
    fragment_count,
    required_fragments,
    total_bits,
)


def interference_constant(alpha: float) -> float:
    """Shot-noise constant 2*pi^2 / (alpha * sin(2*pi/alpha)).

    Scales the exponent of the interference Laplace transform for a Poisson
    field with unit-mean exponential fading.  Finite only for alpha > 2,
    where the interference fractional moment exists.
    """
    if alpha <= 2:
        raise ValueError("interference constant diverges for alpha <= 2")
    return 2.0 * math.pi**2 / (alpha * math.sin(2.0 * math.pi / alpha))


def coverage_scale(alpha: float) -> float:
    """pi / interference_constant(alpha); multiplies the gateway-to-interferer
    density ratio in every macro closed form."""
    return math.pi / interference_constant(alpha)


def alternating_binomial_sum_exact(n: int) -> Fraction:
    """Sum of binom(n, r) * (-1)^r / r for r = 1..n, as an exact rational.

    Equals minus the n-th harmonic number; the identity is exercised by
    brute-force summation in the test suite.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return sum(
        (Fraction(math.comb(n, r) * (-1) ** r, r) for r in range(1, n + 1)),
        Fraction(0),
    )


def alternating_binomial_sum(n: int) -> float:
    return float(alternating_binomial_sum_exact(n))


def effective_interferer_density(scenario: NetworkScenario,
                                 air: AirtimeModel) -> float:
    """Thinned density of concurrently interfering devices.

    The factor 2 is the pure-ALOHA vulnerability window (twice the airtime);
    the denominator spreads transmissions across the OBW grid.
    """
    ch = scenario.channels
    on_air = (scenario.profile.header_replicas * air.header_seconds
              + air.fragment_count * air.fragment_seconds)
    return (2.0 * scenario.packet_rate * on_air / (ch.n_ocw * ch.n_obw)
            * scenario.device_density)


def sinr_decay_rate(alpha: float, interferer_density: float,
                    sinr_threshold: float) -> float:
    """Coefficient a in the distance law exp(-a*y^2) for single-message
    decode probability at range y."""
    return (interference_constant(alpha) * interferer_density
            * sinr_threshold ** (2.0 / alpha))


def header_success_at_distance(y: float, scenario: NetworkScenario,
                               interferer_density: float) -> float:
    """Probability that a gateway at range y decodes at least one of the R
    header replicas."""
    if y < 0:
        raise ValueError("distance must be non-negative")
    prof = scenario.profile
    a = sinr_decay_rate(scenario.alpha, interferer_density,
                        prof.sinr_threshold_header)
    p_one = math.exp(-a * y * y)
    return 1.0 - (1.0 - p_one) ** prof.header_replicas


def _macro_union_exponent(alpha: float, n_replicas: int, sinr_threshold: float,
                          density_ratio: float) -> float:
    """Negative exponent of the all-gateway miss probability.

    density_ratio is gateway density over effective interferer density.
    """
    k2 = alternating_binomial_sum(n_replicas)
    return (coverage_scale(alpha) * k2 * sinr_threshold ** (-2.0 / alpha)
            * density_ratio)


def header_success_macro(scenario: NetworkScenario,
                         interferer_density: float) -> float:
    """Probability that at least one gateway anywhere decodes the header.

    Zero interferer density means zero load; the limit value 1 is returned
    by continuity.
    """
    if interferer_density < 0:
        raise ValueError("interferer_density must be non-negative")
    if interferer_density == 0.0:
        return 1.0
    prof = scenario.profile
    exponent = _macro_union_exponent(
        scenario.alpha, prof.header_replicas, prof.sinr_threshold_header,
        scenario.gateway_density / interferer_density)
    return 1.0 - math.exp(exponent)


def fragment_success_macro(scenario: NetworkScenario,
                           interferer_density: float) -> float:
    """Probability that one given fragment is received by at least one
    gateway: the header law with a single replica and the payload threshold."""
    if interferer_density < 0:
        raise ValueError("interferer_density must be non-negative")
    if interferer_density == 0.0:
        return 1.0
    prof = scenario.profile
    exponent = _macro_union_exponent(
        scenario.alpha, 1, prof.sinr_threshold_payload,
        scenario.gateway_density / interferer_density)
    return 1.0 - math.exp(exponent)


def log_binomial_tail(n: int, k_min: int, p: float) -> float:
    """log P(X >= k_min) for X ~ Binomial(n, p), by log-space summation.

    Stable for n up to at least 1e4: each pmf term is assembled from
    gammaln and the terms are combined with logsumexp.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not (0.0 <= p <= 1.0):
        raise ValueError("p must lie in [0, 1]")
    if k_min <= 0:
        return 0.0
    if k_min > n:
        return -math.inf
    if p == 0.0:
        return -math.inf
    if p == 1.0:
        return 0.0
    log_p = math.log(p)
    log_q = math.log1p(-p)
    ks = range(k_min, n + 1)
    terms = [
        gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
        + k * log_p + (n - k) * log_q
        for k in ks
    ]
    return min(0.0, float(logsumexp(terms)))


def binomial_tail(n: int, k_min: int, p: float) -> float:
    """P(X >= k_min) for X ~ Binomial(n, p)."""
    return math.exp(log_binomial_tail(n, k_min, p))


def binomial_tail_derivative(n: int, k_min: int, p: float) -> float:
    """d/dp of binomial_tail(n, k_min, p) = n * pmf(k_min - 1; n - 1, p)."""
    if k_min <= 0 or k_min > n or p <= 0.0 or p >= 1.0:
        return 0.0
    k = k_min - 1
    m = n - 1
    log_pmf = (gammaln(m + 1) - gammaln(k + 1) - gammaln(m - k + 1)
               + k * math.log(p) + (m - k) * math.log1p(-p))
    return n * math.exp(log_pmf)


def payload_success(fragment_success: float, total_fragments: int,
                    recovery_fraction) -> float:
    """Probability of recovering the payload: at least ceil(mu*L) of the L
    independent fragments must be received."""
    k_min = required_fragments(total_fragments, recovery_fraction)
    return binomial_tail(total_fragments, k_min, fragment_success)


def total_success(scenario: NetworkScenario) -> SuccessBreakdown:
    """Header and payload success under macro-diversity for one scenario."""
    prof = scenario.profile
    n_frag = fragment_count(scenario.payload_bytes, prof)
    air = airtimes(prof, scenario.channels, n_frag)
    lam_hat = effective_interferer_density(scenario, air)
    s_header = header_success_macro(scenario, lam_hat)
    s_fragment = fragment_success_macro(scenario, lam_hat)
    s_payload = payload_success(s_fragment, n_frag, prof.recovery_fraction)
    return SuccessBreakdown.of(s_header, s_payload)


def offered_load(scenario: NetworkScenario, packet_bits: int | None = None) -> float:
    """Mean traffic arriving at one gateway, in bits per second.

    packet_bits defaults to all on-air bits (R replicas plus L fragments),
    matching the airtime composition of the interferer thinning.
    """
    if packet_bits is None:
        packet_bits = total_bits(
            scenario.profile,
            fragment_count(scenario.payload_bytes, scenario.profile))
    if packet_bits <= 0:
        raise ValueError("packet_bits must be positive")
    return (scenario.packet_rate * scenario.device_density * packet_bits
            / scenario.gateway_density)


def goodput_per_gateway(scenario: NetworkScenario, s_total: float) -> float:
    """Successfully delivered payload bits per second per gateway.

    Per-gateway aggregate: packet rate times device-per-gateway ratio times
    payload bits, scaled by the end-to-end success probability.
    """
    if not (0.0 <= s_total <= 1.0):
        raise ValueError("s_total must lie in [0, 1]")
    return (s_total * scenario.packet_rate * scenario.device_density
            / scenario.gateway_density * scenario.payload_bytes * 8)
