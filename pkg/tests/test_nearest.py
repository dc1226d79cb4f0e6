import math
from fractions import Fraction

import pytest
from scipy import integrate

from lrfhss import analytics as an
from lrfhss import nearest as nr
from lrfhss.parameters import (
    DataRate,
    DataRateProfile,
    NetworkScenario,
    airtimes,
    fragment_count,
)


def scenario(dr=DataRate.DR5, packet_rate=1000.0, alpha=3.5, lam_g=1.0):
    prof = DataRateProfile.standard(dr)
    payload = prof.max_payload_bytes
    return NetworkScenario(alpha=alpha, gateway_density=lam_g,
                           device_density=1.0, packet_rate=packet_rate,
                           payload_bytes=payload, profile=prof)


def lam_hat_for(sc):
    n_frag = fragment_count(sc.payload_bytes, sc.profile)
    return an.effective_interferer_density(
        sc, airtimes(sc.profile, sc.channels, n_frag))


# ----------------------------------------------------- distance distribution

def test_nearest_distance_density_normalizes():
    for lam in (0.3, 1.0, 4.0):
        val, _ = integrate.quad(lambda y: nr.nearest_distance_density(y, lam),
                                0, 20 / math.sqrt(lam))
        assert val == pytest.approx(1.0, abs=1e-10)


def test_nearest_distance_density_mode():
    lam = 2.0
    y_star = 1 / math.sqrt(2 * math.pi * lam)
    f = nr.nearest_distance_density
    assert f(y_star, lam) > f(y_star * 0.99, lam)
    assert f(y_star, lam) > f(y_star * 1.01, lam)


def test_nearest_distance_density_point_value():
    assert nr.nearest_distance_density(1.0, 1 / math.pi) == pytest.approx(
        2 / math.e, rel=1e-12)


# ------------------------------------------------------------------- header

def test_nearest_header_zero_density():
    assert nr.nearest_header_success(scenario(), 0.0) == 1.0


def test_nearest_header_matches_rational_closed_form():
    for dr in (DataRate.DR5, DataRate.DR6):
        for rate in (100.0, 1000.0, 5000.0):
            sc = scenario(dr, packet_rate=rate)
            lam_hat = lam_hat_for(sc)
            quad = nr.nearest_header_success(sc, lam_hat)
            closed = nr.nearest_header_success_closed_form(sc, lam_hat)
            assert quad == pytest.approx(closed, rel=1e-8)


def test_nearest_header_single_replica_form():
    prof = DataRateProfile(
        dr_index=DataRate.DR5, header_replicas=1,
        recovery_fraction=Fraction(1, 3), header_bits=114, fragment_bits=50,
        max_payload_bytes=58, sinr_threshold_header=10**-2.2,
        sinr_threshold_payload=10**-2.0)
    sc = NetworkScenario(alpha=3.5, gateway_density=1.3, device_density=1.0,
                         packet_rate=1.0, payload_bytes=58, profile=prof)
    lam_hat = 2.0
    a = an.sinr_decay_rate(3.5, lam_hat, 10**-2.2)
    pl = math.pi * 1.3
    assert nr.nearest_header_success(sc, lam_hat) == pytest.approx(
        pl / (pl + a), rel=1e-9)


def test_nearest_header_below_macro():
    for rate in (200.0, 2000.0, 8000.0):
        sc = scenario(packet_rate=rate)
        lam_hat = lam_hat_for(sc)
        assert (nr.nearest_header_success(sc, lam_hat)
                <= an.header_success_macro(sc, lam_hat) + 1e-12)


def test_fixed_node_scheme_agrees_with_adaptive():
    sc = scenario(packet_rate=1500.0)
    lam_hat = lam_hat_for(sc)
    q_adaptive = nr.nearest_header_success(sc, lam_hat)
    q_fixed = nr.nearest_header_success(
        sc, lam_hat, nr.QuadratureSpec(scheme="fixed-node"))
    assert q_fixed == pytest.approx(q_adaptive, rel=1e-8)


# ------------------------------------------------------------------ payload

def enumeration_tail(n, k_min, p):
    total = 0.0
    for mask in range(1 << n):
        k = bin(mask).count("1")
        if k >= k_min:
            total += p**k * (1 - p) ** (n - k)
    return total


def test_nearest_payload_zero_density():
    assert nr.nearest_payload_success(scenario(), 0.0, 28) == 1.0


def test_nearest_payload_l1_reduces_to_single_message():
    # one fragment, any recovery fraction: the integrand is the single
    # message decode law at the payload threshold
    prof = DataRateProfile(
        dr_index=DataRate.DR5, header_replicas=1,
        recovery_fraction=Fraction(1, 2), header_bits=114, fragment_bits=50,
        max_payload_bytes=58, sinr_threshold_header=10**-2.0,
        sinr_threshold_payload=10**-2.0)
    sc = NetworkScenario(alpha=3.5, gateway_density=1.0, device_density=1.0,
                         packet_rate=1.0, payload_bytes=58, profile=prof)
    lam_hat = 1.7
    # header with R=1 and sigma_h == sigma_p is the same integral
    assert nr.nearest_payload_success(sc, lam_hat, 1) == pytest.approx(
        nr.nearest_header_success(sc, lam_hat), rel=1e-9)


def test_nearest_payload_integrand_matches_enumeration_at_pinned_distance():
    sc = scenario()
    lam_hat = lam_hat_for(sc)
    a = an.sinr_decay_rate(sc.alpha, lam_hat, sc.profile.sinr_threshold_payload)
    for y in (0.2, 0.6, 1.1):
        p = math.exp(-a * y * y)
        got = an.binomial_tail(4, 2, p)
        assert got == pytest.approx(enumeration_tail(4, 2, p), abs=1e-12)


def test_nearest_payload_below_macro_payload():
    for rate in (500.0, 2000.0, 6000.0):
        sc = scenario(packet_rate=rate)
        lam_hat = lam_hat_for(sc)
        n_frag = fragment_count(sc.payload_bytes, sc.profile)
        macro_frag = an.fragment_success_macro(sc, lam_hat)
        macro_payload = an.payload_success(macro_frag, n_frag,
                                           sc.profile.recovery_fraction)
        near = nr.nearest_payload_success(sc, lam_hat, n_frag)
        assert near <= macro_payload + 1e-12


# -------------------------------------------------------------------- total

def test_nearest_total_zero_load():
    b = nr.nearest_total_success(scenario(packet_rate=0.0))
    assert (b.s_header, b.s_payload, b.s_total) == (1.0, 1.0, 1.0)


def test_nearest_total_below_macro_componentwise():
    # within the operating region of the model (success probabilities that
    # are not deeply saturated) the baseline never beats macro-diversity
    rates = {DataRate.DR5: (200.0, 1000.0, 4000.0),
             DataRate.DR6: (200.0, 1000.0, 2500.0)}
    for dr, dr_rates in rates.items():
        for rate in dr_rates:
            sc = scenario(dr, packet_rate=rate)
            near = nr.nearest_total_success(sc)
            macro = an.total_success(sc)
            assert near.s_header <= macro.s_header + 1e-12
            assert near.s_payload <= macro.s_payload + 1e-12
            assert near.s_total <= macro.s_total + 1e-12


def test_mean_field_payload_crossing_artifact():
    # The macro payload formula applies the recovery binomial to the
    # ensemble-mean fragment success.  Deep in saturation that mean-field
    # value collapses faster than the baseline's distance-conditioned
    # mixture, so the analytic curves cross even though dominance always
    # holds on paired realizations.  Pin the artifact so a change in the
    # formulas is noticed.
    sc = scenario(DataRate.DR6, packet_rate=8e6 / 1828)  # 8 Mbps offered
    near = nr.nearest_total_success(sc)
    macro = an.total_success(sc)
    assert macro.s_total < 0.05
    assert near.s_total > macro.s_total


def test_nearest_total_joint_at_least_factorized():
    # both factors decrease with distance, so their correlation is positive
    for rate in (500.0, 1500.0, 4000.0):
        sc = scenario(packet_rate=rate)
        fact = nr.nearest_total_success(sc, joint=False)
        joint = nr.nearest_total_success(sc, joint=True)
        assert joint.s_total >= fact.s_total - 1e-12
        assert joint.s_header == fact.s_header


def test_nearest_total_monotone_in_load():
    rates = [100.0 * 1.7**i for i in range(10)]
    vals = [nr.nearest_total_success(scenario(packet_rate=r)).s_total
            for r in rates]
    for a, b in zip(vals, vals[1:]):
        assert b <= a + 1e-10
    assert all(0.0 <= v <= 1.0 for v in vals)


# ------------------------------------------------------------------- errors

def test_quadrature_failure_raises_with_diagnostics():
    sc = scenario(packet_rate=2000.0)
    lam_hat = lam_hat_for(sc)
    strict = nr.QuadratureSpec(rel_tol=1e-13, max_subdivisions=1)
    with pytest.raises(nr.QuadratureError) as err:
        nr.nearest_payload_success(sc, lam_hat, 28, strict)
    assert "limit=1" in str(err.value)


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        nr.QuadratureSpec(scheme="monte-carlo")
    with pytest.raises(ValueError):
        nr.QuadratureSpec(rel_tol=0.0)
