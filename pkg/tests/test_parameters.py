import math
from fractions import Fraction

import pytest

from lrfhss.parameters import (
    AirtimeModel,
    Channelization,
    DataRate,
    DataRateProfile,
    NetworkScenario,
    SuccessBreakdown,
    airtimes,
    db_to_linear,
    fragment_count,
    required_fragments,
    total_bits,
)


def test_dr5_defaults():
    p = DataRateProfile.dr5()
    assert p.header_replicas == 3
    assert p.recovery_fraction == Fraction(1, 3)
    assert p.max_payload_bytes == 58
    assert p.header_bits == 114 and p.fragment_bits == 50
    assert p.sinr_threshold_header == pytest.approx(10 ** -2.2)
    assert p.sinr_threshold_payload == pytest.approx(10 ** -2.0)


def test_dr6_defaults():
    p = DataRateProfile.dr6()
    assert p.header_replicas == 2
    assert p.recovery_fraction == Fraction(2, 3)
    assert p.max_payload_bytes == 133


@pytest.mark.parametrize("kwargs", [
    dict(header_replicas=0),
    dict(recovery_fraction=Fraction(0)),
    dict(recovery_fraction=Fraction(1)),
    dict(header_bits=0),
    dict(fragment_bits=-1),
    dict(sinr_threshold_header=0.0),
    dict(sinr_threshold_payload=-1.0),
])
def test_profile_rejects_bad_fields(kwargs):
    base = dict(
        dr_index=DataRate.DR5, header_replicas=3,
        recovery_fraction=Fraction(1, 3), header_bits=114, fragment_bits=50,
        max_payload_bytes=58, sinr_threshold_header=0.01,
        sinr_threshold_payload=0.01,
    )
    base.update(kwargs)
    with pytest.raises(ValueError):
        DataRateProfile(**base)


def test_channelization_defaults_and_grid_consistency():
    ch = Channelization()
    assert ch.n_ocw == 1 and ch.n_obw == 3120
    assert ch.grid_count * ch.grid_size == 3120 <= ch.physical_obw_count
    with pytest.raises(ValueError):
        Channelization(n_obw=3121)
    with pytest.raises(ValueError):
        Channelization(grid_count=53, grid_size=60, n_obw=3180)


def test_scenario_validation():
    p = DataRateProfile.dr5()
    with pytest.raises(ValueError):
        NetworkScenario(alpha=2.0, gateway_density=1, device_density=1,
                        packet_rate=1, payload_bytes=58, profile=p)
    with pytest.raises(ValueError):
        NetworkScenario(alpha=3.5, gateway_density=0, device_density=1,
                        packet_rate=1, payload_bytes=58, profile=p)
    with pytest.raises(ValueError):
        NetworkScenario(alpha=3.5, gateway_density=1, device_density=1,
                        packet_rate=1, payload_bytes=59, profile=p)


def test_fragment_count_table_values():
    assert fragment_count(58, DataRateProfile.dr5()) == 28
    assert fragment_count(133, DataRateProfile.dr6()) == 32


def test_fragment_count_unit_boundary():
    # payload of exactly mu * fragment_bits / 8 bytes gives a single fragment
    p = DataRateProfile(
        dr_index=DataRate.DR5, header_replicas=3,
        recovery_fraction=Fraction(1, 2), header_bits=114, fragment_bits=48,
        max_payload_bytes=58, sinr_threshold_header=0.01,
        sinr_threshold_payload=0.01)
    assert fragment_count(3, p) == 1
    assert fragment_count(4, p) == 2


def test_fragment_count_rejects_oversized_payload():
    with pytest.raises(ValueError):
        fragment_count(59, DataRateProfile.dr5())
    with pytest.raises(ValueError):
        fragment_count(0, DataRateProfile.dr5())


def test_required_fragments_exact_ceilings():
    assert required_fragments(28, Fraction(1, 3)) == 10
    assert required_fragments(32, Fraction(2, 3)) == 22
    # integer mu*L must not be bumped by float noise
    assert required_fragments(4, Fraction(1, 2)) == 2
    assert required_fragments(4, 0.5) == 2


def test_airtimes_table_values():
    p = DataRateProfile.dr5()
    ch = Channelization()
    air = airtimes(p, ch, 28)
    assert air.header_seconds == pytest.approx(114 / 488)
    assert air.fragment_seconds == pytest.approx(50 / 488)
    # unit construction: rate equal to the header size gives one second
    ch1 = Channelization(obw_bitrate_bps=114.0)
    assert airtimes(p, ch1, 28).header_seconds == pytest.approx(1.0)


def test_airtime_model_invariants():
    with pytest.raises(ValueError):
        AirtimeModel(header_seconds=0.1, fragment_seconds=0.2, fragment_count=1)
    with pytest.raises(ValueError):
        AirtimeModel(header_seconds=0.2, fragment_seconds=0.1, fragment_count=0)


def test_total_bits():
    assert total_bits(DataRateProfile.dr5(), 28) == 3 * 114 + 28 * 50 == 1742
    assert total_bits(DataRateProfile.dr6(), 32) == 2 * 114 + 32 * 50 == 1828


def test_success_breakdown_product_exact():
    b = SuccessBreakdown.of(0.8235, 0.9704)
    assert b.s_total == 0.8235 * 0.9704
    with pytest.raises(ValueError):
        SuccessBreakdown(0.5, 0.5, 0.26)
    with pytest.raises(ValueError):
        SuccessBreakdown(1.5, 0.5, 0.75)


def test_db_conversion():
    assert db_to_linear(-22.0) == pytest.approx(10 ** -2.2)
    assert db_to_linear(0.0) == 1.0
