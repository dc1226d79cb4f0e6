"""Radio and network parameter types for LR-FHSS capacity analysis.

All SINR thresholds are stored as linear power ratios; helpers accept dB at
the interface and convert once.  The erasure-recovery fraction is kept as an
exact ``Fraction`` so fragment-count ceilings never suffer float rounding.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction


def db_to_linear(db: float) -> float:
    """Convert a dB power ratio to linear."""
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    if x <= 0:
        raise ValueError("linear power ratio must be positive")
    return 10.0 * math.log10(x)


def _as_fraction(x) -> Fraction:
    # Fraction(float) is exact on the binary value, so callers that pass 0.5
    # or Fraction(1, 3) get exact ceilings; an inexact float like 1/3 stays
    # within one ulp of intent, which never moves a ceiling in practice.
    return x if isinstance(x, Fraction) else Fraction(x)


class DataRate(enum.Enum):
    DR5 = "DR5"
    DR6 = "DR6"


@dataclass(frozen=True)
class DataRateProfile:
    """Per-data-rate bundle: redundancy, sizes and decoding thresholds."""

    dr_index: DataRate
    header_replicas: int
    recovery_fraction: Fraction
    header_bits: int
    fragment_bits: int
    max_payload_bytes: int
    sinr_threshold_header: float  # linear
    sinr_threshold_payload: float  # linear

    def __post_init__(self):
        object.__setattr__(
            self, "recovery_fraction", _as_fraction(self.recovery_fraction)
        )
        if self.header_replicas < 1:
            raise ValueError("header_replicas must be >= 1")
        if not (0 < self.recovery_fraction < 1):
            raise ValueError("recovery_fraction must lie in (0, 1)")
        if self.header_bits <= 0 or self.fragment_bits <= 0:
            raise ValueError("header_bits and fragment_bits must be positive")
        if self.max_payload_bytes <= 0:
            raise ValueError("max_payload_bytes must be positive")
        if self.sinr_threshold_header <= 0 or self.sinr_threshold_payload <= 0:
            raise ValueError("SINR thresholds must be positive linear ratios")

    @classmethod
    def dr5(cls, sigma_h_db: float = -22.0, sigma_p_db: float = -20.0) -> "DataRateProfile":
        """FCC DR5: three header replicas, rate-1/3 recovery, 58-byte payloads."""
        return cls(
            dr_index=DataRate.DR5,
            header_replicas=3,
            recovery_fraction=Fraction(1, 3),
            header_bits=114,
            fragment_bits=50,
            max_payload_bytes=58,
            sinr_threshold_header=db_to_linear(sigma_h_db),
            sinr_threshold_payload=db_to_linear(sigma_p_db),
        )

    @classmethod
    def dr6(cls, sigma_h_db: float = -22.0, sigma_p_db: float = -20.0) -> "DataRateProfile":
        """FCC DR6: two header replicas, rate-2/3 recovery, 133-byte payloads."""
        return cls(
            dr_index=DataRate.DR6,
            header_replicas=2,
            recovery_fraction=Fraction(2, 3),
            header_bits=114,
            fragment_bits=50,
            max_payload_bytes=133,
            sinr_threshold_header=db_to_linear(sigma_h_db),
            sinr_threshold_payload=db_to_linear(sigma_p_db),
        )

    @classmethod
    def standard(cls, dr: DataRate, sigma_h_db: float = -22.0,
                 sigma_p_db: float = -20.0) -> "DataRateProfile":
        if dr is DataRate.DR5:
            return cls.dr5(sigma_h_db, sigma_p_db)
        return cls.dr6(sigma_h_db, sigma_p_db)


@dataclass(frozen=True)
class Channelization:
    """FCC-region OCW/OBW layout and the physical OBW bitrate.

    The OBW bitrate drives header/fragment airtimes and defaults to one bit
    per Hz of the 488 Hz subcarrier; it is a plain config field so a
    corrected value changes nothing structurally.
    """

    n_ocw: int = 1
    n_obw: int = 3120
    obw_width_hz: float = 488.0
    grid_count: int = 52
    grid_size: int = 60
    grid_spacing_hz: float = 25400.0
    obw_bitrate_bps: float = 488.0
    physical_obw_count: int = 3125

    def __post_init__(self):
        if self.n_ocw < 1 or self.n_obw < 1:
            raise ValueError("channel counts must be positive")
        if self.grid_count * self.grid_size != self.n_obw:
            raise ValueError("n_obw must equal grid_count * grid_size")
        if self.grid_count * self.grid_size > self.physical_obw_count:
            raise ValueError("grid layout exceeds the physical OBW count")
        if self.obw_width_hz <= 0 or self.obw_bitrate_bps <= 0:
            raise ValueError("obw_width_hz and obw_bitrate_bps must be positive")


@dataclass(frozen=True)
class AirtimeModel:
    """Durations of one header replica / one fragment, and the fragment count."""

    header_seconds: float
    fragment_seconds: float
    fragment_count: int

    def __post_init__(self):
        if not (self.header_seconds >= self.fragment_seconds > 0):
            raise ValueError("need header_seconds >= fragment_seconds > 0")
        if self.fragment_count < 1:
            raise ValueError("fragment_count must be >= 1")


@dataclass(frozen=True)
class NetworkScenario:
    """Spatial densities, traffic and propagation for one operating point."""

    alpha: float
    gateway_density: float
    device_density: float
    packet_rate: float  # packets per second per device
    payload_bytes: int
    profile: DataRateProfile
    channels: Channelization = field(default_factory=Channelization)

    def __post_init__(self):
        if self.alpha <= 2:
            raise ValueError("path-loss exponent must exceed 2")
        if self.gateway_density <= 0 or self.device_density <= 0:
            raise ValueError("densities must be positive")
        if self.packet_rate < 0:
            raise ValueError("packet_rate must be non-negative")
        if self.payload_bytes <= 0:
            raise ValueError("payload_bytes must be positive")
        if self.payload_bytes > self.profile.max_payload_bytes:
            raise ValueError(
                f"payload of {self.payload_bytes} B exceeds the "
                f"{self.profile.dr_index.value} maximum of "
                f"{self.profile.max_payload_bytes} B"
            )


@dataclass(frozen=True)
class SuccessBreakdown:
    """(header, payload, total) success probabilities for one scenario point."""

    s_header: float
    s_payload: float
    s_total: float

    def __post_init__(self):
        for name in ("s_header", "s_payload", "s_total"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name}={v} outside [0, 1]")
        if self.s_total != self.s_header * self.s_payload:
            raise ValueError("s_total must equal s_header * s_payload exactly")

    @classmethod
    def of(cls, s_header: float, s_payload: float) -> "SuccessBreakdown":
        return cls(s_header, s_payload, s_header * s_payload)


def fragment_count(payload_bytes: int, profile: DataRateProfile) -> int:
    """Fragments on air for a payload: rate-mu erasure expansion, then
    fragmentation into ``fragment_bits`` units, ceiling division throughout.

    This mapping is an assumption (the standard fixes it in firmware); sweep
    outputs carry a metadata note to that effect.
    """
    if payload_bytes <= 0:
        raise ValueError("payload_bytes must be positive")
    if payload_bytes > profile.max_payload_bytes:
        raise ValueError(
            f"payload of {payload_bytes} B exceeds the profile maximum of "
            f"{profile.max_payload_bytes} B"
        )
    coded_bits = Fraction(payload_bytes * 8) / profile.recovery_fraction
    return int(math.ceil(coded_bits / profile.fragment_bits))


def required_fragments(total_fragments: int, recovery_fraction) -> int:
    """Minimum fragments for payload recovery: ceil(mu * L), computed exactly."""
    if total_fragments < 1:
        raise ValueError("total_fragments must be >= 1")
    return int(math.ceil(_as_fraction(recovery_fraction) * total_fragments))


def airtimes(profile: DataRateProfile, channels: Channelization,
             total_fragments: int) -> AirtimeModel:
    """Header/fragment on-air durations at the configured OBW bitrate."""
    rate = channels.obw_bitrate_bps
    return AirtimeModel(
        header_seconds=profile.header_bits / rate,
        fragment_seconds=profile.fragment_bits / rate,
        fragment_count=total_fragments,
    )


def total_bits(profile: DataRateProfile, total_fragments: int) -> int:
    """All bits on air for one packet: R header replicas plus L fragments."""
    return (profile.header_replicas * profile.header_bits
            + total_fragments * profile.fragment_bits)
