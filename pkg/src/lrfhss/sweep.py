"""Parameter sweeps over offered load, data rate and reception strategy.

Produces the machine-readable rows behind the evaluation figures.  The CSV
schema is frozen (column order below) so downstream plotting tools and
golden files stay stable; numeric fields carry 9 significant digits and are
quantized at row construction so emit/parse round-trips exactly.
"""

from __future__ import annotations

import io
import json
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional

from . import analytics as an
from . import montecarlo as mc
from ._rng import stream_base
from .nearest import nearest_total_success
from .parameters import (
    Channelization,
    DataRate,
    DataRateProfile,
    NetworkScenario,
    fragment_count,
    total_bits,
)

CSV_COLUMNS = (
    "dr", "strategy", "load_mbps", "s_header", "s_payload", "s_total",
    "goodput_mbps", "mc_s_total", "mc_std_error",
)

FRAGMENT_MAPPING_NOTE = (
    "fragment mapping: L = ceil(8*payload_bytes / (mu * fragment_bits)); "
    "assumed, not fixed by the radio spec"
)
AIRTIME_NOTE = "airtime model: obw bitrate 488 bit/s (1 bit per Hz of a 488 Hz OBW)"


class ConfigError(ValueError):
    """Invalid sweep configuration."""


@dataclass(frozen=True)
class SweepConfig:
    dr: str = "both"  # DR5 | DR6 | both
    strategy: str = "both"  # macro | nearest | both
    load_min_mbps: float = 0.1
    load_max_mbps: float = 16.0
    points: int = 50
    log_axis: bool = False
    include_zero: bool = False
    alpha: float = 3.5
    sigma_h_db: float = -22.0
    sigma_p_db: float = -20.0
    payload_bytes: Optional[int] = None  # None: per-DR maximum
    mc_enabled: bool = False
    trials: int = 100_000
    seed: int = 1
    nearest_joint: bool = False
    out: Optional[str] = None
    fmt: str = "csv"  # csv | json

    def __post_init__(self):
        if self.dr not in ("DR5", "DR6", "both"):
            raise ConfigError(f"dr must be DR5, DR6 or both, got {self.dr!r}")
        if self.strategy not in ("macro", "nearest", "both"):
            raise ConfigError(
                f"strategy must be macro, nearest or both, got {self.strategy!r}")
        if self.points < 2:
            raise ConfigError("points must be >= 2")
        if self.load_min_mbps <= 0 and not self.include_zero:
            raise ConfigError(
                "load_min_mbps must be positive unless include_zero is set")
        if self.load_min_mbps < 0:
            raise ConfigError("load_min_mbps must be non-negative")
        if self.load_max_mbps <= self.load_min_mbps:
            raise ConfigError("load_max_mbps must exceed load_min_mbps")
        if self.log_axis and self.load_min_mbps <= 0:
            raise ConfigError("log axis requires a positive load_min_mbps")
        if self.alpha <= 2:
            raise ConfigError("alpha must exceed 2")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.fmt!r}")

    def data_rates(self) -> list[DataRate]:
        if self.dr == "both":
            return [DataRate.DR5, DataRate.DR6]
        return [DataRate(self.dr)]

    def strategies(self) -> list[str]:
        if self.strategy == "both":
            return ["macro", "nearest"]
        return [self.strategy]

    def profile(self, dr: DataRate) -> DataRateProfile:
        return DataRateProfile.standard(dr, self.sigma_h_db, self.sigma_p_db)

    def loads_mbps(self) -> list[float]:
        lo, hi, n = self.load_min_mbps, self.load_max_mbps, self.points
        if self.log_axis:
            ratio = (hi / lo) ** (1.0 / (n - 1))
            loads = [lo * ratio**i for i in range(n)]
        else:
            step = (hi - lo) / (n - 1)
            loads = [lo + step * i for i in range(n)]
        loads[-1] = hi
        return loads

    def echo_lines(self) -> list[str]:
        pairs = [
            f"dr={self.dr}", f"strategy={self.strategy}",
            f"load_min_mbps={self.load_min_mbps:g}",
            f"load_max_mbps={self.load_max_mbps:g}",
            f"points={self.points}", f"log_axis={self.log_axis}",
            f"include_zero={self.include_zero}", f"alpha={self.alpha:g}",
            f"sigma_h_db={self.sigma_h_db:g}", f"sigma_p_db={self.sigma_p_db:g}",
            f"payload_bytes={self.payload_bytes}",
            f"mc_enabled={self.mc_enabled}", f"trials={self.trials}",
            f"seed={self.seed}", f"nearest_joint={self.nearest_joint}",
        ]
        return [
            "lrfhss sweep",
            "config: " + " ".join(pairs),
            FRAGMENT_MAPPING_NOTE,
            AIRTIME_NOTE,
        ]


def _sig9(x: float) -> float:
    return float(f"{x:.9g}")


@dataclass(frozen=True)
class SweepRow:
    dr: str
    strategy: str
    load_mbps: float
    s_header: float
    s_payload: float
    s_total: float
    goodput_mbps: float
    mc_s_total: Optional[float] = None
    mc_std_error: Optional[float] = None

    def __post_init__(self):
        for name in ("load_mbps", "s_header", "s_payload", "s_total",
                     "goodput_mbps", "mc_s_total", "mc_std_error"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, _sig9(v))
        for name in ("s_header", "s_payload", "s_total"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name}={v} outside [0, 1]")

    def sort_key(self):
        return (self.dr, self.strategy, self.load_mbps)


def load_to_scenario(load_mbps: float, config: SweepConfig,
                     profile: DataRateProfile) -> NetworkScenario:
    """Invert the offered-load definition at unit densities.

    All model outputs depend only on packet_rate * device_density /
    gateway_density, so fixing both densities to 1 and solving for the
    packet rate spans every operating point.
    """
    payload = (config.payload_bytes if config.payload_bytes is not None
               else profile.max_payload_bytes)
    packet_bits = total_bits(profile, fragment_count(payload, profile))
    packet_rate = load_mbps * 1e6 / packet_bits
    return NetworkScenario(
        alpha=config.alpha, gateway_density=1.0, device_density=1.0,
        packet_rate=packet_rate, payload_bytes=payload, profile=profile,
        channels=Channelization())


def _analytic_point(load_mbps: float, dr: DataRate, strategy: str,
                    config: SweepConfig) -> SweepRow:
    profile = config.profile(dr)
    scenario = load_to_scenario(load_mbps, config, profile)
    if strategy == "macro":
        breakdown = an.total_success(scenario)
    else:
        breakdown = nearest_total_success(scenario, joint=config.nearest_joint)
    goodput = an.goodput_per_gateway(scenario, breakdown.s_total)
    return SweepRow(
        dr=dr.value, strategy=strategy, load_mbps=load_mbps,
        s_header=breakdown.s_header, s_payload=breakdown.s_payload,
        s_total=breakdown.s_total, goodput_mbps=goodput / 1e6)


def run_sweep(config: SweepConfig) -> list[SweepRow]:
    """One row per (data rate, strategy, load point), sorted."""
    loads = config.loads_mbps()
    if config.include_zero:
        loads = [0.0] + [l for l in loads if l > 0]
    tasks = [
        (load, dr, strategy)
        for dr in config.data_rates()
        for strategy in config.strategies()
        for load in loads
    ]
    with ThreadPoolExecutor(max_workers=min(8, len(tasks))) as pool:
        rows = list(pool.map(
            lambda t: _analytic_point(t[0], t[1], t[2], config), tasks))

    if config.mc_enabled:
        rows = [_attach_mc(row, idx, config)
                for idx, row in enumerate(rows)]
    return sorted(rows, key=SweepRow.sort_key)


def _attach_mc(row: SweepRow, row_index: int, config: SweepConfig) -> SweepRow:
    profile = config.profile(DataRate(row.dr))
    scenario = load_to_scenario(row.load_mbps, config, profile)
    row_seed = stream_base(config.seed, row_index)
    result = mc.estimate(scenario, trials=config.trials, seed=row_seed)
    if row.strategy == "macro":
        est = result.macro.s_total
    elif config.nearest_joint:
        est = result.nearest.s_total  # joint estimand, matches joint analytic
    else:
        est = result.nearest.total_factorized
    return replace(row, mc_s_total=est.mean, mc_std_error=est.std_error)


def _format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.9g}"
    return str(v)


def emit_csv(rows: list[SweepRow], config: SweepConfig) -> str:
    buf = io.StringIO()
    for line in config.echo_lines():
        buf.write(f"# {line}\n")
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for row in rows:
        buf.write(",".join(_format_value(getattr(row, c)) for c in CSV_COLUMNS))
        buf.write("\n")
    return buf.getvalue()


def emit_json(rows: list[SweepRow], config: SweepConfig) -> str:
    payload = {
        "config": config.echo_lines(),
        "columns": list(CSV_COLUMNS),
        "rows": [
            {c: getattr(row, c) for c in CSV_COLUMNS}
            for row in rows
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def parse_csv(text: str) -> list[SweepRow]:
    """Parse rows emitted by emit_csv; comments and header are skipped."""
    rows = []
    header_seen = False
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            cols = tuple(line.split(","))
            if cols != CSV_COLUMNS:
                raise ValueError(
                    f"unexpected CSV header {cols!r}; expected {CSV_COLUMNS!r}")
            header_seen = True
            continue
        parts = line.split(",")
        if len(parts) != len(CSV_COLUMNS):
            raise ValueError(f"row has {len(parts)} fields, expected "
                             f"{len(CSV_COLUMNS)}: {line!r}")
        rows.append(SweepRow(
            dr=parts[0], strategy=parts[1], load_mbps=float(parts[2]),
            s_header=float(parts[3]), s_payload=float(parts[4]),
            s_total=float(parts[5]), goodput_mbps=float(parts[6]),
            mc_s_total=float(parts[7]) if parts[7] else None,
            mc_std_error=float(parts[8]) if parts[8] else None,
        ))
    if not header_seen:
        raise ValueError("no CSV header found")
    return rows


def write_output(text: str, path: Optional[str]) -> None:
    """Write atomically (write-then-rename); stdout when path is None."""
    if path is None:
        print(text, end="")
        return
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


@dataclass(frozen=True)
class ThresholdResult:
    dr: str
    strategy: str
    target: float
    load_mbps: Optional[float]  # None when the target is out of range
    detail: str = ""


def find_threshold_load(config: SweepConfig, target: float,
                        rel_tol: float = 1e-6) -> list[ThresholdResult]:
    """Bisect the monotone s_total(load) curve for each (dr, strategy)."""
    if not (0.0 < target < 1.0):
        raise ConfigError("target must lie strictly between 0 and 1")
    results = []
    for dr in config.data_rates():
        for strategy in config.strategies():
            def s_of(load: float) -> float:
                return _analytic_point(load, dr, strategy, config).s_total

            lo, hi = config.load_min_mbps, config.load_max_mbps
            s_lo, s_hi = s_of(lo), s_of(hi)
            if s_lo < target:
                results.append(ThresholdResult(
                    dr.value, strategy, target, None,
                    f"target above s_total({lo:g} Mbps) = {s_lo:.6f}"))
                continue
            if s_hi > target:
                results.append(ThresholdResult(
                    dr.value, strategy, target, None,
                    f"target below s_total({hi:g} Mbps) = {s_hi:.6f}"))
                continue
            while (hi - lo) > rel_tol * hi:
                mid = 0.5 * (lo + hi)
                if s_of(mid) >= target:
                    lo = mid
                else:
                    hi = mid
            load = 0.5 * (lo + hi)
            results.append(ThresholdResult(dr.value, strategy, target, load))
    return results
