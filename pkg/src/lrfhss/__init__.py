"""Capacity analytics and simulation for LR-FHSS LoRaWAN networks with
fragment-level macro-diversity reception."""

from .analytics import (
    alternating_binomial_sum,
    alternating_binomial_sum_exact,
    binomial_tail,
    coverage_scale,
    effective_interferer_density,
    fragment_success_macro,
    goodput_per_gateway,
    header_success_at_distance,
    header_success_macro,
    interference_constant,
    offered_load,
    payload_success,
    total_success,
)
from .hopping import (
    GridPlan,
    HopSequence,
    build_grid_plan,
    collision_check,
    generate_sequence,
)
from .montecarlo import (
    EstimateWithCI,
    PppRealization,
    SimRegion,
    SimulationResult,
    TrialOutcome,
    estimate,
    evaluate_trial,
    sample_realization,
    sinr,
)
from .nearest import (
    QuadratureError,
    QuadratureSpec,
    nearest_distance_density,
    nearest_header_success,
    nearest_payload_success,
    nearest_total_success,
)
from .parameters import (
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
from .sweep import (
    SweepConfig,
    SweepRow,
    emit_csv,
    emit_json,
    find_threshold_load,
    load_to_scenario,
    parse_csv,
    run_sweep,
)

__version__ = "0.1.0"
