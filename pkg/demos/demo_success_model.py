"""Walk through the closed-form capacity model step by step.

Builds the Table-style DR5/DR6 profiles, derives airtimes and the thinned
interferer density at a chosen offered load, and prints the header,
payload and total success probabilities under macro-diversity and under the
nearest-gateway baseline.
"""

from lrfhss import analytics as an
from lrfhss import nearest as nr
from lrfhss.parameters import (
    Channelization,
    DataRateProfile,
    NetworkScenario,
    airtimes,
    fragment_count,
    total_bits,
)

# the geometry constants that the closed forms are built from
alpha = 3.5
print(f"path-loss exponent      alpha = {alpha}")
print(f"interference constant   K     = {an.interference_constant(alpha):.4f}")
print(f"coverage scale          pi/K  = {an.coverage_scale(alpha):.4f}")
for n in (1, 2, 3):
    print(f"replica diversity sum   n={n}   = {an.alternating_binomial_sum(n):+.4f}")
print()

for profile, load_mbps in ((DataRateProfile.dr5(), 7.9),
                           (DataRateProfile.dr6(), 4.2)):
    name = profile.dr_index.value
    payload = profile.max_payload_bytes
    n_frag = fragment_count(payload, profile)
    channels = Channelization()
    air = airtimes(profile, channels, n_frag)
    packet_bits = total_bits(profile, n_frag)

    print(f"=== {name}: {payload} B payload -> {n_frag} fragments, "
          f"{packet_bits} bits on air ===")
    print(f"  header replica  {air.header_seconds * 1e3:7.1f} ms   "
          f"fragment {air.fragment_seconds * 1e3:7.1f} ms")

    # offered load fixes the packet rate at unit densities
    scenario = NetworkScenario(
        alpha=alpha, gateway_density=1.0, device_density=1.0,
        packet_rate=load_mbps * 1e6 / packet_bits, payload_bytes=payload,
        profile=profile)
    lam_hat = an.effective_interferer_density(scenario, air)
    print(f"  offered load {load_mbps} Mbps -> thinned interferer density "
          f"{lam_hat:.3f} per gateway area unit")

    macro = an.total_success(scenario)
    near = nr.nearest_total_success(scenario)
    print(f"  macro-diversity: header {macro.s_header:.4f}  "
          f"payload {macro.s_payload:.4f}  total {macro.s_total:.4f}")
    print(f"  nearest gateway: header {near.s_header:.4f}  "
          f"payload {near.s_payload:.4f}  total {near.s_total:.4f}")
    print(f"  goodput: macro {an.goodput_per_gateway(scenario, macro.s_total) / 1e6:.2f} "
          f"Mbps, nearest {an.goodput_per_gateway(scenario, near.s_total) / 1e6:.2f} Mbps")
    print()
