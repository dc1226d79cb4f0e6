"""Produce the sweep data behind the three evaluation figures.

Writes CSV files under demos/output/ and prints the 0.8-success crossing
loads.  Render the figures from these CSVs with the frontend package:

    node frontend/dist/cli.js render --figure success_total \
        --in demos/output/sweep_success.csv --out demos/output/fig_success.svg
"""

import os

from lrfhss.sweep import SweepConfig, emit_csv, find_threshold_load, run_sweep, write_output

OUT_DIR = os.path.join(os.path.dirname(__file__), "output")

# figure grids: DR5 out to 14 Mbps, DR6 to 5.5 Mbps (where the model's
# mean-field payload treatment stays self-consistent; see README)
configs = {
    "sweep_dr5.csv": SweepConfig(dr="DR5", strategy="both",
                                 load_min_mbps=0.25, load_max_mbps=14.0,
                                 points=56),
    "sweep_dr6.csv": SweepConfig(dr="DR6", strategy="both",
                                 load_min_mbps=0.25, load_max_mbps=5.5,
                                 points=56),
}

for name, config in configs.items():
    rows = run_sweep(config)
    path = os.path.join(OUT_DIR, name)
    write_output(emit_csv(rows, config), path)
    print(f"wrote {len(rows)} rows to {path}")

print("\n0.8-success crossing loads (Mbps):")
for dr, hi in (("DR5", 16.0), ("DR6", 8.0)):
    cfg = SweepConfig(dr=dr, strategy="both", load_min_mbps=0.05,
                      load_max_mbps=hi, points=2)
    for res in find_threshold_load(cfg, 0.8):
        load = f"{res.load_mbps:.2f}" if res.load_mbps else "out-of-range"
        print(f"  {res.dr}/{res.strategy}: {load}")
