"""
Entanglement versus mass ratio
==============================

Keep the lighter particle's mass fixed and make the other heavier. The scan
driver runs each ratio for both profile families and collects the peak entropy
and the participation ratio of the light particle.

Set ``TWOBODY_SN_WORKERS`` to run scan points in parallel.
"""

from twobody_sn import ScanConfig, ScenarioConfig, run_scan
from twobody_sn.plotting import plot_scan

T_FINAL = 40.0

scan = ScanConfig(base=ScenarioConfig().replace(**{"time.t_final": T_FINAL}),
                  ratios=[1.0, 2.0, 3.0, 4.0])
result = run_scan(scan, outdir="mass_scan")

for row in result.table:
    print(f"{row['profile']:>10} ratio {row['ratio']:g}: peak S_vN {row['peak_S_vN']:.3f}, "
          f"peak PR2 {row['peak_PR2']:.3f} [{row['status']}]")

###############################################################################
# Heatmaps of PR and entropy per profile, plus the peak curve.

for path in plot_scan("mass_scan"):
    print("wrote", path)
