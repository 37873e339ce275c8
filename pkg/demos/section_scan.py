"""Poincare-section scan at lambda = 1/10 with fate statistics and an SVG."""

import sys

from bianchi_galois.dynamics import GridSpec, IntegratorConfig, emit, energy_trend, section_batch

out = sys.argv[1] if len(sys.argv) > 1 else "section"
grid = GridSpec(0.5, 3.0, 20, -2.0, 2.0, 20)
cfg = IntegratorConfig(t_max=300.0)
res = section_batch(0.1, 0.25, grid, cfg, threads=4)
emit(res, f"{out}.csv", f"{out}.svg")
print(res.summary())
for row in energy_trend(0.1, [0.25, 0.3, 0.4, 0.5], grid, cfg, threads=4)["rows"]:
    print(f"E={row['energy']:.2f} bounded={row['bounded']} fates={row['fates']}")
