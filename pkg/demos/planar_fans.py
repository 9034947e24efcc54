"""
Regular fans in the plane
=========================

Three rays at 120 degrees can always cut a planar measure into thirds, and
two perpendicular lines into quarters. Five rays at 72 degrees cannot: two
far-apart disks defeat them.
"""

# %%
from pathlib import Path

import numpy as np

from equipart import MassDistribution, ScanGrid, equipartition_fans, equipartition_fourfans, planar_fan_scan
from equipart.oracle import two_disk_instance
from equipart.svg import render_planar

OUT = Path(__file__).with_name("output")
OUT.mkdir(exist_ok=True)
rng = np.random.default_rng(3)
mu = MassDistribution(np.vstack([rng.standard_normal((120, 2)),
                                 rng.standard_normal((80, 2)) * 0.5 + [2.0, 1.0]]), bandwidth=0.1)

# %%
three = equipartition_fans([mu], q=3)
fan = three.partitions[0]
print("3-fan sector masses", three.masses[0, 0], "defect", three.defect)
render_planar([mu], [fan], OUT / "three_fan.svg")

four = equipartition_fourfans(mu)
print("4-fan sector masses", four.masses[0, 0], "defect", four.defect)
render_planar([mu], four.partitions, OUT / "four_fan.svg")

# %%
# Brute force over centre and rotation lands on the same answer, up to the grid step.
grid = ScanGrid.around([mu], spread_fraction=0.5, center_steps=30, angle_steps=48)
for q, rep in ((3, three), (4, four)):
    scan = planar_fan_scan(mu, q, grid)
    print(f"q={q}: scan min {scan.min_defect:.4f}, solver {rep.defect:.1e}, step {grid.fan_resolution(q):.3f}")

# %%
# Two unit disks ten apart: no 5-fan comes close.
disks = two_disk_instance(points_per_disk=100, distance=10.0)
scan = planar_fan_scan(disks, 5, ScanGrid(((-12.0, 12.0), (-12.0, 12.0)), center_steps=50, angle_steps=60))
print("best 5-fan defect on two disks:", scan.min_defect)
render_planar([disks], [scan.best], OUT / "two_disks.svg")
