"""
Ham sandwich cuts in the plane and beyond
=========================================

Two point clouds in the plane can always be halved by one line. The solver
finds it as a zero of an odd map on the circle; the grid scan confirms it.
"""

# %%
from pathlib import Path

import numpy as np

from equipart import MassDistribution, ScanGrid, bisect_orthogonal, planar_line_scan
from equipart.svg import render_planar

OUT = Path(__file__).with_name("output")
OUT.mkdir(exist_ok=True)
rng = np.random.default_rng(7)

# a round blob and an elongated one, smoothed with bandwidth 0.1
blob = MassDistribution(rng.standard_normal((250, 2)) + [-1.0, 0.5], bandwidth=0.1)
streak = MassDistribution(rng.standard_normal((250, 2)) * [2.5, 0.4] + [1.5, -1.0], bandwidth=0.1)

# %%
report = bisect_orthogonal([blob, streak], k=1)
line = report.partitions[0]
print("normal", line.normal, "offset", line.offset)
print("masses on each side:\n", report.masses)
print("defect", report.defect)

# %%
# The scan knows nothing about spheres or odd maps: it tries every angle and offset.
grid = ScanGrid.around([blob, streak], angle_steps=180, offset_steps=200)
scan = planar_line_scan(blob, streak, grid)
print("scan minimum", scan.min_defect, "at resolution", grid.line_resolution())

render_planar([blob, streak], [line], OUT / "ham_sandwich.svg")

# %%
# Same story in R^4 with four clouds: one hyperplane halves all of them.
clouds = [MassDistribution(rng.standard_normal((200, 4)) + rng.uniform(-2, 2, 4), bandwidth=0.1)
          for _ in range(4)]
report = bisect_orthogonal(clouds, k=1)
print("R^4 defect", report.defect, "after", report.iterations, "evaluations")
