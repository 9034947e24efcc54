"""
Anticommuting matrices and orthogonal bisections
=================================================

The number of pairwise orthogonal hyperplanes we can force to bisect
several measures is limited by how many orthonormal vector fields the
sphere carries. Those fields come from anticommuting complex structures.
"""

# %%
import numpy as np

from equipart import MassDistribution, bisect_orthogonal, frame_at, rh_matrices, rh_rho

for n in (1, 2, 3, 4, 8, 12, 16, 32, 64):
    fam = rh_matrices(n)
    print(f"n={n:3d}  rho={rh_rho(n):2d}  worst invariant error={max(fam.invariant_errors(), default=0.0):.1e}")

# %%
# At any unit vector x the frame (x, A_1 x, ..., A_{k-1} x) is orthonormal.
x = np.random.default_rng(0).standard_normal(16)
x /= np.linalg.norm(x)
frame = frame_at(x, rh_matrices(16), 9)
print("Gram error on S^15:", np.abs(frame @ frame.T - np.eye(9)).max())

# %%
# R^8 is parallelizable, so one measure admits 8 orthogonal bisecting hyperplanes.
rng = np.random.default_rng(1)
mu = MassDistribution(rng.standard_normal((400, 8)) * np.linspace(0.5, 2.0, 8), bandwidth=0.1)
report = bisect_orthogonal([mu], k=8)
print("8 hyperplanes, defect", report.defect, "Gram error", report.extras["gram_error"])

# %%
# Two measures in R^4: three orthogonal hyperplanes each halving both.
pair = [MassDistribution(rng.standard_normal((300, 4)), bandwidth=0.1),
        MassDistribution(rng.standard_normal((300, 4)) * 0.5 + 1.0, bandwidth=0.1)]
report = bisect_orthogonal(pair, k=3)
print(report.masses / report.totals[:, None, None])

# a fourth would break the ball-separation bound
try:
    bisect_orthogonal(pair, k=4)
except ValueError as exc:
    print("rejected:", exc)
