"""
Orthogonal pairs of complex fans
================================

In C^2 = R^4 the quaternion j turns any unit vector x into a second one,
jx, Hermitian-orthogonal to x. Fans built on x and jx are orthogonal, and a
search over the lens space finds a pair that equipartitions a measure.
"""

# %%
import numpy as np

from equipart import MassDistribution, equipartition_fans, equipartition_fourfans, quaternion_frame
from equipart._cplx import cscale, to_complex

x = np.random.default_rng(0).standard_normal(4)
x /= np.linalg.norm(x)
z = to_complex(quaternion_frame(x))
print("Hermitian Gram matrix of (x, jx):\n", np.round(z @ z.conj().T, 12))

# j is conjugate-linear: j(lam x) = conj(lam) jx
lam = np.exp(0.7j)
print(np.allclose(quaternion_frame(cscale(x, lam))[1], cscale(quaternion_frame(x)[1], np.conj(lam))))

# %%
rng = np.random.default_rng(5)
mu = MassDistribution(rng.standard_normal((300, 4)) * [1.0, 2.0, 0.5, 1.0], bandwidth=0.1)
pair = equipartition_fans([mu], q=3, k=2)
for fan, masses in zip(pair.partitions, pair.masses[0]):
    print("normal", np.round(fan.normal, 3), "masses", np.round(masses, 6))
print("Hermitian Gram error", pair.extras["hermitian_gram_error"])

# %%
quarters = equipartition_fourfans(mu, k=2)
print("two orthogonal 4-fans, defect", quarters.defect)

# %%
# Pentagonal fans need more room: R^8 holds an orthogonal pair of 5-fans.
big = MassDistribution(rng.standard_normal((500, 8)), bandwidth=0.1)
five = equipartition_fans([big], q=5, k=2)
print("5-fan pair in R^8, defect", five.defect, "exponents", five.extras["exponents"])
