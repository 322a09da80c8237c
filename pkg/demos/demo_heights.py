"""Walkthrough: certified canonical heights on y^2 + y = x^3 - x.

The canonical height used throughout the package is the x-coordinate limit
hhat(P) = lim 4^(-n) h(x(2^n P)); it vanishes exactly on torsion and scales
like hhat(mP) = m^2 hhat(P).  Two independent engines compute it with
certified error radii: a fast local decomposition whose cost ignores the
size of the input point, and the exact-doubling limit oracle whose
coordinates quadruple in size at each step.
"""

import math

from ellsplit.curves import curve_37a1, curve_j0, power_point, scalar_mul
from ellsplit.heights import (
    canonical_height_doubling,
    canonical_height_series,
    naive_height,
    seminorm,
)

E = curve_37a1()
P = E.point(0, 0)

h = canonical_height_series(P, 1e-12)
print(f"hhat(P)  = {h.value:.12f}  (radius {h.radius:.1e}, series route)")

d = canonical_height_doubling(P, 1e-6)
print(f"hhat(P)  = {d.value:.12f}  (radius {d.radius:.1e}, doubling oracle)")
print(f"agree within combined radii: {abs(h.value - d.value) <= h.radius + d.radius}")

print("\nquadraticity hhat(nP) / n^2:")
for n in (2, 5, 13, 100):
    hn = canonical_height_series(scalar_mul(n, P), 1e-10)
    print(f"  n = {n:3d}: {hn.value / (n * n):.12f}")

print("\nnaive vs canonical along multiples:")
for n in (4, 8, 16):
    Q = scalar_mul(n, P)
    print(
        f"  n = {n:2d}: naive {naive_height(Q).value:9.4f}   "
        f"canonical {canonical_height_series(Q, 1e-9).value:9.4f}"
    )

T = curve_j0().point(2, 3)
print(f"\ntorsion point (2,3) on y^2 = x^3 + 1: order 6, height exactly 0")

x = power_point([P, scalar_mul(2, P), scalar_mul(22, P)])
sn = seminorm(x, 1e-9)
print(f"\n||(P, 2P, 22P)|| = {sn.value:.9f} = 22 * ||P|| "
      f"(= {22 * math.sqrt(h.value):.9f})")
