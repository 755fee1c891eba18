"""A handful of orbits and what happens to them.

A start near a root converges cubically, a start near the origin falls
into the two-cycle {0, infinity}, a start on the unit circle creeps
clockwise toward a root, and a start on the repelling cycle on the real
axis stays put only until rounding pushes it off.
"""

import cmath
import math

from laguerre_unity import (
    annulus_bounds,
    convergence_order_estimate,
    iterate_orbit,
    laguerre_simplified,
    unit_circle_step_angle,
)

n = 8
b = annulus_bounds(n)

tr = iterate_orbit(n, 1.01 + 0.02j, b, keep_trace=True)
print("near a root:", tr.outcome.kind)
for k, z in enumerate(tr.points):
    print(f"  {k}  |z - 1| = {abs(z - 1):.3e}")
print("  estimated order:", convergence_order_estimate(n, 1.01 + 0.02j))

tr = iterate_orbit(n, 0.3 + 0.05j, b, keep_trace=True)
print("\nnear the origin:", tr.outcome.kind)
for k, z in enumerate(tr.points[:4]):
    print(f"  {k}  |z| = {abs(z):.3e}")

theta = math.pi / n
print("\non the unit circle, starting at the odd ray:")
for k in range(5):
    print(f"  {k}  theta = {theta:.3e}")
    theta = unit_circle_step_angle(n, theta)

z = complex(b.r0)
print(f"\nrepelling two-cycle {{r0, 1/r0}}, r0 = {b.r0:.15f}:")
for k in range(40):
    z = laguerre_simplified(n, z)
    if k % 8 == 7:
        print(f"  after {k + 1:2d} steps  z = {z:.15f}")

# the same orbit pushed slightly off the ray
z = cmath.rect(b.r0, 1e-6)
print("\n1e-6 off the ray:", iterate_orbit(n, z, b).outcome.kind)
