"""The curves |L(z)| = 1/|z| and the annuli they live in.

For each degree we compute the radii s0 < r0 of the inner annulus, check
that the outer curve is the inversion of the inner one and print how the
annuli tighten around the unit circle as n grows.  A figure of the regions
for n = 16 is written to the output directory.
"""

import math
import sys
from pathlib import Path

import numpy as np

from laguerre_unity import annulus_bounds, outer_radius_bound, radial_zeros
from laguerre_unity.basins import write_ppm
from laguerre_unity.cli import regions_raster

out = Path(sys.argv[1] if len(sys.argv) > 1 else "gallery_out")
out.mkdir(exist_ok=True)

print(f"{'n':>5} {'s0':>12} {'r0':>12} {'1/s0':>10} {'bound':>10}")
for n in (5, 6, 8, 12, 16, 32, 64, 128, 1024):
    b = annulus_bounds(n)
    print(f"{n:5d} {b.s0:12.9f} {b.r0:12.9f} {1 / b.s0:10.6f} {outer_radius_bound(n):10.6f}")

# r_D and r_E are reciprocal at every angle
n = 16
thetas = np.linspace(0, 2 * math.pi, 200, endpoint=False)
worst = max(abs(radial_zeros(n, t).r_D * radial_zeros(n, t).r_E - 1) for t in thetas)
print(f"\nn={n}: max |r_D r_E - 1| over 200 angles = {worst:.2e}")

# r_D climbs from s0 on an odd ray to r0 on an even ray
for t in np.linspace(0, math.pi / n, 5):
    print(f"  theta = {t:.5f}  r_D = {radial_zeros(n, t).r_D:.12f}")

b = annulus_bounds(n)
write_ppm(regions_raster(n, b, 600, 1.15 / b.s0), out / "regions-n16.ppm")
print(f"\nwrote {out / 'regions-n16.ppm'}")
