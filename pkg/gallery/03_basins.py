"""Basins of attraction and a zoom into their boundary.

Renders the n = 16 basins with the curves overlaid, then zooms five
decades into a boundary point of the n = 128 basins and counts the
outcomes in each frame.  Every frame still holds both outcomes.
"""

import math
import sys
from pathlib import Path

from laguerre_unity import RenderConfig, colorize, render, write_ppm
from laguerre_unity.basins import boundary_crossing, overlay_mask

out = Path(sys.argv[1] if len(sys.argv) > 1 else "gallery_out")
out.mkdir(exist_ok=True)

cfg = RenderConfig(n=16, pixels=512, overlay=True)
img = render(cfg)
write_ppm(colorize(img, overlay_mask(cfg)), out / "basins-n16.ppm")
print("n=16 basins:", img.counts())

n = 128
centre = boundary_crossing(n, 0.3 * math.pi / n)
print(f"\nn={n} boundary point {centre:.15f}")
for hw in (1e-2, 1e-3, 1e-4, 1e-5, 1e-6):
    zoom = render(RenderConfig(n=n, center=centre, half_width=hw, pixels=128))
    c = zoom.counts()
    print(f"  half-width {hw:.0e}: {c['root']:6d} root  {c['two_cycle']:6d} two-cycle")
    write_ppm(colorize(zoom), out / f"zoom-n128-{hw:.0e}.ppm")

# far from the origin the simplified map jumps to the two-cycle, the
# general formulation does not always
far = dict(n=8, half_width=20.0, pixels=200)
simp = render(RenderConfig(**far)).counts()
gen = render(RenderConfig(formulation="general", **far)).counts()
gh = render(RenderConfig(formulation="general", general_form="gh", max_iter=200, **far)).counts()
print("\nn=8, half-width 20")
print("  simplified  :", simp)
print("  general (p) :", gen)
print("  general (gh):", gh)
