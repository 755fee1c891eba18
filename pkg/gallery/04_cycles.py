"""Periodic orbits of the iteration away from the roots.

Finds the four-cycles for n = 5..8 and the two-cycles for n = 10..17 in
the sector 0 < arg z < pi/n, then follows one six-cycle orbit of n = 8 and
folds each point back into the sector.
"""

import cmath
import math

from laguerre_unity import find_cycles, laguerre_simplified

for n in (5, 6, 7, 8):
    recs = find_cycles(n, 4)
    print(f"n={n} four-cycles: {len(recs)}")
    for r in recs:
        print(f"  {r.representative:.15f}   residual {r.residual:.1e}")

print()
for n in range(8, 18):
    print(f"n={n:2d} two-cycles: {len(find_cycles(n, 2))}")


def fold(n, z):
    """Image of ``z`` in the sector under rotations and conjugation."""
    t = cmath.phase(z) % (2 * math.pi / n)
    if t > math.pi / n:
        t = 2 * math.pi / n - t
    return cmath.rect(abs(z), t)


recs = find_cycles(8, 6)
print(f"\nn=8 six-cycle sector points: {len(recs)}")
z = recs[0].representative
print("one orbit, folded into the sector:")
for _ in range(6):
    print(f"  {fold(8, z):.12f}")
    z = laguerre_simplified(8, z)
