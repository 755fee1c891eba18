"""Randomised checks of the structural facts about the iteration.

Each check returns a :class:`Check`; :func:`run_suite` runs every check that
applies to the requested degrees and :func:`format_report` renders the
outcome as plain text.  The checks are deterministic for a given seed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .basins import ROOT, TWO_CYCLE, RenderConfig, render
from .characteristic import (
    annulus_bounds,
    char_fn,
    outer_radius_bound,
    radial_zeros,
)
from .core import (
    INFINITY,
    laguerre_general,
    laguerre_simplified,
    laguerre_simplified_array,
    modulus_squared_formula,
)
from .cycles import find_cycles
from .dynamics import (
    TwoCycle,
    convergence_order_estimate,
    iterate_orbit,
    root_of_unity,
    unit_circle_step_angle,
)

__all__ = ["Check", "run_suite", "format_report", "THEOREM_MIN_DEGREE"]

THEOREM_MIN_DEGREE = 5


@dataclass(frozen=True)
class Check:
    name: str
    n: object
    passed: bool
    detail: str

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name} [n={self.n}]  {self.detail}"


def _rng(seed, *salt):
    return np.random.default_rng([seed, *salt])


def _random_points(rng, count, r_lo=0.2, r_hi=5.0):
    r = np.exp(rng.uniform(math.log(r_lo), math.log(r_hi), count))
    t = rng.uniform(-math.pi, math.pi, count)
    return r * np.exp(1j * t)


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


# core iteration -----------------------------------------------------------

def check_fixed_points(n):
    worst = max(abs(laguerre_simplified(n, root_of_unity(n, j)) - root_of_unity(n, j)) for j in range(n))
    return Check("roots are fixed points", n, worst < 1e-14, f"max error {worst:.3g}")


def check_two_step_swap(n):
    ok = laguerre_simplified(n, INFINITY) == 0 and laguerre_simplified(n, 0j) is INFINITY
    return Check("0 <-> infinity swap", n, ok, "L(inf)=0, L(0)=inf" if ok else "swap broken")


def check_modulus_identity(n, seed, count=10_000):
    rng = _rng(seed, 1, n)
    z = _random_points(rng, count)
    w, _ = laguerre_simplified_array(n, z)
    lhs = np.abs(w) ** 2
    rhs = modulus_squared_formula(n, np.abs(z), np.angle(z))
    worst = float(np.max(np.abs(lhs - rhs) / rhs))
    return Check("modulus identity", n, worst < 1e-12, f"max rel error {worst:.3g} over {count} points")


def check_branch_cut_modulus(n, seed, count=200):
    rng = _rng(seed, 2, n)
    worst = 0.0
    for _ in range(count):
        r = math.exp(rng.uniform(-1.0, 1.0))
        t1 = (2 * rng.integers(n) + 1) * math.pi / n
        a = laguerre_simplified(n, cmath.rect(r, t1 - 1e-9))
        b = laguerre_simplified(n, cmath.rect(r, t1 + 1e-9))
        worst = max(worst, abs(abs(a) - abs(b)))
    return Check("|L| continuous across odd rays", n, worst < 1e-7, f"max jump {worst:.3g} at offset 1e-9")


def check_kahan_bound(seed, count=1000, max_degree=16):
    rng = _rng(seed, 3)
    worst = -math.inf
    for _ in range(count):
        deg = int(rng.integers(2, max_degree + 1))
        roots = rng.normal(size=deg) + 1j * rng.normal(size=deg)
        coeffs = np.poly(roots)[::-1]
        z = complex(rng.normal() * 2, rng.normal() * 2)
        try:
            step = abs(z - laguerre_general(coeffs, z))
        except ArithmeticError:
            continue
        dist = min(abs(z - r) for r in roots)
        worst = max(worst, dist - math.sqrt(deg) * step)
    return Check("Kahan bound", "2..16", worst <= 1e-9, f"max violation {worst:.3g}")


# characteristic function --------------------------------------------------

def check_three_zeros(n, seed, angles=100, grid=100_000):
    rng = _rng(seed, 4, n)
    hi = 1.1 * outer_radius_bound(n)
    r = np.linspace(hi / grid, hi, grid)
    bad = 0
    for t in rng.uniform(0, 2 * math.pi, angles):
        s = np.sign(char_fn(n, r, t))
        changes = np.flatnonzero(s[:-1] * s[1:] < 0)
        exact = np.flatnonzero(s == 0)
        count = changes.size + exact.size
        contains_one = any(r[i] <= 1 <= r[i + 1] for i in changes) or any(r[i] == 1 for i in exact)
        if count != 3 or not contains_one:
            bad += 1
    return Check("exactly three positive zeros", n, bad == 0, f"{bad}/{angles} angles differ")


def check_zero_profile(n, seed, angles=100):
    rng = _rng(seed, 5, n)
    bound = outer_radius_bound(n)
    worst_pair, over = 0.0, 0
    for t in rng.uniform(0, 2 * math.pi, angles):
        prof = radial_zeros(n, t)
        worst_pair = max(worst_pair, abs(prof.r_D * prof.r_E - 1))
        over += not prof.r_E < bound
    ok = worst_pair < 1e-10 and over == 0
    return Check("r_D r_E = 1 and r_E below bound", n, ok, f"max |r_D r_E - 1| {worst_pair:.3g}; {over} above bound")


def check_sign_equivalence(n, seed, count=10_000):
    rng = _rng(seed, 6, n)
    bounds = annulus_bounds(n)
    z = _random_points(rng, count, 0.5 * bounds.s0, 2.0 / bounds.s0)
    r, t = np.abs(z), np.angle(z)
    f = char_fn(n, r, t)
    w, _ = laguerre_simplified_array(n, z)
    gap = np.abs(w) - 1.0 / r
    scale = np.maximum(1.0, (n - 1.0) ** 2 * r ** n)
    decided = (np.abs(f) > 1e-9 * scale) & (np.abs(gap) > 1e-9 * np.maximum(1, 1 / r))
    mismatch = decided & (np.sign(f) != -np.sign(gap))
    return Check(
        "sign of f matches |L| vs 1/|z|", n, not mismatch.any(),
        f"{int(mismatch.sum())} mismatches among {int(decided.sum())} decided points",
    )


def check_extremal_radii(n, samples=100):
    bounds = annulus_bounds(n)
    thetas = np.linspace(0, math.pi / n, samples)
    rd = np.array([radial_zeros(n, t).r_D for t in thetas])
    mono = bool(np.all(np.diff(rd) <= 1e-13))
    inside = bool(np.all(rd <= bounds.r0 + 1e-13) and np.all(rd >= bounds.s0 - 1e-13))
    return Check("r_D monotone between extremes s0, r0", n, mono and inside,
                 f"monotone={mono}, within [s0, r0]={inside}")


def check_shrinking_annulus(degrees=(5, 8, 16, 32, 64, 128)):
    widths, below = [], True
    for n in degrees:
        s0 = annulus_bounds(n).s0
        widths.append(1 / s0 - s0)
        below &= 1 / s0 < outer_radius_bound(n)
    ok = below and all(a > b for a, b in zip(widths, widths[1:]))
    return Check("annulus shrinks with n", ",".join(map(str, degrees)), ok,
                 "widths " + ", ".join(f"{w:.4g}" for w in widths))


# dynamics -------------------------------------------------------------------

def _symmetry(n, seed, count, which):
    rng = _rng(seed, 7, n, ("rotation", "conjugation", "inversion").index(which))
    z = _random_points(rng, count)
    omega = root_of_unity(n, 1)
    worst = 0.0
    for zi in z:
        zi = complex(zi)
        if which == "rotation":
            a, b = laguerre_simplified(n, omega * zi), omega * laguerre_simplified(n, zi)
        elif which == "conjugation":
            # keep away from the odd rays
            d = (math.atan2(zi.imag, zi.real) * n / math.pi - 1) % 2
            if min(d, 2 - d) * math.pi / n < 1e-6:
                continue
            a, b = laguerre_simplified(n, zi.conjugate()), laguerre_simplified(n, zi).conjugate()
        else:
            a, b = laguerre_simplified(n, 1 / zi.conjugate()), 1 / laguerre_simplified(n, zi).conjugate()
        worst = max(worst, _rel(a, b))
    if which == "inversion":
        for k in range(n):
            zi = cmath.rect(float(rng.uniform(0.3, 3)), (2 * k + 1) * math.pi / n)
            a, b = laguerre_simplified(n, 1 / zi.conjugate()), 1 / laguerre_simplified(n, zi).conjugate()
            worst = max(worst, _rel(a, b))
    return Check(f"{which} symmetry", n, worst < 1e-12, f"max rel error {worst:.3g}")


def check_unit_circle(n, seed, count=1000):
    rng = _rng(seed, 8, n)
    thetas = rng.uniform(0, math.pi / n, count)
    thetas = thetas[thetas > 0]
    worst_mod, bad_angle = 0.0, 0
    for t in thetas:
        w = laguerre_simplified(n, cmath.rect(1.0, t))
        worst_mod = max(worst_mod, abs(abs(w) - 1))
        g = unit_circle_step_angle(n, t)
        bad_angle += not 0 < g < t
    ok = worst_mod < 1e-13 and bad_angle == 0
    return Check("unit circle invariant, angle decreases", n, ok,
                 f"max ||L|-1| {worst_mod:.3g}; {bad_angle} angle violations")


def check_unit_circle_orbit(n, max_iter=60):
    tr = iterate_orbit(n, cmath.rect(1.0, math.pi / (2 * n)), None, max_iter=max_iter)
    kind = tr.outcome.kind
    ok = getattr(kind, "index", None) == 0 and kind.iterations <= max_iter
    return Check("orbit from e^{i pi/(2n)} reaches root 0", n, ok, repr(kind))


def check_modulus_sandwich(n, seed, count=2000):
    rng = _rng(seed, 9, n)
    b = annulus_bounds(n)
    r = rng.uniform(b.r0, 1 / b.r0, count)
    r = r[(np.abs(r - 1) > 1e-9) & (r > b.r0) & (r < 1 / b.r0)]
    z = r * np.exp(1j * rng.uniform(-math.pi, math.pi, r.size))
    w, _ = laguerre_simplified_array(n, z)
    a = np.abs(w)
    lo, hi = np.minimum(r, 1 / r), np.maximum(r, 1 / r)
    bad = int(np.count_nonzero(~((lo < a) & (a < hi))))
    return Check("modulus sandwich in convergence annulus", n, bad == 0, f"{bad}/{r.size} violations")


def check_two_step_contraction(n, seed, count=2000):
    rng = _rng(seed, 10, n)
    b = annulus_bounds(n)
    z = rng.uniform(1e-3, 1.0, count) * b.s0 * np.exp(1j * rng.uniform(-math.pi, math.pi, count))
    w, inf1 = laguerre_simplified_array(n, z)
    w2, inf2 = laguerre_simplified_array(n, w, inf1)
    bad = int(np.count_nonzero(~(inf2 | (np.abs(w2) < np.abs(z)))))
    return Check("two-step contraction inside s0", n, bad == 0, f"{bad}/{count} violations")


def check_even_ray_divergence(n, seed, count=200):
    rng = _rng(seed, 11, n)
    b = annulus_bounds(n)
    xs = rng.uniform(1e-6, b.r0 - 1e-6, count)
    bad = sum(not isinstance(iterate_orbit(n, complex(x), b, max_iter=400).outcome.kind, TwoCycle) for x in xs)
    return Check("real axis below r0 captured by {0, inf}", n, bad == 0, f"{bad}/{count} not captured")


def check_cubic_order(n, seed, count=20):
    rng = _rng(seed, 12, n)
    qs = []
    for _ in range(count):
        j = int(rng.integers(n))
        d = float(rng.uniform(1e-3, 0.05)) * cmath.exp(1j * float(rng.uniform(-math.pi, math.pi)))
        qs.append(convergence_order_estimate(n, root_of_unity(n, j) + d))
    ok = all(2.5 <= q <= 3.5 for q in qs)
    return Check("local order of convergence is 3", n, ok, f"order in [{min(qs):.4f}, {max(qs):.4f}]")


# cycles and basins --------------------------------------------------------

def check_cycle_closure(n, period=4):
    recs = find_cycles(n, period, grids=(256,))
    omega = root_of_unity(n, 1)
    worst = 0.0
    for rec in recs:
        scale = max(1.0, abs(rec.representative))
        worst = max(worst, rec.residual / scale)
        # rotated and inverted copies must close as well
        for z in (omega * rec.representative, 1 / rec.representative.conjugate()):
            w = z
            for _ in range(period):
                w = laguerre_simplified(n, w)
            worst = max(worst, abs(w - z) / max(1.0, abs(z)))
    return Check(f"period-{period} cycles close", n, worst <= 1e-12,
                 f"{len(recs)} cycles, max scaled residual {worst:.3g}")


def check_basin_conformance(n, pixels=128):
    cfg = RenderConfig(n=n, pixels=pixels)
    b = annulus_bounds(n)
    img = render(cfg, b)
    z = cfg.pixel_centers()
    a = np.abs(z)
    eps = 2 * cfg.pixel_size()
    bad_root = (a < b.s0 - eps) & (img.kind == ROOT)
    bad_cycle = (a > b.r0 + eps) & (a < 1 / b.r0 - eps) & (img.kind == TWO_CYCLE)
    bad = int(bad_root.sum() + bad_cycle.sum())
    return Check("basin render conforms to proven regions", n, bad == 0, f"{bad} violating pixels at {pixels}^2")


def run_suite(degrees, seed=0, with_cycles=True, with_render=True):
    """Run every applicable check for each degree in ``degrees``."""
    out = []
    notes = []
    for n in degrees:
        out += [check_fixed_points(n), check_modulus_identity(n, seed)]
        if n >= 3:
            out.append(check_two_step_swap(n))
            out.append(check_branch_cut_modulus(n, seed))
        out += [_symmetry(n, seed, 1000, w) for w in ("rotation", "conjugation", "inversion")]
        if n >= 3:
            out += [check_unit_circle(n, seed), check_unit_circle_orbit(n), check_cubic_order(n, seed)]
        if n < THEOREM_MIN_DEGREE:
            notes.append(f"n={n}: theorem checks skipped (they need n >= {THEOREM_MIN_DEGREE})")
            continue
        out += [
            check_three_zeros(n, seed),
            check_zero_profile(n, seed),
            check_sign_equivalence(n, seed),
            check_extremal_radii(n),
            check_modulus_sandwich(n, seed),
            check_two_step_contraction(n, seed),
            check_even_ray_divergence(n, seed),
        ]
        if with_cycles and n <= 16:
            out.append(check_cycle_closure(n))
        if with_render:
            out.append(check_basin_conformance(n))
    out.append(check_kahan_bound(seed))
    if any(n >= THEOREM_MIN_DEGREE for n in degrees):
        out.append(check_shrinking_annulus())
    return out, notes


def format_report(checks, notes=(), seed=0, degrees=()):
    lines = [f"laguerre_unity verification  degrees={','.join(map(str, degrees))}  seed={seed}"]
    lines += [f"NOTE  {m}" for m in notes]
    lines += [c.line() for c in checks]
    failed = sum(not c.passed for c in checks)
    lines.append(f"{len(checks) - failed}/{len(checks)} checks passed")
    return "\n".join(lines) + "\n"
