"""Acceptance criteria 1-9.

Each test prints one ``PASS``/``FAIL`` line and records it for the terminal
summary.  Tolerances and runtime budgets are the stated ones; a criterion
that is not met fails.  Run directly with ``python3 tests/test_acceptance.py``
for the nine lines alone.
"""

import cmath
import io
import math
import time

import numpy as np
import pytest

from laguerre_unity.basins import ROOT, TWO_CYCLE, RenderConfig, read_ppm, render
from laguerre_unity.characteristic import annulus_bounds
from laguerre_unity.cli import main
from laguerre_unity.core import laguerre_simplified
from laguerre_unity.dynamics import convergence_order_estimate, root_of_unity
from laguerre_unity.verify import (
    _symmetry,
    check_kahan_bound,
    check_sign_equivalence,
    check_three_zeros,
    check_unit_circle,
    check_zero_profile,
)

from reference_cycles import FOUR_CYCLES, SIX_CYCLES
from test_basins import rotated_partner_mismatch

RESULTS = []
SEED = 20240601


def report(number, title, passed, detail, elapsed, budget):
    in_time = elapsed <= budget
    ok = bool(passed and in_time)
    line = (f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}  {detail}  "
            f"[{elapsed:.1f}s, budget {budget:g}s]")
    RESULTS.append(line)
    print(line)
    return ok


def digits(a, b):
    """Matching significant digits between ``a`` and reference ``b``."""
    e = abs(a - b) / abs(b)
    return math.inf if e == 0 else -math.log10(e)


def best_digits(values, ref):
    return max(digits(v, ref) for v in values)


def cycles_cli(n, period, tmp_path):
    path = tmp_path / f"cycles_{n}_{period}.csv"
    t = time.perf_counter()
    code = main(["cycles", "--n", str(n), "--period", str(period), "--out", str(path)], out=io.StringIO())
    elapsed = time.perf_counter() - t
    assert code == 0
    rows = [line.split(",") for line in path.read_text().splitlines()[1:]]
    return [complex(float(r[2]), float(r[3])) for r in rows], elapsed


# rows 1, 8, 16 and 23 of the n=8 six-cycle table
SPOT_ROWS = (0, 7, 15, 22)


def test_criterion_1_table_reproduction(tmp_path):
    parts, ok, worst_time = [], True, 0.0
    for n in (5, 6):
        got, el = cycles_cli(n, 4, tmp_path)
        worst_time = max(worst_time, el)
        d = min(best_digits(got, ref) for ref in FOUR_CYCLES[n])
        good = len(got) == len(FOUR_CYCLES[n]) and d >= 12
        ok &= good
        parts.append(f"n={n} p4: {len(got)} rows, {min(d, 99):.1f} digits")
    got, el = cycles_cli(8, 6, tmp_path)
    worst_time = max(worst_time, el)
    spot = min(best_digits(got, SIX_CYCLES[8][i]) for i in SPOT_ROWS)
    every = min(best_digits(got, ref) for ref in SIX_CYCLES[8])
    good = len(got) == 23 and spot >= 12
    ok &= good
    parts.append(f"n=8 p6: {len(got)} rows (23 expected), spot {min(spot, 99):.1f} digits, "
                 f"all listed values {min(every, 99):.1f} digits")
    assert report(1, "reference cycle values", ok, "; ".join(parts), worst_time, 300)


def test_criterion_2_cycle_census(tmp_path):
    expected = {8: 0, 9: 0, 10: 1, 12: 1, 17: 2}
    parts, ok, worst_time = [], True, 0.0
    for n, count in expected.items():
        got, el = cycles_cli(n, 2, tmp_path)
        worst_time = max(worst_time, el)
        ok &= len(got) == count
        parts.append(f"n={n}:{len(got)}")
    assert report(2, "two-cycle census", ok, " ".join(parts), worst_time, 120)


def test_criterion_3_curve_theorems():
    t = time.perf_counter()
    checks = []
    for n in (5, 6, 7, 8, 12, 16, 32, 64):
        checks += [
            check_three_zeros(n, SEED, angles=100),
            check_zero_profile(n, SEED, angles=100),
            check_sign_equivalence(n, SEED, count=10_000),
        ]
    bad = [c.line() for c in checks if not c.passed]
    detail = f"{len(checks) - len(bad)}/{len(checks)} checks" + (f"; {bad}" if bad else "")
    assert report(3, "curve theorems", not bad, detail, time.perf_counter() - t, 60)


def test_criterion_4_symmetries():
    t = time.perf_counter()
    checks = [_symmetry(n, SEED, 1000, which)
              for n in (5, 8, 16) for which in ("rotation", "conjugation", "inversion")]
    bad = [c.line() for c in checks if not c.passed]
    detail = f"{len(checks) - len(bad)}/{len(checks)} checks" + (f"; {bad}" if bad else "")
    assert report(4, "symmetry commutation", not bad, detail, time.perf_counter() - t, 10)


def test_criterion_5_unit_circle():
    t = time.perf_counter()
    parts, ok = [], True
    for n in (5, 8, 16):
        c = check_unit_circle(n, SEED, count=1000)
        z = cmath.rect(1.0, math.pi / (2 * n))
        steps = None
        for k in range(1, 61):
            z = laguerre_simplified(n, z)
            if abs(z - 1) < 1e-9:
                steps = k
                break
        ok &= c.passed and steps is not None
        parts.append(f"n={n}: {c.detail}; root 0 after {steps} steps")
    assert report(5, "unit-circle dynamics", ok, " | ".join(parts), time.perf_counter() - t, 10)


def test_criterion_6_basin_conformance():
    t = time.perf_counter()
    n = 16
    cfg = RenderConfig(n=n, pixels=512)
    b = annulus_bounds(n)
    img = render(cfg, b)
    a = np.abs(cfg.pixel_centers())
    eps = 2 * cfg.pixel_size()
    bad = int(np.count_nonzero((a < b.s0 - eps) & (img.kind == ROOT))
              + np.count_nonzero((a > b.r0 + eps) & (a < 1 / b.r0 - eps) & (img.kind == TWO_CYCLE)))
    strict = rotated_partner_mismatch(img, n, with_index=True)
    kinds = rotated_partner_mismatch(img, n, with_index=False)
    ok = bad == 0 and strict <= 0.01
    detail = (f"{bad} violating pixels; rotation mismatch {100 * strict:.2f}% "
              f"(outcome kind only {100 * kinds:.2f}%), bound 1%")
    assert report(6, "basin conformance", ok, detail, time.perf_counter() - t, 60)


def test_criterion_7_general_far_field():
    t = time.perf_counter()
    n, hw, px = 8, 20.0, 500
    gen = render(RenderConfig(n=n, half_width=hw, pixels=px, max_iter=100, formulation="general"))
    frac = gen.counts()["root"] / px ** 2
    cfg = RenderConfig(n=n, half_width=hw, pixels=px, max_iter=100)
    simp = render(cfg)
    far = np.abs(cfg.pixel_centers()) > 1 / annulus_bounds(n).s0
    far_ok = bool(np.all(simp.kind[far] == TWO_CYCLE))
    ok = frac >= 0.99 and far_ok
    detail = (f"general: {100 * frac:.2f}% Root (>= 99% required); "
              f"simplified |z| > 1/s0 all TwoCycle: {far_ok}")
    assert report(7, "general-formulation far field", ok, detail, time.perf_counter() - t, 120)


def test_criterion_8_cubic_order_and_kahan():
    t = time.perf_counter()
    rng = np.random.default_rng(SEED)
    qs = []
    for _ in range(50):
        n = int(rng.choice([5, 8, 16]))
        j = int(rng.integers(n))
        d = float(rng.uniform(1e-3, 0.05)) * cmath.exp(1j * float(rng.uniform(-math.pi, math.pi)))
        qs.append(convergence_order_estimate(n, root_of_unity(n, j) + d))
    kahan = check_kahan_bound(SEED, count=1000, max_degree=16)
    ok = all(2.5 <= q <= 3.5 for q in qs) and kahan.passed
    detail = f"order in [{min(qs):.4f}, {max(qs):.4f}] over 50 starts; Kahan: {kahan.detail}"
    assert report(8, "cubic order and Kahan bound", ok, detail, time.perf_counter() - t, 60)


def _cli_outputs(tmp_path, tag):
    ppm, csv = tmp_path / f"b_{tag}.ppm", tmp_path / f"b_{tag}.csv"
    cyc = tmp_path / f"c_{tag}.csv"
    outs = []
    for argv in (
        ["basins", "--n", "16", "--pixels", "256", "--overlay", "--out", str(ppm), "--csv", str(csv)],
        ["cycles", "--n", "7", "--period", "6", "--out", str(cyc)],
    ):
        buf = io.StringIO()
        assert main(argv, out=buf) == 0
        outs.append(buf.getvalue().replace(str(tmp_path), "<tmp>").replace(tag, "<tag>"))
    return (ppm.read_bytes(), csv.read_bytes(), cyc.read_bytes(), *outs)


def test_criterion_9_determinism(tmp_path, monkeypatch):
    t = time.perf_counter()
    runs = []
    for threads in ("1", "8", "1", "8"):
        monkeypatch.setenv("LAGUERRE_THREADS", threads)
        runs.append(_cli_outputs(tmp_path, f"t{threads}_{len(runs)}"))
    same = all(r == runs[0] for r in runs[1:])
    detail = f"basins PPM/CSV and cycles CSV over 4 runs: {'byte-identical' if same else 'differ'}"
    assert report(9, "determinism across thread counts", same, detail, time.perf_counter() - t, 120)


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
