"""Search for periodic cycles of the Laguerre map in the fundamental sector.

Every cycle other than the fixed roots lives in the two gray annuli
``s0 <= |z| <= r0`` and ``1/r0 <= |z| <= 1/s0``: elsewhere orbits provably
converge to a root or to the ``{0, inf}`` two-cycle.  The search evaluates
``F(z) = L^k(z) - z`` on a polar mesh of the open sector ``0 < arg z < pi/n``,
keeps the cells where both ``Re F`` and ``Im F`` change sign, and polishes
each seed with a damped Newton iteration on ``(Re F, Im F)``.

A record is kept for each sector solution of ``L^k(z) = z`` of primitive
period ``k`` lying outside the unit circle.  Solutions inside the circle are
the inversions ``1/conj(z)`` of those and carry no extra information.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .characteristic import annulus_bounds, outer_radius_bound
from .core import INFINITY, check_degree, laguerre_simplified, laguerre_simplified_array

__all__ = [
    "NoConvergence",
    "NotPrimitive",
    "EscapedSector",
    "CycleCandidate",
    "CycleRecord",
    "iterate_map",
    "scan_sector",
    "refine_cycle",
    "find_cycles",
    "search_radii",
    "worker_count",
]

NEWTON_STEPS = 50
DAMPING_HALVINGS = 8
CONVERGED_RTOL = 1e-13
DEDUP_TOL = 1e-8
PRIMITIVE_TOL = 1e-8
ROOT_EXCLUSION = 1e-6
BOUNDARY_ANGLE_TOL = 1e-9
DEFAULT_GRIDS = (256, 512, 1024)


class NoConvergence(RuntimeError):
    pass


class NotPrimitive(RuntimeError):
    pass


class EscapedSector(RuntimeError):
    pass


@dataclass(frozen=True)
class CycleCandidate:
    z: complex
    residual: float


@dataclass(frozen=True)
class CycleRecord:
    """A verified cycle of period ``period`` through ``representative``.

    ``points`` is the orbit starting at the representative.  Records with
    ``on_sector_boundary`` set lie on a ray ``arg z = 0`` or ``pi/n`` (the
    two-cycle ``{r0, 1/r0}`` for instance) and are not sector-interior.
    """

    n: int
    period: int
    representative: complex
    points: tuple = field(repr=False)
    residual: float
    on_sector_boundary: bool = False


def worker_count():
    """Worker threads: ``LAGUERRE_THREADS`` or the machine's CPU count."""
    env = os.environ.get("LAGUERRE_THREADS")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"LAGUERRE_THREADS must be an integer, got {env!r}")
        if value < 1:
            raise ValueError("LAGUERRE_THREADS must be >= 1")
        return value
    return os.cpu_count() or 1


def iterate_map(n, k, z, box=None):
    """Apply the map ``k`` times to an array.

    Returns ``(values, invalid)``.  ``invalid`` marks orbits that reached
    ``0``/infinity or, if ``box = (lo, hi)`` is given, left ``lo <= |z| <= hi``
    at some step.
    """
    z = np.asarray(z, dtype=complex)
    at_inf = np.zeros(z.shape, dtype=bool)
    invalid = np.zeros(z.shape, dtype=bool)
    for _ in range(k):
        z, at_inf = laguerre_simplified_array(n, z, at_inf)
        invalid |= at_inf | (z == 0)
        if box is not None:
            a = np.abs(z)
            invalid |= (a < box[0]) | (a > box[1])
    return z, invalid


def _residual_vec(n, k, z):
    w, bad = iterate_map(n, k, z)
    f = w - z
    f[bad] = np.nan
    return f


def _sign_change(a):
    with np.errstate(invalid="ignore"), warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        s = np.sign(a)
        quad = np.stack([s[:-1, :-1], s[1:, :-1], s[:-1, 1:], s[1:, 1:]])
        return (np.nanmax(quad, axis=0) > 0) & (np.nanmin(quad, axis=0) < 0)


def _sector_angles(n, grid):
    width = math.pi / n
    eps = width / (4 * grid)
    return np.linspace(eps, width - eps, grid)


def scan_sector(n, k, r_range, grid, bounds=None, workers=None):
    """Seeds for ``L^k(z) = z`` on a ``grid x grid`` polar mesh of the sector."""
    n = check_degree(n, 5)
    if k < 1:
        raise ValueError("period must be >= 1")
    if grid < 64:
        raise ValueError("grid must be >= 64")
    r_lo, r_hi = map(float, r_range)
    if not 0 < r_lo < r_hi:
        raise ValueError("r_range must satisfy 0 < lo < hi")
    if bounds is None:
        bounds = annulus_bounds(n)
    box = (0.5 * bounds.s0, 2.0 / bounds.s0)
    radii = np.linspace(r_lo, r_hi, grid)
    angles = _sector_angles(n, grid)
    mesh = radii[:, None] * np.exp(1j * angles)[None, :]

    def block(rows):
        w, bad = iterate_map(n, k, mesh[rows], box)
        f = w - mesh[rows]
        f[bad] = np.nan
        return f

    # rows overlap by one so every 2x2 cell lies inside some block
    workers = workers or worker_count()
    step = max(16, -(-grid // workers))
    starts = list(range(0, grid - 1, step))
    slices = [slice(s, min(grid, s + step + 1)) for s in starts]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(block, slices))

    out = []
    for s, f in zip(slices, parts):
        cells = np.argwhere(_sign_change(f.real) & _sign_change(f.imag))
        for i, j in cells:
            quad = f[i:i + 2, j:j + 2]
            centre = mesh[s][i:i + 2, j:j + 2].mean()
            res = np.nanmin(np.abs(quad))
            out.append(CycleCandidate(z=complex(centre), residual=float(res)))
    return out


def _newton_batch(n, k, z0):
    """Damped Newton on ``(Re F, Im F)`` for many seeds at once.

    Returns ``(z, residual, converged)`` arrays.
    """
    z = np.array(z0, dtype=complex)
    conv = np.zeros(z.shape, dtype=bool)
    alive = np.ones(z.shape, dtype=bool)
    res = np.full(z.shape, np.inf)
    for _ in range(NEWTON_STEPS + 1):
        idx = np.flatnonzero(alive & ~conv)
        if idx.size == 0:
            break
        x = z[idx]
        f = _residual_vec(n, k, x)
        nf = np.abs(f)
        scale = np.maximum(1.0, np.abs(x))
        res[idx] = nf
        dead = ~np.isfinite(nf)
        done = nf < CONVERGED_RTOL * scale
        conv[idx[done]] = True
        alive[idx[dead]] = False
        keep = ~(dead | done)
        idx, x, f, nf, scale = idx[keep], x[keep], f[keep], nf[keep], scale[keep]
        if idx.size == 0:
            break
        h = 1e-7 * scale
        fx = (_residual_vec(n, k, x + h) - _residual_vec(n, k, x - h)) / (2 * h)
        fy = (_residual_vec(n, k, x + 1j * h) - _residual_vec(n, k, x - 1j * h)) / (2 * h)
        a, c = fx.real, fx.imag
        b, d = fy.real, fy.imag
        det = a * d - b * c
        with np.errstate(all="ignore"):
            dx = (-d * f.real + b * f.imag) / det
            dy = (c * f.real - a * f.imag) / det
        step = dx + 1j * dy
        bad = ~np.isfinite(step)
        alive[idx[bad]] = False
        idx, x, step, nf = idx[~bad], x[~bad], step[~bad], nf[~bad]
        lam = np.ones(idx.size)
        trial = x + step
        pending = np.ones(idx.size, dtype=bool)
        for _ in range(DAMPING_HALVINGS):
            ft = np.abs(_residual_vec(n, k, trial[pending]))
            ok = np.isfinite(ft) & (ft < nf[pending])
            where = np.flatnonzero(pending)
            pending[where[ok]] = False
            if not pending.any():
                break
            lam[pending] *= 0.5
            trial[pending] = x[pending] + lam[pending] * step[pending]
        z[idx] = trial
    return z, res, conv


def _sector_fold(n, z):
    """Map ``z`` into ``-pi/n < arg <= pi/n`` by rotation, then conjugate
    into the upper half of the sector."""
    width = 2 * math.pi / n
    t = math.atan2(z.imag, z.real)
    j = math.floor((t + math.pi / n) / width)
    z = z * complex(math.cos(-j * width), math.sin(-j * width))
    if z.imag < 0:
        z = z.conjugate()
    return z


def _orbit(n, k, z):
    pts = [z]
    for _ in range(k - 1):
        nxt = laguerre_simplified(n, pts[-1])
        pts.append(nxt)
    return tuple(pts)


def _closure(n, d, z):
    w = z
    for _ in range(d):
        if w is INFINITY:
            return math.inf
        w = laguerre_simplified(n, w)
    return math.inf if w is INFINITY else abs(w - z)


def _in_open_sector(n, z, tol=BOUNDARY_ANGLE_TOL):
    t = math.atan2(z.imag, z.real)
    return tol < t < math.pi / n - tol


def _on_sector_boundary(n, z, tol=BOUNDARY_ANGLE_TOL):
    t = math.atan2(z.imag, z.real)
    return abs(t) <= tol or abs(t - math.pi / n) <= tol


def _finish(n, k, z, bounds):
    """Validate a converged fixed point of ``L^k`` and build its record."""
    if not bounds.s0 <= abs(z) <= 1.0 / bounds.s0:
        # near 0 the residual of L^k(z) - z is tiny for every z: these seeds
        # collapsed onto the {0, inf} cycle, whose basin holds no other cycle
        raise NoConvergence(f"z={z!r} lies in the basin of the {{0, inf}} cycle")
    if abs(z) < 1:
        # inversion symmetry: 1/conj(z) is also a fixed point, same argument;
        # polish it, since inverting a small point loses relative accuracy
        z = 1.0 / z.conjugate()
        polished, _, conv = _newton_batch(n, k, [z])
        if conv[0]:
            z = complex(polished[0])
    scale = max(1.0, abs(z))
    for d in range(1, k):
        if k % d == 0 and _closure(n, d, z) < PRIMITIVE_TOL * scale:
            raise NotPrimitive(f"z={z!r} closes with period {d}")
    for j in range(n):
        if abs(z - complex(math.cos(2 * math.pi * j / n), math.sin(2 * math.pi * j / n))) < ROOT_EXCLUSION:
            raise NotPrimitive(f"z={z!r} is a root of unity")
    residual = _closure(n, k, z)
    return CycleRecord(
        n=n,
        period=k,
        representative=z,
        points=_orbit(n, k, z),
        residual=residual,
        on_sector_boundary=_on_sector_boundary(n, z),
    )


def refine_cycle(n, k, candidate):
    """Polish one seed into a verified :class:`CycleRecord`.

    Raises :class:`NoConvergence`, :class:`NotPrimitive` or
    :class:`EscapedSector`.
    """
    n = check_degree(n, 5)
    bounds = annulus_bounds(n)
    z0 = candidate.z if isinstance(candidate, CycleCandidate) else complex(candidate)
    for attempt in range(2):
        z, res, conv = _newton_batch(n, k, [z0])
        if not conv[0]:
            raise NoConvergence(f"Newton did not converge from {z0!r} (residual {res[0]:.3g})")
        z = complex(z[0])
        if _in_open_sector(n, z) or _on_sector_boundary(n, z):
            return _finish(n, k, z, bounds)
        if attempt == 0:
            z0 = _sector_fold(n, z)
    raise EscapedSector(f"refined point {z!r} is outside 0 < arg z < pi/{n}")


def _refine_many(n, k, seeds, bounds):
    """Batch version of :func:`refine_cycle` that drops failures silently."""
    if not seeds:
        return []
    z, res, conv = _newton_batch(n, k, np.array(seeds, dtype=complex))
    fixed = []
    retry = []
    for zi, ok in zip(z, conv):
        if not ok:
            continue
        zi = complex(zi)
        if _in_open_sector(n, zi) or _on_sector_boundary(n, zi):
            fixed.append(zi)
        else:
            retry.append(_sector_fold(n, zi))
    if retry:
        z2, _, conv2 = _newton_batch(n, k, np.array(retry, dtype=complex))
        fixed.extend(complex(zi) for zi, ok in zip(z2, conv2) if ok)
    records = []
    for zi in fixed:
        if not (_in_open_sector(n, zi) or _on_sector_boundary(n, zi)):
            continue
        try:
            records.append(_finish(n, k, zi, bounds))
        except (NotPrimitive, NoConvergence):
            continue
    return records


def search_radii(bounds):
    """Radial scan range ``[max(1e-3, s0/2), 1.5 (n-1)**(2/(n-4))]``.

    Generous on both sides of the annuli: seeds that fall into the basin of
    ``{0, inf}`` are discarded after refinement.
    """
    return (max(1e-3, 0.5 * bounds.s0), 1.5 * outer_radius_bound(bounds.n))


def _dedup(records):
    out = []
    for rec in sorted(records, key=lambda r: (r.representative.imag, r.representative.real)):
        if any(abs(rec.representative - o.representative) < DEDUP_TOL for o in out):
            continue
        out.append(rec)
    return out


def find_cycles(n, k, grids=DEFAULT_GRIDS, r_range=None, workers=None, include_boundary=False):
    """All sector-interior cycles of primitive period ``k`` found by the scan.

    Seeds from every grid in ``grids`` are refined and merged; the result is
    sorted by the imaginary part of the representative.
    """
    n = check_degree(n, 5)
    bounds = annulus_bounds(n)
    if r_range is None:
        r_range = search_radii(bounds)
    found = []
    for grid in grids:
        seeds = [c.z for c in scan_sector(n, k, r_range, grid, bounds=bounds, workers=workers)]
        found.extend(_refine_many(n, k, seeds, bounds))
        found = _dedup(found)
    if not include_boundary:
        found = [r for r in found if not r.on_sector_boundary]
    return found
