"""Basin-of-attraction rasters for Laguerre's method on ``z**n - 1``.

Outcomes are computed per pixel centre, row-major with the top row at the
largest imaginary part.  ``formulation="simplified"`` iterates the closed
form of the map and uses the proven two-cycle basin ``|z| < s0`` or
``|z| > 1/s0``; ``formulation="general"`` iterates the textbook update in
plain double precision, where roundoff in the discriminant lets far-away
starting points drift back to a root.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .characteristic import annulus_bounds, char_fn, outer_radius_bound
from .core import (
    check_degree,
    laguerre_general_array,
    laguerre_simplified_array,
    unity_coeffs,
)
from .cycles import worker_count
from .dynamics import (
    DEFAULT_MAX_ITER,
    DEFAULT_ROOT_TOL,
    RAY_CYCLE_TOL,
    OrbitOutcome,
    Root,
    TwoCycle,
    Undecided,
)

__all__ = [
    "ROOT",
    "TWO_CYCLE",
    "UNDECIDED",
    "RenderConfig",
    "BasinImage",
    "render",
    "classify_points",
    "boundary_polyline",
    "boundary_crossing",
    "overlay_mask",
    "colorize",
    "write_ppm",
    "write_outcome_csv",
]

ROOT, TWO_CYCLE, UNDECIDED = 0, 1, 2
FORMULATIONS = ("simplified", "general")
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class RenderConfig:
    n: int
    center: complex = 0j
    half_width: float = None
    pixels: int = 512
    max_iter: int = DEFAULT_MAX_ITER
    root_tol: float = DEFAULT_ROOT_TOL
    formulation: str = "simplified"
    overlay: bool = False
    general_form: str = "p"

    def __post_init__(self):
        check_degree(self.n)
        if self.half_width is None:
            object.__setattr__(self, "half_width", default_half_width(self.n))
        object.__setattr__(self, "center", complex(self.center))
        if self.pixels < 16:
            raise ValueError("pixels must be >= 16")
        if not self.half_width > 0:
            raise ValueError("half_width must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.formulation not in FORMULATIONS:
            raise ValueError(f"formulation must be one of {FORMULATIONS}")
        if self.general_form not in ("p", "gh"):
            raise ValueError("general_form must be 'p' or 'gh'")

    def pixel_centers(self, rows=None):
        p = self.pixels
        offs = self.half_width * ((2 * np.arange(p) + 1) / p - 1)
        i = np.arange(p) if rows is None else np.arange(p)[rows]
        re = self.center.real + offs
        im = self.center.imag - offs[i]
        return re[None, :] + 1j * im[:, None]

    def pixel_size(self):
        return 2 * self.half_width / self.pixels


def default_half_width(n):
    """Frame half-width ``(n-1)**(2/(n-4))`` for ``n >= 5``; 2 otherwise."""
    return outer_radius_bound(n) if n >= 5 else 2.0


@dataclass
class BasinImage:
    """Outcome grid: ``kind`` (ROOT/TWO_CYCLE/UNDECIDED), root index (-1 if
    none) and iteration count per pixel."""

    kind: np.ndarray
    root_index: np.ndarray
    iterations: np.ndarray
    config: RenderConfig

    def outcome(self, i, j):
        it = int(self.iterations[i, j])
        kind = int(self.kind[i, j])
        if kind == ROOT:
            tag = Root(int(self.root_index[i, j]), it)
        elif kind == TWO_CYCLE:
            tag = TwoCycle(it)
        else:
            tag = Undecided(it)
        return OrbitOutcome(kind=tag, final_point=None)

    def counts(self):
        return {
            "root": int(np.count_nonzero(self.kind == ROOT)),
            "two_cycle": int(np.count_nonzero(self.kind == TWO_CYCLE)),
            "undecided": int(np.count_nonzero(self.kind == UNDECIDED)),
        }


def _nearest_root_index(n, z):
    t = np.angle(z) * n / (2 * np.pi)
    slack = 8 * _EPS * np.maximum(1.0, np.abs(t))
    return np.mod(np.ceil(t - 0.5 - slack), n).astype(np.int64)


def _root_distance(n, z):
    j = _nearest_root_index(n, z)
    w = np.exp(2j * np.pi * j / n)
    return j, np.abs(z - w), w


def classify_points(n, z0, bounds=None, max_iter=DEFAULT_MAX_ITER,
                    root_tol=DEFAULT_ROOT_TOL, formulation="simplified",
                    general_form="p"):
    """Vectorised orbit classification; mirrors :func:`iterate_orbit`.

    Returns ``(kind, root_index, iterations)`` arrays shaped like ``z0``.
    """
    z = np.array(z0, dtype=complex)
    shape = z.shape
    z = z.ravel()
    size = z.size
    kind = np.full(size, UNDECIDED, dtype=np.int8)
    root = np.full(size, -1, dtype=np.int64)
    iters = np.full(size, max_iter, dtype=np.int64)
    at_inf = np.zeros(size, dtype=bool)
    general = formulation == "general"
    coeffs = unity_coeffs(n)
    use_bounds = bounds is not None and not general
    if use_bounds:
        lo, hi, r0 = bounds.s0, 1.0 / bounds.s0, bounds.r0

    def step(zs, infs):
        if general:
            out = np.zeros_like(zs)
            finite = ~infs
            vals, bad = laguerre_general_array(coeffs, zs[finite], general_form)
            # L(0) = inf, L(inf) = 0; overflow is promoted to inf
            new_inf = np.zeros(zs.shape, dtype=bool)
            out[finite] = vals
            new_inf[finite] = bad
            return out, new_inf
        return laguerre_simplified_array(n, zs, infs)

    def on_ray_cycle(zs):
        j, _, w = _root_distance(n, np.where(zs == 0, 1, zs))
        return (np.abs(zs - r0 * w) <= RAY_CYCLE_TOL) | (np.abs(zs - w / r0) <= RAY_CYCLE_TOL / r0)

    active = np.ones(size, dtype=bool)
    if use_bounds:
        hit = on_ray_cycle(z)
        iters[hit] = 0
        active &= ~hit

    for k in range(1, max_iter + 1):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        zs, infs = step(z[idx], at_inf[idx])
        z[idx], at_inf[idx] = zs, infs
        done = np.zeros(idx.size, dtype=bool)
        if use_bounds:
            ray = ~infs & on_ray_cycle(zs)
            iters[idx[ray]] = k
            done |= ray
        captured = infs | (zs == 0)
        if use_bounds:
            a = np.abs(zs)
            captured |= (a < lo) | (a > hi)
        captured &= ~done
        kind[idx[captured]] = TWO_CYCLE
        iters[idx[captured]] = k
        done |= captured

        cand = ~done
        j, err, w = _root_distance(n, np.where(cand, zs, 1))
        near = cand & (err < root_tol)
        if near.any():
            sub = np.flatnonzero(near)
            nxt, ninf = step(zs[sub], np.zeros(sub.size, dtype=bool))
            ok = ~ninf & (np.abs(nxt - w[sub]) <= np.maximum(err[sub], 8 * _EPS))
            sub = sub[ok]
            kind[idx[sub]] = ROOT
            root[idx[sub]] = j[sub]
            iters[idx[sub]] = k
            done[sub] = True
        active[idx[done]] = False
    return kind.reshape(shape), root.reshape(shape), iters.reshape(shape)


def render(config, bounds=None, workers=None):
    """Classify every pixel of the frame described by ``config``.

    ``bounds`` defaults to :func:`annulus_bounds` for ``n >= 5``; the work is
    split into row blocks across ``workers`` threads.
    """
    n = config.n
    if bounds is None and n >= 5:
        bounds = annulus_bounds(n)
    if bounds is not None and bounds.n != n:
        raise ValueError("bounds do not match config.n")
    p = config.pixels
    kind = np.empty((p, p), dtype=np.int8)
    root = np.empty((p, p), dtype=np.int64)
    iters = np.empty((p, p), dtype=np.int64)
    workers = workers or worker_count()
    block = max(8, -(-p // (4 * workers)))
    slices = [slice(s, min(p, s + block)) for s in range(0, p, block)]

    def work(rows):
        z = config.pixel_centers(rows)
        kind[rows], root[rows], iters[rows] = classify_points(
            n, z, bounds, config.max_iter, config.root_tol, config.formulation,
            config.general_form,
        )

    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(work, slices))
    return BasinImage(kind=kind, root_index=root, iterations=iters, config=config)


def boundary_crossing(n, theta, bounds=None, max_iter=200, tol=1e-12):
    """A point of the basin boundary on the ray ``arg z = theta``.

    Bisects the orbit outcome between ``1/r0`` (a root) and ``1/s0`` (the
    two-cycle) until the bracket is narrower than ``tol``; useful as the
    centre of successive zoom frames.
    """
    n = check_degree(n, 5)
    if bounds is None:
        bounds = annulus_bounds(n)
    u = complex(math.cos(theta), math.sin(theta))

    def kind(r):
        k, _, _ = classify_points(n, np.array([r * u]), bounds, max_iter)
        return int(k[0])

    lo, hi = 1.0 / bounds.r0, 1.0 / bounds.s0
    if kind(lo) != ROOT or kind(hi) != TWO_CYCLE:
        raise ValueError(f"no root/two-cycle bracket on the ray theta={theta!r}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if kind(mid) == ROOT:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi) * u


def _zeros_vectorised(n, thetas, bounds, iterations=64):
    """``r_D`` at many angles by bisection inside ``[s0, r0]``."""
    lo = np.full(thetas.shape, bounds.s0 * (1 - 1e-9))
    hi = np.full(thetas.shape, bounds.r0 * (1 + 1e-9))
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        neg = char_fn(n, mid, thetas) < 0
        lo = np.where(neg, mid, lo)
        hi = np.where(neg, hi, mid)
    return 0.5 * (lo + hi)


def boundary_polyline(n, curve="BoundaryD", samples=None, bounds=None):
    """Points of the polar curve ``r_D(theta)`` (or ``r_E``) on ``[0, 2 pi)``."""
    n = check_degree(n, 5)
    if samples is None:
        samples = 64 * n
    if samples < 8 * n:
        raise ValueError("samples must be >= 8 n")
    if curve not in ("BoundaryD", "BoundaryE"):
        raise ValueError("curve must be 'BoundaryD' or 'BoundaryE'")
    if bounds is None:
        bounds = annulus_bounds(n)
    thetas = 2 * np.pi * np.arange(samples) / samples
    r = _zeros_vectorised(n, thetas, bounds)
    if curve == "BoundaryE":
        r = 1.0 / r
    return r * np.exp(1j * thetas)


def _to_pixels(config, z):
    """Fractional (row, col) coordinates of points ``z``."""
    scale = config.pixels / (2 * config.half_width)
    col = (z.real - config.center.real + config.half_width) * scale - 0.5
    row = (config.center.imag + config.half_width - z.imag) * scale - 0.5
    return row, col


def _stamp_polyline(mask, config, pts, closed=True):
    if closed:
        pts = np.append(pts, pts[:1])
    p = config.pixels
    row, col = _to_pixels(config, pts)
    for r0, c0, r1, c1 in zip(row[:-1], col[:-1], row[1:], col[1:]):
        steps = int(math.ceil(2 * max(abs(r1 - r0), abs(c1 - c0)))) + 1
        if steps > 4 * p:
            # segment crosses the frame far outside; sample at pixel density
            steps = 4 * p
        t = np.linspace(0, 1, steps + 1)
        rr = np.rint(r0 + t * (r1 - r0)).astype(np.int64)
        cc = np.rint(c0 + t * (c1 - c0)).astype(np.int64)
        ok = (rr >= 0) & (rr < p) & (cc >= 0) & (cc < p)
        mask[rr[ok], cc[ok]] = True


def _stamp_disc(mask, config, z, radius_px):
    p = config.pixels
    row, col = _to_pixels(config, np.atleast_1d(z))
    ii, jj = np.mgrid[0:p, 0:p]
    for r, c in zip(row, col):
        mask |= (ii - r) ** 2 + (jj - c) ** 2 <= radius_px ** 2


def overlay_mask(config, bounds=None, samples=None):
    """Pixels covered by the curves ``r_D``, ``r_E`` and the root markers."""
    n = config.n
    mask = np.zeros((config.pixels, config.pixels), dtype=bool)
    if n >= 5:
        if bounds is None:
            bounds = annulus_bounds(n)
        for curve in ("BoundaryD", "BoundaryE"):
            _stamp_polyline(mask, config, boundary_polyline(n, curve, samples, bounds))
    roots = np.exp(2j * np.pi * np.arange(n) / n)
    _stamp_disc(mask, config, roots, max(1.5, config.pixels / 200))
    return mask


def _hsv_to_rgb(h, s, v):
    i = np.floor(h * 6).astype(np.int64) % 6
    f = h * 6 - np.floor(h * 6)
    p, q, t = v * (1 - s), v * (1 - f * s), v * (1 - (1 - f) * s)
    choices = [
        np.stack([v, t, p], -1),
        np.stack([q, v, p], -1),
        np.stack([p, v, t], -1),
        np.stack([p, q, v], -1),
        np.stack([t, p, v], -1),
        np.stack([v, p, q], -1),
    ]
    out = np.zeros(h.shape + (3,))
    for k, c in enumerate(choices):
        out[i == k] = c[i == k]
    return out


def colorize(image, overlay=None, bands=8):
    """RGB ``uint8`` raster of an outcome grid.

    Root ``j`` gets hue ``j/n``, darkened in ``bands`` log-spaced steps of the
    iteration count; the two-cycle basin is white and undecided pixels are
    mid-gray.  ``overlay`` (a boolean mask) is painted black; when omitted
    and ``image.config.overlay`` is set it is computed.
    """
    n = image.config.n
    hue = np.where(image.root_index >= 0, image.root_index, 0) / n
    band = np.minimum(bands - 1, np.floor(np.log2(np.maximum(image.iterations, 1))))
    value = 1.0 - 0.5 * band / max(1, bands - 1)
    rgb = _hsv_to_rgb(hue, np.ones_like(hue), value)
    rgb[image.kind == TWO_CYCLE] = 1.0
    rgb[image.kind == UNDECIDED] = 0.5
    raster = np.rint(rgb * 255).astype(np.uint8)
    if overlay is None and image.config.overlay:
        overlay = overlay_mask(image.config)
    if overlay is not None:
        raster[overlay] = 0
    return raster


def write_ppm(raster, path):
    """Write an ``(h, w, 3)`` uint8 raster as binary PPM (P6)."""
    raster = np.ascontiguousarray(raster, dtype=np.uint8)
    if raster.ndim != 3 or raster.shape[2] != 3:
        raise ValueError("raster must have shape (height, width, 3)")
    h, w, _ = raster.shape
    path = Path(path)
    try:
        with open(path, "wb") as fh:
            fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
            fh.write(raster.tobytes())
    except OSError as exc:
        raise OSError(f"cannot write PPM to {path}: {exc}") from exc


def read_ppm(path):
    data = Path(path).read_bytes()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P6":
        raise ValueError("not a binary PPM")
    w, h = map(int, parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w, 3)


def write_outcome_csv(image, path):
    """CSV with columns ``i,j,kind,root_index,iterations``."""
    names = {ROOT: "root", TWO_CYCLE: "two_cycle", UNDECIDED: "undecided"}
    p = image.config.pixels
    path = Path(path)
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write("i,j,kind,root_index,iterations\n")
            for i in range(p):
                fh.writelines(
                    f"{i},{j},{names[int(image.kind[i, j])]},{int(image.root_index[i, j])},{int(image.iterations[i, j])}\n"
                    for j in range(p)
                )
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc
