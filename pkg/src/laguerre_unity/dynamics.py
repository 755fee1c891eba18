"""Orbits of the Laguerre map for ``z**n - 1`` and their classification.

An orbit is declared captured by the ``{0, inf}`` two-cycle only once it
enters ``|z| < s0`` or ``|z| > 1/s0``, where capture is proven.  Convergence
to a root is accepted when an iterate lies within ``root_tol`` of a root and
one further step does not move it away.  Anything else is undecided.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import INFINITY, check_degree, laguerre_simplified

__all__ = [
    "Root",
    "TwoCycle",
    "Undecided",
    "OrbitOutcome",
    "OrbitTrace",
    "InsufficientResolution",
    "DEFAULT_MAX_ITER",
    "DEFAULT_ROOT_TOL",
    "root_of_unity",
    "nearest_root",
    "iterate_orbit",
    "unit_circle_step_angle",
    "offset_step",
    "on_ray_two_cycle",
    "convergence_order_estimate",
]

DEFAULT_MAX_ITER = 100
DEFAULT_ROOT_TOL = 1e-9
RAY_CYCLE_TOL = 1e-14
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Root:
    index: int
    iterations: int


@dataclass(frozen=True)
class TwoCycle:
    iterations: int


@dataclass(frozen=True)
class Undecided:
    iterations: int


@dataclass(frozen=True)
class OrbitOutcome:
    kind: object  # Root | TwoCycle | Undecided
    final_point: object  # complex | Infinity


@dataclass(frozen=True)
class OrbitTrace:
    points: tuple
    outcome: OrbitOutcome


class InsufficientResolution(ArithmeticError):
    pass


def root_of_unity(n, j):
    t = 2.0 * math.pi * (j % n) / n
    return complex(math.cos(t), math.sin(t))


def nearest_root(n, z):
    """Index ``j`` of the root ``e^{2 pi i j/n}`` closest in argument to ``z``.

    Midway between two roots the clockwise neighbour (smaller argument)
    wins; arguments within a few ulps of the midway ray count as midway.
    """
    n = check_degree(n)
    z = complex(z)
    if z == 0:
        raise ValueError("nearest_root is undefined at 0")
    t = math.atan2(z.imag, z.real) * n / (2.0 * math.pi)
    # arguments within rounding of a midway ray count as on it
    slack = 8 * _EPS * max(1.0, abs(t))
    return math.ceil(t - 0.5 - slack) % n


def _root_distance(n, z):
    j = nearest_root(n, z)
    return j, abs(z - root_of_unity(n, j))


def on_ray_two_cycle(n, z, r0, tol=RAY_CYCLE_TOL):
    """True if ``z`` sits on the repelling two-cycle ``{r0 w, w/r0}``, ``w**n = 1``."""
    if z is INFINITY or z == 0:
        return False
    w = root_of_unity(n, nearest_root(n, z))
    return abs(z - r0 * w) <= tol or abs(z - w / r0) <= tol / r0


def iterate_orbit(n, z0, bounds=None, max_iter=DEFAULT_MAX_ITER,
                  root_tol=DEFAULT_ROOT_TOL, keep_trace=False):
    """Iterate from ``z0`` until the orbit is classified or ``max_iter`` is hit.

    ``bounds`` (an :class:`AnnulusBounds`) enables two-cycle capture via the
    ``s0`` circles; without it (e.g. ``n < 5``) only exact ``0``/infinity
    counts as captured.  An orbit found on the repelling two-cycle
    ``{r0 w, w/r0}`` stops at once as undecided.  The iteration count in the
    outcome is the number of steps taken when the test first succeeded.
    """
    n = check_degree(n)
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    if bounds is not None and bounds.n != n:
        raise ValueError(f"bounds were computed for n={bounds.n}, not n={n}")
    lo, hi = (bounds.s0, 1.0 / bounds.s0) if bounds is not None else (0.0, math.inf)

    r0 = bounds.r0 if bounds is not None else None
    z = z0 if z0 is INFINITY else complex(z0)
    points = [z]
    kind = None
    if r0 is not None and on_ray_two_cycle(n, z, r0):
        kind = Undecided(0)
    for k in range(1, max_iter + 1):
        if kind is not None:
            break
        z = laguerre_simplified(n, z)
        if keep_trace:
            points.append(z)
        if r0 is not None and on_ray_two_cycle(n, z, r0):
            kind = Undecided(k)
            break
        if z is INFINITY or z == 0:
            kind = TwoCycle(k)
            break
        a = abs(z)
        if a < lo or a > hi:
            kind = TwoCycle(k)
            break
        j, err = _root_distance(n, z)
        if err < root_tol:
            # confirmation step: the error must not grow
            nxt = laguerre_simplified(n, z)
            if nxt is not INFINITY and abs(nxt - root_of_unity(n, j)) <= max(err, 8 * _EPS):
                kind = Root(j, k)
                break
    if kind is None:
        kind = Undecided(max_iter)
    if not keep_trace:
        points = [points[0], z] if z is not points[0] else [points[0]]
    return OrbitTrace(points=tuple(points), outcome=OrbitOutcome(kind=kind, final_point=z))


def unit_circle_step_angle(n, theta):
    """Argument of ``L(e^{i theta})`` for ``0 < theta <= pi/n``."""
    n = check_degree(n)
    half = 0.5 * n * theta
    return theta - 2.0 * math.atan(math.sin(half) / (math.cos(half) + (n - 1)))


def _offset_numerator(n, delta, max_terms=400):
    """``1 + d + (n-1) d (1+d)**(n/2) - (1+d)**n`` summed as a power series.

    The coefficients of ``d**0 .. d**2`` vanish identically, so the series
    starts at ``d**3`` and is free of cancellation.
    """
    m = n - 1
    half = 0.5 * n
    c_half = half  # C(n/2, i-1), starting at i = 2
    c_full = n * (n - 1) / 2.0  # C(n, i), starting at i = 2
    power = delta * delta
    total = 0j
    small = 0
    for i in range(3, max_terms):
        c_half *= (half - (i - 2)) / (i - 1)
        c_full *= (n - i + 1) / i
        power *= delta
        term = (m * c_half - c_full) * power
        total += term
        if abs(term) <= 1e-18 * abs(total):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
    return total


def offset_step(n, delta):
    """Offset of ``L(w (1 + delta))`` from the root ``w``, relative to ``w``.

    ``L(w(1+d)) = w (1 + N(d) / (s (s + n - 1)))`` with ``s = (1+d)**(n/2)``
    and ``N`` from :func:`_offset_numerator`, so the result keeps full
    relative precision however small ``d`` is.  Requires ``|d| < 1/2`` and
    ``n |arg(1+d)| < pi`` (the principal branch near the root).
    """
    n = check_degree(n)
    delta = complex(delta)
    if abs(delta) >= 0.5 or n * abs(cmath.phase(1 + delta)) >= math.pi:
        raise ValueError("offset too large for the series about the root")
    s = cmath.exp(0.5 * n * cmath.log(1 + delta))
    return _offset_numerator(n, delta) / (s * (s + (n - 1)))


def convergence_order_estimate(n, z0, steps=4, floor=1e-290):
    """Empirical local order of convergence from ``z0`` to its nearest root.

    The orbit is followed in root-relative offsets (:func:`offset_step`),
    so errors far below double-precision spacing near the root are still
    accurate.  With ``e_k`` the distances after ``k`` steps, the order is
    ``log(e_{k+1}/e_{k+2}) / log(e_k/e_{k+1})`` for the last consecutive
    triple above ``floor``.
    """
    n = check_degree(n)
    z0 = complex(z0)
    j = nearest_root(n, z0)
    w = root_of_unity(n, j)
    if abs(z0 - w) > 0.05 or z0 == w:
        raise ValueError("z0 must be within 0.05 of a root and not equal to it")
    delta = z0 / w - 1
    errs = [abs(delta)]
    for _ in range(steps):
        if errs[-1] <= floor:
            break
        delta = offset_step(n, delta)
        errs.append(abs(delta))
    good = [e > floor for e in errs]
    last = None
    for i in range(len(errs) - 2):
        if all(good[i:i + 3]) and errs[i] > errs[i + 1] > errs[i + 2]:
            last = i
    if last is None:
        raise InsufficientResolution(f"fewer than three resolved errors: {errs}")
    e0, e1, e2 = errs[last:last + 3]
    return math.log(e1 / e2) / math.log(e0 / e1)
