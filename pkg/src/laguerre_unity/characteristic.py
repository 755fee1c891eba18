"""Characteristic function of the boundary curves and the region classifier.

The curves where ``|L(z)| = 1/|z|`` are the zero set of

    f_n(r, t) = r**(2n-4) + 2(n-1)|cos(n t/2)| r**(n/2) (r**(n-4) - 1)
                - (n-1)**2 r**n + (n-1)**2 r**(n-4) - 1,

which for every angle has exactly three positive zeros ``r_D < 1 < r_E``
with ``r_D * r_E = 1``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .core import INFINITY, _reduce_half_angle, check_degree

__all__ = [
    "BracketFailure",
    "RadialProfile",
    "AnnulusBounds",
    "RegionLabel",
    "char_fn",
    "outer_radius_bound",
    "radial_zeros",
    "annulus_bounds",
    "classify",
]

BISECT_XTOL = 1e-14
_R_MIN = 1e-9


class BracketFailure(RuntimeError):
    """The sign pattern needed to bracket a boundary radius was not found."""


@dataclass(frozen=True)
class RadialProfile:
    n: int
    theta: float
    r_D: float
    r_E: float


@dataclass(frozen=True)
class AnnulusBounds:
    """Radii ``s0 < r0 < 1`` of the inner gray annulus ``s0 < |z| < r0``.

    The outer annulus is ``1/r0 < |z| < 1/s0``.
    """

    n: int
    s0: float
    r0: float

    @property
    def inner(self):
        return (self.s0, self.r0)

    @property
    def outer(self):
        return (1.0 / self.r0, 1.0 / self.s0)


class RegionLabel(enum.Enum):
    D = "D"
    BoundaryD = "BoundaryD"
    K0 = "K0"
    UnitCircle = "UnitCircle"
    K1 = "K1"
    BoundaryE = "BoundaryE"
    E = "E"
    OriginOrInfinity = "OriginOrInfinity"


def outer_radius_bound(n):
    """Upper bound ``(n-1)**(2/(n-4))`` on ``r_E`` (and on ``1/s0``)."""
    n = check_degree(n, 5)
    return (n - 1.0) ** (2.0 / (n - 4.0))


def char_fn(n, r, theta):
    """Evaluate the characteristic function; vectorises over ``r``/``theta``.

    Overflow at large ``r`` saturates to ``+inf`` (the leading term wins).
    """
    n = check_degree(n, 5)
    m = n - 1.0
    r = np.asarray(r, dtype=float)
    c = np.abs(np.cos(_reduce_half_angle(n, theta)))
    with np.errstate(over="ignore", invalid="ignore"):
        rn4 = r ** (n - 4)
        val = (
            r ** (2 * n - 4)
            + 2.0 * m * c * r ** (n / 2.0) * (rn4 - 1.0)
            - m * m * r ** n
            + m * m * rn4
            - 1.0
        )
    val = np.where(np.isnan(val) & (r > 1), np.inf, val)
    return float(val) if val.ndim == 0 else val


def _sign_step_in(f, start, limit, steps=1024):
    """March from ``start`` towards ``limit`` until ``f`` changes sign.

    Returns the bracket ``(a, b)`` ordered as visited.
    """
    pts = np.linspace(start, limit, steps + 1)
    sg = np.sign(f(pts))
    hit = np.flatnonzero((sg[:-1] * sg[1:]) < 0)
    if hit.size:
        i = hit[0]
        return float(pts[i]), float(pts[i + 1])
    raise BracketFailure(f"no sign change between {start} and {limit}")


def _negative_offset(f, direction):
    # f'(1) < 0, so f < 0 just right of 1 and f > 0 just left of it
    want = -1.0 if direction > 0 else 1.0
    d = 1e-3
    while d > 1e-15:
        if np.sign(f(1.0 + direction * d)) == want:
            return 1.0 + direction * d
        d /= 2
    raise BracketFailure("characteristic function has no sign change at r = 1")


def radial_zeros(n, theta):
    """Locate ``r_D < 1 < r_E`` at angle ``theta`` by bisection."""
    n = check_degree(n, 5)
    theta = float(theta)

    def f(r):
        return char_fn(n, r, theta)

    if not f(_R_MIN) < 0:
        raise BracketFailure("f is not negative near r = 0")
    upper = outer_radius_bound(n)
    if not f(upper) > 0:
        raise BracketFailure("f is not positive at the outer bound")

    # r_D: f < 0 near 0, f > 0 just left of 1
    left = _negative_offset(f, -1)
    b, a = _sign_step_in(f, left, _R_MIN)
    r_d = bisect(f, a, b, xtol=BISECT_XTOL)

    right = _negative_offset(f, +1)
    a, b = _sign_step_in(f, right, upper)
    r_e = bisect(f, a, b, xtol=BISECT_XTOL)

    if abs(r_d * r_e - 1.0) >= 1e-10:
        raise BracketFailure(f"zeros are not reciprocal: r_D={r_d!r}, r_E={r_e!r}")
    return RadialProfile(n=n, theta=theta, r_D=r_d, r_E=1.0 / r_d)


def annulus_bounds(n):
    n = check_degree(n, 5)
    s0 = radial_zeros(n, math.pi / n).r_D
    r0 = radial_zeros(n, 0.0).r_D
    if not s0 < r0:
        raise BracketFailure(f"expected s0 < r0, got s0={s0!r}, r0={r0!r}")
    return AnnulusBounds(n=n, s0=s0, r0=r0)


def classify(n, z, bounds=None, unit_tol=1e-14):
    """Region of ``z`` according to the sign of the characteristic function.

    ``bounds`` is accepted for interface symmetry with the orbit engine and
    is not needed for the classification itself.
    """
    n = check_degree(n, 5)
    if z is INFINITY or z == 0:
        return RegionLabel.OriginOrInfinity
    z = complex(z)
    r = abs(z)
    if abs(r - 1.0) <= unit_tol:
        return RegionLabel.UnitCircle
    s = char_fn(n, r, math.atan2(z.imag, z.real))
    with np.errstate(over="ignore"):
        scale = max(1.0, (n - 1.0) ** 2 * float(np.power(r, n)))
    tol = 1e-12 * scale
    inside = r < 1
    if s < -tol:
        return RegionLabel.D if inside else RegionLabel.K1
    if s > tol:
        return RegionLabel.K0 if inside else RegionLabel.E
    return RegionLabel.BoundaryD if inside else RegionLabel.BoundaryE
