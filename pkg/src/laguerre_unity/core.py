"""Laguerre's iteration on the extended complex plane.

Two formulations are provided.  :func:`laguerre_simplified` is the closed
form of the method for ``z**n - 1`` (principal square root of ``z**n``),
evaluated in log-polar form so that it never overflows before the ratio is
taken.  :func:`laguerre_general` is the textbook update for an arbitrary
polynomial, evaluated naively in double precision; its loss of significance
at large ``|z|`` is intentional.

The point at infinity is the singleton :data:`INFINITY`.  Finite points are
plain Python ``complex`` values.
"""

from __future__ import annotations

import cmath
import math
import sys
from typing import Sequence, Union

import numpy as np

__all__ = [
    "INFINITY",
    "Infinity",
    "ExtendedPoint",
    "DegenerateDenominator",
    "check_degree",
    "principal_sqrt",
    "principal_sqrt_array",
    "laguerre_simplified",
    "laguerre_simplified_array",
    "laguerre_general",
    "laguerre_general_array",
    "modulus_squared_formula",
    "discriminant_relative_error_estimate",
    "unity_coeffs",
    "poly_derivatives",
]

MAX_FINITE = sys.float_info.max
_LOG_MAX = math.log(MAX_FINITE)


class Infinity:
    """The point at infinity of the Riemann sphere (singleton)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (Infinity, ())


INFINITY = Infinity()

ExtendedPoint = Union[complex, Infinity]


class DegenerateDenominator(ArithmeticError):
    """Both sign choices of the Laguerre denominator vanish."""


def check_degree(n, minimum=2):
    if int(n) != n or n < minimum:
        raise ValueError(f"degree must be an integer >= {minimum}, got {n!r}")
    return int(n)


def principal_sqrt(z):
    """Principal square root, argument of ``z`` taken in ``(-pi, pi]``.

    Unlike :func:`cmath.sqrt`, a negative zero imaginary part is treated as
    ``+0`` so that ``principal_sqrt(-1-0j) == 1j``.
    """
    z = complex(z)
    return cmath.sqrt(complex(z.real, z.imag + 0.0))


def principal_sqrt_array(z):
    z = np.asarray(z, dtype=complex)
    return np.sqrt(z.real + 1j * (z.imag + 0.0))


def _reduce_half_angle(n, theta):
    """Argument of the principal ``sqrt(z**n)`` for ``arg z = theta``.

    ``n*theta`` is wrapped to ``(-pi, pi]`` and halved.  Values within
    rounding of ``-pi`` are taken as ``+pi``: a point whose computed argument
    lands an ulp past a ray ``(2k+1) pi/n`` is treated as lying on it.
    """
    nt = n * np.asarray(theta, dtype=float)
    phi = np.remainder(nt + np.pi, 2 * np.pi) - np.pi
    snap = 8 * np.finfo(float).eps * np.maximum(np.pi, np.abs(nt))
    phi = np.where(phi <= -np.pi + snap, np.pi, phi)
    return 0.5 * phi


def _simplified_polar(n, log_r, theta):
    """Return (log|L|, arg-unit factor) for finite nonzero inputs.

    With ``h = (n/2) log r`` and ``psi`` the argument of ``sqrt(z**n)``,
    ``L = exp(log r - h) * e^{i theta} * Q`` where ``Q`` is a ratio whose
    terms stay bounded for every ``h``.
    """
    m = n - 1.0
    half = 0.5 * n * log_r
    psi = _reduce_half_angle(n, theta)
    e_pos = np.exp(1j * psi)
    e_neg = np.conj(e_pos)
    with np.errstate(over="ignore", under="ignore"):
        t = np.exp(-np.abs(half))
    q_big = (m + t * e_neg) / (e_pos + m * t)
    q_small = (e_neg + m * t) / (t * e_pos + m)
    q = np.where(half >= 0, q_big, q_small)
    return log_r - half, np.exp(1j * theta) * q


def laguerre_simplified(n, z):
    """One Laguerre step for ``z**n - 1`` on the extended plane.

    ``0`` maps to :data:`INFINITY` and :data:`INFINITY` maps to ``0``.  A
    finite result whose modulus exceeds the largest double is promoted to
    :data:`INFINITY`.
    """
    n = check_degree(n)
    if z is INFINITY:
        return 0j
    z = complex(z)
    if z == 0:
        return INFINITY
    log_mag, unit = _simplified_polar(n, math.log(abs(z)), math.atan2(z.imag, z.real))
    log_mag = float(log_mag) + math.log(abs(complex(unit)))
    if log_mag > _LOG_MAX:
        return INFINITY
    # exp of the log magnitude times the normalised direction
    direction = complex(unit) / abs(complex(unit))
    return math.exp(log_mag) * direction


def laguerre_simplified_array(n, z, at_inf=None):
    """Vectorised :func:`laguerre_simplified`.

    Infinity is carried in the boolean mask ``at_inf``; the returned pair is
    ``(values, at_inf)`` with values set to ``0`` wherever ``at_inf`` holds.
    """
    z = np.asarray(z, dtype=complex)
    if at_inf is None:
        at_inf = np.zeros(z.shape, dtype=bool)
    zero = (z == 0) & ~at_inf
    finite = ~(zero | at_inf)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_r = np.log(np.where(finite, np.abs(z), 1.0))
    log_mag, unit = _simplified_polar(n, log_r, np.angle(z))
    log_mag = log_mag + np.log(np.abs(unit))
    overflow = finite & (log_mag > _LOG_MAX)
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        out = np.exp(np.minimum(log_mag, _LOG_MAX)) * (unit / np.abs(unit))
    new_inf = zero | overflow
    out = np.where(finite & ~overflow, out, 0j)
    return out, new_inf


def unity_coeffs(n):
    """Coefficients of ``z**n - 1``, constant term first."""
    n = check_degree(n)
    c = [0j] * (n + 1)
    c[0] = -1 + 0j
    c[n] = 1 + 0j
    return c


def _check_coeffs(coeffs):
    c = [complex(a) for a in coeffs]
    if len(c) < 3:
        raise ValueError("polynomial must have degree >= 2")
    if c[-1] == 0:
        raise ValueError("leading coefficient must be nonzero")
    if not all(math.isfinite(a.real) and math.isfinite(a.imag) for a in c):
        raise ValueError("coefficients must be finite")
    return c


def poly_derivatives(coeffs: Sequence[complex], z):
    """Horner evaluation of ``p(z), p'(z), p''(z)``; works on arrays too."""
    p = coeffs[-1] * np.ones_like(z) if isinstance(z, np.ndarray) else complex(coeffs[-1])
    dp = 0 * p
    d2p = 0 * p
    for a in reversed(coeffs[:-1]):
        d2p = d2p * z + dp
        dp = dp * z + p
        p = p * z + a
    return p, dp, 2 * d2p


def _discriminant_root(n, p, dp, d2p, form, sqrt):
    """Return ``(a, s, scale)`` with the step ``scale / (a +- s)``."""
    if form == "p":
        return dp, sqrt((n - 1) ** 2 * dp * dp - n * (n - 1) * p * d2p), n * p
    g = dp / p
    h = g * g - d2p / p
    return g, sqrt((n - 1) * (n * h - g * g)), n


def _check_form(form):
    if form not in ("p", "gh"):
        raise ValueError(f"form must be 'p' or 'gh', got {form!r}")


def _general_step(c, z, form):
    """Shared array kernel; returns ``(values, vanishing_denominator)``."""
    n = len(c) - 1
    with np.errstate(all="ignore"):
        p, dp, d2p = poly_derivatives(c, z)
        a, s, top = _discriminant_root(n, p, dp, d2p, form, principal_sqrt_array)
        plus, minus = a + s, a - s
        denom = np.where(np.abs(plus) >= np.abs(minus), plus, minus)
        out = np.where(p == 0, z, z - top / denom)
    return out, (p != 0) & (denom == 0)


def laguerre_general(coeffs, z, form="p"):
    """One Laguerre step for the polynomial with the given coefficients.

    ``form="p"`` evaluates ``z - n p / (p' +- sqrt((n-1)**2 p'**2 - n(n-1) p p''))``;
    ``form="gh"`` the algebraically equal ``z - n / (G +- sqrt((n-1)(n H - G**2)))``
    with ``G = p'/p`` and ``H = G**2 - p''/p``.  The sign maximises the
    modulus of the denominator, ``+`` on an exact tie.  Arithmetic is plain
    double precision, so the two forms round differently at large ``|z|``.
    Returns ``z`` unchanged when ``p(z) == 0``.
    """
    c = _check_coeffs(coeffs)
    _check_form(form)
    z = complex(z)
    out, degenerate = _general_step(c, np.array([z]), form)
    if degenerate[0]:
        raise DegenerateDenominator(f"Laguerre denominator vanishes at z={z!r}")
    return complex(out[0])


def laguerre_general_array(coeffs, z, form="p"):
    """Vectorised :func:`laguerre_general`, bit-identical to the scalar path.

    Returns ``(values, bad)``; ``bad`` flags points where the step is
    undefined (vanishing denominator) or produced a non-finite value.
    """
    c = _check_coeffs(coeffs)
    _check_form(form)
    z = np.asarray(z, dtype=complex)
    out, bad = _general_step(c, z, form)
    bad = bad | ~np.isfinite(out)
    return np.where(bad, 0j, out), bad


def modulus_squared_formula(n, r, theta):
    """Closed form of ``|L(r e^{i theta})|**2`` for ``z**n - 1``."""
    n = check_degree(n)
    if np.any(np.asarray(r) <= 0):
        raise ValueError("r must be positive")
    m = n - 1.0
    c = np.abs(np.cos(_reduce_half_angle(n, theta)))
    rn = np.power(r, n, dtype=float)
    rh = np.power(r, n / 2.0, dtype=float)
    num = 1.0 + m * m * rn + 2.0 * m * c * rh
    den = rn + m * m + 2.0 * m * c * rh
    out = num / den / np.power(r, n - 2.0, dtype=float)
    return float(out) if np.ndim(out) == 0 else out


def discriminant_relative_error_estimate(n, z, machine_eps=np.finfo(float).eps):
    """Rough relative error of the square root in the general formulation.

    ``sqrt(eps * (1 + |z|**n))``, saturated at the largest finite double.
    """
    n = check_degree(n)
    a = abs(complex(z))
    if a == 0:
        return math.sqrt(machine_eps)
    log_zn = n * math.log(a)
    if log_zn > _LOG_MAX - 1:
        val = 0.5 * (math.log(machine_eps) + log_zn)
        return MAX_FINITE if val > _LOG_MAX else math.exp(val)
    return math.sqrt(machine_eps * (1.0 + a ** n))
