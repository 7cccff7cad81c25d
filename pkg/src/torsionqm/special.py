"""Modified Bessel functions of complex argument and the k-space integrals
that reduce the torsion correction of a Gaussian packet to closed form.

Complex scalars are plain Python ``complex`` values; :func:`as_complex`
rejects non-finite input.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

from .errors import DomainError, NonConvergenceError

BESSEL_MAX_ABS_Z = 50.0
BESSEL_MAX_TERMS = 500
BESSEL_RTOL = 1e-16
#: Largest term over the sum above which the series is re-summed exactly.
#: Off the real axis the terms alternate and a double sum loses about
#: log10 of this ratio in digits.
BESSEL_CANCELLATION = 100.0

#: Below this ``|alpha beta^2|`` the closed forms are replaced by their Taylor
#: series (the closed forms subtract nearly equal terms there).
SMALL_S = 0.5
_SERIES_TERMS = 40


def as_complex(z) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite complex value {z!r}")
    return z


def _series_exact(nu, z):
    """The same series in exact rational arithmetic, rounded once at the end."""
    x, y = Fraction(z.real) / 2, Fraction(z.imag) / 2
    qr, qi = x * x - y * y, 2 * x * y
    tr, ti = Fraction(1), Fraction(0)
    for _ in range(nu):
        tr, ti = tr * x - ti * y, tr * y + ti * x
    f = math.factorial(nu)
    tr, ti = tr / f, ti / f
    sr, si = tr, ti
    for n in range(1, BESSEL_MAX_TERMS):
        d = n * (n + nu)
        tr, ti = (tr * qr - ti * qi) / d, (tr * qi + ti * qr) / d
        sr += tr
        si += ti
        if abs(complex(float(tr), float(ti))) < BESSEL_RTOL * abs(complex(float(sr), float(si))):
            return complex(float(sr), float(si))
    raise NonConvergenceError(f"I_{nu}({z}) did not converge in {BESSEL_MAX_TERMS} terms")


def bessel_i(nu: int, z) -> complex:
    """``I_nu(z)`` for integer ``nu >= 0`` from its power series.

    Terms are summed until one falls below ``1e-16`` of the running sum.  When
    the terms cancel strongly (largest term above ``BESSEL_CANCELLATION`` times
    the sum) the series is summed again exactly.
    """
    if int(nu) != nu or nu < 0:
        raise DomainError(f"order must be a nonnegative integer, got {nu!r}")
    nu = int(nu)
    z = as_complex(z)
    if abs(z) > BESSEL_MAX_ABS_Z:
        raise DomainError(f"|z|={abs(z):.3g} exceeds the series domain {BESSEL_MAX_ABS_Z}")
    if z == 0:
        return complex(1.0 if nu == 0 else 0.0)
    half = z / 2
    q = half * half
    term = half**nu / math.factorial(nu)
    total = term
    big = abs(term)
    for n in range(1, BESSEL_MAX_TERMS):
        term *= q / (n * (n + nu))
        total += term
        big = max(big, abs(term))
        if abs(term) < BESSEL_RTOL * abs(total):
            if big > BESSEL_CANCELLATION * abs(total):
                return _series_exact(nu, z)
            return total
    raise NonConvergenceError(f"I_{nu}({z}) did not converge in {BESSEL_MAX_TERMS} terms")


def angular_integral(a, b) -> complex:
    """``int_0^{2pi} cos^2 t sin t exp(a cos t + b sin t) dt`` via Bessel functions."""
    a, b = as_complex(a), as_complex(b)
    s2 = a * a + b * b
    if s2 == 0:
        # I2(s)/s^2 -> 1/8 and I3(s)/s^3 -> 1/48 as s -> 0
        return 2 * math.pi * (b / 8 + a * a * b / 48)
    s = cmath.sqrt(s2)
    if abs(s) < 1e-4:
        i2_s2 = 1 / 8 + s2 / 96
        i3_s3 = 1 / 48 + s2 / 768
    else:
        i2_s2 = bessel_i(2, s) / s2
        i3_s3 = bessel_i(3, s) / (s2 * s)
    return 2 * math.pi * (b * i2_s2 + a * a * b * i3_s3)


def _check_alpha(alpha):
    alpha = as_complex(alpha)
    if alpha.real <= 0:
        raise NonConvergenceError(f"integral diverges for Re(alpha)={alpha.real} <= 0")
    return alpha


def _series(coef, s):
    """sum_n coef(n) s^n / n! for n >= 0, used for small |s|."""
    total = 0j
    term = 1 + 0j
    for n in range(_SERIES_TERMS):
        if n:
            term *= s / n
        total += coef(n) * term
    return total


def expm1(z: complex) -> complex:
    """``exp(z) - 1`` without cancellation for small complex ``z``."""
    return 2 * cmath.exp(z / 2) * cmath.sinh(z / 2)


def radial_integral_i2(alpha, beta_sq) -> complex:
    """``int_0^inf r exp(-alpha r^2) I_2(2 alpha r sqrt(beta^2)) dr``.

    Closed form ``[1 + (s - 1) e^s] / (2 alpha^2 beta^2)`` with ``s = alpha beta^2``.
    """
    alpha = _check_alpha(alpha)
    beta_sq = as_complex(beta_sq)
    s = alpha * beta_sq
    if abs(s) < SMALL_S:
        # 1 + (s-1)e^s = sum_{m>=2} (m-1) s^m/m!  ->  divide by alpha^2 beta^2 = s^2/beta^2
        g = _series(lambda n: 1 / (n + 2), s)
        return beta_sq * g / 2
    if beta_sq == 0:
        return 0j
    return (1 + (s - 1) * cmath.exp(s)) / (2 * alpha * alpha * beta_sq)


def radial_integral_i3(alpha, beta_sq) -> complex:
    """``int_0^inf r^2 exp(-alpha r^2) I_3(2 alpha r sqrt(beta^2)) dr``.

    Closed form ``[-2 + (2 - 2s + s^2) e^s] / (2 alpha^3 (beta^2)^{3/2})``,
    principal branch for the power.
    """
    alpha = _check_alpha(alpha)
    beta_sq = as_complex(beta_sq)
    s = alpha * beta_sq
    if beta_sq == 0:
        return 0j
    beta3 = beta_sq * cmath.sqrt(beta_sq)
    if abs(s) < SMALL_S:
        # -2 + (2-2s+s^2)e^s = sum_{m>=3} (m-1)(m-2) s^m/m! = s^3 * sum_n s^n (n+1)(n+2)/(n+3)!
        g = _series(lambda n: 1 / (n + 3), s)  # (n+1)(n+2)/(n+3)! = (1/n!) * 1/(n+3)
        return s**3 * g / (2 * alpha**3 * beta3)
    return (-2 + (2 - 2 * s + s * s) * cmath.exp(s)) / (2 * alpha**3 * beta3)
