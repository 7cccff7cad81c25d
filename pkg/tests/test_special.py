import cmath
import math

import mpmath
import numpy as np
import pytest
from scipy.special import iv

from torsionqm import special
from torsionqm.errors import DomainError, NonConvergenceError
from torsionqm.oracle import angular_quadrature_check, bessel_quadrature, radial_quadrature_check

ALPHAS = [1.0, 0.5, 1 + 0.3j]
BETA_SQ = [0.25, 1.0, 2 + 1j]


def test_as_complex_rejects_non_finite():
    with pytest.raises(ValueError):
        special.as_complex(complex(math.nan, 0))
    assert special.as_complex(2) == 2 + 0j


@pytest.mark.parametrize(
    "nu, z, expected",
    [(0, 0, 1.0), (2, 0, 0.0), (2, 1.0, 0.1357476697670383), (1, 1.0, 0.5651591039924851)],
)
def test_bessel_values(nu, z, expected):
    np.testing.assert_allclose(special.bessel_i(nu, z), expected, rtol=1e-15, atol=1e-300)


@pytest.mark.parametrize("nu", [0, 1, 2, 3])
@pytest.mark.parametrize("z", [0.1, 0.5 + 0.5j, -1.3 + 0.2j, 3j, -4.5 - 2j, 7 + 1j, 10.0, 30 - 20j])
def test_bessel_against_scipy(nu, z):
    np.testing.assert_allclose(special.bessel_i(nu, z), iv(nu, z), rtol=1e-12)


@pytest.mark.parametrize("z", [0.5, 2 + 1j, -3 + 0.5j, 8j])
def test_bessel_against_integral(z):
    for nu in range(4):
        np.testing.assert_allclose(special.bessel_i(nu, z), bessel_quadrature(nu, z), rtol=1e-12)


def test_bessel_recurrence(rng):
    mods = rng.uniform(0.1, 10, 25)
    args = rng.uniform(-math.pi, math.pi, 25)
    for r, a in zip(mods, args):
        z = cmath.rect(r, a)
        for nu in (1, 2, 3):
            lhs = special.bessel_i(nu - 1, z) - special.bessel_i(nu + 1, z)
            rhs = 2 * nu / z * special.bessel_i(nu, z)
            assert abs(lhs - rhs) <= 1e-12 * max(abs(lhs), abs(rhs))


def test_bessel_domain():
    with pytest.raises(DomainError):
        special.bessel_i(2, 51)
    with pytest.raises(DomainError):
        special.bessel_i(-1, 1)
    with pytest.raises(DomainError):
        special.bessel_i(1.5, 1)


@pytest.mark.parametrize("a, b", [(0, 1), (0.3, -0.8), (1 + 1j, 2 - 0.5j), (4, 3), (1e-5, 2e-5), (0, 0)])
def test_angular_integral(a, b):
    # the quadrature sums O(1) terms to a small result, so allow an absolute floor
    np.testing.assert_allclose(special.angular_integral(a, b), angular_quadrature_check(a, b), rtol=1e-12, atol=1e-15)


def test_angular_value():
    np.testing.assert_allclose(special.angular_integral(0, 1), 2 * math.pi * 0.1357476697670383, rtol=1e-15)


def test_radial_known_values():
    np.testing.assert_allclose(special.radial_integral_i2(1, 1), 0.5, rtol=1e-15)
    np.testing.assert_allclose(special.radial_integral_i3(1, 1), (math.e - 2) / 2, rtol=1e-15)
    # [1 + (s-1) e^s]/(2 alpha^2 beta^2) at alpha=1, beta^2=2, confirmed by quadrature
    np.testing.assert_allclose(special.radial_integral_i2(1, 2), (1 + math.e**2) / 4, rtol=1e-15)
    np.testing.assert_allclose(radial_quadrature_check(1, 2, 2), (1 + math.e**2) / 4, rtol=1e-12)


@pytest.mark.parametrize("alpha", ALPHAS)
@pytest.mark.parametrize("beta_sq", BETA_SQ)
def test_radial_against_quadrature(alpha, beta_sq):
    np.testing.assert_allclose(special.radial_integral_i2(alpha, beta_sq), radial_quadrature_check(alpha, beta_sq, 2), rtol=1e-10)
    np.testing.assert_allclose(special.radial_integral_i3(alpha, beta_sq), radial_quadrature_check(alpha, beta_sq, 3), rtol=1e-10)


def _mp_i2(alpha, beta_sq):
    with mpmath.workdps(50):
        a, b = mpmath.mpc(alpha), mpmath.mpc(beta_sq)
        s = a * b
        return complex((1 + (s - 1) * mpmath.exp(s)) / (2 * a * a * b))


def _mp_i3(alpha, beta_sq):
    with mpmath.workdps(50):
        a, b = mpmath.mpc(alpha), mpmath.mpc(beta_sq)
        s = a * b
        return complex((-2 + (2 - 2 * s + s * s) * mpmath.exp(s)) / (2 * a**3 * b * mpmath.sqrt(b)))


@pytest.mark.parametrize("alpha, beta_sq", [(1.0, 1e-5), (1.0, 0.1 + 0.2j), (0.5, 0.98j), (1 + 0.3j, 0.4), (2.0, 0.26)])
def test_small_s_series(alpha, beta_sq):
    np.testing.assert_allclose(special.radial_integral_i2(alpha, beta_sq), _mp_i2(alpha, beta_sq), rtol=1e-14)
    np.testing.assert_allclose(special.radial_integral_i3(alpha, beta_sq), _mp_i3(alpha, beta_sq), rtol=1e-14)


def test_series_and_closed_form_meet_at_threshold():
    s = special.SMALL_S
    lo, hi = s * (1 - 1e-9), s * (1 + 1e-9)
    np.testing.assert_allclose(special.radial_integral_i2(1.0, lo), special.radial_integral_i2(1.0, hi), rtol=1e-8)
    np.testing.assert_allclose(special.radial_integral_i3(1.0, lo), special.radial_integral_i3(1.0, hi), rtol=1e-8)


def test_radial_rejects_divergent_alpha():
    with pytest.raises(NonConvergenceError):
        special.radial_integral_i2(-1.0, 1.0)
    with pytest.raises(NonConvergenceError):
        special.radial_integral_i3(0.3j, 1.0)


def test_expm1():
    for z in (1e-10, 1e-3 + 2e-3j, 0.7, -2 + 1j):
        np.testing.assert_allclose(special.expm1(z), complex(mpmath.expm1(z)), rtol=1e-14)


@pytest.mark.parametrize("z", [10j, 7j, -9.77j, 10 * cmath.exp(1.4j), 30 - 20j, -45 + 3j])
def test_bessel_off_real_axis(z):
    # the double series cancels here; the exact re-summation keeps full precision
    for nu in range(4):
        ref = complex(mpmath.besseli(nu, mpmath.mpc(z)))
        np.testing.assert_allclose(special.bessel_i(nu, z), ref, rtol=5e-14)


def test_exact_resummation_matches_fast_path():
    for z in (0.3, 2 + 1j, 4.0):
        for nu in range(4):
            np.testing.assert_allclose(special._series_exact(nu, complex(z)), special.bessel_i(nu, z), rtol=1e-15)


def test_recurrence_dense_grid():
    rng = np.random.default_rng(7)
    for r, ph in zip(rng.uniform(0.1, 10, 200), rng.uniform(-math.pi, math.pi, 200)):
        z = cmath.rect(r, ph)
        for nu in (1, 2, 3):
            lhs = special.bessel_i(nu - 1, z) - special.bessel_i(nu + 1, z)
            rhs = 2 * nu / z * special.bessel_i(nu, z)
            assert abs(lhs - rhs) <= 1e-12 * max(abs(lhs), abs(rhs))
