"""Free wave functions and their first-order torsion corrections.

Plane waves carry the jump coefficient ``B = -i k1^2 k2 / k^2``.  A Gaussian
packet is a superposition of plane waves, so its correction is the packet
average of that coefficient,

    B(x, t) = (alpha/pi) int d^2k (k1^2 k2 / k^2) exp(-alpha (k - beta)^2),

which reduces to elementary functions of ``alpha``, ``beta`` (see
:func:`alpha_beta`).  Point arguments ``x`` may be a single 2-vector or a
stack ``(..., 2)``; ``t`` broadcasts against the leading axes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ZeroWaveVectorError
from .special import SMALL_S

_TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class PacketParams:
    """Gaussian packet prepared at ``x0`` with width ``a`` and mean wave vector ``k0``."""

    a: float
    x0: tuple = (0.0, 0.0)
    k0: tuple = (0.0, 0.0)
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        x0 = tuple(float(v) for v in self.x0)
        k0 = tuple(float(v) for v in self.k0)
        if len(x0) != 2 or len(k0) != 2:
            raise ValueError("x0 and k0 must be 2-vectors")
        for name in ("a", "mass", "hbar"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and positive, got {v}")
            object.__setattr__(self, name, v)
        if not all(map(math.isfinite, x0 + k0)):
            raise ValueError("x0 and k0 must be finite")
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "k0", k0)

    @property
    def x0_arr(self) -> np.ndarray:
        return np.array(self.x0)

    @property
    def k0_arr(self) -> np.ndarray:
        return np.array(self.k0)

    def mirrored(self) -> "PacketParams":
        """Reflection x1 -> -x1 of the initial data."""
        return PacketParams(
            self.a, (-self.x0[0], self.x0[1]), (-self.k0[0], self.k0[1]), self.mass, self.hbar
        )


@dataclass(frozen=True)
class SpacetimePoint:
    x: tuple
    t: float

    def __post_init__(self):
        x = tuple(float(v) for v in self.x)
        if len(x) != 2 or not all(map(math.isfinite, x)) or not math.isfinite(self.t):
            raise ValueError(f"bad spacetime point {self.x!r}, {self.t!r}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "t", float(self.t))


@dataclass(frozen=True)
class AuxiliaryAlphaBeta:
    alpha: complex | np.ndarray
    beta: np.ndarray  # (..., 2) complex
    beta_sq: complex | np.ndarray


def _xt(x, t):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 2:
        raise ValueError(f"points must have a trailing axis of length 2, got {x.shape}")
    return x, np.asarray(t, dtype=float)


def _k(k):
    k = np.asarray(k, dtype=float)
    k2 = k[..., 0] ** 2 + k[..., 1] ** 2
    if np.any(k2 == 0):
        raise ZeroWaveVectorError("wave vector must be nonzero")
    return k, k2


# -- plane waves ------------------------------------------------------------


def psi0_plane(k, x, t, amplitude=1.0, mass=1.0, hbar=1.0):
    k = np.asarray(k, dtype=float)
    x, t = _xt(x, t)
    omega = hbar * (k @ k) / (2 * mass)
    return amplitude * np.exp(1j * (x @ k - omega * t))


def jump_coefficient_plane(k):
    """``-i k1^2 k2 / k^2`` for a nonzero wave vector."""
    k, k2 = _k(k)
    return -1j * k[..., 0] ** 2 * k[..., 1] / k2


def phase_shift(epsilon, k, q=1):
    """Fringe phase shift ``arctan(q eps k1^2 k2 / k^2)`` of ``q`` aligned defects."""
    if int(q) != q or q < 1:
        raise ValueError(f"q must be a positive integer, got {q!r}")
    k, k2 = _k(k)
    # group q*eps first so that (q, eps) pairs with equal product agree bitwise
    return np.arctan((q * epsilon) * (k[..., 0] ** 2 * k[..., 1] / k2))


def jump_magnitude(k, amplitude, epsilon, q=1):
    if int(q) != q or q < 1:
        raise ValueError(f"q must be a positive integer, got {q!r}")
    return q * epsilon * amplitude * jump_coefficient_plane(k)


# -- Gaussian packet ----------------------------------------------------------


def _log_psi0(x, t, params: PacketParams):
    x, t = _xt(x, t)
    a, m, hb = params.a, params.mass, params.hbar
    dx = x - params.x0_arr
    k0 = params.k0_arr
    tau = hb * t / m
    c = a * a + 2j * tau  # a^2 + 2 i hbar t / m
    shift = dx - tau[..., None] * k0 if np.ndim(tau) else dx - tau * k0
    r2 = shift[..., 0] ** 2 + shift[..., 1] ** 2
    # 1/c = e^{-i arctan(2 tau/a^2)} / sqrt(a^4 + 4 tau^2)
    log_pref = math.log(2 * a / math.sqrt(_TWO_PI)) - np.log(c)
    return log_pref + 1j * (dx @ k0 - tau * (k0 @ k0) / 2) - r2 / c


def psi0_packet(x, t, params: PacketParams):
    """Freely evolved Gaussian packet, normalized to one."""
    return np.exp(_log_psi0(x, t, params))


def grad_psi0_packet(x, t, params: PacketParams):
    """Analytic spatial gradient of :func:`psi0_packet`, shape ``(..., 2)``."""
    x, t = _xt(x, t)
    psi = psi0_packet(x, t, params)
    tau = params.hbar * t / params.mass
    c = params.a**2 + 2j * tau
    k0 = params.k0_arr
    shift = x - params.x0_arr - (tau[..., None] if np.ndim(tau) else tau) * k0
    c = c[..., None] if np.ndim(c) else c
    return psi[..., None] * (1j * k0 - 2 * shift / c)


def alpha_beta(x, t, params: PacketParams) -> AuxiliaryAlphaBeta:
    x, t = _xt(x, t)
    a = params.a
    alpha = (a * a + 2j * params.hbar * t / params.mass) / 4
    dx = x - params.x0_arr
    al = alpha[..., None] if np.ndim(alpha) else alpha
    beta = (a * a * params.k0_arr / 2 + 1j * dx) / (2 * al)
    beta_sq = beta[..., 0] ** 2 + beta[..., 1] ** 2
    return AuxiliaryAlphaBeta(alpha, beta, beta_sq)


_N_SERIES = 40
# E(s)/s^2 = (e^{-s} + s - 1)/s^2 = sum_n (-s)^n/(n+2)!
_E_COEF = np.array([(-1) ** n / math.factorial(n + 2) for n in range(_N_SERIES)])
# G(s) = (1 - 2 E(s)/s^2)/s = 2 sum_n (-s)^n/(n+3)!
_G_COEF = np.array([2 * (-1) ** n / math.factorial(n + 3) for n in range(_N_SERIES)])


def _horner(coef, s):
    out = np.zeros_like(s)
    for c in coef[::-1]:
        out = out * s + c
    return out


def _b_parts(ab: AuxiliaryAlphaBeta):
    """Split ``B = B_reg + e^{-s} C`` so callers can fold ``e^{-s}`` into another exponent.

    For small ``|s|`` everything is returned in ``B_reg`` (``C = 0``).
    """
    s = ab.alpha * ab.beta_sq
    alpha, b1, b2, s = (
        np.asarray(v, dtype=complex)
        for v in np.broadcast_arrays(ab.alpha, ab.beta[..., 0], ab.beta[..., 1], s)
    )
    reg = np.empty(s.shape, complex)
    c = np.zeros(s.shape, complex)
    # B = b2 [E/(2 s^2) + alpha b1^2 G]
    sm = np.abs(s) < SMALL_S
    ss = s[sm]
    reg[sm] = b2[sm] * (_horner(_E_COEF, ss) / 2 + alpha[sm] * b1[sm] ** 2 * _horner(_G_COEF, ss))
    bg = ~sm
    sb, al, p1, p2 = s[bg], alpha[bg], b1[bg], b2[bg]
    # E/s^2 = (s - 1)/s^2 + e^{-s}/s^2 ;  G = 1/s - 2(s - 1)/s^3 - 2 e^{-s}/s^3
    reg[bg] = p2 * ((sb - 1) / (2 * sb**2) + al * p1**2 * (1 / sb - 2 * (sb - 1) / sb**3))
    c[bg] = p2 * (1 / (2 * sb**2) - 2 * al * p1**2 / sb**3)
    return reg, c, s


def b_l_packet(x, t, params: PacketParams):
    """Torsion correction coefficient of the corrected packet branch.

    Closed form ``beta2/(alpha^2 beta^6) [(beta^2 - 4 beta1^2)(e^{-s} + s - 1)/2
    + alpha^2 beta^4 beta1^2]`` with ``s = alpha beta^2``.  Regular at ``beta^2 = 0``
    (limit ``beta2 (1/4 + alpha beta1^2/3)``); power series for ``|s| < SMALL_S``.
    """
    reg, c, s = _b_parts(alpha_beta(x, t, params))
    out = reg + c * np.exp(-s)
    return out[()] if out.ndim == 0 else out


def psi1_packet(x, t, params: PacketParams):
    """``-i B psi0`` with the ``e^{-s}`` factor combined with the packet exponent."""
    ab = alpha_beta(x, t, params)
    reg, c, s = _b_parts(ab)
    lp = _log_psi0(x, t, params)
    out = -1j * (reg * np.exp(lp) + c * np.exp(lp - s))
    return out[()] if out.ndim == 0 else out


def psi_perturbed(x, t, params: PacketParams, epsilon, branch_crossed=True, plate_x1=0.0):
    """Piecewise first-order packet: ``psi0`` for ``x1 <= plate_x1``, ``psi0 (1 - i eps B/2)`` beyond."""
    x, t = _xt(x, t)
    psi0 = psi0_packet(x, t, params)
    if not branch_crossed or epsilon == 0:
        return psi0
    psi1 = psi1_packet(x, t, params)
    return np.where(x[..., 0] > plate_x1, psi0 + 0.5 * epsilon * psi1, psi0)
