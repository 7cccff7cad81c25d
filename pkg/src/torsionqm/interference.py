"""Double-slit screen intensity with one branch crossing the dislocation cut.

Slit 1 sits at ``x2 = +separation/2`` and slit 2 at ``-separation/2`` on the
plate ``x1 = 0``.  Each slit re-emits the packet centred on itself with the
original mean wave vector, so the branch reaching screen point ``x2`` is the
packet evaluated at the displacement ``(L, x2 - slit_x2)``.  All branches are
evaluated at the common time ``t = m L / (k1_0 hbar)``.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import GridMismatchError, PairingError, ZeroWaveVectorError
from .wavefunction import PacketParams, SpacetimePoint, phase_shift, psi0_packet, psi1_packet

SCAN_CHUNK = 256  # fixed so results do not depend on the worker count


@dataclass(frozen=True)
class SlitExperiment:
    separation: float = 10.0
    aperture: float = 0.1
    screen_distance: float = 20.0
    screen_range: tuple = (-15.0, 15.0)
    samples: int = 3001
    corrected_branch: int = 2

    def __post_init__(self):
        if not self.separation > 0 or not self.screen_distance > 0 or not self.aperture > 0:
            raise ValueError("separation, aperture and screen_distance must be positive")
        lo, hi = (float(v) for v in self.screen_range)
        if not lo < hi:
            raise ValueError("screen_range must be increasing")
        if int(self.samples) != self.samples or self.samples < 3:
            raise ValueError("samples must be an integer >= 3")
        if self.corrected_branch not in (1, 2):
            raise ValueError("corrected_branch must be 1 or 2")
        object.__setattr__(self, "screen_range", (lo, hi))
        object.__setattr__(self, "samples", int(self.samples))

    @property
    def slit_x2(self):
        return (self.separation / 2, -self.separation / 2)

    def screen(self) -> np.ndarray:
        return np.linspace(*self.screen_range, self.samples)


@dataclass(frozen=True)
class IntensityProfile:
    positions: np.ndarray
    values: np.ndarray
    epsilon: float = 0.0

    def __post_init__(self):
        x = np.array(self.positions, dtype=float)
        y = np.array(self.values, dtype=float)
        if x.ndim != 1 or x.shape != y.shape:
            raise ValueError("positions and values must be 1-D and of equal length")
        if np.any(np.diff(x) <= 0):
            raise ValueError("positions must be strictly increasing")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "positions", x)
        object.__setattr__(self, "values", y)
        object.__setattr__(self, "epsilon", float(self.epsilon))

    def __len__(self):
        return len(self.positions)

    def valley_ratio(self) -> float:
        """min/max of the profile; negative where first-order theory overshoots."""
        return float(self.values.min() / self.values.max())


def _time(exp: SlitExperiment, params: PacketParams):
    k1 = params.k0[0]
    if k1 == 0:
        raise ZeroWaveVectorError("the screen time needs a nonzero (k1)_0")
    return params.mass * exp.screen_distance / (k1 * params.hbar)


def _displacements(screen_x2, exp: SlitExperiment):
    x2 = np.asarray(screen_x2, dtype=float)
    L = np.full(x2.shape, exp.screen_distance)
    return [np.stack([L, x2 - s], axis=-1) for s in exp.slit_x2]


def branch_points(screen_x2: float, exp: SlitExperiment, params: PacketParams):
    """Displacements from slit 1 and slit 2 to the screen point, at the screen time."""
    t = _time(exp, params)
    d1, d2 = _displacements(float(screen_x2), exp)
    return SpacetimePoint(tuple(d1), t), SpacetimePoint(tuple(d2), t)


def intensity_plane_wave(screen_x2, k, epsilon, q, amplitude, exp: SlitExperiment):
    """``4 A^2 cos^2[k.(x2 - x1)/2 - theta/2]`` for plane-wave branches.

    Each branch propagates along its own path from the slit, so the projection
    ``k.(x_(2) - x_(1))`` is ``|k|`` times the path-length difference.
    """
    theta = phase_shift(epsilon, k, q)
    d1, d2 = _displacements(screen_x2, exp)
    kn = float(np.hypot(*np.asarray(k, float)))
    dphi = kn * (np.hypot(d2[..., 0], d2[..., 1]) - np.hypot(d1[..., 0], d1[..., 1]))
    return 4 * amplitude**2 * np.cos(dphi / 2 - theta / 2) ** 2


def _packet_at_slit(params: PacketParams):
    return replace(params, x0=(0.0, 0.0))


def intensity_packet(screen_x2, params: PacketParams, epsilon, exp: SlitExperiment):
    """First-order screen intensity of the two packet branches.

    ``|psi0(x_1) + psi0(x_2)|^2/4 - (eps/2) Im[psi0*(x_u) psi0(x_c) B(x_c)]`` where
    ``c`` is the corrected branch and ``u`` the other one.  ``params.x0`` is
    ignored: each branch starts at its slit.
    """
    p = _packet_at_slit(params)
    t = _time(exp, params)
    d = _displacements(screen_x2, exp)
    c = exp.corrected_branch - 1
    psi = [psi0_packet(d[0], t, p), psi0_packet(d[1], t, p)]
    out = 0.25 * np.abs(psi[0] + psi[1]) ** 2
    if epsilon != 0:
        # psi0 B = i psi1, which stays finite where psi0 and B separately do not
        psi0_b = 1j * psi1_packet(d[c], t, p)
        out = out - 0.5 * epsilon * np.imag(np.conj(psi[1 - c]) * psi0_b)
    return out


def pattern_scan(params: PacketParams, epsilon, exp: SlitExperiment, workers: int = 1):
    """Intensity on the uniform screen grid, evaluated in fixed-size chunks."""
    x = exp.screen()
    chunks = [x[i : i + SCAN_CHUNK] for i in range(0, len(x), SCAN_CHUNK)]
    fn = lambda c: intensity_packet(c, params, epsilon, exp)  # noqa: E731
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(fn, chunks))
    else:
        parts = [fn(c) for c in chunks]
    return IntensityProfile(x, np.concatenate(parts), epsilon)


@dataclass(frozen=True, order=True)
class Peak:
    position: float
    height: float = field(compare=False)


def find_peaks(profile: IntensityProfile) -> list[Peak]:
    """Strict three-point local maxima refined by a parabola through the triple."""
    x, y = profile.positions, profile.values
    if len(x) < 3:
        raise ValueError("need at least three samples")
    ym, y0, yp = y[:-2], y[1:-1], y[2:]
    idx = np.nonzero((y0 > ym) & (y0 > yp))[0] + 1
    peaks = []
    for i in idx:
        x0, x1, x2 = x[i - 1], x[i], x[i + 1]
        f0, f1, f2 = y[i - 1], y[i], y[i + 1]
        # vertex of the interpolating parabola, in coordinates centred on x1
        u0, u2 = x0 - x1, x2 - x1
        d0, d2 = (f0 - f1) / u0, (f2 - f1) / u2
        c2 = (d2 - d0) / (u2 - u0)
        c1 = d0 - c2 * u0
        du = -c1 / (2 * c2)
        peaks.append(Peak(float(x1 + du), float(f1 + c1 * du / 2)))
    return sorted(peaks)


def principal_peaks(peaks, n=2, rtol=1e-9):
    """The ``n`` tallest peaks; heights equal to ``rtol`` are ordered by position."""
    rest = list(peaks)
    out = []
    while rest and len(out) < n:
        top = max(p.height for p in rest)
        tied = [p for p in rest if p.height >= top - rtol * abs(top)]
        pick = min(tied, key=lambda p: p.position)
        out.append(pick)
        rest.remove(pick)
    return sorted(out)


def _nearest(p, peaks):
    return min(peaks, key=lambda q: (abs(q.position - p.position), q.position))


def peak_displacement(with_torsion: IntensityProfile, torsion_free: IntensityProfile) -> float:
    """Largest shift of the two principal torsion-free peaks.

    Each principal peak is paired with the nearest peak of the torsion profile;
    the pairing must be mutual (that peak's nearest torsion-free peak is the
    original one), otherwise :class:`PairingError` is raised.
    """
    if not np.array_equal(with_torsion.positions, torsion_free.positions):
        raise GridMismatchError("profiles are sampled on different grids")
    free = find_peaks(torsion_free)
    tors = find_peaks(with_torsion)
    if len(free) < 2 or not tors:
        raise PairingError("not enough peaks to pair")
    shift = 0.0
    for p in principal_peaks(free):
        q = _nearest(p, tors)
        if _nearest(q, free) != p:
            raise PairingError(f"peak at {p.position:.6g} has no mutual partner")
        shift = max(shift, abs(q.position - p.position))
    return shift


def asymmetry(profile: IntensityProfile) -> float:
    """Signed area ``int_{x>0} [I(x) - I(-x)] dx``, mirror values by interpolation."""
    x, y = profile.positions, profile.values
    m = x >= 0
    xr = x[m]
    yl = np.interp(-xr, x, y)
    return float(np.trapezoid(y[m] - yl, xr))


# -- CSV ----------------------------------------------------------------------

CSV_HEADER = ("x2_nm", "intensity", "epsilon")


def profile_to_csv(profile: IntensityProfile) -> str:
    buf = io.StringIO()
    buf.write(",".join(CSV_HEADER) + "\n")
    eps = "%.17g" % profile.epsilon
    for x, y in zip(profile.positions, profile.values):
        buf.write("%.17g,%.17g,%s\n" % (x, y, eps))
    return buf.getvalue()


def profile_from_csv(text: str) -> IntensityProfile:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ValueError(f"expected header {','.join(CSV_HEADER)}")
    data = np.array(rows[1:], dtype=float).reshape(-1, 3)
    eps = set(data[:, 2].tolist())
    if len(eps) > 1:
        raise ValueError("profile rows carry different epsilon values")
    return IntensityProfile(data[:, 0], data[:, 1], eps.pop() if eps else math.nan)
