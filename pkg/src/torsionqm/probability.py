"""Probability bookkeeping for a packet crossing a single dislocation.

The wave function jumps across the plate ``x1 = 0`` (the cut), and the
defect at the origin drains or feeds probability at the rate
``(eps hbar/m) Im(psi0* d1 psi0)|_0``.  The grid norm therefore drifts, and
a point mass (the "atom") at the defect carrying the time-integrated source
restores total probability.

Grid quadratures use the trapezoid rule on a lattice that always has a node
column on ``x1 = 0``, where the density is the mean of its one-sided limits.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, GridMismatchError
from .geometry import DefectSet, frame, lambda_field, _offsets
from .wavefunction import PacketParams, grad_psi0_packet, psi0_packet, psi1_packet


class RegionTooSmallWarning(RuntimeWarning):
    pass


# -- densities ----------------------------------------------------------------


def _branches(x, t, params, epsilon):
    """Left and right limits of the perturbed packet at ``x``."""
    left = psi0_packet(x, t, params)
    if epsilon == 0:
        return left, left
    return left, left + 0.5 * epsilon * psi1_packet(x, t, params)


def _density(x, t, params, epsilon):
    x = np.asarray(x, float)
    left, right = _branches(x, t, params, epsilon)
    pl, pr = np.abs(left) ** 2, np.abs(right) ** 2
    x1 = x[..., 0]
    return np.where(x1 > 0, pr, np.where(x1 < 0, pl, 0.5 * (pl + pr)))


def probability_density(x, t, params: PacketParams, epsilon, defects: DefectSet | None = None):
    """``|psi|^2``, the first-order density with ``e^{-Lambda} sqrt(g) ~ 1`` applied.

    Points on a defect are rejected.  On the plate itself the mean of the two
    one-sided values is returned.
    """
    defects = defects if defects is not None else DefectSet.single(epsilon)
    _offsets(x, defects)  # raises on a defect
    return _density(x, t, params, epsilon)


def metric_gauge_factor(x, defects: DefectSet):
    """``e^{-Lambda} sqrt(det g)`` with the exact metric; equals ``1 + O(eps^2)``."""
    g = frame(x, defects).metric
    det = g[..., 0, 0] * g[..., 1, 1] - g[..., 0, 1] * g[..., 1, 0]
    return np.exp(-lambda_field(x, defects)) * np.sqrt(det)


def continuity_source(t, params: PacketParams):
    """``Im(psi0* d1 psi0)`` at the defect (origin), closed form."""
    a, x0, k0 = params.a, params.x0_arr, params.k0_arr
    tau = params.hbar * np.asarray(t, float) / params.mass
    d = a**4 + 4 * tau**2
    c = x0[:, None] + np.multiply.outer(k0, tau) if np.ndim(tau) else x0 + tau * k0
    r2 = c[0] ** 2 + c[1] ** 2
    return 2 * a * a * (a**4 * k0[0] - 4 * tau * x0[0]) / (math.pi * d * d) * np.exp(-2 * a * a * r2 / d)


def current_density(x, t, params: PacketParams):
    """``(hbar/m) Im(psi0* grad psi0)``, shape ``(..., 2)``."""
    psi = psi0_packet(x, t, params)
    grad = grad_psi0_packet(x, t, params)
    return params.hbar / params.mass * np.imag(np.conj(psi)[..., None] * grad)


# -- grids and norms -----------------------------------------------------------


@dataclass(frozen=True)
class Grid:
    """Tensor trapezoid grid; ``x1`` contains 0 whenever the range straddles it."""

    x1: np.ndarray
    x2: np.ndarray

    @classmethod
    def square(cls, center, half_width, n):
        if n < 3:
            raise ValueError("grid needs at least 3 nodes per axis")
        h = 2 * half_width / (n - 1)
        lo1 = center[0] - half_width
        # shift the x1 axis by < h/2 so that a node column lands on the plate
        off = math.remainder(lo1, h)
        x1 = lo1 - off + h * np.arange(n)
        x2 = center[1] - half_width + h * np.arange(n)
        return cls(x1, x2)

    def weights(self):
        def w(x):
            d = np.diff(x)
            out = np.zeros_like(x)
            out[:-1] += d / 2
            out[1:] += d / 2
            return out

        return np.multiply.outer(w(self.x1), w(self.x2))

    def points(self):
        return np.stack(np.meshgrid(self.x1, self.x2, indexing="ij"), axis=-1)

    def boundary_mask(self):
        m = np.zeros((len(self.x1), len(self.x2)), bool)
        m[[0, -1], :] = True
        m[:, [0, -1]] = True
        return m

    def same_as(self, other: "Grid"):
        return np.array_equal(self.x1, other.x1) and np.array_equal(self.x2, other.x2)


def packet_spread(t, params: PacketParams):
    """Width ``sqrt(a^4 + 4 hbar^2 t^2/m^2)/a`` of the freely spreading packet."""
    tau = params.hbar * t / params.mass
    return math.sqrt(params.a**4 + 4 * tau * tau) / params.a


def default_region(params: PacketParams, t, margin=9.0):
    """Square (center, half_width) containing the defect, the packet start and
    the packet at ``t``, padded by ``margin`` spread widths."""
    c_t = params.x0_arr + params.hbar * t / params.mass * params.k0_arr
    pts = np.array([[0.0, 0.0], params.x0_arr, c_t])
    lo, hi = pts.min(0), pts.max(0)
    center = 0.5 * (lo + hi)
    w = max(packet_spread(t, params), params.a)
    return tuple(center), float(0.5 * (hi - lo).max() + margin * w)


def _grid_for(params, t, region, grid_n):
    if region is None:
        region = default_region(params, t)
    return Grid.square(region[0], region[1], grid_n)


def norm(params: PacketParams, epsilon, t, region=None, grid_n=801, warn=True):
    """Trapezoid quadrature of the first-order density over a square region.

    ``region`` is ``(center, half_width)``; the default comes from
    :func:`default_region`.
    """
    grid = _grid_for(params, t, region, grid_n)
    dens = _density(grid.points(), t, params, epsilon)
    if warn:
        edge = dens[grid.boundary_mask()].max()
        if edge > 1e-12 * dens.max():
            warnings.warn(
                f"boundary density {edge:.3g} exceeds 1e-12 of the peak; enlarge the region",
                RegionTooSmallWarning,
                stacklevel=2,
            )
    return float((grid.weights() * dens).sum())


def atom_weight(params: PacketParams, epsilon, t0, t):
    """Probability mass accumulated at the defect between ``t0`` and ``t``."""
    if t < t0:
        raise ValueError("t must not precede t0")
    if epsilon == 0 or t == t0:
        return 0.0
    val, _ = integrate.quad(
        lambda s: float(continuity_source(s, params)), t0, t, epsabs=1e-14, epsrel=1e-10, limit=200
    )
    return epsilon * params.hbar / params.mass * val


def norm_series(params: PacketParams, epsilon, t_grid, t0=None, region=None, grid_n=801):
    """Rows ``(t, norm, atom_weight, total)``; ``t0`` defaults to the first time."""
    t_grid = [float(v) for v in t_grid]
    if any(b <= a for a, b in zip(t_grid, t_grid[1:])):
        raise ValueError("t_grid must be strictly increasing")
    t0 = t_grid[0] if t0 is None else t0
    if region is None:
        # one region for the whole series, large enough for its last instant
        regs = [default_region(params, t) for t in (t_grid[0], t_grid[-1])]
        c = 0.5 * (np.array(regs[0][0]) + np.array(regs[1][0]))
        hw = max(r[1] + np.abs(np.array(r[0]) - c).max() for r in regs)
        region = (tuple(c), hw)
    rows = []
    for t in t_grid:
        n = norm(params, epsilon, t, region, grid_n)
        w = atom_weight(params, epsilon, t0, t)
        rows.append((t, n, w, n + w))
    return rows


def series_to_csv(rows) -> str:
    lines = ["t,norm,atom_weight,total"]
    lines += [",".join("%.17g" % v for v in r) for r in rows]
    return "\n".join(lines) + "\n"


# -- modified Born rule -----------------------------------------------------------


@dataclass(frozen=True)
class MeasureWithAtom:
    """Grid density (already carrying ``sqrt(g)``) plus a point mass at the defect."""

    grid: Grid
    grid_density: np.ndarray
    atom_position: tuple
    atom_weight: float
    t0: float
    t: float

    def grid_mass(self):
        return float((self.grid.weights() * self.grid_density).sum())

    def total(self):
        return self.grid_mass() + self.atom_weight


def measure_at(params: PacketParams, epsilon, t0, t, region=None, grid_n=801) -> MeasureWithAtom:
    grid = _grid_for(params, t, region, grid_n)
    dens = _density(grid.points(), t, params, epsilon)
    return MeasureWithAtom(grid, dens, (0.0, 0.0), atom_weight(params, epsilon, t0, t), t0, t)


def expectation(V, measure: MeasureWithAtom) -> float:
    """``int sqrt(g) P V d^2x + atom_weight V(atom)``."""
    va = float(np.asarray(V(np.array(measure.atom_position, float))))
    if not math.isfinite(va):
        raise DomainError("V must be finite at the defect")
    vals = np.asarray(V(measure.grid.points()), float)
    return float((measure.grid.weights() * measure.grid_density * vals).sum()) + measure.atom_weight * va


# -- sampled states and the modified inner product ---------------------------------


@dataclass(frozen=True)
class SampledState:
    """A finite combination ``sum_j c_j psi_j`` of perturbed packets on a grid.

    ``right`` holds the samples (right limits on the plate column) and
    ``left`` the left limits, so products can be averaged across the jump.
    ``terms`` keeps the packet data needed for the defect term.
    """

    grid: Grid
    right: np.ndarray
    left: np.ndarray
    terms: tuple  # ((coef, PacketParams), ...)
    epsilon: float
    t: float

    def _combine(self, other: "SampledState", sign):
        if not isinstance(other, SampledState):
            return NotImplemented
        if not self.grid.same_as(other.grid) or self.t != other.t or self.epsilon != other.epsilon:
            raise GridMismatchError("states live on different grids, times or depths")
        terms = self.terms + tuple((sign * c, p) for c, p in other.terms)
        return SampledState(
            self.grid, self.right + sign * other.right, self.left + sign * other.left, terms, self.epsilon, self.t
        )

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __mul__(self, c):
        c = complex(c)
        return SampledState(
            self.grid, c * self.right, c * self.left, tuple((c * a, p) for a, p in self.terms), self.epsilon, self.t
        )

    __rmul__ = __mul__

    def at_defect(self, s):
        """``(psi0(0, s), d1 psi0(0, s))`` of the combination."""
        v = d = 0j
        for c, p in self.terms:
            v += c * complex(psi0_packet(np.zeros(2), s, p))
            d += c * complex(grad_psi0_packet(np.zeros(2), s, p)[0])
        return v, d


def sample_state(params: PacketParams, epsilon, t, grid: Grid, coef=1.0) -> SampledState:
    pts = grid.points()
    left, right = _branches(pts, t, params, epsilon)
    # the right-branch formula only applies on and beyond the plate
    on_left = pts[..., 0] < 0
    right = np.where(on_left, left, right)
    left = np.where(pts[..., 0] > 0, right, left)
    c = complex(coef)
    return SampledState(grid, c * right, c * left, ((c, params),), float(epsilon), float(t))


def _grid_term(a: SampledState, b: SampledState):
    prod = np.conj(a.right) * b.right
    col = a.grid.x1 == 0
    if col.any():
        prod = prod.copy()
        prod[col] = 0.5 * (prod[col] + (np.conj(a.left) * b.left)[col])
    return complex((a.grid.weights() * prod).sum())


def _defect_term(a: SampledState, b: SampledState, t0):
    eps, t = a.epsilon, a.t
    if eps == 0 or t == t0:
        return 0j
    p = a.terms[0][1]

    def f(s):
        va, da = a.at_defect(s)
        vb, db = b.at_defect(s)
        return (np.conj(va) * db - vb * np.conj(da)) / 2j

    re, _ = integrate.quad(lambda s: f(s).real, t0, t, epsabs=1e-14, epsrel=1e-10, limit=200)
    im, _ = integrate.quad(lambda s: f(s).imag, t0, t, epsabs=1e-14, epsrel=1e-10, limit=200)
    return eps * p.hbar / p.mass * complex(re, im)


def modified_inner_product(psi_a: SampledState, psi_b: SampledState, t0) -> complex:
    """Grid overlap plus the time-integrated defect term; antilinear in ``psi_a``."""
    if not psi_a.grid.same_as(psi_b.grid) or psi_a.t != psi_b.t or psi_a.epsilon != psi_b.epsilon:
        raise GridMismatchError("states live on different grids, times or depths")
    masses = {(p.mass, p.hbar) for _, p in psi_a.terms + psi_b.terms}
    if len(masses) > 1:
        raise ValueError("all packets must share mass and hbar")
    return _grid_term(psi_a, psi_b) + _defect_term(psi_a, psi_b, t0)


def modified_norm_sq(psi: SampledState, t0) -> float:
    return modified_inner_product(psi, psi, t0).real


def polarization_reconstruction(psi_a: SampledState, psi_b: SampledState, t0) -> complex:
    """Inner product rebuilt from four modified norms (antilinear in the first slot)."""
    n = lambda s: modified_norm_sq(s, t0)  # noqa: E731
    return 0.25 * (
        n(psi_a + psi_b) - n(psi_a - psi_b) - 1j * n(psi_a + 1j * psi_b) + 1j * n(psi_a - 1j * psi_b)
    )
