"""Screw-dislocation geometry of a two-dimensional lattice.

The distorted lattice is described by the multivalued phase

    phi(x) = sum_n angle(x - x_n)

whose gradient is single valued away from the defects.  From it follow the
tetrad ``e^2_i = delta^2_i + eps d_i phi``, the induced metric, the
connection ``Gamma^i_jk = delta^i_2 eps d_j d_k phi`` and a torsion that is
concentrated on the defect points.  The torsion is never sampled on a grid;
it is only accessed through loop integrals (:func:`torsion_flux`).

All functions accept a single point of shape ``(2,)`` or a stack of points of
shape ``(..., 2)``; lengths are in nm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PathThroughDefectError, SingularPointError

#: Points closer than this to a defect are rejected (nm).
EXCLUSION_RADIUS = 1e-9

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class DefectSet:
    """Positions and common depth of a set of screw dislocations.

    ``cut_angle`` is the direction (radians) of the branch cut leaving every
    defect.  The default ``pi`` is the cut of ``atan2``: the phase runs over
    ``(-pi, pi]`` and jumps from ``pi`` to ``-pi`` across the negative x1
    semiline.
    """

    positions: np.ndarray
    epsilon: float
    cut_angle: float = math.pi

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(pos)):
            raise ValueError("defect positions must be finite")
        eps = float(self.epsilon)
        if not math.isfinite(eps) or eps < 0:
            raise ValueError(f"epsilon must be finite and >= 0, got {eps}")
        if eps >= 0.5:
            raise ValueError(
                f"epsilon={eps} is outside first-order perturbation theory (must be < 0.5)"
            )
        for i in range(len(pos)):
            for j in range(i + 1, len(pos)):
                if np.hypot(*(pos[i] - pos[j])) <= EXCLUSION_RADIUS:
                    raise ValueError(f"defects {i} and {j} coincide at {pos[i]}")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "cut_angle", float(self.cut_angle))

    @classmethod
    def single(cls, epsilon, position=(0.0, 0.0), **kw) -> "DefectSet":
        return cls(np.array([position], dtype=float), epsilon, **kw)

    def __len__(self):
        return len(self.positions)

    def __eq__(self, other):
        if not isinstance(other, DefectSet):
            return NotImplemented
        return (
            np.array_equal(self.positions, other.positions)
            and self.epsilon == other.epsilon
            and self.cut_angle == other.cut_angle
        )

    def __hash__(self):
        return hash((self.positions.tobytes(), self.epsilon, self.cut_angle))


@dataclass(frozen=True)
class FrameField:
    """Tetrad, inverse tetrad and metric sampled at one or more points.

    Arrays have shape ``(..., 2, 2)``.  ``tetrad[..., a, i]`` is ``e^a_i`` and
    ``inverse_tetrad[..., a, i]`` is ``e_a^i`` in the first-order form.
    ``metric`` is the exact ``e^T e``; ``metric_first_order`` drops the
    O(eps^2) terms.
    """

    tetrad: np.ndarray
    inverse_tetrad: np.ndarray
    metric: np.ndarray
    metric_first_order: np.ndarray


def _offsets(x, defects: DefectSet):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 2:
        raise ValueError(f"points must have a trailing axis of length 2, got {x.shape}")
    d = x[..., None, :] - defects.positions  # (..., n, 2)
    r2 = d[..., 0] ** 2 + d[..., 1] ** 2
    if np.any(r2 <= EXCLUSION_RADIUS**2):
        raise SingularPointError("point coincides with a defect position")
    return d[..., 0], d[..., 1], r2


def phase(x, defects: DefectSet):
    """Multivalued phase summed over all defects (radians)."""
    dx, dy, _ = _offsets(x, defects)
    # rotate so that the cut of atan2 lands on ``cut_angle``
    shift = defects.cut_angle - math.pi
    c, s = math.cos(shift), math.sin(shift)
    rx = c * dx + s * dy
    ry = -s * dx + c * dy
    return (np.arctan2(ry, rx) + shift).sum(axis=-1)


def grad_phase(x, defects: DefectSet):
    """Single-valued gradient of :func:`phase` (nm^-1), shape ``(..., 2)``."""
    dx, dy, r2 = _offsets(x, defects)
    return np.stack([(-dy / r2).sum(axis=-1), (dx / r2).sum(axis=-1)], axis=-1)


def hessian_phase(x, defects: DefectSet):
    """Analytic second derivatives ``d_j d_k phi``, shape ``(..., 2, 2)``."""
    dx, dy, r2 = _offsets(x, defects)
    r4 = r2 * r2
    h11 = (2 * dx * dy / r4).sum(axis=-1)
    h12 = ((dy * dy - dx * dx) / r4).sum(axis=-1)
    h22 = (-2 * dx * dy / r4).sum(axis=-1)
    return np.stack([np.stack([h11, h12], -1), np.stack([h12, h22], -1)], -2)


def frame(x, defects: DefectSet) -> FrameField:
    eps = defects.epsilon
    g = grad_phase(x, defects)
    p, q = g[..., 0], g[..., 1]
    one = np.ones_like(p)
    zero = np.zeros_like(p)
    e = np.stack([np.stack([one, zero], -1), np.stack([eps * p, 1 + eps * q], -1)], -2)
    e_inv = np.stack(
        [np.stack([one, -eps * p], -1), np.stack([zero, 1 - eps * q], -1)], -2
    )
    metric = np.einsum("...ai,...aj->...ij", e, e)
    metric1 = np.stack(
        [np.stack([one, eps * p], -1), np.stack([eps * p, 1 + 2 * eps * q], -1)], -2
    )
    return FrameField(e, e_inv, metric, metric1)


def connection(x, defects: DefectSet):
    """Connection coefficients ``Gamma[..., i, j, k]``."""
    hess = defects.epsilon * hessian_phase(x, defects)
    gamma = np.zeros(hess.shape[:-2] + (2, 2, 2))
    gamma[..., 1, :, :] = hess
    return gamma


def lambda_field(x, defects: DefectSet):
    """``Lambda = eps * d_2 phi``, the gauge factor removed from the wave function."""
    return defects.epsilon * grad_phase(x, defects)[..., 1]


def _segment_distance(p0, p1, pts):
    d = p1 - p0
    L2 = d @ d
    if L2 == 0.0:
        return np.hypot(*(pts - p0).T)
    s = np.clip(((pts - p0) @ d) / L2, 0.0, 1.0)
    closest = p0 + s[:, None] * d
    return np.hypot(*(pts - closest).T)


def _integrate_segment(p0, p1, defects, depth=0):
    dist = _segment_distance(p0, p1, defects.positions).min() if len(defects) else np.inf
    if dist <= EXCLUSION_RADIUS:
        raise PathThroughDefectError(f"path segment {p0}->{p1} passes through a defect")
    length = math.hypot(*(p1 - p0))
    if length > dist and depth < 200:
        mid = 0.5 * (p0 + p1)
        return _integrate_segment(p0, mid, defects, depth + 1) + _integrate_segment(
            mid, p1, defects, depth + 1
        )
    mid, half = 0.5 * (p0 + p1), 0.5 * (p1 - p0)
    nodes = mid + _GL_NODES[:, None] * half
    return float(_GL_WEIGHTS @ (grad_phase(nodes, defects) @ half))


def winding_integral(path, defects: DefectSet) -> float:
    """Line integral of the phase gradient around a closed polyline.

    ``path`` is an ``(N, 2)`` array of vertices; the closing segment back to the
    first vertex is implied.  The result is ``2 pi`` times the signed number of
    enclosed defects.
    """
    pts = np.asarray(path, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
        raise ValueError("path must be an (N>=3, 2) array of vertices")
    if np.array_equal(pts[0], pts[-1]):
        pts = pts[:-1]
    total = 0.0
    for p0, p1 in zip(pts, np.roll(pts, -1, axis=0)):
        total += _integrate_segment(p0, p1, defects)
    return total


def torsion_flux(path, defects: DefectSet) -> float:
    """Flux of the delta-like torsion ``T^2_12`` through a closed polyline."""
    return defects.epsilon / (2 * math.pi) * winding_integral(path, defects)


def curvature_check(x, defects: DefectSet, h: float = 1e-3):
    """Finite-difference commutator ``(d1 d2 - d2 d1) e^a_i`` at ``x``.

    The inner derivative of the tetrad is taken analytically and the outer one
    by central differences, so the residual measures the O(h^2) truncation
    error plus any genuine curvature.  Returns a ``(2, 2)`` array indexed
    ``[a, i]``.
    """
    x = np.asarray(x, dtype=float)
    eps = defects.epsilon
    e1 = np.array([h, 0.0])
    e2 = np.array([0.0, h])
    # d_j e^2_i = eps * d_j d_i phi
    d2e = lambda y: eps * hessian_phase(y, defects)[1, :]  # noqa: E731
    d1e = lambda y: eps * hessian_phase(y, defects)[0, :]  # noqa: E731
    res = np.zeros((2, 2))
    res[1] = (d2e(x + e1) - d2e(x - e1)) / (2 * h) - (d1e(x + e2) - d1e(x - e2)) / (2 * h)
    return res


def circle(center=(0.0, 0.0), radius=1.0, n=256):
    """Closed polyline approximating a circle (counter-clockwise)."""
    th = 2 * math.pi * np.arange(n) / n
    return np.column_stack([center[0] + radius * np.cos(th), center[1] + radius * np.sin(th)])


def rectangle(x_min, x_max, y_min, y_max):
    return np.array([[x_min, y_min], [x_max, y_min], [x_max, y_max], [x_min, y_max]], float)
