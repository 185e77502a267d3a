"""Canonical near-symplectic models on S^1 x D^3 and the toric moment maps around them.

Points on S^1 x D^3 are ``Point4(theta, x1, x2, x3)`` where ``theta`` runs
along the vanishing circle.  The same space in cylindrical coordinates is
``CylPoint(alpha, r, theta, z)``: ``alpha`` is the circle coordinate and
``theta`` the polar angle in the ``(x1, x2)`` plane, ``z = x3``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import calculus
from .calculus import FD_STEP

RANK_TOL = 1e-6


class Point4(NamedTuple):
    theta: float
    x1: float
    x2: float
    x3: float


class CylPoint(NamedTuple):
    alpha: float
    r: float
    theta: float
    z: float

    def to_point4(self) -> Point4:
        return Point4(self.alpha, self.r * math.cos(self.theta), self.r * math.sin(self.theta), self.z)


def cylindrical(p: Point4) -> CylPoint:
    return CylPoint(p[0], math.hypot(p[1], p[2]), math.atan2(p[2], p[1]), p[3])


def self_dual_matrix(l1, l2, l3) -> np.ndarray:
    """Matrix of ``l1 (dt dx1 + dx2 dx3) + l2 (dt dx2 + dx3 dx1) + l3 (dt dx3 + dx1 dx2)``."""
    l1, l2, l3 = np.broadcast_arrays(*(np.asarray(v, float) for v in (l1, l2, l3)))
    m = np.zeros(l1.shape + (4, 4))
    m[..., 0, 1], m[..., 2, 3] = l1, l1
    m[..., 0, 2], m[..., 1, 3] = l2, -l2
    m[..., 0, 3], m[..., 1, 2] = l3, l3
    return m - np.swapaxes(m, -1, -2)


def self_dual_coefficients(m: np.ndarray) -> np.ndarray:
    """Project a 2-form onto the basis used by :func:`self_dual_matrix`."""
    return np.stack(
        [
            0.5 * (m[..., 0, 1] + m[..., 2, 3]),
            0.5 * (m[..., 0, 2] - m[..., 1, 3]),
            0.5 * (m[..., 0, 3] + m[..., 1, 2]),
        ],
        axis=-1,
    )


def omega_A(p) -> np.ndarray:
    """Coefficient matrix of the oriented-splitting model form at ``p``."""
    p = np.asarray(p, float)
    return self_dual_matrix(p[..., 1], p[..., 2], -2.0 * p[..., 3])


# gluing map of the unoriented model: (2 pi, x1, x2, x3) -> (0, x1, -x2, -x3)
GLUE_JACOBIAN = np.diag([1.0, 1.0, -1.0, -1.0])


def glue(p) -> np.ndarray:
    p = np.asarray(p, float)
    return np.array([p[0] - 2 * math.pi, p[1], -p[2], -p[3]])


def omega_B(p) -> np.ndarray:
    """The unoriented model, evaluated in the covering chart ``[0, 2pi] x D^3``."""
    p = np.asarray(p, float).copy()
    p[0] = p[0] % (2 * math.pi)
    return omega_A(p)


def seam_pullback(p) -> np.ndarray:
    """Pull back the form at ``glue(p)`` along the gluing map, for ``p`` on ``{2pi} x D^3``."""
    j = GLUE_JACOBIAN
    return j.T @ omega_A(glue(p)) @ j


def seam_defect(p) -> float:
    return float(np.max(np.abs(seam_pullback(p) - omega_A(p))))


def pullback_linear(field: Callable, jac: np.ndarray) -> Callable:
    """Pull a 2-form field back along the linear map ``p -> jac @ p``."""
    jac = np.asarray(jac, float)

    def pulled(p):
        return jac.T @ field(jac @ np.asarray(p, float)) @ jac

    return pulled


def x_rotation(r3: np.ndarray) -> np.ndarray:
    """Embed a rotation of the ``(x1, x2, x3)`` factor as a 4x4 Jacobian."""
    j = np.eye(4)
    j[1:, 1:] = r3
    return j


class NotOnVanishingLocus(ValueError):
    pass


@dataclass
class LMatrixReport:
    matrix: np.ndarray
    symmetry_defect: float
    trace: float
    singular_values: np.ndarray
    rank: int
    eigenvalues: np.ndarray

    @property
    def signature(self) -> tuple[int, int]:
        """``(n_plus, n_minus)``."""
        return int(np.sum(self.eigenvalues > 0)), int(np.sum(self.eigenvalues < 0))


def extract_L(
    form_field: Callable, theta: float = 0.0, h: float = FD_STEP, tol: float = 1e-12
) -> LMatrixReport:
    """Linearize the self-dual part of a form along the vanishing circle.

    ``matrix[i, j]`` is the derivative of the i-th self-dual coefficient
    with respect to ``x_j`` at ``(theta, 0, 0, 0)``.
    """
    base = np.array([theta, 0.0, 0.0, 0.0])
    if np.max(np.abs(form_field(base))) > tol:
        raise NotOnVanishingLocus("not on vanishing locus")
    cols = []
    for j in range(1, 4):
        e = np.zeros(4)
        e[j] = h
        d = (self_dual_coefficients(form_field(base + e)) - self_dual_coefficients(form_field(base - e))) / (2 * h)
        cols.append(d)
    L = np.stack(cols, axis=1)
    sv = np.linalg.svd(L, compute_uv=False)
    sym = 0.5 * (L + L.T)
    return LMatrixReport(
        matrix=L,
        symmetry_defect=float(np.max(np.abs(L - L.T))),
        trace=float(np.trace(L)),
        singular_values=sv,
        rank=int(np.sum(sv > RANK_TOL)),
        eigenvalues=np.linalg.eigvalsh(sym),
    )


def q_map(omega, v) -> float:
    """For ``omega = a dx^dy + b dy^dz + c dx^dz`` and ``v = (x0, y0, z0)``: ``a z0 + b x0 - c y0``."""
    w = np.asarray(omega, float)
    a, b, c = w[0, 1], w[1, 2], w[0, 2]
    x0, y0, z0 = v
    return float(a * z0 + b * x0 - c * y0)


def q_map_from_frame(omega, v) -> float:
    """``omega(v', v'')`` for an oriented orthogonal frame ``{v, v', v''}`` with ``|v'| = |v''| = |v|^(1/2)``."""
    v = np.asarray(v, float)
    n = np.linalg.norm(v)
    if n == 0:
        return 0.0
    u = v / n
    trial = np.eye(3)[np.argmin(np.abs(u))]
    e1 = trial - (trial @ u) * u
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(u, e1)
    s = math.sqrt(n)
    return float((s * e1) @ np.asarray(omega, float) @ (s * e2))


class DegenerateForm(ValueError):
    pass


def omega_A_inverse(p) -> np.ndarray:
    """Closed-form inverse: ``omega_A`` squares to ``-(L1^2 + L2^2 + L3^2)`` times the identity."""
    p = np.asarray(p, float)
    m = omega_A(p)
    n2 = p[1] ** 2 + p[2] ** 2 + 4 * p[3] ** 2
    if n2 == 0:
        raise DegenerateForm("form degenerate on vanishing locus")
    return m.T / n2


def solve_contraction(p, eta) -> np.ndarray:
    """The vector ``X`` with ``iota(X) omega_A = -eta`` at ``p``."""
    # iota(X) omega = X @ M = -M @ X, so M @ X = eta
    return omega_A_inverse(p) @ np.asarray(eta, float)


def moment_fold(p: CylPoint):
    """Moment map of the standard fold: ``(z^2 - r^2/2, z r^2)``."""
    alpha, r, theta, z = p
    if np.any(np.asarray(r) < 0):
        raise ValueError("r must be nonnegative")
    r2 = np.asarray(r) ** 2 if not isinstance(r, float) else r * r
    return z * z - 0.5 * r2, z * r2


def moment_fold_cartesian(p) -> np.ndarray:
    p = np.asarray(p, float)
    r2 = p[..., 1] ** 2 + p[..., 2] ** 2
    z = p[..., 3]
    return np.stack([z * z - 0.5 * r2, z * r2], axis=-1)


def moment_cp2(z1: complex, z2: complex, scale: float = 1.0, flip_first: bool = False):
    """``scale * (|z1|^2, |z2|^2) / (1 + |z1|^2 + |z2|^2)``, first component negated if ``flip_first``.

    ``moment_cp2(z1, z2, 2.0, True)`` is the second projective-plane model,
    whose image is the triangle with vertices (0,0), (-2,0), (0,2).
    """
    a1 = np.abs(z1) ** 2
    a2 = np.abs(z2) ** 2
    k = 1.0 + a1 + a2
    s1 = -scale if flip_first else scale
    return s1 * a1 / k, scale * a2 / k


def s1_moments(p: CylPoint, k: int = 1, variant="mixed"):
    """Circle-action moments on the standard fold.

    variant 1: ``z^2 - r^2/2``; variant 2: ``z r^2``; ``"mixed"``: ``k*Phi1 + Phi2``.
    """
    phi1, phi2 = moment_fold(p)
    if variant in (1, "1"):
        return phi1
    if variant in (2, "2"):
        return phi2
    if variant == "mixed":
        if k <= 0:
            raise ValueError("k must be a positive integer")
        return k * phi1 + phi2
    raise ValueError(f"unknown variant {variant!r}")


# ---------------------------------------------------------------------------
# invariant checks


def closedness_defect(p, h: float = FD_STEP) -> float:
    return float(np.max(np.abs(calculus.exterior_derivative_2form(omega_A, p, h))))


def self_duality_defect(p) -> float:
    m = omega_A(p)
    return float(np.max(np.abs(calculus.hodge_star(m) - m)))


def symplectic_volume(p) -> float:
    """Coefficient of ``dvol`` in ``omega_A ^ omega_A``."""
    m = omega_A(p)
    return float(calculus.wedge_two_two(m, m))


@dataclass
class MomentConditionDefects:
    """Max-norm differences at one point (standard contraction ``iota(X) w = w(X, .)``).

    ``alpha_plus`` compares ``iota(d/dalpha) omega_A`` with ``+d p1`` and
    ``alpha_minus`` with ``-d p1``; likewise for the polar angle.
    """

    alpha_plus: float
    alpha_minus: float
    theta_plus: float
    theta_minus: float


def moment_condition_defects(c: CylPoint, h: float = FD_STEP) -> MomentConditionDefects:
    p = np.array(c.to_point4())
    m = omega_A(p)
    d_alpha = np.array([1.0, 0.0, 0.0, 0.0])
    d_theta = np.array([0.0, -p[2], p[1], 0.0])
    dphi = calculus.partials(moment_fold_cartesian, p, h)  # shape (4, 2)
    dp1, dp2 = dphi[:, 0], dphi[:, 1]
    ia = calculus.interior(d_alpha, m)
    it = calculus.interior(d_theta, m)
    return MomentConditionDefects(
        alpha_plus=float(np.max(np.abs(ia - dp1))),
        alpha_minus=float(np.max(np.abs(ia + dp1))),
        theta_plus=float(np.max(np.abs(it - dp2))),
        theta_minus=float(np.max(np.abs(it + dp2))),
    )


def random_points(rng: np.random.Generator, n: int, radius: float = 1.0) -> np.ndarray:
    """Points of ``[0, 2pi] x [-radius, radius]^3``."""
    th = rng.uniform(0, 2 * math.pi, n)
    xs = rng.uniform(-radius, radius, (n, 3))
    return np.column_stack([th, xs])
