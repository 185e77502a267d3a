"""Morse-Bott analysis of moment components on the standard fold model.

For ``xi = (a, b)`` the component is
``Phi(x, y, z) = a (z^2 - (x^2 + y^2)/2) + b z (x^2 + y^2)``; the circle
coordinate drops out by symmetry, so everything lives on the 3-ball.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import calculus
from .calculus import FD_STEP

SEPARATRIX_STEP = 1e-3
SEPARATRIX_SEED = 1e-3
SEPARATRIX_RADIUS = 1.0
TANGENCY_SLOPE = 0.05


class MorseError(ValueError):
    pass


def _check_xi(xi):
    a, b = (float(c) for c in xi)
    if a == 0 and b == 0:
        raise MorseError("xi must be nonzero")
    return a, b


def moment_component(xi, p):
    """``Phi^xi`` at ``p = (x, y, z)``; vectorized over a trailing axis of size 3."""
    a, b = (float(c) for c in xi)
    p = np.asarray(p, float)
    x, y, z = p[..., 0], p[..., 1], p[..., 2]
    r2 = x * x + y * y
    return a * (z * z - 0.5 * r2) + b * z * r2


def flat_gradient(xi, p) -> np.ndarray:
    a, b = (float(c) for c in xi)
    p = np.asarray(p, float)
    x, y, z = p[..., 0], p[..., 1], p[..., 2]
    s = 2 * b * z - a
    return np.stack([s * x, s * y, 2 * a * z + b * (x * x + y * y)], axis=-1)


def hessian(xi, p) -> np.ndarray:
    """Closed-form Hessian of ``Phi^xi`` at ``p``."""
    a, b = (float(c) for c in xi)
    x, y, z = (float(c) for c in p)
    d = 2 * b * z - a
    return np.array(
        [
            [d, 0.0, 2 * b * x],
            [0.0, d, 2 * b * y],
            [2 * b * x, 2 * b * y, 2 * a],
        ]
    )


def hessian_fd_check(xi, p, h: float = FD_STEP) -> float:
    """Largest entrywise gap between the finite-difference and closed-form Hessians."""
    fd = calculus.hessian(lambda q: float(moment_component(xi, q)), np.asarray(p, float), h)
    return float(np.max(np.abs(fd - hessian(xi, p))))


def signature(m: np.ndarray, tol: float = 1e-12) -> tuple[int, int]:
    """``(n_minus, n_plus)`` eigenvalue counts of a symmetric matrix."""
    ev = np.linalg.eigvalsh(m)
    return int(np.sum(ev < -tol)), int(np.sum(ev > tol))


CIRCLE = "circle x=y=z=0"
LINE = "line x=y=0"


@dataclass
class BottWitness:
    """Normal Hessian of the critical line just below and just above ``z = 0``."""

    z_below: float
    normal_below: np.ndarray
    z_above: float
    normal_above: np.ndarray

    @property
    def sign_change_at(self) -> float:
        return 0.5 * (self.z_below + self.z_above)


@dataclass
class MorseReport:
    xi: tuple[float, float]
    critical_set: str
    is_morse_bott: bool
    hessian_at_origin: np.ndarray
    signature: tuple[int, int]
    witness: Optional[BottWitness] = None
    separatrix: Optional[np.ndarray] = None

    def lines(self) -> list[str]:
        """``key: value`` lines in a fixed order."""
        h = self.hessian_at_origin
        out = [
            f"xi: {_num(self.xi[0])},{_num(self.xi[1])}",
            f"critical_set: {self.critical_set}",
            f"morse_bott: {'true' if self.is_morse_bott else 'false'}",
            "hessian_at_origin: " + "; ".join(",".join(_num(v) for v in row) for row in h),
            f"signature: ({self.signature[0]}, {self.signature[1]})",
        ]
        if self.witness is not None:
            w = self.witness
            out.append(f"sign_change_at_z: {_num(w.sign_change_at)}")
            out.append(
                f"normal_hessian_below: diag({_num(w.normal_below[0, 0])}, {_num(w.normal_below[1, 1])}) at z={_num(w.z_below)}"
            )
            out.append(
                f"normal_hessian_above: diag({_num(w.normal_above[0, 0])}, {_num(w.normal_above[1, 1])}) at z={_num(w.z_above)}"
            )
        if self.separatrix is not None:
            out.append(f"separatrix_samples: {len(self.separatrix)}")
        return out


def _num(v: float) -> str:
    v = float(v)
    if v == 0:
        return "0"
    return f"{v:.12g}"


def analyze(xi, separatrix_samples: Optional[int] = 200) -> MorseReport:
    """Classify the critical set of ``Phi^xi`` and decide whether it is Morse-Bott.

    When ``a != 0`` the only critical points are the circle ``x = y = z = 0``
    and the report also carries the traced separatrix image (unless
    ``separatrix_samples`` is ``None``).  When ``a = 0`` the critical set is
    the whole line ``x = y = 0`` and the normal Hessian ``diag(2bz, 2bz)``
    flips sign across ``z = 0``; the report records that flip as a witness.
    """
    a, b = _check_xi(xi)
    h0 = hessian((a, b), (0.0, 0.0, 0.0))
    if a != 0:
        sep = separatrix((a, b), separatrix_samples) if separatrix_samples else None
        return MorseReport((a, b), CIRCLE, True, h0, signature(h0), None, sep)
    below = hessian((a, b), (0.0, 0.0, -1.0))[:2, :2]
    above = hessian((a, b), (0.0, 0.0, 1.0))[:2, :2]
    flips = bool(np.all(np.sign(np.diag(below)) == -np.sign(np.diag(above))))
    return MorseReport(
        (a, b),
        LINE,
        not flips,
        h0,
        signature(h0[:2, :2]),
        BottWitness(-1.0, below, 1.0, above),
        None,
    )


def critical_mask(xi, points, tol: float = 1e-8, h: float = FD_STEP) -> np.ndarray:
    """Which rows of ``points`` have finite-difference gradient norm at most ``tol``."""
    pts = np.asarray(points, float)
    g = calculus.partials(lambda q: moment_component(xi, q), pts, h)  # (3, N)
    return np.linalg.norm(g, axis=0) <= tol


def sample_grid(n: int = 21, radius: float = 1.0) -> np.ndarray:
    """``n^3`` grid points of ``[-radius, radius]^3``; odd ``n`` includes the origin."""
    s = np.linspace(-radius, radius, n)
    return np.stack(np.meshgrid(s, s, s, indexing="ij"), axis=-1).reshape(-1, 3)


def _half_plane_field(a: float, b: float, r: float, z: float):
    # Flow tangent to the stable manifold of the circle, run outward from it.
    s = 1.0 if a > 0 else -1.0
    return -s * (2 * b * z - a) * r, -s * (2 * a * z + b * r * r)


def trace_separatrix(
    xi,
    step: float = SEPARATRIX_STEP,
    seed: float = SEPARATRIX_SEED,
    radius: float = SEPARATRIX_RADIUS,
    max_steps: int = 1_000_000,
) -> np.ndarray:
    """Trace the stable hypersurface of the circle in the ``(r, z)`` half-plane.

    The flat gradient flow of ``Phi^xi`` preserves the polar angle, so the
    hypersurface is a surface of revolution and one meridian suffices.
    For ``a > 0`` points on it rise to the circle under the gradient flow;
    for ``a < 0`` they fall.  Either way, integrating the opposite direction
    from a seed just off the circle runs along the hypersurface.  RK4 with
    a fixed step stops on leaving the ball of the given radius.
    """
    a, b = _check_xi(xi)
    if a == 0:
        raise MorseError("separatrix requires a != 0")
    r, z = seed, 0.0
    rows = [(r, z)]
    f = lambda r, z: _half_plane_field(a, b, r, z)  # noqa: E731
    for _ in range(max_steps):
        k1 = f(r, z)
        k2 = f(r + 0.5 * step * k1[0], z + 0.5 * step * k1[1])
        k3 = f(r + 0.5 * step * k2[0], z + 0.5 * step * k2[1])
        k4 = f(r + step * k3[0], z + step * k3[1])
        r += step / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        z += step / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        rows.append((r, z))
        if r * r + z * z > radius * radius:
            return np.array(rows)
        if not (math.isfinite(r) and math.isfinite(z)):
            break
    raise MorseError(
        f"separatrix trace did not leave radius {radius} within {max_steps} steps (last r={r}, z={z})"
    )


def separatrix(xi, samples: Optional[int] = 200, **trace_kw) -> np.ndarray:
    """Moment image ``(z^2 - r^2/2, z r^2)`` of the traced hypersurface.

    Returns ``samples`` rows spread evenly along the trace (all rows when
    ``samples`` is ``None``), ordered from the circle outward.
    """
    rz = trace_separatrix(xi, **trace_kw)
    if samples is not None and samples < len(rz):
        idx = np.unique(np.linspace(0, len(rz) - 1, samples).round().astype(int))
        rz = rz[idx]
    r, z = rz[:, 0], rz[:, 1]
    return np.column_stack([z * z - 0.5 * r * r, z * r * r])


def tangency_slope(curve: np.ndarray, n: int = 10) -> float:
    """Least-squares slope ``dp2/dp1`` of the ``n`` samples closest to the origin."""
    d = np.hypot(curve[:, 0], curve[:, 1])
    near = curve[np.argsort(d, kind="stable")[:n]]
    slope, _ = np.polyfit(near[:, 0], near[:, 1], 1)
    return float(slope)
