"""Contact form on the boundary of the oriented local model and its Reeb dynamics.

The boundary is ``S^1 x S^2`` at level ``x1^2 + x2^2 + x3^2 = k``.  States are
ordered ``(x1, x2, x3, theta)`` throughout this module, while 1-forms and
2-forms use the ``(dtheta, dx1, dx2, dx3)`` basis of :mod:`local_models`.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, TextIO

import numpy as np

from . import calculus
from .calculus import FD_STEP
from .local_models import omega_A

F_ABORT = 1e-14
DENOMINATOR_CAP = 10**6
RESONANCE_TOL = 1e-13


def lambda_A(p) -> np.ndarray:
    """Primitive of ``omega_A``: coefficients in ``(dtheta, dx1, dx2, dx3)``."""
    p = np.asarray(p, float)
    x1, x2, x3 = p[..., 1], p[..., 2], p[..., 3]
    return np.stack(
        [-0.5 * (x1 * x1 + x2 * x2 - 2 * x3 * x3), x2 * x3, -x1 * x3, np.zeros_like(x1)],
        axis=-1,
    )


def radial_form(p) -> np.ndarray:
    """``x1 dx1 + x2 dx2 + x3 dx3``, the conormal of the level spheres."""
    p = np.asarray(p, float)
    return np.array([0.0, p[1], p[2], p[3]])


def contact_volume(p) -> float:
    """Closed-form ``dvol`` coefficient of ``lambda ^ d lambda ^ (x . dx)``."""
    _, x1, x2, x3 = (float(c) for c in p)
    r2 = x1 * x1 + x2 * x2
    return -(0.5 * r2 * (r2 + 2 * x3 * x3) + 2 * x3**4)


def contact_volume_numeric(p, h: float = FD_STEP) -> float:
    """The same coefficient with ``d lambda`` taken by finite differences."""
    p = np.asarray(p, float)
    dlam = calculus.exterior_derivative_1form(lambda_A, p, h)
    return float(calculus.wedge_one_two_one(lambda_A(p), dlam, radial_form(p)))


def primitive_defect(p, h: float = FD_STEP) -> float:
    """``max |d lambda_A - omega_A|`` at ``p``."""
    dlam = calculus.exterior_derivative_1form(lambda_A, p, h)
    return float(np.max(np.abs(dlam - omega_A(p))))


class ReebError(ValueError):
    pass


@dataclass(frozen=True)
class ReebState:
    x1: float
    x2: float
    x3: float
    theta: float
    k: float = 1.0
    tol: float = 1e-9

    def __post_init__(self):
        if not self.k > 0:
            raise ReebError("sphere level k must be positive")
        if abs(self.x1**2 + self.x2**2 + self.x3**2 - self.k) > self.tol * max(1.0, self.k):
            raise ReebError(
                f"state is off the sphere r^2 + x3^2 = {self.k} "
                f"(got {self.x1**2 + self.x2**2 + self.x3**2!r})"
            )

    @classmethod
    def on_sphere(cls, k: float, x3: float, phase: float = 0.0, theta: float = 0.0) -> "ReebState":
        """The state at height ``x3`` whose ``(x1, x2)`` has polar angle ``phase``."""
        k = float(k)
        x3 = float(x3)
        if x3 * x3 > k:
            raise ReebError(f"|x3| must not exceed sqrt(k) = {math.sqrt(k)}")
        r = math.sqrt(k - x3 * x3)
        return cls(r * math.cos(phase), r * math.sin(phase), x3, theta, k)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3, self.theta])

    @property
    def point(self) -> np.ndarray:
        """The same point in the ``(theta, x1, x2, x3)`` ordering."""
        return np.array([self.theta, self.x1, self.x2, self.x3])


def reeb_normalizer(x1: float, x2: float, x3: float) -> float:
    r2 = x1 * x1 + x2 * x2
    return -0.5 * (r2 * (r2 + 2 * x3 * x3) + 4 * x3**4)


def _field(x1: float, x2: float, x3: float):
    f = reeb_normalizer(x1, x2, x3)
    if abs(f) < F_ABORT:
        raise ReebError(f"Reeb field undefined: normalizer f = {f!r} at x = ({x1}, {x2}, {x3})")
    return (-3 * x2 * x3 / f, 3 * x1 * x3 / f, 0.0, (x1 * x1 + x2 * x2 - 2 * x3 * x3) / f)


def reeb_field(s) -> np.ndarray:
    """Velocity ``(dx1, dx2, dx3, dtheta)`` of the Reeb flow.

    Accepts a :class:`ReebState` or any ``(x1, x2, x3, theta)`` sequence.
    """
    if isinstance(s, ReebState):
        x1, x2, x3 = s.x1, s.x2, s.x3
    else:
        x1, x2, x3 = (float(c) for c in s[:3])
    return np.array(_field(x1, x2, x3))


def _as_point(s) -> np.ndarray:
    if isinstance(s, ReebState):
        return s.point
    x1, x2, x3, th = (float(c) for c in s[:4])
    return np.array([th, x1, x2, x3])


def _as_tangent(v) -> np.ndarray:
    """Reorder a velocity ``(dx1, dx2, dx3, dtheta)`` into the form basis."""
    return np.array([v[3], v[0], v[1], v[2]])


def normalization_defect(s) -> float:
    """``|lambda_A(X) - 1|``."""
    p = _as_point(s)
    return abs(float(lambda_A(p) @ _as_tangent(reeb_field(s))) - 1.0)


def kernel_defect(s, h: float = FD_STEP) -> float:
    """Size of ``iota(X) d lambda_A`` on vectors tangent to the level sphere.

    ``d lambda_A`` is taken by finite differences; its contraction with the
    Reeb field is projected off the radial conormal before measuring.
    """
    p = _as_point(s)
    dlam = calculus.exterior_derivative_1form(lambda_A, p, h)
    v = calculus.interior(_as_tangent(reeb_field(s)), dlam)
    n = radial_form(p)
    v = v - (v @ n) / (n @ n) * n
    return float(np.max(np.abs(v)))


def rates(x3, k):
    """Angular rates ``(R1, R2)``: ``R1`` turns the ``(x1, x2)`` plane, ``R2`` is ``dtheta/dt``.

    Exact when both inputs are :class:`~fractions.Fraction`.
    """
    if isinstance(x3, Fraction) and isinstance(k, Fraction):
        den = k * k + 3 * x3**4
        r2 = k - x3 * x3
        return -6 * x3 / den, -2 * (r2 - 2 * x3 * x3) / den
    x3, k = float(x3), float(k)
    den = k * k + 3 * x3**4
    r2 = k - x3 * x3
    return -6 * x3 / den, -2 * (r2 - 2 * x3 * x3) / den


THETA_EQUATOR = "theta-circle-equator"
THETA_POLE = "theta-circle-pole"
BETA_CIRCLE = "beta-circle"
RESONANT = "resonant"
NON_CLOSED = "non-closed"


@dataclass(frozen=True)
class OrbitClass:
    kind: str
    ratio: Optional[Fraction] = None
    r1: float = 0.0
    r2: float = 0.0

    @property
    def closed(self) -> bool:
        return self.kind != NON_CLOSED

    @property
    def period(self) -> Optional[float]:
        """Time after which the orbit through any point of the torus closes up."""
        if self.kind in (THETA_EQUATOR, THETA_POLE):
            return 2 * math.pi / abs(self.r2)
        if self.kind == BETA_CIRCLE:
            return 2 * math.pi / abs(self.r1)
        if self.kind == RESONANT:
            return 2 * math.pi * abs(self.ratio.numerator) / abs(self.r1)
        return None


def _rational_witness(x: float, tol: float, cap: int) -> Optional[Fraction]:
    approx = Fraction(abs(x)).limit_denominator(cap)
    if abs(float(approx) - abs(x)) <= tol:
        return approx if x >= 0 else -approx
    return None


def classify_orbit(x3, k=1, tol: float = RESONANCE_TOL, cap: int = DENOMINATOR_CAP) -> OrbitClass:
    """Sort the invariant torus at height ``x3`` into the closed-orbit cases.

    With :class:`~fractions.Fraction` inputs every test is exact and the
    ratio ``R1/R2`` is returned exactly.  With floats, the special cases use
    the absolute tolerance ``tol`` and resonance means the best rational
    approximation of ``R1/R2`` with denominator at most ``cap`` lies within
    ``tol``.

    Every float has a rational within about ``1/cap**2`` of it, so a loose
    ``tol`` labels almost everything resonant.  The default sits just above
    double rounding: heights like ``1/3`` typed as floats are recognized,
    while a random height is called resonant under a tenth of the time.
    Pass fractions when the answer must be certain.
    """
    exact = isinstance(x3, (int, Fraction)) and isinstance(k, (int, Fraction))
    if exact:
        x3, k = Fraction(x3), Fraction(k)
    if not k > 0:
        raise ValueError("k must be positive")
    if x3 * x3 > k * (1 + (0 if exact else tol)):
        raise ValueError("|x3| exceeds sqrt(k)")
    r1, r2 = rates(x3, k)
    rf1, rf2 = float(r1), float(r2)
    r2sq = k - x3 * x3
    if exact:
        if x3 == 0:
            return OrbitClass(THETA_EQUATOR, None, rf1, rf2)
        if r2sq == 0:
            return OrbitClass(THETA_POLE, None, rf1, rf2)
        if r2sq == 2 * x3 * x3:
            return OrbitClass(BETA_CIRCLE, None, rf1, rf2)
        return OrbitClass(RESONANT, 3 * x3 / (r2sq - 2 * x3 * x3), rf1, rf2)
    if abs(x3) <= tol:
        return OrbitClass(THETA_EQUATOR, None, rf1, rf2)
    if abs(r2sq) <= tol:
        return OrbitClass(THETA_POLE, None, rf1, rf2)
    if abs(r2sq - 2 * x3 * x3) <= tol:
        return OrbitClass(BETA_CIRCLE, None, rf1, rf2)
    witness = _rational_witness(3 * x3 / (r2sq - 2 * x3 * x3), tol, cap)
    if witness is not None:
        return OrbitClass(RESONANT, witness, rf1, rf2)
    return OrbitClass(NON_CLOSED, None, rf1, rf2)


@dataclass
class FlowResult:
    """Trajectory rows ``(x1, x2, x3, theta)`` at ``times``, plus drift diagnostics.

    ``drift[i]`` is ``max(|x3_i - x3_0|, |r2_i - r2_0|)``.
    """

    times: np.ndarray
    states: np.ndarray
    k: float
    drift: np.ndarray = field(repr=False)
    max_drift_x3: float = 0.0
    max_drift_r2: float = 0.0
    max_drift_sphere: float = 0.0

    @property
    def r2(self) -> np.ndarray:
        return self.states[:, 0] ** 2 + self.states[:, 1] ** 2

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def _rk4_step(y, dt):
    x1, x2, x3, th = y
    k1 = _field(x1, x2, x3)
    a = [y[i] + 0.5 * dt * k1[i] for i in range(4)]
    k2 = _field(a[0], a[1], a[2])
    b = [y[i] + 0.5 * dt * k2[i] for i in range(4)]
    k3 = _field(b[0], b[1], b[2])
    c = [y[i] + dt * k3[i] for i in range(4)]
    k4 = _field(c[0], c[1], c[2])
    return tuple(y[i] + dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]) for i in range(4))


def integrate_flow(s0: ReebState, t_end: float, dt: float = 1e-3) -> FlowResult:
    """Fixed-step classical RK4; the last step is shortened to land on ``t_end``."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_end < 0:
        raise ValueError("t_end must be nonnegative")
    y = (s0.x1, s0.x2, s0.x3, s0.theta)
    n_full = int(math.floor(t_end / dt + 1e-9))
    times = [0.0]
    rows = [y]
    t = 0.0
    for i in range(n_full):
        y = _rk4_step(y, dt)
        t = (i + 1) * dt
        times.append(t)
        rows.append(y)
    rest = t_end - t
    if rest > 1e-12 * max(1.0, t_end):
        y = _rk4_step(y, rest)
        times.append(t_end)
        rows.append(y)
    states = np.array(rows)
    r2 = states[:, 0] ** 2 + states[:, 1] ** 2
    dx3 = np.abs(states[:, 2] - states[0, 2])
    dr2 = np.abs(r2 - r2[0])
    dsph = np.abs(r2 + states[:, 2] ** 2 - (r2[0] + states[0, 2] ** 2))
    drift = np.maximum(dx3, dr2)
    return FlowResult(
        np.array(times),
        states,
        s0.k,
        drift,
        float(dx3.max()),
        float(dr2.max()),
        float(dsph.max()),
    )


CSV_HEADER = ("t", "x1", "x2", "x3", "theta", "r2", "drift")


def write_csv(result: FlowResult, out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    r2 = result.r2
    for t, row, rr, d in zip(result.times, result.states, r2, result.drift):
        w.writerow([repr(float(v)) for v in (t, *row, rr, d)])
