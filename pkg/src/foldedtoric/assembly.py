"""Chart-by-chart assembly of a toric 4-manifold from a folded Delzant polygon.

An assembled manifold is never built as a global object.  It is a list of
local models (charts), each with a moment region in the plane, together with
overlap strips where the charts must agree.  Agreement is certified by
pulling each chart's native symplectic form back to global action-angle
coordinates ``(p1, theta1, p2, theta2)`` and comparing with the standard
form ``dtheta1^dp1 + dtheta2^dp2``.

The worked example glues a projective plane, a second projective plane of
twice the size with one axis reflected, a strip model and a rotated fold
model into the connected sum of two projective planes.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.stats import qmc

from .folded import FoldedPolygon, Mark, corner, fold, validate_folded_polygon, euler_characteristic
from .lattice import (
    AffineMapZ,
    IntVec2,
    RatVec2,
    cross,
    integral,
    inverse_transpose,
    mat_vec,
    primitive,
    rat_vec,
)
from .local_models import omega_A

FORM_TOL = 1e-9
MOMENT_TOL = 1e-9
COLLAPSE_MARGIN = 1e-6
COMPLEX_STEP = 1e-30
DEFAULT_SAMPLES = 10_000

# standard form in the ordered basis (p1, theta1, p2, theta2)
STANDARD_FORM = np.array(
    [
        [0.0, -1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
    ]
)


class AssemblyError(ValueError):
    pass


# ---------------------------------------------------------------------------
# regions


@dataclass(frozen=True)
class Halfspace:
    """``c1*p1 + c2*p2 < bound`` (or ``<=`` when not strict), exact rationals."""

    c1: Fraction
    c2: Fraction
    bound: Fraction
    strict: bool = True

    def __post_init__(self):
        for name in ("c1", "c2", "bound"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    def holds(self, p: RatVec2) -> bool:
        v = self.c1 * Fraction(p[0]) + self.c2 * Fraction(p[1])
        return v < self.bound if self.strict else v <= self.bound

    def holds_float(self, pts: np.ndarray) -> np.ndarray:
        v = float(self.c1) * pts[..., 0] + float(self.c2) * pts[..., 1]
        return v < float(self.bound) if self.strict else v <= float(self.bound)

    def describe(self) -> str:
        c1, c2, bound, op = self.c1, self.c2, self.bound, "<" if self.strict else "<="
        if (c1 <= 0 and c2 <= 0) or bound < 0:
            c1, c2, bound, op = -c1, -c2, -bound, ">" if self.strict else ">="
        terms = []
        for c, name in ((c1, "p1"), (c2, "p2")):
            if c == 0:
                continue
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            sign = "-" if c < 0 else "+"
            terms.append((sign, f"{mag}{name}"))
        text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, t in terms[1:]:
            text += f" {sign} {t}"
        return f"{text} {op} {bound}"


def lt(c1, c2, bound) -> Halfspace:
    return Halfspace(c1, c2, bound, True)


def le(c1, c2, bound) -> Halfspace:
    return Halfspace(c1, c2, bound, False)


def gt(c1, c2, bound) -> Halfspace:
    return Halfspace(-Fraction(c1), -Fraction(c2), -Fraction(bound), True)


def ge(c1, c2, bound) -> Halfspace:
    return Halfspace(-Fraction(c1), -Fraction(c2), -Fraction(bound), False)


Region = tuple[Halfspace, ...]


def in_region(region: Sequence[Halfspace], pts: np.ndarray) -> np.ndarray:
    mask = np.ones(pts.shape[:-1], bool)
    for h in region:
        mask &= h.holds_float(pts)
    return mask


def region_vertices(region: Sequence[Halfspace], box=((-4.0, 4.0), (-4.0, 4.0))) -> np.ndarray:
    """Corners of the (closure of the) region clipped to ``box``."""
    (x0, x1), (y0, y1) = box
    poly = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
    for h in region:
        c = np.array([float(h.c1), float(h.c2)])
        b = float(h.bound)
        out = []
        for i in range(len(poly)):
            p, q = np.array(poly[i - 1]), np.array(poly[i])
            fp, fq = c @ p - b, c @ q - b
            if fq <= 0:
                if fp > 0:
                    out.append(tuple(p + (q - p) * fp / (fp - fq)))
                out.append(tuple(q))
            elif fp <= 0:
                out.append(tuple(p + (q - p) * fp / (fp - fq)))
        poly = out
        if not poly:
            break
    return np.array(poly, float).reshape(-1, 2)


def region_area(region: Sequence[Halfspace]) -> float:
    v = region_vertices(region)
    if len(v) < 3:
        return 0.0
    x, y = v[:, 0], v[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def _segment_distance(pts: np.ndarray, a, b) -> np.ndarray:
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    d = b - a
    t = np.clip(((pts - a) @ d) / (d @ d), 0.0, 1.0)
    return np.hypot(*(pts - (a + t[..., None] * d)).T)


# ---------------------------------------------------------------------------
# chart models


@dataclass(frozen=True)
class ChartModel:
    """A local model with action-angle coordinates over a region of the plane.

    ``to_native`` maps rows ``(p1, theta1, p2, theta2)`` to the model's own
    coordinates and must be complex-analytic so that its Jacobian can be
    taken by the complex-step method.  ``native_form`` returns the model's
    symplectic matrix at native points; ``moment`` and ``angles`` go back.
    ``collapsed`` lists the plane segments over which some circle collapses.
    """

    name: str
    kind: str
    region: Region
    to_native: Callable[[np.ndarray], np.ndarray]
    native_form: Callable[[np.ndarray], np.ndarray]
    moment: Callable[[np.ndarray], np.ndarray]
    angles: Callable[[np.ndarray], np.ndarray]
    collapsed: tuple = ()

    def contains(self, pts: np.ndarray) -> np.ndarray:
        return in_region(self.region, pts)

    def collapse_distance(self, pts: np.ndarray) -> np.ndarray:
        d = np.full(pts.shape[:-1], np.inf)
        for a, b in self.collapsed:
            d = np.minimum(d, _segment_distance(pts, a, b))
        return d

    def jacobian(self, aa: np.ndarray, h: float = COMPLEX_STEP) -> np.ndarray:
        """``J[n, i, j] = d native_i / d aa_j`` by complex step."""
        aa = np.asarray(aa, float)
        cols = []
        for j in range(4):
            z = aa.astype(complex)
            z[:, j] += 1j * h
            cols.append(np.imag(self.to_native(z)) / h)
        return np.stack(cols, axis=-1)

    def pulled_back_form(self, aa: np.ndarray) -> np.ndarray:
        """The native form expressed in action-angle coordinates."""
        j = self.jacobian(aa)
        w = self.native_form(np.real(self.to_native(np.asarray(aa, float).astype(complex))))
        return np.einsum("nia,nij,njb->nab", j, w, j)


def _wedge(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("...i,...j->...ij", a, b) - np.einsum("...j,...i->...ij", a, b)


def fubini_study_form(x: np.ndarray, scale: float = 1.0) -> np.ndarray:
    """``-scale * i * dd-bar log(1 + |z1|^2 + |z2|^2)`` in real coordinates ``(u1, v1, u2, v2)``.

    With this sign, the moment map ``scale * |z_j|^2 / K`` pairs with the
    angles ``arg z_j`` to give the standard form ``dtheta^dp``.
    """
    x = np.asarray(x, float)
    z = np.stack([x[:, 0] + 1j * x[:, 1], x[:, 2] + 1j * x[:, 3]], axis=-1)
    k = 1.0 + np.sum(np.abs(z) ** 2, axis=-1)
    h = np.eye(2)[None] / k[:, None, None] - np.einsum("nj,nk->njk", np.conj(z), z) / (k**2)[:, None, None]
    dz = np.zeros((2, 4), complex)
    dz[0, 0], dz[0, 1], dz[1, 2], dz[1, 3] = 1, 1j, 1, 1j
    out = np.zeros((len(x), 4, 4), complex)
    for j in range(2):
        for m in range(2):
            out += (-1j * h[:, j, m])[:, None, None] * _wedge(dz[j], np.conj(dz[m]))[None]
    return scale * np.real(out)


def _cp2_chart(name, kind, scale: float, flip_first: bool, form_scale: float, region, collapsed) -> ChartModel:
    s1 = -1.0 if flip_first else 1.0

    def to_native(aa):
        w1 = s1 * aa[:, 0] / scale
        w2 = aa[:, 2] / scale
        d = 1.0 - w1 - w2
        r1 = np.sqrt(w1 / d)
        r2 = np.sqrt(w2 / d)
        t1 = s1 * aa[:, 1]
        t2 = aa[:, 3]
        return np.stack([r1 * np.cos(t1), r1 * np.sin(t1), r2 * np.cos(t2), r2 * np.sin(t2)], axis=-1)

    def moment(x):
        a1 = x[:, 0] ** 2 + x[:, 1] ** 2
        a2 = x[:, 2] ** 2 + x[:, 3] ** 2
        k = 1.0 + a1 + a2
        return np.stack([s1 * scale * a1 / k, scale * a2 / k], axis=-1)

    def angles(x):
        return np.stack([s1 * np.arctan2(x[:, 1], x[:, 0]), np.arctan2(x[:, 3], x[:, 2])], axis=-1)

    return ChartModel(
        name,
        kind,
        region,
        to_native,
        lambda x: fubini_study_form(x, form_scale),
        moment,
        angles,
        collapsed,
    )


def strip_form(x: np.ndarray) -> np.ndarray:
    """``dalpha^dx - 2 du^dv`` on ``S^1 x R x C`` with coordinates ``(alpha, x, u, v)``."""
    m = np.zeros((len(x), 4, 4))
    m[:, 0, 1], m[:, 1, 0] = 1.0, -1.0
    m[:, 2, 3], m[:, 3, 2] = -2.0, 2.0
    return m


def _strip_chart(name, region, collapsed) -> ChartModel:
    def to_native(aa):
        r = np.sqrt(aa[:, 2])
        return np.stack([aa[:, 1], aa[:, 0], r * np.cos(aa[:, 3]), r * np.sin(aa[:, 3])], axis=-1)

    def moment(x):
        return np.stack([x[:, 1], x[:, 2] ** 2 + x[:, 3] ** 2], axis=-1)

    def angles(x):
        return np.stack([x[:, 0], np.arctan2(x[:, 3], x[:, 2])], axis=-1)

    return ChartModel(name, "strip", region, to_native, strip_form, moment, angles, collapsed)


def invert_fold_height(q1, q2, iterations: int = 60):
    """The height ``z`` with ``2 z^3 - 2 q1 z = q2`` and ``z^2 >= q1``.

    On that branch ``z (z^2 - q1)`` is monotone, so Newton's method started
    above the root converges monotonically.  Works on complex input, which
    keeps the complex-step derivative exact.
    """
    q1 = np.asarray(q1)
    q2 = np.asarray(q2)
    s = np.where(np.real(q2) >= 0, 1.0, -1.0)
    z = s * (np.sqrt(np.abs(np.real(q1))) + np.cbrt(np.abs(np.real(q2))) + 1.0) + 0 * q2
    for _ in range(iterations):
        g = 2 * z**3 - 2 * q1 * z - q2
        z = z - g / (6 * z * z - 2 * q1)
    return z


def _fold_chart(name, chart: AffineMapZ, region, collapsed) -> ChartModel:
    lin = np.array(chart.linear, float)
    lin_inv = np.linalg.inv(lin)
    off = np.array([float(c) for c in chart.offset])
    lin_it = np.array(integral(inverse_transpose(chart.linear)), float)

    def to_native(aa):
        p = np.stack([aa[:, 0], aa[:, 2]], axis=-1)
        th = np.stack([aa[:, 1], aa[:, 3]], axis=-1)
        q = (p - off) @ lin_inv.T
        t_loc = th @ lin_it  # = lin^T theta, the inverse of theta -> lin^{-T} theta
        z = invert_fold_height(q[:, 0], q[:, 1])
        r = np.sqrt(2 * (z * z - q[:, 0]))
        alpha = -t_loc[:, 0]
        phi = t_loc[:, 1]
        return np.stack([alpha, r * np.cos(phi), r * np.sin(phi), z], axis=-1)

    def moment(x):
        r2 = x[:, 1] ** 2 + x[:, 2] ** 2
        q = np.stack([x[:, 3] ** 2 - 0.5 * r2, x[:, 3] * r2], axis=-1)
        return q @ lin.T + off

    def angles(x):
        t_loc = np.stack([-x[:, 0], np.arctan2(x[:, 2], x[:, 1])], axis=-1)
        return t_loc @ lin_it.T

    return ChartModel(name, "fold", region, to_native, lambda x: omega_A(x), moment, angles, collapsed)


# ---------------------------------------------------------------------------
# orbit labels


FREE = "free-T2"
CIRCLE = "circle"
FIXED = "fixed"


@dataclass(frozen=True)
class OrbitLabel:
    kind: str
    stabilizer: Optional[IntVec2] = None

    def __post_init__(self):
        if self.kind == CIRCLE:
            if self.stabilizer is None:
                raise AssemblyError("circle label needs a stabilizer")
            object.__setattr__(self, "stabilizer", canonical_direction(self.stabilizer))

    def describe(self) -> str:
        if self.kind == CIRCLE:
            return f"circle{self.stabilizer}"
        return self.kind


def canonical_direction(v) -> IntVec2:
    """Primitive representative of ``+-v`` whose first nonzero entry is positive."""
    a, b = primitive(v)
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
    return (a, b)


def edge_stabilizer(start, end) -> IntVec2:
    """Circle that collapses over an edge: the annihilator of the edge direction."""
    d = primitive((Fraction(end[0]) - Fraction(start[0]), Fraction(end[1]) - Fraction(start[1])))
    return canonical_direction((-d[1], d[0]))


def fold_stabilizer(chart: AffineMapZ) -> IntVec2:
    """Circle that collapses over a fold: the chart's ``A^{-T} e2``.

    The standard fold collapses the second circle over its boundary ray
    ``A e1``, and ``A^{-T} e2`` is exactly the direction annihilating it.
    """
    return canonical_direction(mat_vec(integral(inverse_transpose(chart.linear)), (0, 1)))


def _on_segment(p, a, b) -> bool:
    return (
        cross((b[0] - a[0], b[1] - a[1]), (p[0] - a[0], p[1] - a[1])) == 0
        and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def winding_number(loop: Sequence[RatVec2], p: RatVec2) -> int:
    """Exact winding number of a closed walk around ``p`` (not on the walk)."""
    w = 0
    n = len(loop)
    for i in range(n):
        a, b = loop[i], loop[(i + 1) % n]
        side = cross((b[0] - a[0], b[1] - a[1]), (p[0] - a[0], p[1] - a[1]))
        if a[1] <= p[1] < b[1] and side > 0:
            w += 1
        elif b[1] <= p[1] < a[1] and side < 0:
            w -= 1
    return w


def collapse_label(p: FoldedPolygon, point) -> OrbitLabel:
    """Orbit type over ``point`` of B, read off from its image.

    Corners are fixed points; edge points and folds carry a collapsed
    circle; points enclosed by the walk are free orbits.
    """
    q = rat_vec(point)
    for m in p.marks:
        if m.point == q:
            if m.kind is Mark.CORNER:
                return OrbitLabel(FIXED)
            return OrbitLabel(CIRCLE, fold_stabilizer(m.chart))
    for _, a, b in p.edges():
        if _on_segment(q, a, b):
            return OrbitLabel(CIRCLE, edge_stabilizer(a, b))
    total = sum(winding_number([m.point for m in loop], q) for loop in p.boundary_loops)
    if total > 0:
        return OrbitLabel(FREE)
    raise AssemblyError(f"point {point} is not on B")


def transport_label(label: OrbitLabel, mu: AffineMapZ) -> OrbitLabel:
    """Image of a label under relabeling the plane by ``mu``."""
    if label.kind != CIRCLE:
        return label
    return OrbitLabel(CIRCLE, mat_vec(integral(inverse_transpose(mu.linear)), label.stabilizer))


def winding_numbers_float(loop: np.ndarray, pts: np.ndarray) -> np.ndarray:
    w = np.zeros(len(pts), int)
    n = len(loop)
    for i in range(n):
        a, b = loop[i], loop[(i + 1) % n]
        side = (b[0] - a[0]) * (pts[:, 1] - a[1]) - (b[1] - a[1]) * (pts[:, 0] - a[0])
        up = (a[1] <= pts[:, 1]) & (pts[:, 1] < b[1]) & (side > 0)
        down = (b[1] <= pts[:, 1]) & (pts[:, 1] < a[1]) & (side < 0)
        w += up.astype(int) - down.astype(int)
    return w


def boundary_distance(p: FoldedPolygon, pts: np.ndarray) -> np.ndarray:
    d = np.full(len(pts), np.inf)
    for _, a, b in p.edges():
        d = np.minimum(d, _segment_distance(pts, [float(c) for c in a], [float(c) for c in b]))
    return d


# ---------------------------------------------------------------------------
# overlap checks


@dataclass(frozen=True)
class Overlap:
    """A strip of the plane on which every pair of listed charts is compared."""

    name: str
    charts: tuple[str, ...]
    region: Region

    def pairs(self):
        for i in range(len(self.charts)):
            for j in range(i + 1, len(self.charts)):
                yield self.charts[i], self.charts[j]


@dataclass
class OverlapReport:
    charts: tuple[str, str]
    region: str
    requested: int
    checked: int
    skipped: int
    max_form_defect: float
    max_moment_defect: float
    max_angle_defect: float
    notes: list[str] = field(default_factory=list)
    strip: str = ""

    @property
    def ok(self) -> bool:
        return (
            self.checked > 0
            and self.max_form_defect <= FORM_TOL
            and self.max_moment_defect <= MOMENT_TOL
            and self.max_angle_defect <= MOMENT_TOL
        )

    def describe(self) -> str:
        verdict = "pass" if self.ok else "fail"
        return (
            f"{self.charts[0]}~{self.charts[1]} on {self.region}: {verdict} "
            f"(checked {self.checked}, skipped {self.skipped}, "
            f"form {self.max_form_defect:.3e}, moment {self.max_moment_defect:.3e})"
        )


def sample_region(region: Sequence[Halfspace], n: int, batch: int = 4096) -> np.ndarray:
    """``n`` deterministic quasi-random rows ``(p1, theta1, p2, theta2)`` with ``p`` in the region.

    Uses an unscrambled Halton sequence over the region's bounding box and
    keeps the points that land inside.
    """
    verts = region_vertices(region)
    if len(verts) < 3:
        raise AssemblyError("overlap region is empty")
    lo, hi = verts.min(axis=0), verts.max(axis=0)
    gen = qmc.Halton(d=4, scramble=False)
    out = []
    have = 0
    while have < n:
        u = gen.random(batch)
        p = lo + u[:, :2] * (hi - lo)
        keep = in_region(region, p)
        rows = np.column_stack([p[keep, 0], 2 * math.pi * u[keep, 2], p[keep, 1], 2 * math.pi * u[keep, 3]])
        out.append(rows)
        have += len(rows)
    return np.concatenate(out)[:n]


def _angle_gap(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = np.mod(a - b + math.pi, 2 * math.pi) - math.pi
    return np.abs(d)


def check_chart(chart: ChartModel, aa: np.ndarray):
    """Per-sample form, moment and angle defects of one chart at action-angle points."""
    pulled = chart.pulled_back_form(aa)
    form = np.max(np.abs(pulled - STANDARD_FORM), axis=(1, 2))
    native = np.real(chart.to_native(aa.astype(complex)))
    mom = np.max(np.abs(chart.moment(native) - aa[:, [0, 2]]), axis=1)
    ang = np.max(_angle_gap(chart.angles(native), aa[:, [1, 3]]), axis=1)
    return form, mom, ang


def _region_text(region: Sequence[Halfspace]) -> str:
    return ", ".join(h.describe() for h in region)


def verify_overlap(
    a: ChartModel,
    b: ChartModel,
    region: Sequence[Halfspace],
    samples: int = DEFAULT_SAMPLES,
    margin: float = COLLAPSE_MARGIN,
) -> OverlapReport:
    """Check that two charts present the same symplectic manifold over ``region``.

    Samples are drawn from ``region`` intersected with both chart regions.
    Each chart's native form, pulled back to the shared action-angle
    coordinates, must equal the standard form to ``FORM_TOL``, and each
    chart must reproduce the sampled moment values and angles.  Samples
    within ``margin`` of a collapsed locus are skipped and counted.
    """
    full = tuple(region) + tuple(a.region) + tuple(b.region)
    aa = sample_region(full, samples)
    p = aa[:, [0, 2]]
    near = (a.collapse_distance(p) < margin) | (b.collapse_distance(p) < margin)
    aa = aa[~near]
    notes = []
    if near.any():
        notes.append(f"{int(near.sum())} samples within {margin} of a collapsed locus skipped")
    if len(aa) == 0:
        return OverlapReport((a.name, b.name), _region_text(region), samples, 0, int(near.sum()), math.inf, math.inf, math.inf, notes)
    fa, ma, ta = check_chart(a, aa)
    fb, mb, tb = check_chart(b, aa)
    return OverlapReport(
        (a.name, b.name),
        _region_text(region),
        samples,
        len(aa),
        int(near.sum()),
        float(max(fa.max(), fb.max())),
        float(max(ma.max(), mb.max())),
        float(max(ta.max(), tb.max())),
        notes,
    )


# ---------------------------------------------------------------------------
# the worked example


FOLD_CHART = AffineMapZ(((0, -1), (1, 0)), (0, Fraction(1, 2)))
CUT_OUTER = Fraction(5, 8)
CUT_PATCH = Fraction(3, 4)
STRIP_HEIGHT = Fraction(3, 8)
FOLD_FLOOR = Fraction(1, 4)


@dataclass
class AssembledExample:
    charts: list[ChartModel]
    overlaps: list[Overlap]
    polygon: FoldedPolygon
    patch_region: Region = ()

    def chart(self, name: str) -> ChartModel:
        for c in self.charts:
            if c.name == name:
                return c
        raise KeyError(name)


def cp2cp2_polygon() -> FoldedPolygon:
    """Image walk of the example: the big triangle's corners, the small one's, and the fold."""
    return FoldedPolygon(
        (
            (
                corner(-2, 0),
                corner(1, 0),
                corner(0, 1),
                fold(0, Fraction(1, 2), FOLD_CHART.linear, FOLD_CHART.offset),
                corner(0, 2),
            ),
        )
    )


def _charts(b_form_scale: float = 2.0) -> list[ChartModel]:
    m_a = _cp2_chart(
        "M_A",
        "cp2",
        1.0,
        False,
        1.0,
        (ge(1, 0, 0), ge(0, 1, 0), lt(1, 1, 1), gt(1, 1, CUT_OUTER)),
        (((0, 0), (1, 0)), ((0, 0), (0, 1)), ((1, 0), (0, 1))),
    )
    m_b = _cp2_chart(
        "M_B",
        "cp2-scaled",
        2.0,
        True,
        b_form_scale,
        (le(1, 0, 0), ge(0, 1, 0), lt(-1, 1, 2), gt(-1, 1, CUT_OUTER)),
        (((0, 0), (-2, 0)), ((0, 0), (0, 2)), ((-2, 0), (0, 2))),
    )
    m_c = _strip_chart(
        "M_C",
        (ge(0, 1, 0), lt(0, 1, STRIP_HEIGHT), lt(1, 1, CUT_PATCH), lt(-1, 1, CUT_PATCH)),
        (((-1, 0), (1, 0)),),
    )
    m_d = _fold_chart(
        "M_D",
        FOLD_CHART,
        (gt(0, 1, FOLD_FLOOR), lt(1, 1, CUT_PATCH), lt(-1, 1, CUT_PATCH)),
        (((0, 0.5), (0, 1)),),
    )
    return [m_a, m_b, m_c, m_d]


def build_cp2cp2_example() -> AssembledExample:
    """Four charts, three overlap strips and the folded polygon of the connected sum."""
    overlaps = [
        Overlap("outer-right", ("M_A", "M_C", "M_D"), (gt(1, 1, CUT_OUTER), lt(1, 1, CUT_PATCH))),
        Overlap("outer-left", ("M_B", "M_C", "M_D"), (gt(-1, 1, CUT_OUTER), lt(-1, 1, CUT_PATCH))),
        Overlap("inner", ("M_C", "M_D"), (gt(0, 1, FOLD_FLOOR), lt(0, 1, STRIP_HEIGHT))),
    ]
    patch = (ge(0, 1, 0), lt(1, 1, CUT_PATCH), lt(-1, 1, CUT_PATCH))
    return AssembledExample(_charts(), overlaps, cp2cp2_polygon(), patch)


def misscaled_control(samples: int = DEFAULT_SAMPLES) -> OverlapReport:
    """The enlarged projective plane with its form left at scale 1, against the fold chart."""
    charts = {c.name: c for c in _charts(b_form_scale=1.0)}
    return verify_overlap(
        charts["M_B"], charts["M_D"], (gt(-1, 1, CUT_OUTER), lt(-1, 1, CUT_PATCH)), samples
    )


@dataclass
class PatchReport:
    edges: list[tuple[str, RatVec2, IntVec2]]
    all_primitive: bool
    unimodular: bool
    standard_factors: bool

    @property
    def ok(self) -> bool:
        return self.all_primitive and self.unimodular and self.standard_factors


def patch_topology_report(e: AssembledExample) -> PatchReport:
    """Collapse directions along the connecting patch's two boundary pieces.

    The patch is the part of the plane covered by the strip and fold
    models.  Its lower edge lies on the long bottom edge of the polygon and
    its upper boundary is the folded ray; the circles collapsing there must
    be the two coordinate circles, which makes the patch a product
    ``S^3 x [0, 1]`` and the gluing a connected sum.
    """
    bottom = (Fraction(0), Fraction(0))
    ray = (Fraction(0), (CUT_PATCH + Fraction(1, 2)) / 2)
    for pt in (bottom, ray):
        if not all(Halfspace(h.c1, h.c2, h.bound, False).holds(pt) for h in e.patch_region):
            raise AssemblyError(f"patch sample {pt} left the patch region")
    labels = [
        ("bottom-edge", bottom, collapse_label(e.polygon, bottom)),
        ("folded-ray", ray, collapse_label(e.polygon, ray)),
    ]
    edges = []
    for name, pt, lab in labels:
        if lab.kind != CIRCLE:
            raise AssemblyError(f"patch boundary point {pt} is not on a collapsed circle")
        edges.append((name, pt, lab.stabilizer))
    dirs = [d for _, _, d in edges]
    prim = all(primitive(d) == d for d in dirs)
    unimod = abs(cross(dirs[0], dirs[1])) == 1
    std = {canonical_direction(d) for d in dirs} == {(1, 0), (0, 1)}
    return PatchReport(edges, prim, unimod, std)


@dataclass
class CoverageReport:
    samples: int
    uncovered: int
    multi_outside_overlaps: int

    @property
    def ok(self) -> bool:
        return self.uncovered == 0 and self.multi_outside_overlaps == 0


def coverage_report(e: AssembledExample, samples: int = DEFAULT_SAMPLES, margin: float = COLLAPSE_MARGIN) -> CoverageReport:
    """Every free orbit lies in some chart, and shared points lie in a listed overlap."""
    loops = [np.array([[float(c) for c in m.point] for m in loop]) for loop in e.polygon.boundary_loops]
    allv = np.concatenate(loops)
    lo, hi = allv.min(axis=0), allv.max(axis=0)
    gen = qmc.Halton(d=2, scramble=False)
    pts = lo + gen.random(samples) * (hi - lo)
    wind = sum(winding_numbers_float(l, pts) for l in loops)
    free = (wind > 0) & (boundary_distance(e.polygon, pts) > margin)
    pts = pts[free]
    member = np.stack([c.contains(pts) for c in e.charts], axis=1)
    uncovered = int(np.sum(~member.any(axis=1)))
    names = [c.name for c in e.charts]
    bad = 0
    for i, j in ((i, j) for i in range(len(names)) for j in range(i + 1, len(names))):
        both = member[:, i] & member[:, j]
        if not both.any():
            continue
        listed = np.zeros(len(pts), bool)
        for ov in e.overlaps:
            if names[i] in ov.charts and names[j] in ov.charts:
                listed |= in_region(ov.region, pts)
        bad += int(np.sum(both & ~listed))
    return CoverageReport(len(pts), uncovered, bad)


@dataclass
class ExampleReport:
    charts: int
    overlaps: int
    overlap_reports: list[OverlapReport]
    polygon_ok: bool
    polygon_messages: tuple[str, ...]
    corners: int
    control: OverlapReport
    patch: PatchReport
    coverage: CoverageReport
    seconds: float

    @property
    def ok(self) -> bool:
        return (
            self.charts == 4
            and self.overlaps == 3
            and all(r.ok for r in self.overlap_reports)
            and self.polygon_ok
            and self.corners == 4
            and not self.control.ok
            and self.patch.ok
            and self.coverage.ok
        )

    def lines(self) -> list[str]:
        out = [
            f"charts: {self.charts}",
            f"overlaps: {self.overlaps}",
            f"overlap_checks: {len(self.overlap_reports)}",
        ]
        for r in self.overlap_reports:
            out.append(f"overlap {r.strip} {r.charts[0]}~{r.charts[1]}: {'pass' if r.ok else 'fail'} ({r.checked} checked, {r.skipped} skipped)")
        out += [
            f"polygon_valid: {'true' if self.polygon_ok else 'false'}",
            f"corners: {self.corners}",
            f"euler_characteristic: {self.corners}",
            f"misscaled_control: {'pass' if self.control.ok else 'fail'} (expected fail)",
            "patch_collapse: " + ", ".join(f"{n}={d}" for n, _, d in self.patch.edges),
            f"patch_unimodular: {'true' if self.patch.unimodular else 'false'}",
            f"patch_standard_factors: {'true' if self.patch.standard_factors else 'false'}",
            f"coverage: {self.coverage.samples} free samples, {self.coverage.uncovered} uncovered",
            f"result: {'pass' if self.ok else 'fail'}",
        ]
        return out


def verify_example(e: Optional[AssembledExample] = None, samples: int = DEFAULT_SAMPLES) -> ExampleReport:
    start = time.perf_counter()
    e = e or build_cp2cp2_example()
    reports = []
    for ov in e.overlaps:
        for a, b in ov.pairs():
            rep = verify_overlap(e.chart(a), e.chart(b), ov.region, samples)
            rep.strip = ov.name
            reports.append(rep)
    val = validate_folded_polygon(e.polygon)
    control = misscaled_control(samples)
    return ExampleReport(
        len(e.charts),
        len(e.overlaps),
        reports,
        val.ok,
        val.messages,
        euler_characteristic(e.polygon),
        control,
        patch_topology_report(e),
        coverage_report(e, samples),
        time.perf_counter() - start,
    )
