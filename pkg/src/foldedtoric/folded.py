"""Folded Delzant polygons (B, F, phi) described by their boundary image walks.

B itself is never built.  A polygon is one outer walk plus optional inner
walks in the target plane, each a cyclic list of corner and fold marks, with
an explicit integral affine chart per fold as the witness that the map is a
standard fold there.  Walks keep B on the left.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .delzant import PolygonError, ValidationReport, VertexCheck, corner_weights
from .lattice import (
    AffineMapZ,
    RatVec2,
    apply_affine,
    cross,
    format_rational,
    mat_vec,
    primitive,
    rat_vec,
)

FOLD_TOL = 1e-9


class Mark(str, enum.Enum):
    CORNER = "corner"
    FOLD = "fold"


@dataclass(frozen=True)
class MarkedPoint:
    kind: Mark
    point: RatVec2
    chart: Optional[AffineMapZ] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Mark(self.kind))
        object.__setattr__(self, "point", rat_vec(self.point))
        if self.kind is Mark.FOLD and self.chart is None:
            raise PolygonError(f"fold at {_pt(self.point)} has no chart")
        if self.kind is Mark.CORNER and self.chart is not None:
            raise PolygonError(f"corner at {_pt(self.point)} carries a chart")


def corner(x, y) -> MarkedPoint:
    return MarkedPoint(Mark.CORNER, (x, y))


def fold(x, y, linear, offset) -> MarkedPoint:
    return MarkedPoint(Mark.FOLD, (x, y), AffineMapZ(linear, offset))


@dataclass(frozen=True)
class FoldChart:
    fold_point: RatVec2
    chart: AffineMapZ


@dataclass(frozen=True)
class FoldMapSample:
    domain_point: tuple[float, float]
    image_point: tuple[float, float]


def _pt(p) -> str:
    return f"({format_rational(p[0])}, {format_rational(p[1])})"


def _neighbors(loop, i):
    n = len(loop)
    return loop[i - 1].point, loop[i].point, loop[(i + 1) % n].point


@dataclass(frozen=True)
class FoldedPolygon:
    """``boundary_loops[0]`` is the outer walk; the rest bound holes."""

    boundary_loops: tuple[tuple[MarkedPoint, ...], ...]

    def __post_init__(self):
        loops = tuple(tuple(loop) for loop in self.boundary_loops)
        if not loops:
            raise PolygonError("at least one boundary loop is required")
        for li, loop in enumerate(loops):
            if len(loop) < 2:
                raise PolygonError(f"loop {li} has fewer than 2 marks")
            for i in range(len(loop)):
                if loop[i].point == loop[(i + 1) % len(loop)].point:
                    raise PolygonError(f"loop {li}: repeated consecutive point {_pt(loop[i].point)}")
            if all(m.kind is Mark.CORNER for m in loop) and len(loop) < 3:
                raise PolygonError(f"loop {li} has fewer than 3 corners")
            for i, m in enumerate(loop):
                if m.kind is not Mark.FOLD:
                    continue
                prev, here, nxt = _neighbors(loop, i)
                d_in = (here[0] - prev[0], here[1] - prev[1])
                d_out = (nxt[0] - here[0], nxt[1] - here[1])
                if cross(d_in, d_out) != 0:
                    raise PolygonError(f"fold on corner forbidden (loop {li}, mark {i} at {_pt(here)})")
                if d_in[0] * d_out[0] + d_in[1] * d_out[1] > 0:
                    raise PolygonError(
                        f"fold at {_pt(here)} does not double back (loop {li}, mark {i})"
                    )
        object.__setattr__(self, "boundary_loops", loops)

    @classmethod
    def from_corners(cls, vertices: Sequence) -> "FoldedPolygon":
        return cls(((tuple(MarkedPoint(Mark.CORNER, v) for v in vertices)),))

    @property
    def marks(self) -> tuple[MarkedPoint, ...]:
        return tuple(m for loop in self.boundary_loops for m in loop)

    @property
    def corners(self) -> tuple[RatVec2, ...]:
        return tuple(m.point for m in self.marks if m.kind is Mark.CORNER)

    @property
    def fold_charts(self) -> tuple[FoldChart, ...]:
        return tuple(FoldChart(m.point, m.chart) for m in self.marks if m.kind is Mark.FOLD)

    def edges(self):
        """Yield ``(loop_index, start, end)`` for every walk segment."""
        for li, loop in enumerate(self.boundary_loops):
            for i in range(len(loop)):
                yield li, loop[i].point, loop[(i + 1) % len(loop)].point

    def transform(self, mu: AffineMapZ) -> "FoldedPolygon":
        """Post-compose everything with ``mu``.

        Charts become ``mu ∘ chart``.  An orientation-reversing ``mu`` also
        reverses each walk so that B stays on the left.
        """
        loops = []
        for loop in self.boundary_loops:
            new = [
                MarkedPoint(m.kind, apply_affine(mu, m.point), mu.compose(m.chart) if m.chart else None)
                for m in loop
            ]
            if mu.det < 0:
                new = [new[0]] + new[:0:-1]
            loops.append(tuple(new))
        return FoldedPolygon(tuple(loops))


@dataclass(frozen=True)
class FoldCheck:
    loop: int
    index: int
    point: RatVec2
    problems: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.problems

    def describe(self) -> str:
        x, y = (format_rational(c) for c in self.point)
        head = f"loop {self.loop} fold {self.index} ({x}, {y})"
        return f"{head}: ok" if self.ok else f"{head}: " + "; ".join(self.problems)


@dataclass(frozen=True)
class CornerCheck(VertexCheck):
    loop: int = 0

    def describe(self) -> str:
        return f"loop {self.loop} " + super().describe().replace("vertex", "corner", 1)


def _check_fold(li: int, i: int, loop) -> FoldCheck:
    prev, here, nxt = _neighbors(loop, i)
    chart = loop[i].chart
    problems = []
    if apply_affine(chart, (0, 0)) != here:
        problems.append("chart does not send the fold origin to the fold point")
    ray = primitive(mat_vec(chart.linear, (1, 0)))
    out_dir = primitive((nxt[0] - here[0], nxt[1] - here[1]))
    in_dir = primitive((prev[0] - here[0], prev[1] - here[1]))
    if out_dir != ray or in_dir != ray:
        problems.append(
            f"boundary ray {out_dir} does not match the chart's folded ray {ray}"
        )
    return FoldCheck(li, i, here, tuple(problems))


def validate_folded_polygon(p: FoldedPolygon) -> ValidationReport:
    """Corners must be smooth and orientation-preserving; folds must match their charts.

    Overlapping images away from the folds are allowed and not examined.
    """
    checks = []
    for li, loop in enumerate(p.boundary_loops):
        for i, m in enumerate(loop):
            if m.kind is Mark.CORNER:
                prev, here, nxt = _neighbors(loop, i)
                d = cross(*corner_weights(prev, here, nxt))
                checks.append(CornerCheck(i, here, d, loop=li))
            else:
                checks.append(_check_fold(li, i, loop))
    checks = tuple(checks)
    return ValidationReport(
        all(c.ok for c in checks), checks, tuple(c.describe() for c in checks)
    )


def euler_characteristic(p: FoldedPolygon) -> int:
    """Number of corners, i.e. of torus-fixed points of the assembled manifold."""
    return sum(1 for m in p.marks if m.kind is Mark.CORNER)


# ---------------------------------------------------------------------------
# the standard fold


def _fold_formula(x1, x2):
    return x1 * x1 - 0.5 * x2, x1 * x2


def standard_fold(x1, x2):
    """``(x1, x2) -> (x1^2 - x2/2, x1*x2)`` on the closed upper half-plane."""
    if np.any(np.asarray(x2) < 0):
        raise ValueError("standard fold is defined only for x2 >= 0")
    return _fold_formula(x1, x2)


def chart_fold(chart: AffineMapZ, x1, x2, base_map: Optional[Callable] = None):
    """``chart ∘ base_map`` evaluated in floating point (vectorized)."""
    base = base_map or _fold_formula
    q1, q2 = base(np.asarray(x1, float), np.asarray(x2, float))
    a = np.array(chart.linear, float)
    b = np.array([float(c) for c in chart.offset])
    return a[0, 0] * q1 + a[0, 1] * q2 + b[0], a[1, 0] * q1 + a[1, 1] * q2 + b[1]


def fold_samples(chart: AffineMapZ, points) -> list[FoldMapSample]:
    out = []
    for x1, x2 in points:
        if x2 < 0:
            raise ValueError("fold samples must have x2 >= 0")
        p1, p2 = chart_fold(chart, x1, x2)
        out.append(FoldMapSample((float(x1), float(x2)), (float(p1), float(p2))))
    return out


@dataclass
class FoldPropertyReport:
    ok: bool
    origin_ok: bool
    boundary_ok: bool
    injective_ok: bool
    avoids_ray_ok: bool
    immersion_ok: bool
    ray_origin: tuple[float, float]
    ray_direction: tuple[int, int]
    failures: list[str] = field(default_factory=list)


def validate_fold_properties(
    chart: AffineMapZ,
    grid: int = 50,
    *,
    box=((-2.0, 2.0), (0.0, 2.0)),
    base_map: Optional[Callable] = None,
    tol: float = FOLD_TOL,
    h: float = 1e-5,
    rank_tol: float = 1e-6,
) -> FoldPropertyReport:
    """Grid check of the fold properties for ``chart ∘ base_map``.

    ``base_map`` defaults to the standard fold; passing another map is how
    negative controls are run.
    """
    base = base_map or _fold_formula
    a = np.array(chart.linear, float)
    a_inv = np.linalg.inv(a)
    b = np.array([float(c) for c in chart.offset])
    failures: list[str] = []

    def image(x1, x2):
        return np.stack(chart_fold(chart, x1, x2, base), axis=-1)

    def local(pts):
        # coordinates relative to the folded ray: ray is {q2 = 0, q1 > 0}
        return (pts - b) @ a_inv.T

    xs = np.linspace(box[0][0], box[0][1], grid)
    ys = np.linspace(box[1][0], box[1][1], grid)
    X1, X2 = np.meshgrid(xs, ys, indexing="ij")

    origin = image(0.0, 0.0)
    origin_ok = bool(np.max(np.abs(origin - b)) <= tol)
    if not origin_ok:
        failures.append(f"fold origin maps to {origin.tolist()}, expected {b.tolist()}")

    boundary_ok = True
    for sign in (-1, 1):
        half = np.sort(sign * xs[sign * xs > 0])
        if half.size == 0:
            continue
        q = local(image(sign * half, np.zeros_like(half)))
        if np.any(np.abs(q[:, 1]) > tol) or np.any(q[:, 0] <= 0):
            boundary_ok = False
            failures.append(f"boundary half x1{'<' if sign < 0 else '>'}0 leaves the folded ray")
        elif np.any(np.diff(q[:, 0]) <= 0):
            boundary_ok = False
            failures.append("boundary half is not mapped monotonically onto the ray")

    interior = X2 > 0
    pts = image(X1[interior], X2[interior])
    pairs = cKDTree(pts).query_pairs(r=tol)
    injective_ok = not pairs
    if not injective_ok:
        i, j = sorted(pairs)[0]
        d = np.stack([X1[interior], X2[interior]], axis=-1)
        failures.append(
            f"not injective on x2>0: {len(pairs)} colliding pairs, e.g. "
            f"{tuple(np.round(d[i], 6))} and {tuple(np.round(d[j], 6))}"
        )
    q = local(pts)
    on_ray = (np.abs(q[:, 1]) <= tol) & (q[:, 0] >= -tol)
    avoids_ray_ok = not bool(np.any(on_ray))
    if not avoids_ray_ok:
        failures.append(f"{int(on_ray.sum())} interior samples land on the folded ray")

    # central-difference Jacobian at every grid point except the fold origin
    f = lambda u, v: np.stack(base(u, v), axis=-1) @ a.T  # noqa: E731
    j1 = (f(X1 + h, X2) - f(X1 - h, X2)) / (2 * h)
    j2 = (f(X1, X2 + h) - f(X1, X2 - h)) / (2 * h)
    jac = np.stack([j1, j2], axis=-1)
    smin = np.linalg.svd(jac, compute_uv=False)[..., -1]
    not_origin = (X1 != 0) | (X2 != 0)
    bad = not_origin & (smin <= rank_tol)
    immersion_ok = not bool(np.any(bad))
    if not immersion_ok:
        failures.append(f"Jacobian rank drops at {int(bad.sum())} sample points")

    ok = origin_ok and boundary_ok and injective_ok and avoids_ray_ok and immersion_ok
    return FoldPropertyReport(
        ok,
        origin_ok,
        boundary_ok,
        injective_ok,
        avoids_ray_ok,
        immersion_ok,
        (float(b[0]), float(b[1])),
        primitive(mat_vec(chart.linear, (1, 0))),
        failures,
    )


# ---------------------------------------------------------------------------
# SVG rendering


@dataclass(frozen=True)
class SvgOptions:
    width: int = 480
    margin: float = 0.1
    stroke_width: Optional[float] = None
    corner_radius: Optional[float] = None
    fold_offset: Optional[float] = None


def _fmt(x: float) -> str:
    s = f"{x:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def render_image(p: FoldedPolygon, options: Optional[SvgOptions] = None) -> str:
    """SVG 1.1 drawing of phi(B): corners, then edges, then folds, in walk order.

    A fold is drawn as two short parallel strokes on either side of the
    doubled ray, since the two boundary edges there coincide.
    """
    opt = options or SvgOptions()
    pts = [tuple(float(c) for c in m.point) for m in p.marks]
    xs = [x for x, _ in pts]
    ys = [y for _, y in pts]
    w = max(xs) - min(xs)
    h = max(ys) - min(ys)
    span = max(w, h) or 1.0
    pad = opt.margin * span
    minx, maxx = min(xs) - pad, max(xs) + pad
    miny, maxy = min(ys) - pad, max(ys) + pad
    vw, vh = maxx - minx, maxy - miny
    stroke = opt.stroke_width or span / 200
    radius = opt.corner_radius or span / 80
    offset = opt.fold_offset or span / 100
    height = int(round(opt.width * vh / vw))

    def xy(pt):
        # flip y so that the plane's orientation is preserved on screen
        return _fmt(pt[0]), _fmt(-pt[1])

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        (
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{opt.width}" height="{height}" '
            f'viewBox="{_fmt(minx)} {_fmt(-maxy)} {_fmt(vw)} {_fmt(vh)}">'
        ),
        f'<g class="corners" fill="black">',
    ]
    for m in p.marks:
        if m.kind is Mark.CORNER:
            cx, cy = xy([float(c) for c in m.point])
            lines.append(f'<circle class="corner" cx="{cx}" cy="{cy}" r="{_fmt(radius)}"/>')
    lines.append("</g>")
    lines.append(f'<g class="edges" stroke="black" stroke-width="{_fmt(stroke)}" fill="none">')
    for _, a, b in p.edges():
        (x1, y1), (x2, y2) = xy([float(c) for c in a]), xy([float(c) for c in b])
        lines.append(f'<line class="edge" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
    lines.append("</g>")
    lines.append(f'<g class="folds" stroke="black" stroke-width="{_fmt(stroke)}" fill="none">')
    for li, loop in enumerate(p.boundary_loops):
        for i, m in enumerate(loop):
            if m.kind is not Mark.FOLD:
                continue
            _, here, nxt = _neighbors(loop, i)
            prev = loop[i - 1].point
            d = np.array([float(nxt[0] - here[0]), float(nxt[1] - here[1])])
            length = 0.5 * min(
                np.hypot(*d), np.hypot(float(prev[0] - here[0]), float(prev[1] - here[1]))
            )
            d /= np.hypot(*d)
            nrm = np.array([-d[1], d[0]])
            o = np.array([float(c) for c in here])
            lines.append('<g class="fold">')
            for s in (1, -1):
                a = o + s * offset * nrm
                b = a + length * d
                (x1, y1), (x2, y2) = xy(a), xy(b)
                lines.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
            lines.append("</g>")
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
