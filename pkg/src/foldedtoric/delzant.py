"""Unfolded Delzant polygons: smoothness at vertices, weights, local cones."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .lattice import (
    AffineMapZ,
    IntVec2,
    LatticeError,
    RatVec2,
    apply_affine,
    cross,
    format_rational,
    primitive,
    rat_vec,
)


class PolygonError(ValueError):
    pass


def signed_area2(points: Sequence[RatVec2]) -> Fraction:
    """Twice the signed area of a closed walk (shoelace)."""
    n = len(points)
    return sum(
        (cross(points[i], points[(i + 1) % n]) for i in range(n)), Fraction(0)
    )


def _on_segment(p, a, b) -> bool:
    return (
        cross((b[0] - a[0], b[1] - a[1]), (p[0] - a[0], p[1] - a[1])) == 0
        and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def segments_intersect(a, b, c, d) -> bool:
    """Closed segments ``ab`` and ``cd`` share at least one point (exact)."""
    d1 = cross((b[0] - a[0], b[1] - a[1]), (c[0] - a[0], c[1] - a[1]))
    d2 = cross((b[0] - a[0], b[1] - a[1]), (d[0] - a[0], d[1] - a[1]))
    d3 = cross((d[0] - c[0], d[1] - c[1]), (a[0] - c[0], a[1] - c[1]))
    d4 = cross((d[0] - c[0], d[1] - c[1]), (b[0] - c[0], b[1] - c[1]))
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and (
        (d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)
    ):
        return True
    return (
        (d1 == 0 and _on_segment(c, a, b))
        or (d2 == 0 and _on_segment(d, a, b))
        or (d3 == 0 and _on_segment(a, c, d))
        or (d4 == 0 and _on_segment(b, c, d))
    )


def is_simple(points: Sequence[RatVec2]) -> bool:
    n = len(points)
    edges = [(points[i], points[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            a, b = edges[i]
            c, d = edges[j]
            if j == i + 1 or (i == 0 and j == n - 1):
                # adjacent edges share exactly one endpoint unless they fold back
                shared = b if j == i + 1 else a
                other_i = a if j == i + 1 else b
                other_j = d if j == i + 1 else c
                u = (other_i[0] - shared[0], other_i[1] - shared[1])
                v = (other_j[0] - shared[0], other_j[1] - shared[1])
                if cross(u, v) == 0 and u[0] * v[0] + u[1] * v[1] > 0:
                    return False
                continue
            if segments_intersect(a, b, c, d):
                return False
    return True


@dataclass(frozen=True)
class DelzantPolygon:
    """A convex lattice polygon given by its boundary walk.

    The walk is stored counterclockwise; a clockwise input is reversed.
    """

    vertices: tuple[RatVec2, ...]

    def __post_init__(self):
        verts = tuple(rat_vec(v) for v in self.vertices)
        if len(verts) < 3:
            raise PolygonError("a polygon needs at least 3 vertices")
        for i in range(len(verts)):
            if verts[i] == verts[(i + 1) % len(verts)]:
                raise PolygonError(f"repeated consecutive vertex {verts[i]}")
        if signed_area2(verts) < 0:
            verts = (verts[0],) + tuple(reversed(verts[1:]))
        object.__setattr__(self, "vertices", verts)

    def __len__(self) -> int:
        return len(self.vertices)

    def transform(self, mu: AffineMapZ) -> "DelzantPolygon":
        return DelzantPolygon(tuple(apply_affine(mu, v) for v in self.vertices))


@dataclass(frozen=True)
class VertexWeights:
    """Primitive outgoing edge directions at a vertex.

    ``edge_dirs[0]`` points along the outgoing edge of the walk and
    ``edge_dirs[1]`` back along the incoming one, so a smooth,
    orientation-preserving corner has ``cross(*edge_dirs) == 1``.
    """

    vertex: RatVec2
    edge_dirs: tuple[IntVec2, IntVec2]

    @property
    def det(self) -> int:
        return cross(*self.edge_dirs)


@dataclass(frozen=True)
class VertexCheck:
    index: int
    vertex: RatVec2
    det: int

    @property
    def ok(self) -> bool:
        return self.det == 1

    def describe(self) -> str:
        x, y = (format_rational(c) for c in self.vertex)
        if self.ok:
            return f"vertex {self.index} ({x}, {y}): ok"
        if self.det == -1:
            why = "unimodular but orientation-reversing (reflex corner)"
        elif self.det < 0:
            why = f"reflex corner, det = {self.det}"
        else:
            why = f"not a Z-basis, |det| = {abs(self.det)}"
        return f"vertex {self.index} ({x}, {y}): {why}"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    checks: tuple = ()
    messages: tuple[str, ...] = ()

    @property
    def failures(self) -> tuple:
        return tuple(c for c in self.checks if not c.ok)

    def __bool__(self) -> bool:
        return self.ok


def corner_weights(prev, here, nxt) -> tuple[IntVec2, IntVec2]:
    try:
        out = primitive((nxt[0] - here[0], nxt[1] - here[1]))
        back = primitive((prev[0] - here[0], prev[1] - here[1]))
    except LatticeError as exc:
        raise PolygonError(str(exc)) from None
    return out, back


def weights_at_vertex(p: DelzantPolygon, i: int) -> VertexWeights:
    n = len(p)
    if not 0 <= i < n:
        raise IndexError(f"vertex index {i} out of range for {n} vertices")
    v = p.vertices
    dirs = corner_weights(v[i - 1], v[i], v[(i + 1) % n])
    return VertexWeights(v[i], dirs)


def validate_delzant(p: DelzantPolygon) -> ValidationReport:
    """Check smoothness and orientation at every vertex.

    Raises :class:`PolygonError` for a self-intersecting walk or a vertex
    whose incident edges are parallel.
    """
    if not is_simple(p.vertices):
        raise PolygonError("self-intersecting polygon")
    checks = []
    for i in range(len(p)):
        w = weights_at_vertex(p, i)
        if w.det == 0:
            raise PolygonError(f"degenerate vertex {i} at {w.vertex}")
        checks.append(VertexCheck(i, w.vertex, w.det))
    checks = tuple(checks)
    return ValidationReport(
        all(c.ok for c in checks), checks, tuple(c.describe() for c in checks)
    )


def morse_index(weights: Sequence[IntVec2], xi) -> int:
    """Twice the number of weights pairing strictly negatively with ``xi``."""
    return 2 * sum(1 for w in weights if w[0] * xi[0] + w[1] * xi[1] < 0)


def cone_coefficients(weights: VertexWeights, probe) -> tuple[Fraction, Fraction]:
    """Solve ``probe - vertex = s1*d1 + s2*d2`` exactly (Cramer's rule)."""
    d1, d2 = weights.edge_dirs
    probe = rat_vec(probe)
    rel = (probe[0] - weights.vertex[0], probe[1] - weights.vertex[1])
    den = cross(d1, d2)
    if den == 0:
        raise PolygonError("edge directions are parallel")
    return Fraction(cross(rel, d2), den), Fraction(cross(d1, rel), den)


def local_cone(weights: VertexWeights, probe) -> bool:
    s1, s2 = cone_coefficients(weights, probe)
    return s1 >= 0 and s2 >= 0
