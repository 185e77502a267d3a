"""Exact integer and rational linear algebra in dimension two.

Rationals are :class:`fractions.Fraction`; integer vectors and matrices are
plain tuples so they hash and compare exactly.  Nothing here touches floats.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

Rational = Fraction
IntVec2 = Tuple[int, int]
IntMat2 = Tuple[Tuple[int, int], Tuple[int, int]]
RatVec2 = Tuple[Fraction, Fraction]
RatMat2 = Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]

RationalLike = Union[int, str, Fraction]

_RATIONAL_RE = re.compile(r"^-?\d+(?:/\d+)?$")


class LatticeError(ValueError):
    pass


def as_rational(value: RationalLike) -> Fraction:
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise TypeError("floats are not accepted where exact rationals are required")
    return Fraction(value)


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (base 10, optional leading ``-``)."""
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise LatticeError(f"malformed rational {text!r}")
    num, _, den = s.partition("/")
    if den and int(den) == 0:
        raise LatticeError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rat_vec(p) -> RatVec2:
    return (as_rational(p[0]), as_rational(p[1]))


def int_mat(m) -> IntMat2:
    rows = tuple(tuple(int(x) for x in row) for row in m)
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise LatticeError("expected a 2x2 matrix")
    for row, orig in zip(rows, m):
        for x, y in zip(row, orig):
            if x != y:
                raise LatticeError("matrix entries must be integers")
    return rows  # type: ignore[return-value]


def det(m) -> int:
    (a, b), (c, d) = m
    return a * d - b * c


def cross(u, v):
    """Determinant of the matrix with columns ``u`` and ``v``."""
    return u[0] * v[1] - u[1] * v[0]


def is_unimodular_pair(u: IntVec2, v: IntVec2) -> bool:
    return abs(cross(u, v)) == 1


def primitive(v) -> IntVec2:
    """Shortest lattice vector in the direction of ``v``.

    Accepts rational input as well, which is convenient for edge vectors
    between rational vertices.
    """
    a, b = Fraction(v[0]), Fraction(v[1])
    if a == 0 and b == 0:
        raise LatticeError("degenerate edge")
    scale = math.lcm(a.denominator, b.denominator)
    ia, ib = int(a * scale), int(b * scale)
    g = math.gcd(ia, ib)
    return (ia // g, ib // g)


def mat_vec(m, v):
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def mat_mul(m, n):
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


def transpose(m):
    return ((m[0][0], m[1][0]), (m[0][1], m[1][1]))


def inverse(m) -> RatMat2:
    d = det(m)
    if d == 0:
        raise LatticeError("singular matrix")
    d = Fraction(d)
    (a, b), (c, e) = m
    return ((e / d, -b / d), (-c / d, a / d))


def inverse_transpose(m) -> RatMat2:
    """Exact ``(m^T)^{-1}``; integral whenever ``|det m| = 1``."""
    return transpose(inverse(m))


def integral(m) -> IntMat2:
    """Cast a rational matrix with integer entries back to ints."""
    out = []
    for row in m:
        r = []
        for x in row:
            x = Fraction(x)
            if x.denominator != 1:
                raise LatticeError("matrix is not integral")
            r.append(int(x))
        out.append(tuple(r))
    return tuple(out)  # type: ignore[return-value]


IDENTITY: IntMat2 = ((1, 0), (0, 1))


@dataclass(frozen=True)
class AffineMapZ:
    """``p -> linear @ p + offset`` with ``linear`` in GL(2,Z)."""

    linear: IntMat2 = IDENTITY
    offset: RatVec2 = (Fraction(0), Fraction(0))

    def __post_init__(self):
        object.__setattr__(self, "linear", int_mat(self.linear))
        object.__setattr__(self, "offset", rat_vec(self.offset))
        if abs(det(self.linear)) != 1:
            raise LatticeError(f"linear part {self.linear} is not in GL(2,Z)")

    def __call__(self, p) -> RatVec2:
        return apply_affine(self, p)

    def compose(self, other: "AffineMapZ") -> "AffineMapZ":
        """``self ∘ other``."""
        lin = mat_mul(self.linear, other.linear)
        off = apply_affine(self, other.offset)
        return AffineMapZ(lin, off)

    @property
    def det(self) -> int:
        return det(self.linear)


def apply_affine(mu: AffineMapZ, p) -> RatVec2:
    p = rat_vec(p)
    q = mat_vec(mu.linear, p)
    return (q[0] + mu.offset[0], q[1] + mu.offset[1])


_ELEMENTARY: tuple[IntMat2, ...] = (
    ((1, 1), (0, 1)),
    ((1, -1), (0, 1)),
    ((1, 0), (1, 1)),
    ((1, 0), (-1, 1)),
    ((0, 1), (1, 0)),
    ((-1, 0), (0, 1)),
)


def random_gl2z(rng: random.Random, max_factors: int = 10) -> IntMat2:
    """Product of at most ``max_factors`` elementary shears, swaps and sign flips."""
    m = IDENTITY
    for _ in range(rng.randint(0, max_factors)):
        m = mat_mul(m, rng.choice(_ELEMENTARY))
    return m


def random_affine(rng: random.Random, max_factors: int = 10, max_den: int = 8) -> AffineMapZ:
    off = tuple(Fraction(rng.randint(-20, 20), rng.randint(1, max_den)) for _ in range(2))
    return AffineMapZ(random_gl2z(rng, max_factors), off)
